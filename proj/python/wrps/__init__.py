"""Periodic and weakly robust periodic solutions of 2-neighbour cellular automata."""

import json

from ._wrps import (
    Rule,
    Tile,
    __version__,
    canonical_tile,
    check_rank_conjecture,
    combinatorial_identity_S,
    count_D_exhaustive,
    count_D_formula,
    count_simple_tiles,
    decides,
    decides_by_simulation,
    evolve,
    find_ps,
    find_wrps,
    format_rule,
    is_simple,
    measure_velocity,
    p_decides_simple,
    parse_rule,
    random_rule,
    right_extends,
    rule_at,
    rule_count,
    tile_stats,
    validate_ps_tile,
    verify,
)
from . import _wrps


def exhaustive_probability(n, periods="1x1", threads=0):
    """Exact census over all n-state rules; returns the report as a dict."""
    return json.loads(_wrps._exhaustive_probability(n, periods, threads))


def monte_carlo_probability(n, periods="1x1", samples=100_000, seed=20240917, threads=0):
    return json.loads(_wrps._monte_carlo_probability(n, periods, samples, seed, threads))


def asymptotic_constant(periods):
    return json.loads(_wrps._asymptotic_constant(periods))


def conjecture_scan(n, tau_max, sigma_max, threads=0):
    return json.loads(_wrps._conjecture_scan(n, tau_max, sigma_max, threads))
