import pytest

import wrps

WORKED_ROWS = [[0, 2, 2, 2, 1, 1], [2, 2, 1, 1, 0, 2], [1, 1, 0, 2, 2, 2]]


def test_rule_names():
    f = wrps.parse_rule("102222210", 3)
    assert str(f) == "102222210"
    assert f(2, 2) == 1 and f(0, 0) == 0
    with pytest.raises(ValueError):
        wrps.parse_rule("10222221x", 3)


def test_worked_wrps():
    f = wrps.parse_rule("102222210", 3)
    found = wrps.find_wrps(f, 3, 6)
    assert len(found) == 1
    assert found[0]["tile"] == wrps.canonical_tile(wrps.Tile(3, WORKED_ROWS))
    assert all(found[0]["deciding"])
    v = wrps.measure_velocity(f, found[0]["tile"], seed=3, horizon=300)
    assert v["certificate_met"]
    assert v["v_hat"] >= 1 / 9


def test_tile_helpers():
    t = wrps.Tile(3, WORKED_ROWS)
    ok, violations = wrps.validate_ps_tile(t)
    assert ok and not violations
    assert wrps.tile_stats(t) == {"p": 5, "s": 3, "lag": 2, "rank": 1}
    assert wrps.check_rank_conjecture(t)["holds"]
    assert wrps.count_simple_tiles(5, 2, 2, 4) == 30


def test_decidability():
    assert wrps.count_D_exhaustive(3, 2) == (45, 729, 45)
    assert wrps.p_decides_simple(4, 2)[0] == (7, 256)
    assert wrps.combinatorial_identity_S(3, 1, 0) == (45, 45)
    f = wrps.random_rule(4, 11)
    for a in ([0, 1], [2, 2, 3]):
        for b in ([0, 0], [1, 3, 3]):
            if len(a) == len(b):
                assert wrps.decides(f, a, b) == wrps.decides_by_simulation(f, a, b)


def test_evolve_keeps_the_tile():
    f = wrps.parse_rule("102222210", 3)
    offset, cells = wrps.evolve(f, WORKED_ROWS[0] * 5, 3)
    assert offset == 3
    assert cells == [WORKED_ROWS[0][(x + offset) % 6] for x in range(len(cells))]


def test_experiments():
    r = wrps.exhaustive_probability(2, "1x1", threads=1)
    assert r["exact"] == "7/16"
    mc = wrps.monte_carlo_probability(3, "1x1", samples=2000, seed=1, threads=1)
    assert mc["total"] == 2000 and mc["seed"] == 1
    assert wrps.asymptotic_constant("2x2,2x1")["c"] == 2
    scan = wrps.conjecture_scan(2, 2, 2, threads=1)
    assert scan["counterexamples"] == []


def test_verify_suite():
    results = wrps.verify("formulas")
    assert results and all(passed for _, passed, _ in results)
    with pytest.raises(ValueError):
        wrps.verify("nope")
