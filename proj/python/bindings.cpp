#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>

#include "wrps/decidability.hpp"
#include "wrps/dynamics.hpp"
#include "wrps/experiments.hpp"
#include "wrps/label_graph.hpp"
#include "wrps/rule.hpp"
#include "wrps/tile.hpp"
#include "wrps/verify.hpp"

namespace py = pybind11;
using namespace wrps;

namespace {

Label to_label(const std::vector<int>& v) { return Label(v.begin(), v.end()); }

std::vector<std::vector<int>> to_rows(const Tile& t) {
    std::vector<std::vector<int>> out;
    for (const auto& r : t.rows()) out.emplace_back(r.begin(), r.end());
    return out;
}

Tile make_tile(int n, const std::vector<std::vector<int>>& rows) {
    std::vector<Word> words;
    for (const auto& r : rows) {
        for (int v : r) {
            if (v < 0 || v >= n) throw std::invalid_argument("tile state out of range");
        }
        words.emplace_back(r.begin(), r.end());
    }
    return Tile(n, std::move(words));
}

py::dict record_dict(const CycleRecord& r) {
    py::dict d;
    std::vector<std::vector<int>> labels;
    for (const auto& l : r.labels) labels.emplace_back(l.begin(), l.end());
    d["labels"] = labels;
    d["deciding"] = r.deciding;
    d["tile"] = r.tile;
    d["tau"] = r.tile.tau();
    d["sigma"] = r.tile.sigma();
    d["p"] = r.stats.p;
    d["s"] = r.stats.s;
    d["lag"] = r.stats.lag;
    d["rank"] = r.stats.rank;
    d["wrps"] = r.all_deciding();
    return d;
}

py::list records(const std::vector<CycleRecord>& recs) {
    py::list out;
    for (const auto& r : recs) out.append(record_dict(r));
    return out;
}

Perturbation make_perturbation(const std::string& kind, std::uint64_t seed, int value, long site) {
    if (kind == "random") return Perturbation::random(seed);
    if (kind == "constant") return Perturbation::constant(static_cast<State>(value));
    if (kind == "flip") return Perturbation::flip(site, static_cast<State>(value));
    throw std::invalid_argument("perturbation kind must be random, constant or flip");
}

}  // namespace

PYBIND11_MODULE(_wrps, m) {
    m.doc() = "Periodic and weakly robust periodic solutions of 2-neighbour cellular automata";

    py::class_<Rule>(m, "Rule")
        .def(py::init([](int n, const std::vector<int>& table) {
                 std::vector<State> t;
                 for (int v : table) {
                     if (v < 0 || v >= n) throw std::invalid_argument("rule table entry out of range");
                     t.push_back(static_cast<State>(v));
                 }
                 return Rule(n, std::move(t));
             }),
             py::arg("n"), py::arg("table"))
        .def_property_readonly("n", &Rule::n)
        .def_property_readonly("table", [](const Rule& f) { return std::vector<int>(f.table().begin(), f.table().end()); })
        .def("__call__", [](const Rule& f, int a, int b) {
            if (a < 0 || b < 0 || a >= f.n() || b >= f.n()) throw py::index_error("state out of range");
            return static_cast<int>(f(static_cast<State>(a), static_cast<State>(b)));
        })
        .def("__eq__", [](const Rule& a, const Rule& b) { return a == b; })
        .def("__str__", [](const Rule& f) { return format_rule(f); })
        .def("__repr__", [](const Rule& f) { return "Rule(n=" + std::to_string(f.n()) + ", '" + format_rule(f) + "')"; });

    m.def("parse_rule", &parse_rule, py::arg("name"), py::arg("n"));
    m.def("format_rule", &format_rule);
    m.def("random_rule", py::overload_cast<int, std::uint64_t>(&random_rule), py::arg("n"), py::arg("seed"));
    m.def("rule_count", &rule_count);
    m.def("rule_at", &rule_at, py::arg("n"), py::arg("index"));

    py::class_<Tile>(m, "Tile")
        .def(py::init(&make_tile), py::arg("n"), py::arg("rows"))
        .def_property_readonly("n", &Tile::n)
        .def_property_readonly("tau", &Tile::tau)
        .def_property_readonly("sigma", &Tile::sigma)
        .def_property_readonly("rows", &to_rows)
        .def("at", [](const Tile& t, long i, long j) { return static_cast<int>(t.at(i, j)); })
        .def("__eq__", [](const Tile& a, const Tile& b) { return a == b; })
        .def("__lt__", [](const Tile& a, const Tile& b) { return a < b; })
        .def("__hash__", [](const Tile& t) { return py::hash(py::str(format_tile_text(t))); })
        .def("__str__", &format_tile_text)
        .def("__repr__", [](const Tile& t) {
            return "Tile(tau=" + std::to_string(t.tau()) + ", sigma=" + std::to_string(t.sigma()) + ")";
        });

    m.def("canonical_tile", &canonical_tile);
    m.def("is_simple", &is_simple);
    m.def("validate_ps_tile", [](const Tile& t) {
        const auto r = validate_ps_tile(t);
        return py::make_tuple(r.valid, r.violations);
    });
    m.def("tile_stats", [](const Tile& t) {
        const auto s = tile_stats(t);
        py::dict d;
        d["p"] = s.p;
        d["s"] = s.s;
        d["lag"] = s.lag;
        d["rank"] = s.rank;
        return d;
    });
    m.def("count_simple_tiles", &count_simple_tiles, py::arg("n"), py::arg("tau"), py::arg("sigma"), py::arg("s"));
    m.def("check_rank_conjecture", [](const Tile& t) {
        const auto c = check_rank_conjecture(t);
        py::dict d;
        d["rank"] = c.rank;
        d["lag"] = c.lag;
        d["x"] = c.x;
        d["bound"] = c.bound;
        d["holds"] = c.holds;
        d["tau_tilde"] = c.tau_tilde;
        d["semi_simple"] = c.semi_simple;
        d["index_set"] = c.index_set;
        return d;
    });

    m.def(
        "find_ps",
        [](const Rule& f, int tau, int sigma_max) {
            SearchOptions o;
            o.sigma_max = sigma_max;
            return records(find_ps(f, tau, o));
        },
        py::arg("rule"), py::arg("tau"), py::arg("sigma_max"));
    m.def(
        "find_wrps",
        [](const Rule& f, int tau, int sigma_max) {
            SearchOptions o;
            o.sigma_max = sigma_max;
            return records(find_wrps(f, tau, o));
        },
        py::arg("rule"), py::arg("tau"), py::arg("sigma_max"));

    m.def("right_extends", [](const Rule& f, const std::vector<int>& a, const std::vector<int>& b) {
        return right_extends(f, to_label(a), to_label(b));
    });
    m.def("decides", [](const Rule& f, const std::vector<int>& a, const std::vector<int>& b) {
        const Label la = to_label(a);
        return in_D(build_lad(f, la), to_label(b));
    }, "A => B by LAD membership");
    m.def("decides_by_simulation", [](const Rule& f, const std::vector<int>& a, const std::vector<int>& b) {
        return decides_by_simulation(f, to_label(a), to_label(b));
    });
    m.def("count_D_formula", &count_D_formula);
    m.def("count_D_exhaustive", [](int n, int tau) {
        const auto c = count_D_exhaustive(n, tau);
        return py::make_tuple(c.count, c.total, c.formula);
    });
    m.def("p_decides_simple", [](int n, int tau) {
        const auto p = p_decides_simple(n, tau);
        return py::make_tuple(py::make_tuple(p.joint.num, p.joint.den),
                              py::make_tuple(p.conditional.num, p.conditional.den));
    });
    m.def("combinatorial_identity_S", [](int n, int m_, int k) {
        const auto v = combinatorial_identity_S(n, m_, k);
        return py::make_tuple(v.direct, v.closed);
    });

    m.def(
        "measure_velocity",
        [](const Rule& f, const Tile& t, const std::string& kind, std::uint64_t seed, int value, long site,
           long horizon) {
            const auto e = measure_velocity(f, t, make_perturbation(kind, seed, value, site), horizon);
            py::dict d;
            d["horizon"] = e.horizon;
            d["trace"] = e.trace;
            d["v_hat"] = e.v_hat;
            d["certified_bound"] = e.certified_bound ? py::cast(*e.certified_bound) : py::none();
            d["certificate_met"] = e.certificate_met;
            return d;
        },
        py::arg("rule"), py::arg("tile"), py::arg("kind") = "random", py::arg("seed") = 0, py::arg("value") = 0,
        py::arg("site") = 0, py::arg("horizon") = 0);
    m.def(
        "evolve",
        [](const Rule& f, const std::vector<int>& cells, long steps, long offset) {
            Window w;
            w.offset = offset;
            w.cells.assign(cells.begin(), cells.end());
            const Window e = evolve(f, w, steps);
            return py::make_tuple(e.offset, std::vector<int>(e.cells.begin(), e.cells.end()));
        },
        py::arg("rule"), py::arg("cells"), py::arg("steps"), py::arg("offset") = 0);

    // Experiment reports cross as JSON text; the package decodes them.
    m.def(
        "_exhaustive_probability",
        [](int n, const std::string& periods, unsigned threads) {
            py::gil_scoped_release release;
            return nlohmann::json(exhaustive_probability(n, PeriodSet::parse(periods), threads)).dump();
        },
        py::arg("n"), py::arg("periods"), py::arg("threads") = 0);
    m.def(
        "_monte_carlo_probability",
        [](int n, const std::string& periods, std::uint64_t samples, std::uint64_t seed, unsigned threads) {
            py::gil_scoped_release release;
            return nlohmann::json(monte_carlo_probability(n, PeriodSet::parse(periods), samples, seed, threads))
                .dump();
        },
        py::arg("n"), py::arg("periods"), py::arg("samples"), py::arg("seed"), py::arg("threads") = 0);
    m.def("_asymptotic_constant", [](const std::string& periods) {
        return nlohmann::json(asymptotic_constant(PeriodSet::parse(periods))).dump();
    });
    m.def(
        "_conjecture_scan",
        [](int n, int tau_max, int sigma_max, unsigned threads) {
            py::gil_scoped_release release;
            return nlohmann::json(conjecture_scan(n, tau_max, sigma_max, std::nullopt, 0, threads)).dump();
        },
        py::arg("n"), py::arg("tau_max"), py::arg("sigma_max"), py::arg("threads") = 0);
    m.def(
        "verify",
        [](const std::string& suite, std::uint64_t seed, unsigned threads) {
            std::vector<CheckResult> results;
            {
                py::gil_scoped_release release;
                results = run_suite(suite, VerifyOptions{seed, threads});
            }
            py::list out;
            for (const auto& r : results) out.append(py::make_tuple(r.name, r.passed, r.detail));
            return out;
        },
        py::arg("suite"), py::arg("seed") = kDefaultSeed, py::arg("threads") = 0);

    m.attr("__version__") = std::string(kVersion);
}
