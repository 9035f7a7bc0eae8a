// One line per acceptance criterion; exit status 1 if any fails.

#include <cstdio>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include "wrps/verify.hpp"

using namespace wrps;

int main(int argc, char** argv) {
    VerifyOptions options;
    if (argc > 1) options.seed = std::stoull(argv[1]);

    struct Criterion {
        int id;
        double budget_seconds;  // 0: no time limit
        std::function<CheckResult()> run;
    };
    const std::vector<Criterion> criteria{
        {1, 1.0, [] { return check_worked_example(); }},
        {2, 10.0, [] { return check_lad_counts(); }},
        {3, 60.0, [&] { return check_deciding_probability(options, 1'000'000); }},
        {4, 60.0, [] { return check_simple_census(); }},
        {5, 0.0, [&] { return check_oracle_equivalence(options, 100'000); }},
        {6, 0.0, [&] { return check_velocity_bound(options, 20); }},
        {7, 0.0, [] { return check_identity(); }},
        {8, 0.0, [&] { return check_asymptotic_trend(options, 100'000); }},
        {9, 0.0, [&] { return check_conjectures(options); }},
    };

    int failures = 0;
    for (const auto& c : criteria) {
        CheckResult r = c.run();
        bool passed = r.passed;
        if (c.budget_seconds > 0 && r.seconds >= c.budget_seconds) {
            passed = false;
            r.detail += "; over the " + std::to_string(c.budget_seconds) + " s budget";
        }
        failures += passed ? 0 : 1;
        char secs[32];
        std::snprintf(secs, sizeof secs, "%.2f", r.seconds);
        std::cout << "criterion " << c.id << ": " << (passed ? "PASS" : "FAIL") << "  " << r.name << " [" << secs
                  << " s] " << r.detail << std::endl;
    }
    std::cout << (failures == 0 ? "all criteria pass" : std::to_string(failures) + " criteria fail") << " (seed "
              << options.seed << ")" << std::endl;
    return failures == 0 ? 0 : 1;
}
