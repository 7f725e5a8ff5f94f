#pragma once

#include <random>
#include <string>
#include <vector>

#include "sbtrace/trace_poly.hpp"

namespace sbtrace {

struct CheckRecord {
    std::string name;
    bool pass = false;
    double observed = 0.0;  // the measured discrepancy or statistic
    double expected = 0.0;  // target value (0 for pure-discrepancy checks)
    double tolerance = 0.0;
};

struct RunReport {
    std::string command;
    std::string config;
    uint64_t seed = 0;
    std::vector<CheckRecord> checks;

    bool all_pass() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }
    void add(std::string name, double observed, double tolerance, double expected = 0.0) {
        checks.push_back({std::move(name), std::abs(observed - expected) <= tolerance, observed,
                          expected, tolerance});
    }
    void add_flag(std::string name, bool pass) {
        checks.push_back({std::move(name), pass, pass ? 1.0 : 0.0, 1.0, 0.0});
    }
};

std::string report_to_json(const RunReport& report);

/// Random trace polynomial with small integer coefficients.
TracePolynomial random_poly(std::mt19937_64& rng, int max_degree, int terms = 5,
                            bool with_u = true, bool with_v = true);

// Individual suites. N_list semantics depend on the suite; empty selects the
// documented defaults.
RunReport suite_magic(uint64_t seed, std::vector<int> N_list, int mats_per_case = 20,
                      double tol = 1e-10);
RunReport suite_counterexample();
RunReport suite_intertwine(uint64_t seed, std::vector<int> N_list, int polys_per_family = 10,
                           int max_degree = 4, double h = 1e-3, double rel_tol = 1e-4);
RunReport suite_derivative(uint64_t seed, std::vector<int> N_list, double h = 1e-3,
                           double rel_tol = 1e-4);
RunReport suite_wordgen(uint64_t seed, int monomials_per_family = 30, int max_degree = 3,
                        double h = 1e-3, double tol = 1e-4);
RunReport suite_quaternion(uint64_t seed, std::vector<int> N_list);
RunReport suite_prodrule(uint64_t seed, double tol = 1e-10);

/// Dispatch by suite name; throws ParameterError for unknown names.
RunReport run_suite(const std::string& suite, uint64_t seed, const std::vector<int>& N_list);

}  // namespace sbtrace
