// Batch front-end: transforms, verification suites, Monte-Carlo runs and
// convergence-rate tables. Reports go to stdout (JSON or CSV); timing goes to
// stderr so reports stay byte-identical for identical flags and seed.
// Exit codes: 0 all checks pass, 1 check failure, 2 usage error.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "sbtrace/free_transform.hpp"
#include "sbtrace/heat_mc.hpp"
#include "sbtrace/lie_groups.hpp"
#include "sbtrace/operator_engine.hpp"
#include "sbtrace/ratefit.hpp"
#include "sbtrace/verify_suites.hpp"
#include "sbtrace/word_calculus.hpp"

using namespace sbtrace;

namespace {

cplx parse_complex(const std::string& s) {
    // forms: "0.7", "0.4+0.3i", "0.4-0.3i", "0.3i"
    std::string t;
    for (char c : s)
        if (!std::isspace(static_cast<unsigned char>(c))) t += c;
    if (t.empty()) throw ParameterError("empty complex literal");
    if (t.back() == 'i' || t.back() == 'j') {
        t.pop_back();
        size_t split = t.size();
        for (size_t i = 1; i < t.size(); ++i) {
            if ((t[i] == '+' || t[i] == '-') && t[i - 1] != 'e' && t[i - 1] != 'E') split = i;
        }
        if (split == t.size()) {
            if (t.empty() || t == "+" ) return cplx(0.0, 1.0);
            if (t == "-") return cplx(0.0, -1.0);
            return cplx(0.0, std::stod(t));
        }
        const double re = std::stod(t.substr(0, split));
        std::string ims = t.substr(split);
        if (ims == "+") ims = "1";
        if (ims == "-") ims = "-1";
        return cplx(re, std::stod(ims));
    }
    return cplx(std::stod(t), 0.0);
}

std::vector<int> parse_int_list(const std::string& s) {
    std::vector<int> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(std::stoi(item));
    }
    return out;
}

TracePolynomial load_poly(const std::string& arg) {
    std::ifstream f(arg);
    if (f.good()) {
        std::stringstream buf;
        buf << f.rdbuf();
        return parse_poly_or_json(buf.str());
    }
    return parse_poly_or_json(arg);
}

void print_num(std::ostream& os, double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    os << buf;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"trace-polynomial heat transforms and their numeric verification"};
    app.require_subcommand(1);

    // --- transform ---
    auto* t = app.add_subcommand("transform", "apply a transform to a polynomial");
    std::string t_group = "so", t_tau = "0.5", t_poly, t_mode = "boosted";
    int t_N = 3;
    double t_s = 1.0;
    t->add_option("--group", t_group, "so|su|u|sp (boosted modes)");
    t->add_option("--N", t_N, "matrix size parameter");
    t->add_option("--s", t_s, "variance parameter s > 0");
    t->add_option("--tau", t_tau, "complex time, e.g. 0.4+0.3i");
    t->add_option("--poly", t_poly, "polynomial: inline expression or JSON file")->required();
    t->add_option("--mode", t_mode, "boosted|boosted-inverse|free|free-inverse");

    // --- verify ---
    auto* v = app.add_subcommand("verify", "run a named verification suite");
    std::string v_suite;
    uint64_t v_seed = 1;
    std::string v_Nlist;
    v->add_option("--suite", v_suite,
                  "magic|counterexample|intertwine|derivative|wordgen|quaternion|prodrule")
        ->required();
    v->add_option("--seed", v_seed, "RNG seed");
    v->add_option("--N-list", v_Nlist, "comma-separated sizes");

    // --- rate ---
    auto* r = app.add_subcommand("rate", "convergence-rate table with a log-log slope fit");
    std::string r_what, r_Nlist = "4,8,16,32", r_poly = "u^2", r_tau = "0.5", r_group = "so",
                r_measure = "mu";
    int r_k = 1, r_degree = 4, r_order = 0;
    double r_s = 1.0, r_smin = 0.0, r_smax = 0.0;
    r->add_option("--what", r_what, "free-limit|concentration|operator-norm|moments")->required();
    r->add_option("--N-list", r_Nlist, "comma-separated sizes (at least 3)");
    r->add_option("--poly", r_poly, "polynomial for free-limit/concentration");
    r->add_option("--k", r_k, "moment index for moments");
    r->add_option("--s", r_s, "variance parameter");
    r->add_option("--tau", r_tau, "complex time");
    r->add_option("--group", r_group, "family for operator-norm/moments/concentration");
    r->add_option("--measure", r_measure, "rho|mu for concentration");
    r->add_option("--degree", r_degree, "filtered degree for operator-norm");
    r->add_option("--order", r_order, "operator-norm comparison order: 0 vs e^{L0}, 1 vs e^{L0+L1/N}");
    r->add_option("--slope-min", r_smin, "override pass window lower bound");
    r->add_option("--slope-max", r_smax, "override pass window upper bound");

    // --- mc ---
    auto* m = app.add_subcommand("mc", "Monte-Carlo heat kernel estimates (CSV)");
    std::string m_group = "so", m_tau = "0", m_poly;
    int m_N = 8, m_k = 1;
    double m_s = 1.0;
    long m_samples = 2000, m_steps = 0;
    uint64_t m_seed = 1;
    bool m_complex = false;
    m->add_option("--group", m_group);
    m->add_option("--N", m_N);
    m->add_option("--s", m_s);
    m->add_option("--tau", m_tau);
    m->add_option("--k", m_k, "moment index");
    m->add_option("--poly", m_poly, "estimate the squared norm of this polynomial instead");
    m->add_option("--samples", m_samples);
    m->add_option("--steps", m_steps, "0 selects max(200, 100 s)");
    m->add_option("--seed", m_seed);
    m->add_flag("--complexified", m_complex, "sample the complexified heat kernel");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    const auto start = std::chrono::steady_clock::now();
    int exit_code = 0;
    try {
        if (*t) {
            const TracePolynomial P = load_poly(t_poly);
            const cplx tau = parse_complex(t_tau);
            TracePolynomial out;
            if (t_mode == "boosted" || t_mode == "boosted-inverse") {
                const GroupSpec spec(family_from_string(t_group), t_N);
                const TransformParams params(t_s, tau);
                out = boosted_sb(params, spec, P,
                                 t_mode == "boosted" ? Direction::Forward : Direction::Inverse);
            } else if (t_mode == "free" || t_mode == "free-inverse") {
                const TransformParams params(t_s, tau);
                out = free_sb(params, P,
                              t_mode == "free" ? Direction::Forward : Direction::Inverse);
            } else {
                std::cerr << "unknown mode '" << t_mode << "'\n";
                return 2;
            }
            std::cout << to_json(out) << "\n";
        } else if (*v) {
            const RunReport rep = run_suite(v_suite, v_seed, parse_int_list(v_Nlist));
            std::cout << report_to_json(rep) << "\n";
            exit_code = rep.all_pass() ? 0 : 1;
        } else if (*r) {
            const std::vector<int> Ns = parse_int_list(r_Nlist);
            if (Ns.size() < 3) {
                std::cerr << "rate: need at least 3 N values to fit a slope\n";
                return 2;
            }
            const cplx tau = parse_complex(r_tau);
            const Family fam = family_from_string(r_group);
            std::vector<double> vals;
            double slope_lo = 0, slope_hi = 0;
            if (r_what == "free-limit") {
                const TracePolynomial f = load_poly(r_poly);
                const TransformParams params(r_s, tau);
                for (int N : Ns) {
                    const GroupSpec spec(fam, N);
                    const TracePolynomial heat =
                        boosted_sb(params, spec, f, Direction::Forward);
                    const TracePolynomial diff =
                        heat - free_sb(params, f, Direction::Forward);
                    vals.push_back(l2_norm_sq(spec, params, diff, Measure::Mu));
                }
                slope_lo = -2.4;
                slope_hi = -1.6;
            } else if (r_what == "concentration") {
                const TracePolynomial P = load_poly(r_poly);
                const TransformParams params(r_s, tau);
                const Measure meas = r_measure == "rho" ? Measure::Rho : Measure::Mu;
                const cplx proj_time = meas == Measure::Rho ? cplx(r_s, 0.0) : cplx(r_s) - tau;
                const TracePolynomial diff = P - pi_tau(proj_time, P);
                for (int N : Ns) {
                    const GroupSpec spec(fam, N);
                    vals.push_back(l2_norm_sq(spec, params, diff, meas));
                }
                slope_lo = -2.4;
                slope_hi = -1.6;
            } else if (r_what == "operator-norm") {
                for (int N : Ns) {
                    const Eigen::MatrixXcd dn = assemble(op_DN(fam, N), r_degree).entries;
                    Eigen::MatrixXcd ref = assemble(op(OpTag::L0), r_degree).entries;
                    if (r_order >= 1) ref += assemble(op_L1(fam), r_degree).entries / double(N);
                    vals.push_back((expm(dn) - expm(ref)).norm());
                }
                slope_lo = r_order >= 1 ? -1e9 : -1e9;
                slope_hi = r_order >= 1 ? -1.6 : -0.6;  // upper bounds C/N^2 and C/N
            } else if (r_what == "moments") {
                for (int N : Ns) {
                    const TracePolynomial heat = exp_apply(op_DN(fam, N), 0.5 * r_s,
                                                           TracePolynomial::v(r_k));
                    vals.push_back(std::abs(eval_at_ones(heat) - nu(r_k, r_s)));
                }
                slope_lo = -2.4;
                slope_hi = -1.6;
            } else {
                std::cerr << "unknown rate table '" << r_what << "'\n";
                return 2;
            }
            if (r_smin != 0.0 || r_smax != 0.0) {
                slope_lo = r_smin;
                slope_hi = r_smax;
            }
            std::vector<double> Nd(Ns.begin(), Ns.end());
            const double slope = fit_loglog_slope(Nd, vals);
            std::cout << "N,value\n";
            for (size_t i = 0; i < Ns.size(); ++i) {
                std::cout << Ns[i] << ",";
                print_num(std::cout, vals[i]);
                std::cout << "\n";
            }
            const bool pass = slope >= slope_lo && slope <= slope_hi;
            std::cout << "slope,";
            print_num(std::cout, slope);
            std::cout << ",window,[";
            print_num(std::cout, slope_lo);
            std::cout << ",";
            print_num(std::cout, slope_hi);
            std::cout << "]," << (pass ? "pass" : "fail") << "\n";
            exit_code = pass ? 0 : 1;
        } else if (*m) {
            MCConfig cfg{GroupSpec(family_from_string(m_group), m_N), m_s, parse_complex(m_tau),
                         m_steps > 0 ? m_steps : MCConfig::default_steps(m_s), m_samples, m_seed};
            std::cout << mc_csv_header() << "\n";
            if (!m_poly.empty()) {
                const TracePolynomial P = load_poly(m_poly);
                const MomentEstimate est = estimate_l2(cfg, P, m_complex);
                std::cout << mc_csv_row(cfg, std::to_string(poly_hash(P)), est, m_complex) << "\n";
            } else {
                const MomentEstimate est = estimate_moment(cfg, m_k, m_complex);
                std::cout << mc_csv_row(cfg, std::to_string(m_k), est, m_complex) << "\n";
            }
        }
    } catch (const ParameterError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    const auto el =
        std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start);
    std::cerr << "elapsed_ms " << el.count() << "\n";
    return exit_code;
}
