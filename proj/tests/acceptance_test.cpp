// Acceptance suite: one pass/fail line per criterion, exit code = number of
// failed criteria (capped at 1). Tolerances and windows are pinned here, not
// configurable. Criterion 7's slope window for the orthogonal and symplectic
// families is retained as written even though those families carry a
// first-order 1/N correction (measured slope is approximately -1); the
// corresponding sub-checks report their measured slopes.

#include <chrono>
#include <cstdio>
#include <iostream>
#include <vector>

#include "sbtrace/expm.hpp"
#include "sbtrace/free_transform.hpp"
#include "sbtrace/heat_mc.hpp"
#include "sbtrace/lie_groups.hpp"
#include "sbtrace/operator_engine.hpp"
#include "sbtrace/ratefit.hpp"
#include "sbtrace/verify_suites.hpp"
#include "sbtrace/word_calculus.hpp"

using namespace sbtrace;

namespace {

struct Criterion {
    int id;
    std::string label;
    bool pass = true;
    double seconds = 0.0;
    std::vector<std::string> notes;
};

std::vector<Criterion> g_results;

class Scope {
  public:
    Scope(int id, std::string label) : start_(std::chrono::steady_clock::now()) {
        cur_.id = id;
        cur_.label = std::move(label);
    }
    void check(const std::string& what, bool ok, double observed = 0.0, double bound = 0.0) {
        if (!ok) {
            cur_.pass = false;
            char buf[160];
            std::snprintf(buf, sizeof buf, "%s: observed %.6g vs bound %.6g", what.c_str(),
                          observed, bound);
            cur_.notes.push_back(buf);
        }
    }
    void note(const std::string& s) { cur_.notes.push_back(s); }
    void absorb(const RunReport& rep) {
        for (const auto& c : rep.checks) check(c.name, c.pass, c.observed, c.tolerance);
    }
    void runtime_limit(double seconds_limit) {
        const double el =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
        cur_.seconds = el;
        if (el > seconds_limit) {
            cur_.pass = false;
            char buf[96];
            std::snprintf(buf, sizeof buf, "runtime %.1fs exceeds %.0fs", el, seconds_limit);
            cur_.notes.push_back(buf);
        }
    }
    ~Scope() {
        if (cur_.seconds == 0.0)
            cur_.seconds =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
        g_results.push_back(cur_);
    }

  private:
    Criterion cur_;
    std::chrono::steady_clock::time_point start_;
};

TracePolynomial example_so_closed_form(cplx tau, int N) {
    const double n = N;
    const cplx emt = std::exp(-tau);
    const cplx e2n = std::exp(2.0 * tau / n);
    TracePolynomial out;
    out += TracePolynomial((1.0 / n) * (1.0 - emt));
    out += (0.5 * emt * (1.0 + e2n)) * TracePolynomial::u(2);
    out += (-(n / 2.0) * emt * (-1.0 + e2n)) *
           TracePolynomial::monomial(Monomial::make(1, {{1, 1}}));
    return out;
}

TracePolynomial example_u_closed_form(cplx t, int N) {
    const double n = N;
    TracePolynomial out;
    out += (std::exp(-t) * std::cosh(t / n)) * TracePolynomial::u(2);
    out += (-n * std::exp(-t) * std::sinh(t / n)) *
           TracePolynomial::monomial(Monomial::make(1, {{1, 1}}));
    return out;
}

void criterion1() {
    Scope sc(1, "heat flow of u^2 matches the closed forms (1e-10, SO and U families)");
    const double s = 1.0;
    for (int N : {3, 5, 10}) {
        for (cplx tau : {cplx(0.7, 0.0), cplx(0.4, 0.3)}) {
            const TransformParams params(s, tau);
            const GroupSpec so(Family::SO, N);
            const TracePolynomial got = boosted_sb(params, so, TracePolynomial::u(2),
                                                   Direction::Forward);
            const double d = coeff_distance(got, example_so_closed_form(tau, N));
            sc.check("so/N=" + std::to_string(N), d <= 1e-10, d, 1e-10);

            const TracePolynomial gu =
                exp_apply(op_DN(Family::U, N), 0.5 * tau, TracePolynomial::u(2));
            const double du = coeff_distance(gu, example_u_closed_form(tau, N));
            sc.check("u/N=" + std::to_string(N), du <= 1e-10, du, 1e-10);
        }
    }
    sc.runtime_limit(1.0);
}

void criterion2() {
    Scope sc(2, "magic formulas, 4 kinds x 4 families + quaternionic, 1e-10");
    sc.absorb(suite_magic(20260810, {2, 3, 4, 5, 6}));
    sc.runtime_limit(10.0);
}

void criterion3() {
    Scope sc(3, "Laplacian intertwining vs finite differences, 1e-4 relative");
    sc.absorb(suite_intertwine(20260811, {}));
    sc.runtime_limit(60.0);
}

void criterion4() {
    Scope sc(4, "word-space generator vs finite differences, 1e-4; exact degree preservation");
    sc.absorb(suite_wordgen(20260812, 30, 3));
}

void criterion5() {
    Scope sc(5, "concentration onto moment polynomials: slope -2 +/- 0.4 over N=4..32");
    const double s = 1.0;
    const cplx tau(0.5, 0.0);
    const TransformParams params(s, tau);
    const std::vector<double> Ns = {4, 8, 16, 32};
    for (const auto& [name, P] :
         {std::pair<std::string, TracePolynomial>{
              "uv1", TracePolynomial::monomial(Monomial::make(1, {{1, 1}}))},
          {"v2", TracePolynomial::v(2)}}) {
        std::vector<double> vrho, vmu;
        for (double N : Ns) {
            const GroupSpec spec(Family::SO, static_cast<int>(N));
            vrho.push_back(l2_norm_sq(spec, params, P - pi_tau(s, P), Measure::Rho));
            vmu.push_back(l2_norm_sq(spec, params, P - pi_tau(cplx(s) - tau, P), Measure::Mu));
        }
        const double srho = fit_loglog_slope(Ns, vrho);
        const double smu = fit_loglog_slope(Ns, vmu);
        sc.check(name + "/rho slope", std::abs(srho + 2.0) <= 0.4, srho, -2.0);
        sc.check(name + "/mu slope", std::abs(smu + 2.0) <= 0.4, smu, -2.0);
    }
}

void criterion6() {
    Scope sc(6, "free-limit L2 distance: slope -2 +/- 0.4 over N=4..16, both directions");
    const double s = 1.0;
    const cplx tau(0.5, 0.0);
    const TransformParams params(s, tau);
    const TracePolynomial f = TracePolynomial::u(2);
    const TracePolynomial gf = free_sb(params, f, Direction::Forward);
    const TracePolynomial hf = free_sb(params, f, Direction::Inverse);
    const std::vector<double> Ns = {4, 8, 16};
    std::vector<double> vfwd, vinv;
    for (double N : Ns) {
        const GroupSpec spec(Family::SO, static_cast<int>(N));
        const TracePolynomial rf =
            exp_apply(op_DN(Family::SO, spec.N), 0.5 * tau, f) - gf;
        vfwd.push_back(l2_norm_sq(spec, params, rf, Measure::Mu));
        const TracePolynomial ri =
            exp_apply(op_DN(Family::SO, spec.N), -0.5 * tau, f) - hf;
        vinv.push_back(l2_norm_sq(spec, params, ri, Measure::Rho));
    }
    const double sf = fit_loglog_slope(Ns, vfwd);
    const double si = fit_loglog_slope(Ns, vinv);
    sc.check("forward slope", std::abs(sf + 2.0) <= 0.4, sf, -2.0);
    sc.check("inverse slope", std::abs(si + 2.0) <= 0.4, si, -2.0);
}

void criterion7() {
    Scope sc(7, "moment limits: slope window -2 +/- 0.4; MC within 4 SE; complexified targets");
    const double s = 1.0;
    const std::vector<double> Ns = {8, 16, 32, 64};
    for (Family fam : {Family::SO, Family::SU, Family::Sp}) {
        for (int k : {1, 2, 3}) {
            std::vector<double> vals;
            for (double N : Ns) {
                const TracePolynomial heat = exp_apply(op_DN(fam, static_cast<int>(N)), 0.5 * s,
                                                       TracePolynomial::v(k));
                vals.push_back(std::abs(eval_at_ones(heat) - nu(k, s)));
            }
            const double slope = fit_loglog_slope(Ns, vals);
            char name[64];
            std::snprintf(name, sizeof name, "%s/k=%d slope", to_string(fam).c_str(), k);
            sc.check(name, std::abs(slope + 2.0) <= 0.4, slope, -2.0);
            if (std::abs(slope + 2.0) > 0.4 && std::abs(slope + 1.0) <= 0.4) {
                sc.note(std::string(name) +
                        ": first-order 1/N correction present for this family");
            }
        }
    }
    // MC agreement with the exact finite-N values, 2000 samples, 4 SE
    struct McCase {
        Family fam;
        int N;
        uint64_t seed;
    };
    for (const McCase& c : {McCase{Family::SO, 8, 1001}, {Family::SU, 3, 1002},
                            {Family::Sp, 2, 1003}}) {
        MCConfig cfg{GroupSpec(c.fam, c.N), s, 0.0, 200, 2000, c.seed};
        for (int k : {1, 2, 3}) {
            const MomentEstimate est = estimate_moment(cfg, k);
            const double err = std::abs(est.mean - *est.exact_finite_N);
            char name[64];
            std::snprintf(name, sizeof name, "mc/%s(%d)/k=%d", to_string(c.fam).c_str(), c.N, k);
            sc.check(name, err <= 4.0 * est.std_error + 1e-12, err, 4.0 * est.std_error);
        }
    }
    // complexified case: targets nu_k(s - tau) with finite-N slack 5/N^2
    {
        const cplx tau(0.5, 0.0);
        MCConfig cfg{GroupSpec(Family::SO, 10), s, tau, 200, 2000, 1004};
        for (int k : {1, 2, 3}) {
            const MomentEstimate est = estimate_moment(cfg, k, /*complexified=*/true);
            const double err = std::abs(est.mean - *est.free_limit);
            const double slack = 4.0 * est.std_error + 5.0 / 100.0;
            char name[64];
            std::snprintf(name, sizeof name, "mc-complexified/so(10)/k=%d", k);
            sc.check(name, err <= slack, err, slack);
            // the word-machinery exact value must agree within 4 SE alone
            const double err2 = std::abs(est.mean - *est.exact_finite_N);
            std::snprintf(name, sizeof name, "mc-complexified-exact/so(10)/k=%d", k);
            sc.check(name, err2 <= 4.0 * est.std_error, err2, 4.0 * est.std_error);
        }
    }
    sc.runtime_limit(300.0);
}

void criterion8() {
    Scope sc(8, "structure: product rules 1e-10, L1 vanishing, DN split 1e-14, inverse 1e-9");
    sc.absorb(suite_prodrule(20260813));

    for (Family f : {Family::SU, Family::U}) {
        const auto& l1 = assemble(op_L1(f), 4);
        const double m = l1.entries.cwiseAbs().maxCoeff();
        sc.check("L1 zero operator/" + to_string(f), m == 0.0, m, 0.0);
    }
    for (Family f : {Family::SO, Family::SU, Family::U, Family::Sp}) {
        for (int N : {3, 7}) {
            const auto& dn = assemble(op_DN(f, N), 4);
            const Eigen::MatrixXcd sum = assemble(op(OpTag::L0), 4).entries +
                                         assemble(op_L1(f), 4).entries / double(N) +
                                         assemble(op_L2(f), 4).entries / double(N * N);
            const double d = (dn.entries - sum).cwiseAbs().maxCoeff();
            sc.check("DN split/" + to_string(f) + "/N=" + std::to_string(N), d <= 1e-14, d,
                     1e-14);
        }
    }
    // free inverse composed with the free transform on Laurent polynomials
    const TransformParams params(1.0, cplx(0.5, 0.25));
    for (int j = -4; j <= 4; ++j) {
        const TracePolynomial f = TracePolynomial::u(j);
        const TracePolynomial round =
            free_sb(params, free_sb(params, f, Direction::Forward), Direction::Inverse);
        const double d = coeff_distance(round, f);
        sc.check("free inverse/u^" + std::to_string(j), d <= 1e-9, d, 1e-9);
    }
}

void criterion9() {
    Scope sc(9, "symplectic counterexample matrices reproduced exactly");
    sc.absorb(suite_counterexample());
}

}  // namespace

int main() {
    criterion1();
    criterion2();
    criterion3();
    criterion4();
    criterion5();
    criterion6();
    criterion7();
    criterion8();
    criterion9();

    int failed = 0;
    for (const auto& c : g_results) {
        std::printf("[%s] criterion %d: %s (%.1fs)\n", c.pass ? "PASS" : "FAIL", c.id,
                    c.label.c_str(), c.seconds);
        for (const auto& n : c.notes) std::printf("        %s\n", n.c_str());
        if (!c.pass) ++failed;
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(g_results.size()) - failed,
                g_results.size());
    return failed == 0 ? 0 : 1;
}
