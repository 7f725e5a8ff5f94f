#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "sbtrace/free_transform.hpp"
#include "sbtrace/operator_engine.hpp"
#include "sbtrace/ratefit.hpp"
#include "sbtrace/verify_suites.hpp"

using namespace sbtrace;

TEST_CASE("moment functions nu_k") {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    for (int trial = 0; trial < 6; ++trial) {
        const cplx tau(uni(rng), uni(rng));
        CHECK(nu(0, tau) == cplx(1.0, 0.0));
        // closed forms for small k
        CHECK(std::abs(nu(1, tau) - std::exp(-0.5 * tau)) < 1e-14);
        CHECK(std::abs(nu(2, tau) - std::exp(-tau) * (1.0 - tau)) < 1e-14);
        // symmetric in the index
        for (int k = 1; k <= 7; ++k) CHECK(nu(k, tau) == nu(-k, tau));
        // nu_k(0) = 1 for all k
        for (int k = 1; k <= 9; ++k) CHECK(std::abs(nu(k, 0.0) - 1.0) < 1e-13);
    }
    // k=3 by the explicit sum: e^{-3t/2} (1 - 3t + (3/2) t^2)
    const cplx t(0.37, -0.21);
    CHECK(std::abs(nu(3, t) - std::exp(-1.5 * t) * (1.0 - 3.0 * t + 1.5 * t * t)) < 1e-14);
    // large index stays finite (log-gamma path)
    CHECK(std::isfinite(std::abs(nu(80, cplx(0.3, 0.1)))));
}

TEST_CASE("trace evaluation map pi_tau") {
    const cplx tau(0.4, 0.2);
    // v3 v_{-7}^2 u^6 + 9 v1 v_{-4}^5
    TracePolynomial P = TracePolynomial::monomial(Monomial::make(6, {{3, 1}, {-7, 2}}));
    P += cplx(9.0, 0.0) * TracePolynomial::monomial(Monomial::make(0, {{1, 1}, {-4, 5}}));
    const TracePolynomial out = pi_tau(tau, P);
    CHECK(out.is_laurent());
    const cplx c6 = nu(3, tau) * nu(-7, tau) * nu(-7, tau);
    const cplx c0 = 9.0 * nu(1, tau) * std::pow(nu(-4, tau), 5);
    CHECK(std::abs(out.coeff(Monomial::u_power(6)) - c6) < 1e-14);
    CHECK(std::abs(out.coeff(Monomial::one()) - c0) < 1e-13);

    // Laurent polynomials pass through unchanged
    const TracePolynomial L = TracePolynomial::u(3) - cplx(2.0, 0.0) * TracePolynomial::u(-1);
    CHECK(pi_tau(tau, L) == L);

    // pi_0 sends every v_k to 1
    TracePolynomial Q = TracePolynomial::v(5) * TracePolynomial::v(-2);
    CHECK(coeff_distance(pi_tau(0.0, Q), TracePolynomial::one()) < 1e-13);

    // algebra homomorphism
    std::mt19937_64 rng(9);
    for (int i = 0; i < 5; ++i) {
        const TracePolynomial A = random_poly(rng, 3);
        const TracePolynomial B = random_poly(rng, 3);
        CHECK(coeff_distance(pi_tau(tau, A * B), pi_tau(tau, A) * pi_tau(tau, B)) < 1e-10);
    }
}

TEST_CASE("eval example: u^2 - tau u v1 at the limiting moments") {
    const double s = 1.3;
    const cplx tau(0.5, 0.3);
    TracePolynomial P = TracePolynomial::u(2) -
                        tau * TracePolynomial::monomial(Monomial::make(1, {{1, 1}}));
    const cplx val = eval_scalar(P, 1.0, {{1, nu(1, s - tau)}});
    CHECK(std::abs(val - (1.0 - tau * std::exp(-0.5 * (s - tau)))) < 1e-14);
}

TEST_CASE("free transform closed form on u^2") {
    const double s = 1.0;
    for (cplx tau : {cplx(0.6, 0.0), cplx(0.4, 0.3)}) {
        const TransformParams params(s, tau);
        const TracePolynomial g = free_sb(params, TracePolynomial::u(2), Direction::Forward);
        // e^{-tau} (u^2 - tau e^{-(s-tau)/2} u)
        TracePolynomial expect;
        expect += std::exp(-tau) * TracePolynomial::u(2);
        expect += (-std::exp(-tau) * tau * std::exp(-0.5 * (s - tau))) * TracePolynomial::u(1);
        CHECK(coeff_distance(g, expect) < 1e-12);
    }
    // one-parameter specialization s = tau = t
    const double t = 0.8;
    const TracePolynomial g = free_sb(TransformParams(t, cplx(t, 0.0)), TracePolynomial::u(2),
                                      Direction::Forward);
    TracePolynomial expect;
    expect += std::exp(-t) * TracePolynomial::u(2);
    expect += cplx(-std::exp(-t) * t, 0.0) * TracePolynomial::u(1);
    CHECK(coeff_distance(g, expect) < 1e-12);

    // constants are fixed
    CHECK(coeff_distance(free_sb(TransformParams(1.0, cplx(0.5, 0.1)), TracePolynomial::one(),
                                 Direction::Forward),
                         TracePolynomial::one()) < 1e-14);
}

TEST_CASE("free inverse undoes the free transform numerically") {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    for (int trial = 0; trial < 6; ++trial) {
        const double s = 0.5 + uni(rng);
        const double t = 0.2 + uni(rng) * (2.0 * s - 0.4) / 2.0;
        const double theta_max = std::sqrt(std::max(1e-9, t * (2.0 * s - t))) * 0.8;
        const TransformParams params(s, cplx(t, (2.0 * uni(rng) - 1.0) * theta_max));
        for (int j = -4; j <= 4; ++j) {
            const TracePolynomial f = TracePolynomial::u(j);
            const TracePolynomial round =
                free_sb(params, free_sb(params, f, Direction::Forward), Direction::Inverse);
            CHECK(coeff_distance(round, f) < 1e-9);
        }
    }
    // non-Laurent input is rejected
    CHECK_THROWS_AS(free_sb(TransformParams(1.0, cplx(0.5, 0.0)), TracePolynomial::v(1),
                            Direction::Forward),
                    DomainError);
}

TEST_CASE("finite-N moments approach nu_k at the family's true rate") {
    // The N-dependence of the first moment is exactly e^{(s/2) c_N} with
    // c_N = -1 + 1/N (orthogonal), -1 - 1/(2N) (symplectic), -1 + 1/N^2
    // (special unitary): the distance to nu_k(s) decays like 1/N for the
    // families with a first-order correction and like 1/N^2 without one.
    const double s = 1.0;
    const std::vector<int> Ns = {8, 16, 32, 64};
    std::vector<double> Nd(Ns.begin(), Ns.end());
    for (int k : {1, 2, 3}) {
        std::vector<double> dso, dsu, dsp;
        for (int N : Ns) {
            auto moment = [&](Family f) {
                const TracePolynomial heat =
                    exp_apply(op_DN(f, N), 0.5 * s, TracePolynomial::v(k));
                return eval_at_ones(heat);
            };
            dso.push_back(std::abs(moment(Family::SO) - nu(k, s)));
            dsu.push_back(std::abs(moment(Family::SU) - nu(k, s)));
            dsp.push_back(std::abs(moment(Family::Sp) - nu(k, s)));
        }
        CHECK(fit_loglog_slope(Nd, dso) == doctest::Approx(-1.0).epsilon(0.4));
        CHECK(fit_loglog_slope(Nd, dsp) == doctest::Approx(-1.0).epsilon(0.4));
        CHECK(fit_loglog_slope(Nd, dsu) == doctest::Approx(-2.0).epsilon(0.2));
    }
    // exact first moments
    for (int N : {5, 12}) {
        const cplx mso = eval_at_ones(exp_apply(op_DN(Family::SO, N), 0.5, TracePolynomial::v(1)));
        CHECK(std::abs(mso - std::exp(-0.5 * (N - 1.0) / N)) < 1e-13);
        const cplx msp = eval_at_ones(exp_apply(op_DN(Family::Sp, N), 0.5, TracePolynomial::v(1)));
        CHECK(std::abs(msp - std::exp(-0.5 * (2.0 * N + 1.0) / (2.0 * N))) < 1e-13);
        const cplx mu = eval_at_ones(exp_apply(op_DN(Family::U, N), 0.5, TracePolynomial::v(1)));
        CHECK(std::abs(mu - std::exp(-0.5)) < 1e-13);
    }
}

TEST_CASE("full unitary family: exact base moment and second-order rate") {
    const double s = 1.0;
    const std::vector<double> Ns = {8, 16, 32, 64};
    for (int k : {2, 3}) {
        std::vector<double> vals;
        for (double N : Ns) {
            const TracePolynomial heat = exp_apply(op_DN(Family::U, static_cast<int>(N)),
                                                   0.5 * s, TracePolynomial::v(k));
            vals.push_back(std::abs(eval_at_ones(heat) - nu(k, s)));
        }
        CHECK(fit_loglog_slope(Ns, vals) <= -1.6);
    }
}
