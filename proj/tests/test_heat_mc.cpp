#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "sbtrace/free_transform.hpp"
#include "sbtrace/heat_mc.hpp"
#include "sbtrace/lie_groups.hpp"
#include "sbtrace/word_calculus.hpp"

using namespace sbtrace;

TEST_CASE("tiny time returns near-identity samples") {
    MCConfig cfg{GroupSpec(Family::SO, 4), 1e-12, 0.0, 10, 1, 42};
    const Eigen::MatrixXcd A = sample_rho(cfg, 0);
    CHECK((A - Eigen::MatrixXcd::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-5);
}

TEST_CASE("samples satisfy the group relations") {
    MCConfig cfg{GroupSpec(Family::SO, 5), 1.0, 0.0, 200, 1, 7};
    for (long i = 0; i < 3; ++i) {
        const Eigen::MatrixXcd A = sample_rho(cfg, i);
        CHECK((A.transpose() * A - Eigen::MatrixXcd::Identity(5, 5)).cwiseAbs().maxCoeff() <
              1e-8);
        CHECK(std::abs(A.determinant() - 1.0) < 1e-8);
        CHECK(A.imag().cwiseAbs().maxCoeff() < 1e-12);
    }
    MCConfig su{GroupSpec(Family::SU, 3), 1.0, 0.0, 200, 1, 7};
    for (long i = 0; i < 3; ++i) {
        const Eigen::MatrixXcd A = sample_rho(su, i);
        CHECK((A.adjoint() * A - Eigen::MatrixXcd::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-8);
        CHECK(std::abs(A.determinant() - 1.0) < 1e-8);
    }
    MCConfig sp{GroupSpec(Family::Sp, 2), 1.0, 0.0, 200, 1, 7};
    const Eigen::MatrixXcd Om = symplectic_form(2);
    for (long i = 0; i < 3; ++i) {
        const Eigen::MatrixXcd A = sample_rho(sp, i);
        CHECK((A.transpose() * Om * A - Om).cwiseAbs().maxCoeff() < 1e-8);
        CHECK((A.adjoint() * A - Eigen::MatrixXcd::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-8);
    }
    // complexified samples stay in the complex group but leave the compact one
    MCConfig soc{GroupSpec(Family::SO, 4), 1.0, cplx(0.5, 0.2), 200, 1, 7};
    for (long i = 0; i < 3; ++i) {
        const Eigen::MatrixXcd A = sample_mu(soc, i);
        CHECK((A.transpose() * A - Eigen::MatrixXcd::Identity(4, 4)).cwiseAbs().maxCoeff() <
              1e-8);
        CHECK(std::abs(A.determinant() - 1.0) < 1e-8);
    }
}

TEST_CASE("samples are reproducible per (seed, index) and differ across indices") {
    MCConfig cfg{GroupSpec(Family::SO, 4), 1.0, 0.0, 100, 1, 99};
    const Eigen::MatrixXcd A0 = sample_rho(cfg, 0);
    const Eigen::MatrixXcd A0b = sample_rho(cfg, 0);
    const Eigen::MatrixXcd A1 = sample_rho(cfg, 1);
    CHECK((A0 - A0b).cwiseAbs().maxCoeff() == 0.0);
    CHECK((A0 - A1).cwiseAbs().maxCoeff() > 1e-3);
}

TEST_CASE("moment estimates match the exact finite-N values") {
    // k = 0 is exact
    MCConfig cfg0{GroupSpec(Family::SO, 6), 1.0, 0.0, 50, 20, 3};
    const MomentEstimate e0 = estimate_moment(cfg0, 0);
    CHECK(e0.mean == cplx(1.0, 0.0));
    CHECK(e0.std_error == 0.0);

    // orthogonal group, first moment, 4 standard errors
    MCConfig cfg{GroupSpec(Family::SO, 10), 1.0, 0.0, 200, 2000, 12345};
    const MomentEstimate est = estimate_moment(cfg, 1);
    REQUIRE(est.exact_finite_N.has_value());
    CHECK(std::abs(*est.exact_finite_N - std::exp(-0.5 * 9.0 / 10.0)) < 1e-12);
    CHECK(std::abs(est.mean - *est.exact_finite_N) < 4.0 * est.std_error + 1e-12);

    // special unitary group: no word machinery, the operator engine is the oracle
    MCConfig su{GroupSpec(Family::SU, 3), 1.0, 0.0, 200, 1500, 777};
    const MomentEstimate esu = estimate_moment(su, 1);
    REQUIRE(esu.exact_finite_N.has_value());
    CHECK(std::abs(esu.mean - *esu.exact_finite_N) < 4.0 * esu.std_error + 1e-12);
}

TEST_CASE("statistical semigroup property") {
    // moments at s1 + s2 match a two-stage run within 4 combined SEs
    const GroupSpec spec(Family::SO, 6);
    MCConfig one{spec, 1.0, 0.0, 200, 1200, 31};
    const MomentEstimate direct = estimate_moment(one, 1);
    // two-stage: sample at s=0.5, multiply two independent draws
    MCConfig half{spec, 0.5, 0.0, 100, 1200, 77};
    cplx sum = 0.0;
    std::vector<cplx> vals;
    for (long i = 0; i < half.samples; ++i) {
        const Eigen::MatrixXcd A = sample_rho(half, 2 * i) * sample_rho(half, 2 * i + 1);
        vals.push_back(A.trace() / 6.0);
        sum += vals.back();
    }
    const cplx mean = sum / double(half.samples);
    double var = 0.0;
    for (const cplx& v : vals) var += std::norm(v - mean);
    const double se = std::sqrt(var / double(half.samples - 1) / double(half.samples));
    CHECK(std::abs(mean - direct.mean) < 4.0 * (se + direct.std_error));
}

TEST_CASE("step refinement stays within combined error bars") {
    const GroupSpec spec(Family::SO, 6);
    MCConfig coarse{spec, 1.0, 0.0, 100, 1200, 5};
    MCConfig fine{spec, 1.0, 0.0, 200, 1200, 6};
    const MomentEstimate a = estimate_moment(coarse, 2);
    const MomentEstimate b = estimate_moment(fine, 2);
    CHECK(std::abs(a.mean - b.mean) < 4.0 * (a.std_error + b.std_error) + 1e-3);
}

TEST_CASE("complexified sampler targets the shifted moment functions") {
    // base case tau = s: E[tr A] tends to nu_1(0) = 1
    MCConfig base{GroupSpec(Family::SO, 10), 1.0, cplx(1.0, 0.0), 200, 800, 21};
    const MomentEstimate eb = estimate_moment(base, 1, /*complexified=*/true);
    CHECK(std::abs(eb.mean - 1.0) < 4.0 * eb.std_error + 5.0 / 100.0);

    // SO(10,C), s=1, tau=0.5: against nu_1(0.5) with the finite-N slack
    MCConfig cfg{GroupSpec(Family::SO, 10), 1.0, cplx(0.5, 0.0), 200, 2000, 22};
    const MomentEstimate est = estimate_moment(cfg, 1, true);
    REQUIRE(est.free_limit.has_value());
    CHECK(std::abs(*est.free_limit - std::exp(-0.25)) < 1e-12);
    CHECK(std::abs(est.mean - *est.free_limit) < 4.0 * est.std_error + 5.0 / 100.0);
    // and against the exact finite-N value from the word machinery, 4 SEs only
    REQUIRE(est.exact_finite_N.has_value());
    CHECK(std::abs(est.mean - *est.exact_finite_N) < 4.0 * est.std_error);

    // invalid tau: the covariance is not positive definite
    MCConfig bad{GroupSpec(Family::SO, 4), 1.0, cplx(0.0, 0.5), 10, 1, 1};
    CHECK_THROWS_AS(sample_mu(bad, 0), ParameterError);
}

TEST_CASE("squared-norm estimates against the word machinery") {
    // P = u(v1 - nu_1(s)): nontrivial norm, exact value from the generator
    const double s = 1.0;
    const GroupSpec spec(Family::SO, 6);
    TracePolynomial P = TracePolynomial::monomial(Monomial::make(1, {{1, 1}}));
    P -= nu(1, s) * TracePolynomial::u(1);
    MCConfig cfg{spec, s, 0.0, 200, 1500, 404};
    const MomentEstimate est = estimate_l2(cfg, P);
    REQUIRE(est.exact_finite_N.has_value());
    CHECK(est.exact_finite_N->real() > 1e-4);  // genuinely nontrivial
    CHECK(std::abs(est.mean.real() - est.exact_finite_N->real()) <
          4.0 * est.std_error + 1e-10);
}

TEST_CASE("csv output shape") {
    MCConfig cfg{GroupSpec(Family::Sp, 2), 0.5, 0.0, 60, 50, 9};
    const MomentEstimate est = estimate_moment(cfg, 1);
    const std::string header = mc_csv_header();
    const std::string row = mc_csv_row(cfg, "1", est, false);
    const auto commas = [](const std::string& s) {
        return std::count(s.begin(), s.end(), ',');
    };
    CHECK(commas(header) == commas(row));
    CHECK(row.find("sp,2,") == 0);
    // bit-for-bit reproducibility of the full row
    const MomentEstimate est2 = estimate_moment(cfg, 1);
    CHECK(mc_csv_row(cfg, "1", est2, false) == row);
}

TEST_CASE("complexified squared norms agree with the word machinery") {
    const double s = 1.0;
    const cplx tau(0.5, 0.2);
    const GroupSpec spec(Family::SO, 4);
    TracePolynomial P = TracePolynomial::u(2);
    P -= cplx(0.5, 0.0) * TracePolynomial::monomial(Monomial::make(1, {{1, 1}}));
    MCConfig cfg{spec, s, tau, 200, 800, 606};
    const MomentEstimate est = estimate_l2(cfg, P, /*complexified=*/true);
    REQUIRE(est.exact_finite_N.has_value());
    CHECK(std::abs(est.mean.real() - est.exact_finite_N->real()) <
          4.0 * est.std_error + 1e-10);
}
