#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "sbtrace/lie_groups.hpp"
#include "sbtrace/operator_engine.hpp"
#include "sbtrace/verify_suites.hpp"

using namespace sbtrace;

namespace {

double gram_defect(const GroupSpec& spec, const std::vector<Eigen::MatrixXcd>& basis) {
    // family inner products: (N/2) Tr(XY*) for so, N Tr(XY*) for su/u/sp
    const double w = spec.family == Family::SO ? spec.N / 2.0 : static_cast<double>(spec.N);
    double worst = 0.0;
    for (size_t i = 0; i < basis.size(); ++i)
        for (size_t j = 0; j < basis.size(); ++j) {
            const cplx ip = w * (basis[i] * basis[j].adjoint()).trace();
            worst = std::max(worst, std::abs(ip - (i == j ? 1.0 : 0.0)));
        }
    return worst;
}

double membership_defect(const GroupSpec& spec, const Eigen::MatrixXcd& X) {
    switch (spec.family) {
        case Family::SO:
            return (X.transpose() + X).cwiseAbs().maxCoeff() + X.imag().cwiseAbs().maxCoeff();
        case Family::SU:
            return (X.adjoint() + X).cwiseAbs().maxCoeff() + std::abs(X.trace());
        case Family::U:
            return (X.adjoint() + X).cwiseAbs().maxCoeff();
        case Family::Sp: {
            const Eigen::MatrixXcd Om = symplectic_form(spec.N);
            return (Om * X.transpose() * Om - X).cwiseAbs().maxCoeff() +
                   (X.adjoint() + X).cwiseAbs().maxCoeff();
        }
    }
    return 1.0;
}

}  // namespace

TEST_CASE("orthonormal bases: cardinality, orthonormality, membership") {
    for (Family f : {Family::SO, Family::SU, Family::U, Family::Sp}) {
        for (int N = (f == Family::U || f == Family::Sp) ? 1 : 2; N <= 5; ++N) {
            const GroupSpec spec(f, N);
            const auto basis = lie_basis(spec);
            CHECK(static_cast<int>(basis.size()) == spec.algebra_dim());
            CHECK(gram_defect(spec, basis) < 1e-12);
            for (const auto& X : basis) CHECK(membership_defect(spec, X) < 1e-12);
        }
    }
    // quaternionic basis count N(2N+1)
    for (int N : {1, 2, 3}) {
        CHECK(static_cast<int>(quaternionic_sp_basis(N).size()) == N * (2 * N + 1));
    }
}

TEST_CASE("magic formula suite") {
    const RunReport rep = suite_magic(101, {2, 3, 4, 5, 6});
    for (const auto& c : rep.checks) {
        INFO(c.name, " observed ", c.observed);
        CHECK(c.pass);
    }
}

TEST_CASE("spot magic values") {
    // orthogonal XX sum: -I + I/N
    const GroupSpec so4(Family::SO, 4);
    const auto xx = magic_sum(so4, MagicKind::XX, Eigen::MatrixXcd::Identity(4, 4));
    CHECK((xx.mat - (-0.75) * Eigen::MatrixXcd::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-13);

    // special unitary pair sum with A=B=I vanishes (traceless basis)
    const GroupSpec su3(Family::SU, 3);
    const Eigen::MatrixXcd I3 = Eigen::MatrixXcd::Identity(3, 3);
    const auto p = magic_sum(su3, MagicKind::TrXA_TrXB, I3, &I3);
    CHECK(std::abs(p.scalar) < 1e-14);
}

TEST_CASE("random group elements satisfy the defining relations") {
    std::mt19937_64 rng(77);
    // spread 0 gives the identity
    for (Family f : {Family::SO, Family::SU, Family::U, Family::Sp}) {
        const GroupSpec spec(f, 3);
        const Eigen::MatrixXcd A = random_group_element(spec, rng, 0.0);
        CHECK((A - Eigen::MatrixXcd::Identity(spec.matrix_dim(), spec.matrix_dim()))
                  .cwiseAbs()
                  .maxCoeff() < 1e-14);
    }
    const GroupSpec so3(Family::SO, 3);
    for (int i = 0; i < 4; ++i) {
        const Eigen::MatrixXcd A = random_group_element(so3, rng, 0.7);
        CHECK((A.transpose() * A - Eigen::MatrixXcd::Identity(3, 3)).cwiseAbs().maxCoeff() <
              1e-10);
        CHECK(std::abs(A.determinant() - 1.0) < 1e-10);
        // complexified variant keeps A^T A = I but is genuinely complex
        const Eigen::MatrixXcd Z = random_group_element(so3, rng, 0.7, true);
        CHECK((Z.transpose() * Z - Eigen::MatrixXcd::Identity(3, 3)).cwiseAbs().maxCoeff() <
              1e-10);
        CHECK(Z.imag().cwiseAbs().maxCoeff() > 1e-6);
    }
    const GroupSpec sp2(Family::Sp, 2);
    const Eigen::MatrixXcd Om = symplectic_form(2);
    for (int i = 0; i < 4; ++i) {
        const Eigen::MatrixXcd A = random_group_element(sp2, rng, 0.7);
        CHECK((A.transpose() * Om * A - Om).cwiseAbs().maxCoeff() < 1e-10);
        CHECK((A.adjoint() * A - Eigen::MatrixXcd::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-10);
    }
    const GroupSpec su3(Family::SU, 3);
    for (int i = 0; i < 2; ++i) {
        const Eigen::MatrixXcd A = random_group_element(su3, rng, 0.7);
        CHECK((A.adjoint() * A - Eigen::MatrixXcd::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-10);
        CHECK(std::abs(A.determinant() - 1.0) < 1e-10);
    }
}

TEST_CASE("derivative formula suite (fd oracles)") {
    const RunReport rep = suite_derivative(303, {3, 4});
    for (const auto& c : rep.checks) {
        INFO(c.name, " observed ", c.observed);
        CHECK(c.pass);
    }
}

TEST_CASE("negative-power Laplacian: the statement sign, not the proof display") {
    // Delta A^{-2} = 2[(1/N) I - tr(A^{-1}) A^{-1}] - (2(N-1)/N) A^{-2} on the
    // orthogonal family: the inner coefficient reads (-m+j); the (-m-j)
    // variant from the proof display disagrees with the fd oracle.
    std::mt19937_64 rng(5);
    const int N = 4;
    const GroupSpec so(Family::SO, N);
    const Eigen::MatrixXcd A = random_group_element(so, rng, 0.5);
    const Eigen::MatrixXcd fd = fd_laplacian(
        [&](const Eigen::MatrixXcd& M) { return eval_trace_poly(TracePolynomial::u(-2), M, so); },
        A, so, 1e-3);
    const Eigen::MatrixXcd Ainv = A.inverse();
    const Eigen::MatrixXcd statement =
        (2.0 / N) * Eigen::MatrixXcd::Identity(N, N) -
        2.0 * (Ainv.trace() / double(N)) * Ainv - (2.0 * (N - 1.0) / N) * Ainv * Ainv;
    CHECK((fd - statement).cwiseAbs().maxCoeff() < 1e-4);
    // the other sign convention yields 3 I/N instead of I/N at j=-1; reject it
    const Eigen::MatrixXcd wrong =
        (6.0 / N) * Eigen::MatrixXcd::Identity(N, N) -
        6.0 * (Ainv.trace() / double(N)) * Ainv - (2.0 * (N - 1.0) / N) * Ainv * Ainv;
    CHECK((fd - wrong).cwiseAbs().maxCoeff() > 1e-2);
}

TEST_CASE("fd generator matches (s - tau) times the Laplacian on holomorphic inputs") {
    std::mt19937_64 rng(13);
    const GroupSpec so3(Family::SO, 3);
    const double s = 1.1;
    const cplx tau(0.5, 0.25);
    const Eigen::MatrixXcd A = random_group_element(so3, rng, 0.4, true);
    for (int trial = 0; trial < 3; ++trial) {
        const TracePolynomial P = random_poly(rng, 3);
        const Eigen::MatrixXcd gen = fd_generator(
            [&](const Eigen::MatrixXcd& M) { return eval_trace_poly(P, M, so3); }, A, so3, s, tau,
            1e-3);
        const Eigen::MatrixXcd lap =
            eval_trace_poly(apply_op(op_DN(Family::SO, 3), P), A, so3);
        CHECK((gen - (s - tau) * lap).cwiseAbs().maxCoeff() /
                  std::max(1.0, lap.cwiseAbs().maxCoeff()) <
              2e-4);
    }
}

TEST_CASE("quaternion suite") {
    const RunReport rep = suite_quaternion(909, {1, 2, 3});
    for (const auto& c : rep.checks) {
        INFO(c.name, " observed ", c.observed);
        CHECK(c.pass);
    }
}

TEST_CASE("quaternion arithmetic basics") {
    const Quaternion q{0.5, -1.0, 2.0, 0.25};
    const Quaternion r{1.5, 0.5, -0.75, 1.0};
    // psi is multiplicative and conjugation-compatible
    CHECK((psi_map(q * r) - psi_map(q) * psi_map(r)).cwiseAbs().maxCoeff() < 1e-14);
    CHECK((psi_map(q.conj()) - psi_map(q).adjoint()).cwiseAbs().maxCoeff() < 1e-14);
    // unit relations
    const Quaternion i = Quaternion::i(), j = Quaternion::j(), k = Quaternion::k();
    CHECK(psi_map(i * j).isApprox(psi_map(k)));
    CHECK(psi_map(j * k).isApprox(psi_map(i)));
    CHECK(psi_map(k * i).isApprox(psi_map(j)));
    CHECK((psi_map(i * i) + Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff() < 1e-15);

    // phi round trip
    std::mt19937_64 rng(3);
    std::normal_distribution<double> g(0.0, 1.0);
    QuatMatrix M(3);
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) M.at(a, b) = {g(rng), g(rng), g(rng), g(rng)};
    CHECK(phi_inverse(phi_map(M)).max_abs_diff(M) < 1e-14);
    // a non-quaternion-type block is rejected
    Eigen::MatrixXcd bad = Eigen::MatrixXcd::Zero(2, 2);
    bad(0, 0) = 1.0;
    CHECK_THROWS_AS(phi_inverse(bad), DomainError);
}

TEST_CASE("counterexample: the twisted transpose cannot be replaced by the adjoint") {
    const RunReport rep = suite_counterexample();
    for (const auto& c : rep.checks) {
        INFO(c.name);
        CHECK(c.pass);
    }
}

TEST_CASE("quaternionic group elements and exponentials") {
    std::mt19937_64 rng(31);
    for (int N : {1, 2}) {
        const QuatMatrix A = random_quat_group_element(N, rng, 0.5);
        // unitarity over the quaternions
        CHECK((A.adjoint() * A).max_abs_diff(QuatMatrix::identity(N)) < 1e-10);
        // the complex image lands in the symplectic group
        const Eigen::MatrixXcd Z = phi_map(A);
        const Eigen::MatrixXcd Om = symplectic_form(N);
        CHECK((Z.transpose() * Om * Z - Om).cwiseAbs().maxCoeff() < 1e-10);
    }
}

TEST_CASE("richardson stencil sharpens the truncation error") {
    std::mt19937_64 rng(61);
    const GroupSpec so4(Family::SO, 4);
    const Eigen::MatrixXcd A = random_group_element(so4, rng, 0.5);
    const auto basis = lie_basis(so4);
    const Eigen::MatrixXcd& X = basis[2];
    // exact: X~ tr(A^3) = 3 tr(X A^3)
    auto f = [&](const Eigen::MatrixXcd& M) {
        Eigen::MatrixXcd r(1, 1);
        r(0, 0) = eval_trace_poly(TracePolynomial::v(3), M, so4)(0, 0);
        return r;
    };
    const cplx exact = 3.0 * so4.normalized_trace(X * A * A * A);
    const double h = 5e-2;  // deliberately coarse so truncation dominates
    const double e2 = std::abs(fd_vector_field(f, A, X, h)(0, 0) - exact);
    const double e4 = std::abs(fd_vector_field(f, A, X, h, true)(0, 0) - exact);
    CHECK(e4 < e2 / 20.0);

    // shape guard on the magic sums
    CHECK_THROWS_AS(magic_sum(so4, MagicKind::XX, Eigen::MatrixXcd::Identity(3, 3)), ShapeError);
    CHECK_THROWS_AS(lie_basis(GroupSpec(Family::SO, 65)), ParameterError);
}

TEST_CASE("first-derivative formulas for matrix powers, both signs") {
    std::mt19937_64 rng(83);
    const GroupSpec so4(Family::SO, 4);
    const Eigen::MatrixXcd A = random_group_element(so4, rng, 0.5);
    const auto basis = lie_basis(so4);
    const Eigen::MatrixXcd& X = basis[1];
    const Eigen::MatrixXcd Ainv = A.inverse();
    // positive power: sum_{j=1}^m A^j X A^{m-j}
    {
        const int m = 3;
        Eigen::MatrixXcd exact = Eigen::MatrixXcd::Zero(4, 4);
        for (int j = 1; j <= m; ++j) {
            Eigen::MatrixXcd lhsj = Eigen::MatrixXcd::Identity(4, 4);
            for (int i = 0; i < j; ++i) lhsj *= A;
            Eigen::MatrixXcd rhsj = Eigen::MatrixXcd::Identity(4, 4);
            for (int i = 0; i < m - j; ++i) rhsj *= A;
            exact += lhsj * X * rhsj;
        }
        const Eigen::MatrixXcd fd = fd_vector_field(
            [&](const Eigen::MatrixXcd& M) { return eval_trace_poly(TracePolynomial::u(m), M, so4); },
            A, X, 1e-4, true);
        CHECK((fd - exact).cwiseAbs().maxCoeff() < 1e-8);
    }
    // negative power: -sum_{j=m+1}^{0} A^j X A^{m-j}
    {
        const int m = -2;
        Eigen::MatrixXcd exact = Eigen::MatrixXcd::Zero(4, 4);
        for (int j = m + 1; j <= 0; ++j) {
            Eigen::MatrixXcd lhsj = Eigen::MatrixXcd::Identity(4, 4);
            for (int i = 0; i < -j; ++i) lhsj *= Ainv;
            Eigen::MatrixXcd rhsj = Eigen::MatrixXcd::Identity(4, 4);
            for (int i = 0; i < -(m - j); ++i) rhsj *= Ainv;
            exact -= lhsj * X * rhsj;
        }
        const Eigen::MatrixXcd fd = fd_vector_field(
            [&](const Eigen::MatrixXcd& M) { return eval_trace_poly(TracePolynomial::u(m), M, so4); },
            A, X, 1e-4, true);
        CHECK((fd - exact).cwiseAbs().maxCoeff() < 1e-8);
    }
}
