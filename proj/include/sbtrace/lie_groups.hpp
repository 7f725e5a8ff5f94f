#pragma once

#include <functional>
#include <optional>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "sbtrace/group_spec.hpp"
#include "sbtrace/quaternion.hpp"
#include "sbtrace/trace_poly.hpp"

namespace sbtrace {

using Rng = std::mt19937_64;

/// Orthonormal basis of the real Lie algebra with respect to the family's
/// inner product: <X,Y> = (N/2) Tr(XY*) for so(N), N Tr(XY*) for su(N), u(N)
/// and sp(N).
std::vector<Eigen::MatrixXcd> lie_basis(const GroupSpec& spec);

/// Orthonormal basis of the quaternionic realization of sp(N), inner product
/// 2N Re Tr(X*Y).
std::vector<QuatMatrix> quaternionic_sp_basis(int N);

enum class MagicKind { XX, XAX, TrXA_X, TrXA_TrXB };

/// Matrix- or scalar-valued result of a basis sum / closed form.
struct MagicValue {
    Eigen::MatrixXcd mat;  // XX, XAX, TrXA_X
    cplx scalar = 0.0;     // TrXA_TrXB
    bool is_scalar = false;

    double distance(const MagicValue& o) const {
        if (is_scalar) return std::abs(scalar - o.scalar);
        return (mat - o.mat).cwiseAbs().maxCoeff();
    }
};

/// Literal sum over an orthonormal basis (optionally a caller-provided one,
/// e.g. a re-orthonormalized basis for independence checks).
MagicValue magic_sum(const GroupSpec& spec, MagicKind kind, const Eigen::MatrixXcd& A,
                     const Eigen::MatrixXcd* B = nullptr,
                     const std::vector<Eigen::MatrixXcd>* basis_override = nullptr);

/// Closed-form right-hand sides of the basis sums.
MagicValue magic_closed_form(const GroupSpec& spec, MagicKind kind, const Eigen::MatrixXcd& A,
                             const Eigen::MatrixXcd* B = nullptr);

/// Quaternionic variants (family Sp realized in M_N(H), normalized real trace).
struct QuatMagicValue {
    QuatMatrix mat;
    double scalar = 0.0;
    bool is_scalar = false;
};
QuatMagicValue quat_magic_sum(int N, MagicKind kind, const QuatMatrix& A,
                              const QuatMatrix* B = nullptr);
QuatMagicValue quat_magic_closed_form(int N, MagicKind kind, const QuatMatrix& A,
                                      const QuatMatrix* B = nullptr);

/// Recombines a basis by a random real orthogonal matrix; the result is again
/// orthonormal.
std::vector<Eigen::MatrixXcd> reorthonormalize(const std::vector<Eigen::MatrixXcd>& basis, Rng& rng);

/// Product of exponentials of random algebra elements. complexified = false
/// stays in the compact group, true samples in the complexified group.
Eigen::MatrixXcd random_group_element(const GroupSpec& spec, Rng& rng, double spread,
                                      bool complexified = false);

QuatMatrix random_quat_group_element(int N, Rng& rng, double spread);

/// P_N on the quaternionic realization: u = A, v_k = Re tr(A^k).
QuatMatrix eval_trace_poly_quat(const TracePolynomial& P, const QuatMatrix& A);

// --- finite-difference oracles ---
// All stencils are central second order; the caller owns the tolerance budget
// (O(h^2) truncation on top of roundoff).

using MatrixFn = std::function<Eigen::MatrixXcd(const Eigen::MatrixXcd&)>;

/// (d/dt) f(A e^{tX}) at t=0. richardson combines the h and h/2 stencils,
/// trading 2x the evaluations for an O(h^4) truncation error.
Eigen::MatrixXcd fd_vector_field(const MatrixFn& f, const Eigen::MatrixXcd& A,
                                 const Eigen::MatrixXcd& X, double h, bool richardson = false);

/// Sum of second derivatives over the orthonormal basis.
Eigen::MatrixXcd fd_laplacian(const MatrixFn& f, const Eigen::MatrixXcd& A, const GroupSpec& spec,
                              double h, bool richardson = false);

/// The complexified second-order operator with weights (s - t/2, t/2, -theta)
/// on (X^2, Y^2, XY), Y = iX.
Eigen::MatrixXcd fd_generator(const MatrixFn& f, const Eigen::MatrixXcd& A, const GroupSpec& spec,
                              double s, cplx tau, double h);

/// Scalar version of fd_generator for word functions.
cplx fd_generator_scalar(const std::function<cplx(const Eigen::MatrixXcd&)>& f,
                         const Eigen::MatrixXcd& A, const GroupSpec& spec, double s, cplx tau,
                         double h);

using QuatFn = std::function<QuatMatrix(const QuatMatrix&)>;

/// Laplacian over the quaternionic sp(N) basis.
QuatMatrix fd_laplacian_quat(const QuatFn& f, const QuatMatrix& A, int N, double h);

}  // namespace sbtrace
