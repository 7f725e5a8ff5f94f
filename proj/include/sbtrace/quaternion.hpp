#pragma once

#include <vector>

#include <Eigen/Dense>

#include "sbtrace/errors.hpp"
#include "sbtrace/scalar.hpp"

namespace sbtrace {

/// q = a + b i + c j + d k.
struct Quaternion {
    double a = 0, b = 0, c = 0, d = 0;

    static Quaternion one() { return {1, 0, 0, 0}; }
    static Quaternion i() { return {0, 1, 0, 0}; }
    static Quaternion j() { return {0, 0, 1, 0}; }
    static Quaternion k() { return {0, 0, 0, 1}; }

    Quaternion conj() const { return {a, -b, -c, -d}; }
    double real() const { return a; }
    double norm2() const { return a * a + b * b + c * c + d * d; }

    Quaternion operator+(const Quaternion& o) const { return {a + o.a, b + o.b, c + o.c, d + o.d}; }
    Quaternion operator-(const Quaternion& o) const { return {a - o.a, b - o.b, c - o.c, d - o.d}; }
    Quaternion operator-() const { return {-a, -b, -c, -d}; }
    Quaternion operator*(double s) const { return {a * s, b * s, c * s, d * s}; }
    Quaternion operator*(const Quaternion& o) const {
        return {a * o.a - b * o.b - c * o.c - d * o.d, a * o.b + b * o.a + c * o.d - d * o.c,
                a * o.c - b * o.d + c * o.a + d * o.b, a * o.d + b * o.c - c * o.b + d * o.a};
    }
};

/// Dense N x N quaternion matrix, row-major.
class QuatMatrix {
  public:
    QuatMatrix() = default;
    explicit QuatMatrix(int n) : n_(n), data_(static_cast<size_t>(n) * n) {}

    static QuatMatrix identity(int n);

    int size() const { return n_; }
    Quaternion& at(int i, int j) { return data_[static_cast<size_t>(i) * n_ + j]; }
    const Quaternion& at(int i, int j) const { return data_[static_cast<size_t>(i) * n_ + j]; }

    QuatMatrix operator+(const QuatMatrix& o) const;
    QuatMatrix operator-(const QuatMatrix& o) const;
    QuatMatrix operator*(const QuatMatrix& o) const;
    QuatMatrix scaled(double s) const;
    QuatMatrix adjoint() const;  // conjugate transpose

    /// Re Tr / N (the normalized real trace used for the quaternionic family).
    double re_trace_normalized() const;
    double re_trace() const;

    double max_abs_diff(const QuatMatrix& o) const;

  private:
    int n_ = 0;
    std::vector<Quaternion> data_;
};

/// 2x2 complex image of a quaternion.
Eigen::Matrix2cd psi_map(const Quaternion& q);

/// Blockwise extension of psi to quaternion matrices; algebra homomorphism
/// with phi(A*) = phi(A)*.
Eigen::MatrixXcd phi_map(const QuatMatrix& A);

/// Inverse on the image of phi. Throws if Z is not blockwise of quaternion
/// type (up to tol).
QuatMatrix phi_inverse(const Eigen::MatrixXcd& Z, double tol = 1e-9);

/// exp(A) computed through the complex realization.
QuatMatrix quat_expm(const QuatMatrix& A);

/// Inverse through the complex realization.
QuatMatrix quat_inverse(const QuatMatrix& A);

}  // namespace sbtrace
