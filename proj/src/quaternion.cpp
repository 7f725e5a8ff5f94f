#include "sbtrace/quaternion.hpp"

#include <cmath>

#include "sbtrace/expm.hpp"

namespace sbtrace {

QuatMatrix QuatMatrix::identity(int n) {
    QuatMatrix m(n);
    for (int i = 0; i < n; ++i) m.at(i, i) = Quaternion::one();
    return m;
}

QuatMatrix QuatMatrix::operator+(const QuatMatrix& o) const {
    QuatMatrix r(n_);
    for (size_t i = 0; i < data_.size(); ++i) r.data_[i] = data_[i] + o.data_[i];
    return r;
}

QuatMatrix QuatMatrix::operator-(const QuatMatrix& o) const {
    QuatMatrix r(n_);
    for (size_t i = 0; i < data_.size(); ++i) r.data_[i] = data_[i] - o.data_[i];
    return r;
}

QuatMatrix QuatMatrix::operator*(const QuatMatrix& o) const {
    QuatMatrix r(n_);
    for (int i = 0; i < n_; ++i)
        for (int k = 0; k < n_; ++k) {
            const Quaternion& x = at(i, k);
            if (x.norm2() == 0.0) continue;
            for (int j = 0; j < n_; ++j) r.at(i, j) = r.at(i, j) + x * o.at(k, j);
        }
    return r;
}

QuatMatrix QuatMatrix::scaled(double s) const {
    QuatMatrix r(n_);
    for (size_t i = 0; i < data_.size(); ++i) r.data_[i] = data_[i] * s;
    return r;
}

QuatMatrix QuatMatrix::adjoint() const {
    QuatMatrix r(n_);
    for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j) r.at(i, j) = at(j, i).conj();
    return r;
}

double QuatMatrix::re_trace() const {
    double t = 0;
    for (int i = 0; i < n_; ++i) t += at(i, i).real();
    return t;
}

double QuatMatrix::re_trace_normalized() const { return re_trace() / n_; }

double QuatMatrix::max_abs_diff(const QuatMatrix& o) const {
    double d = 0;
    for (size_t i = 0; i < data_.size(); ++i) {
        const Quaternion q = data_[i] - o.data_[i];
        d = std::max({d, std::abs(q.a), std::abs(q.b), std::abs(q.c), std::abs(q.d)});
    }
    return d;
}

Eigen::Matrix2cd psi_map(const Quaternion& q) {
    Eigen::Matrix2cd m;
    m(0, 0) = cplx(q.a, q.d);
    m(0, 1) = cplx(-q.b, -q.c);
    m(1, 0) = cplx(q.b, -q.c);
    m(1, 1) = cplx(q.a, -q.d);
    return m;
}

Eigen::MatrixXcd phi_map(const QuatMatrix& A) {
    const int n = A.size();
    Eigen::MatrixXcd Z = Eigen::MatrixXcd::Zero(2 * n, 2 * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) Z.block<2, 2>(2 * i, 2 * j) = psi_map(A.at(i, j));
    return Z;
}

QuatMatrix phi_inverse(const Eigen::MatrixXcd& Z, double tol) {
    const int d = static_cast<int>(Z.rows());
    if (d % 2 != 0 || Z.cols() != d) throw ShapeError("phi_inverse: dimension must be even");
    const int n = d / 2;
    QuatMatrix A(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const Eigen::Matrix2cd B = Z.block<2, 2>(2 * i, 2 * j);
            // [[a+di, -b-ci], [b-ci, a-di]]
            Quaternion q;
            q.a = 0.5 * (B(0, 0).real() + B(1, 1).real());
            q.d = 0.5 * (B(0, 0).imag() - B(1, 1).imag());
            q.b = 0.5 * (B(1, 0).real() - B(0, 1).real());
            q.c = -0.5 * (B(0, 1).imag() + B(1, 0).imag());
            const Eigen::Matrix2cd err = B - psi_map(q);
            if (err.cwiseAbs().maxCoeff() > tol)
                throw DomainError("phi_inverse: block is not of quaternion type");
            A.at(i, j) = q;
        }
    return A;
}

QuatMatrix quat_expm(const QuatMatrix& A) { return phi_inverse(expm(phi_map(A)), 1e-8); }

QuatMatrix quat_inverse(const QuatMatrix& A) {
    const Eigen::MatrixXcd Z = phi_map(A);
    Eigen::FullPivLU<Eigen::MatrixXcd> lu(Z);
    if (!lu.isInvertible()) throw SingularMatrixError("quat_inverse: singular matrix");
    return phi_inverse(lu.inverse(), 1e-8);
}

}  // namespace sbtrace
