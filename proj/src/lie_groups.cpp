#include "sbtrace/lie_groups.hpp"

#include <cmath>

#include "sbtrace/expm.hpp"

namespace sbtrace {

namespace {

using Mat = Eigen::MatrixXcd;

Mat elem(int n, int i, int j) {
    Mat m = Mat::Zero(n, n);
    m(i, j) = 1.0;
    return m;
}

std::vector<Mat> so_basis(int N) {
    std::vector<Mat> out;
    const double c = 1.0 / std::sqrt(static_cast<double>(N));
    for (int i = 0; i < N; ++i)
        for (int j = i + 1; j < N; ++j) out.push_back(c * (elem(N, i, j) - elem(N, j, i)));
    return out;
}

std::vector<Mat> su_basis(int N) {
    std::vector<Mat> out;
    const double c = 1.0 / std::sqrt(2.0 * N);
    const cplx I(0.0, 1.0);
    for (int i = 0; i < N; ++i)
        for (int j = i + 1; j < N; ++j) {
            out.push_back(c * (elem(N, i, j) - elem(N, j, i)));
            out.push_back(c * I * (elem(N, i, j) + elem(N, j, i)));
        }
    // diagonal traceless part: i * diag(1,..,1,-r,0,..) / sqrt(N r (r+1))
    for (int r = 1; r < N; ++r) {
        Mat d = Mat::Zero(N, N);
        const double s = 1.0 / std::sqrt(static_cast<double>(N) * r * (r + 1));
        for (int i = 0; i < r; ++i) d(i, i) = I * s;
        d(r, r) = -I * (static_cast<double>(r) * s);
        out.push_back(d);
    }
    return out;
}

std::vector<Mat> u_basis(int N) {
    std::vector<Mat> out = su_basis(N);
    out.push_back(cplx(0.0, 1.0 / N) * Mat::Identity(N, N));
    return out;
}

std::vector<Mat> sp_basis(int N) {
    std::vector<Mat> out;
    for (const QuatMatrix& X : quaternionic_sp_basis(N)) out.push_back(phi_map(X));
    return out;
}

}  // namespace

std::vector<QuatMatrix> quaternionic_sp_basis(int N) {
    std::vector<QuatMatrix> out;
    const double c4 = 1.0 / std::sqrt(4.0 * N);
    const double c2 = 1.0 / std::sqrt(2.0 * N);
    // real antisymmetric part
    for (int a = 0; a < N; ++a)
        for (int b = a + 1; b < N; ++b) {
            QuatMatrix m(N);
            m.at(a, b) = Quaternion::one() * c4;
            m.at(b, a) = Quaternion::one() * (-c4);
            out.push_back(m);
        }
    // gamma * (symmetric off-diagonal and diagonal), gamma in {i, j, k}
    const Quaternion units[3] = {Quaternion::i(), Quaternion::j(), Quaternion::k()};
    for (const Quaternion& g : units) {
        for (int a = 0; a < N; ++a)
            for (int b = a + 1; b < N; ++b) {
                QuatMatrix m(N);
                m.at(a, b) = g * c4;
                m.at(b, a) = g * c4;
                out.push_back(m);
            }
        for (int a = 0; a < N; ++a) {
            QuatMatrix m(N);
            m.at(a, a) = g * c2;
            out.push_back(m);
        }
    }
    return out;
}

std::vector<Mat> lie_basis(const GroupSpec& spec) {
    if (spec.N > 64) throw ParameterError("lie_basis: oracle sizes cap at N = 64");
    switch (spec.family) {
        case Family::SO: return so_basis(spec.N);
        case Family::SU: return su_basis(spec.N);
        case Family::U: return u_basis(spec.N);
        case Family::Sp: return sp_basis(spec.N);
    }
    return {};
}

MagicValue magic_sum(const GroupSpec& spec, MagicKind kind, const Mat& A, const Mat* B,
                     const std::vector<Mat>* basis_override) {
    const int d = spec.matrix_dim();
    if (A.rows() != d || A.cols() != d) throw ShapeError("magic_sum: matrix dimension mismatch");
    if (kind == MagicKind::TrXA_TrXB && (B == nullptr || B->rows() != d || B->cols() != d))
        throw ShapeError("magic_sum: second matrix required");
    const std::vector<Mat> local = basis_override ? std::vector<Mat>{} : lie_basis(spec);
    const std::vector<Mat>& basis = basis_override ? *basis_override : local;

    MagicValue out;
    if (kind == MagicKind::TrXA_TrXB) {
        out.is_scalar = true;
        for (const Mat& X : basis)
            out.scalar += spec.normalized_trace(X * A) * spec.normalized_trace(X * (*B));
        return out;
    }
    out.mat = Mat::Zero(d, d);
    for (const Mat& X : basis) {
        switch (kind) {
            case MagicKind::XX: out.mat += X * X; break;
            case MagicKind::XAX: out.mat += X * A * X; break;
            case MagicKind::TrXA_X: out.mat += spec.normalized_trace(X * A) * X; break;
            default: break;
        }
    }
    return out;
}

MagicValue magic_closed_form(const GroupSpec& spec, MagicKind kind, const Mat& A, const Mat* B) {
    const int d = spec.matrix_dim();
    const double N = spec.N;
    const Mat I = Mat::Identity(d, d);
    MagicValue out;
    switch (spec.family) {
        case Family::SO:
            switch (kind) {
                case MagicKind::XX: out.mat = -((N - 1) / N) * I; break;
                case MagicKind::XAX: out.mat = (1.0 / N) * A.transpose() - spec.normalized_trace(A) * I; break;
                case MagicKind::TrXA_X: out.mat = (1.0 / (N * N)) * (A.transpose() - A); break;
                case MagicKind::TrXA_TrXB:
                    out.is_scalar = true;
                    out.scalar = (1.0 / (N * N)) * (spec.normalized_trace(A.transpose() * (*B)) -
                                                    spec.normalized_trace(A * (*B)));
                    break;
            }
            break;
        case Family::SU:
            switch (kind) {
                case MagicKind::XX: out.mat = (-1.0 + 1.0 / (N * N)) * I; break;
                case MagicKind::XAX:
                    out.mat = -spec.normalized_trace(A) * I + (1.0 / (N * N)) * A;
                    break;
                case MagicKind::TrXA_X:
                    out.mat = (1.0 / (N * N)) * (-A + spec.normalized_trace(A) * I);
                    break;
                case MagicKind::TrXA_TrXB:
                    out.is_scalar = true;
                    out.scalar = (1.0 / (N * N)) * (-spec.normalized_trace(A * (*B)) +
                                                    spec.normalized_trace(A) * spec.normalized_trace(*B));
                    break;
            }
            break;
        case Family::U:
            switch (kind) {
                case MagicKind::XX: out.mat = -I; break;
                case MagicKind::XAX: out.mat = -spec.normalized_trace(A) * I; break;
                case MagicKind::TrXA_X: out.mat = -(1.0 / (N * N)) * A; break;
                case MagicKind::TrXA_TrXB:
                    out.is_scalar = true;
                    out.scalar = -(1.0 / (N * N)) * spec.normalized_trace(A * (*B));
                    break;
            }
            break;
        case Family::Sp: {
            const Mat Om = symplectic_form(spec.N);
            const Mat OmInv = -Om;  // Om^2 = -I
            const Mat twisted = Om * A.transpose() * OmInv;
            switch (kind) {
                case MagicKind::XX: out.mat = -(1.0 + 1.0 / (2.0 * N)) * I; break;
                case MagicKind::XAX:
                    out.mat = -(1.0 / (2.0 * N)) * twisted - spec.normalized_trace(A) * I;
                    break;
                case MagicKind::TrXA_X:
                    out.mat = (1.0 / (4.0 * N * N)) * (twisted - A);
                    break;
                case MagicKind::TrXA_TrXB:
                    out.is_scalar = true;
                    out.scalar = (1.0 / (4.0 * N * N)) * (spec.normalized_trace(twisted * (*B)) -
                                                          spec.normalized_trace(A * (*B)));
                    break;
            }
            break;
        }
    }
    return out;
}

QuatMagicValue quat_magic_sum(int N, MagicKind kind, const QuatMatrix& A, const QuatMatrix* B) {
    QuatMagicValue out;
    const auto basis = quaternionic_sp_basis(N);
    if (kind == MagicKind::TrXA_TrXB) {
        out.is_scalar = true;
        for (const QuatMatrix& X : basis)
            out.scalar += (X * A).re_trace_normalized() * (X * (*B)).re_trace_normalized();
        return out;
    }
    out.mat = QuatMatrix(N);
    for (const QuatMatrix& X : basis) {
        switch (kind) {
            case MagicKind::XX: out.mat = out.mat + X * X; break;
            case MagicKind::XAX: out.mat = out.mat + X * A * X; break;
            case MagicKind::TrXA_X:
                out.mat = out.mat + X.scaled((X * A).re_trace_normalized());
                break;
            default: break;
        }
    }
    return out;
}

QuatMagicValue quat_magic_closed_form(int N, MagicKind kind, const QuatMatrix& A,
                                      const QuatMatrix* B) {
    QuatMagicValue out;
    const double n = N;
    switch (kind) {
        case MagicKind::XX:
            out.mat = QuatMatrix::identity(N).scaled(-(1.0 + 1.0 / (2.0 * n)));
            break;
        case MagicKind::XAX:
            out.mat = A.adjoint().scaled(-1.0 / (2.0 * n)) -
                      QuatMatrix::identity(N).scaled(A.re_trace_normalized());
            break;
        case MagicKind::TrXA_X:
            out.mat = (A.adjoint() - A).scaled(1.0 / (4.0 * n * n));
            break;
        case MagicKind::TrXA_TrXB:
            out.is_scalar = true;
            out.scalar = ((A.adjoint() * (*B)).re_trace_normalized() -
                          (A * (*B)).re_trace_normalized()) /
                         (4.0 * n * n);
            break;
    }
    return out;
}

std::vector<Mat> reorthonormalize(const std::vector<Mat>& basis, Rng& rng) {
    const int d = static_cast<int>(basis.size());
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::MatrixXd G(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) G(i, j) = gauss(rng);
    const Eigen::MatrixXd Q = Eigen::HouseholderQR<Eigen::MatrixXd>(G).householderQ();
    std::vector<Mat> out(d);
    for (int i = 0; i < d; ++i) {
        Mat acc = Mat::Zero(basis[0].rows(), basis[0].cols());
        for (int j = 0; j < d; ++j) acc += Q(i, j) * basis[j];
        out[i] = std::move(acc);
    }
    return out;
}

Mat random_group_element(const GroupSpec& spec, Rng& rng, double spread, bool complexified) {
    if (!(spread >= 0)) throw ParameterError("random_group_element: spread must be >= 0");
    const auto basis = lie_basis(spec);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const double scale = spread / std::sqrt(static_cast<double>(basis.size()));
    Mat out = Mat::Identity(spec.matrix_dim(), spec.matrix_dim());
    for (int rep = 0; rep < 2; ++rep) {
        Mat G = Mat::Zero(spec.matrix_dim(), spec.matrix_dim());
        for (const Mat& X : basis) {
            cplx coeff(gauss(rng), complexified ? gauss(rng) : 0.0);
            G += coeff * X;
        }
        out = out * expm(scale * G);
    }
    return out;
}

QuatMatrix random_quat_group_element(int N, Rng& rng, double spread) {
    const auto basis = quaternionic_sp_basis(N);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const double scale = spread / std::sqrt(static_cast<double>(basis.size()));
    QuatMatrix G(N);
    for (const QuatMatrix& X : basis) G = G + X.scaled(gauss(rng));
    return quat_expm(G.scaled(scale));
}

QuatMatrix eval_trace_poly_quat(const TracePolynomial& P, const QuatMatrix& A) {
    const int n = A.size();
    const QuatMatrix Ainv = quat_inverse(A);
    std::map<int, QuatMatrix> pw;
    pw[0] = QuatMatrix::identity(n);
    std::function<const QuatMatrix&(int)> power = [&](int k) -> const QuatMatrix& {
        auto it = pw.find(k);
        if (it != pw.end()) return it->second;
        QuatMatrix acc = power(k > 0 ? k - 1 : k + 1) * (k > 0 ? A : Ainv);
        return pw.emplace(k, std::move(acc)).first->second;
    };
    QuatMatrix out(n);
    for (const auto& [m, c] : P.terms()) {
        if (std::abs(c.imag()) > 1e-12)
            throw DomainError("eval_trace_poly_quat: complex coefficients not representable");
        double scalar = c.real();
        for (const auto& [k, e] : m.v_exps) {
            const double vk = power(k).re_trace_normalized();
            for (int i = 0; i < e; ++i) scalar *= vk;
        }
        out = out + power(m.u_exp).scaled(scalar);
    }
    return out;
}

// --- finite differences ---

namespace {

Mat central_diff(const MatrixFn& f, const Mat& A, const Mat& X, double h) {
    return (f(A * expm(h * X)) - f(A * expm(-h * X))) / (2.0 * h);
}

Mat second_diff(const MatrixFn& f, const Mat& f0, const Mat& A, const Mat& X, double h) {
    return (f(A * expm(h * X)) - 2.0 * f0 + f(A * expm(-h * X))) / (h * h);
}

}  // namespace

Mat fd_vector_field(const MatrixFn& f, const Mat& A, const Mat& X, double h, bool richardson) {
    const Mat d = central_diff(f, A, X, h);
    if (!richardson) return d;
    return (4.0 * central_diff(f, A, X, h / 2.0) - d) / 3.0;
}

Mat fd_laplacian(const MatrixFn& f, const Mat& A, const GroupSpec& spec, double h,
                 bool richardson) {
    const Mat f0 = f(A);
    Mat acc = Mat::Zero(f0.rows(), f0.cols());
    for (const Mat& X : lie_basis(spec)) {
        const Mat d = second_diff(f, f0, A, X, h);
        acc += richardson ? (4.0 * second_diff(f, f0, A, X, h / 2.0) - d) / 3.0 : d;
    }
    return acc;
}

namespace {

// Weighted sum over the basis of (s - t/2) X^2 + (t/2) Y^2 - theta XY, Y = iX.
template <class Value, class Eval>
Value fd_generator_impl(const Eval& f, const Mat& A, const GroupSpec& spec, double s, cplx tau,
                        double h) {
    const double t = tau.real(), theta = tau.imag();
    const cplx I(0.0, 1.0);
    Value acc{};
    const Value f0 = f(A);
    bool first = true;
    for (const Mat& X : lie_basis(spec)) {
        const Mat Y = I * X;
        const Mat Ep = expm(h * X), Em = expm(-h * X);
        const Mat Fp = expm(h * Y), Fm = expm(-h * Y);
        const Value xx = (f(A * Ep) - 2.0 * f0 + f(A * Em)) / (h * h);
        const Value yy = (f(A * Fp) - 2.0 * f0 + f(A * Fm)) / (h * h);
        const Value xy =
            (f(A * Ep * Fp) - f(A * Ep * Fm) - f(A * Em * Fp) + f(A * Em * Fm)) / (4.0 * h * h);
        Value term = (s - t / 2.0) * xx + (t / 2.0) * yy - theta * xy;
        if (first) {
            acc = term;
            first = false;
        } else {
            acc = acc + term;
        }
    }
    return acc;
}

}  // namespace

Mat fd_generator(const MatrixFn& f, const Mat& A, const GroupSpec& spec, double s, cplx tau,
                 double h) {
    return fd_generator_impl<Mat>(f, A, spec, s, tau, h);
}

cplx fd_generator_scalar(const std::function<cplx(const Mat&)>& f, const Mat& A,
                         const GroupSpec& spec, double s, cplx tau, double h) {
    return fd_generator_impl<cplx>(f, A, spec, s, tau, h);
}

QuatMatrix fd_laplacian_quat(const QuatFn& f, const QuatMatrix& A, int N, double h) {
    const QuatMatrix f0 = f(A);
    QuatMatrix acc(f0.size());
    for (const QuatMatrix& X : quaternionic_sp_basis(N)) {
        const QuatMatrix E = quat_expm(X.scaled(h));
        const QuatMatrix Einv = quat_expm(X.scaled(-h));
        acc = acc + (f(A * E) - f0.scaled(2.0) + f(A * Einv)).scaled(1.0 / (h * h));
    }
    return acc;
}

}  // namespace sbtrace
