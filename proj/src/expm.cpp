#include "sbtrace/expm.hpp"

#include <cmath>

#include "sbtrace/errors.hpp"

namespace sbtrace {

namespace {

using Mat = Eigen::MatrixXcd;

double norm1(const Mat& A) {
    double best = 0;
    for (int j = 0; j < A.cols(); ++j) best = std::max(best, A.col(j).cwiseAbs().sum());
    return best;
}

Mat pade_eval(const Mat& A, const double* b, int pairs) {
    // U = A * (odd coefficients in A^2), V = even coefficients in A^2
    const int n = static_cast<int>(A.rows());
    const Mat I = Mat::Identity(n, n);
    const Mat A2 = A * A;
    Mat U = b[1] * I;
    Mat V = b[0] * I;
    Mat P = I;
    for (int k = 1; k <= pairs; ++k) {
        P = P * A2;
        U += b[2 * k + 1] * P;
        V += b[2 * k] * P;
    }
    U = A * U;
    return (V - U).partialPivLu().solve(V + U);
}

Mat pade13(const Mat& A) {
    static const double b[] = {64764752532480000., 32382376266240000., 7771770303897600.,
                               1187353796428800.,  129060195264000.,   10559470521600.,
                               670442572800.,      33522128640.,       1323241920.,
                               40840800.,          960960.,            16380.,
                               182.,               1.};
    const int n = static_cast<int>(A.rows());
    const Mat I = Mat::Identity(n, n);
    const Mat A2 = A * A;
    const Mat A4 = A2 * A2;
    const Mat A6 = A4 * A2;
    Mat U = A * (A6 * (b[13] * A6 + b[11] * A4 + b[9] * A2) + b[7] * A6 + b[5] * A4 + b[3] * A2 +
                 b[1] * I);
    Mat V = A6 * (b[12] * A6 + b[10] * A4 + b[8] * A2) + b[6] * A6 + b[4] * A4 + b[2] * A2 + b[0] * I;
    return (V - U).partialPivLu().solve(V + U);
}

}  // namespace

Eigen::MatrixXcd expm(const Eigen::MatrixXcd& A) {
    const int n = static_cast<int>(A.rows());
    if (n == 0) return A;
    if (n == 1) {
        Mat r(1, 1);
        r(0, 0) = std::exp(A(0, 0));
        return r;
    }

    static const double b3[] = {120., 60., 12., 1.};
    static const double b5[] = {30240., 15120., 3360., 420., 30., 1.};
    static const double b7[] = {17297280., 8648640., 1995840., 277200., 25200., 1512., 56., 1.};
    static const double b9[] = {17643225600., 8821612800., 2075673600., 302702400., 30270240.,
                                2162160.,     110880.,     3960.,       90.,        1.};

    const double nrm = norm1(A);
    if (nrm < 1.495585217958292e-2) return pade_eval(A, b3, 1);
    if (nrm < 2.539398330063230e-1) return pade_eval(A, b5, 2);
    if (nrm < 9.504178996162932e-1) return pade_eval(A, b7, 3);
    if (nrm < 2.097847961257068e0) return pade_eval(A, b9, 4);

    const double theta13 = 5.371920351148152e0;
    int s = 0;
    if (nrm > theta13) s = static_cast<int>(std::ceil(std::log2(nrm / theta13)));
    Mat R = pade13(A / std::pow(2.0, s));
    for (int i = 0; i < s; ++i) R = R * R;
    return R;
}

Eigen::VectorXcd expm_multiply(const Eigen::SparseMatrix<cplx>& A, Eigen::VectorXcd v) {
    double nrm = 0;
    for (int j = 0; j < A.outerSize(); ++j) {
        double col = 0;
        for (Eigen::SparseMatrix<cplx>::InnerIterator it(A, j); it; ++it) col += std::abs(it.value());
        nrm = std::max(nrm, col);
    }
    const int steps = std::max(1, static_cast<int>(std::ceil(nrm)));
    const double inv = 1.0 / steps;
    constexpr int kMaxTerms = 64;
    for (int step = 0; step < steps; ++step) {
        Eigen::VectorXcd term = v;
        Eigen::VectorXcd acc = v;
        for (int k = 1; k <= kMaxTerms; ++k) {
            term = (A * term) * (inv / k);
            acc += term;
            if (term.norm() <= 1e-18 * acc.norm()) break;
            if (k == kMaxTerms) throw OverflowError("expm_multiply: Taylor series did not converge");
        }
        v.swap(acc);
        if (!v.allFinite()) throw OverflowError("expm_multiply: non-finite values");
    }
    return v;
}

}  // namespace sbtrace
