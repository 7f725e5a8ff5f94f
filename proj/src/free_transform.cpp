#include "sbtrace/free_transform.hpp"

#include <cmath>

namespace sbtrace {

namespace {

// Exact binomial in int64; n <= 64 stays in range.
long long binom_exact(int n, int r) {
    if (r < 0 || r > n) return 0;
    r = std::min(r, n - r);
    long long acc = 1;
    for (int i = 1; i <= r; ++i) acc = acc * (n - r + i) / i;
    return acc;
}

double binom_approx(int n, int r) {
    if (r < 0 || r > n) return 0.0;
    return std::exp(std::lgamma(n + 1.0) - std::lgamma(r + 1.0) - std::lgamma(n - r + 1.0));
}

}  // namespace

cplx nu(int k, cplx tau) {
    const int n = std::abs(k);
    if (n == 0) return 1.0;
    cplx sum = 0.0;
    cplx pow_term = 1.0;  // (-tau)^j / j!
    double kpow = 1.0 / n;  // n^{j-1}
    for (int j = 0; j <= n - 1; ++j) {
        const double b =
            n <= 64 ? static_cast<double>(binom_exact(n, j + 1)) : binom_approx(n, j + 1);
        sum += pow_term * kpow * b;
        pow_term *= -tau / static_cast<double>(j + 1);
        kpow *= n;
    }
    return std::exp(-0.5 * static_cast<double>(n) * tau) * sum;
}

TracePolynomial pi_tau(cplx tau, const TracePolynomial& P) {
    TracePolynomial out;
    for (const auto& [m, c] : P.terms()) {
        cplx coeff = c;
        for (const auto& [k, e] : m.v_exps) {
            const cplx nk = nu(k, tau);
            for (int i = 0; i < e; ++i) coeff *= nk;
        }
        out.add_term(Monomial::u_power(m.u_exp), coeff);
    }
    return out;
}

TracePolynomial free_sb(const TransformParams& params, const TracePolynomial& f, Direction dir,
                        int cap) {
    if (!f.is_laurent()) throw DomainError("free_sb: input must be a Laurent polynomial");
    if (dir == Direction::Forward) {
        const TracePolynomial heat = exp_apply(op(OpTag::L0), 0.5 * params.tau, f, cap);
        return pi_tau(params.s - params.tau, heat);
    }
    const TracePolynomial heat = exp_apply(op(OpTag::L0), -0.5 * params.tau, f, cap);
    return pi_tau(params.s, heat);
}

}  // namespace sbtrace
