#include "sbtrace/operator_engine.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <tuple>

namespace sbtrace {

namespace {

// Integer-weighted term list produced by one operator acting on one monomial.
using TermList = std::vector<std::pair<Monomial, long long>>;

void emit(TermList& out, Monomial m, long long w) {
    if (w != 0) out.emplace_back(std::move(m), w);
}

// Closed-form per-monomial rules. All base operators have integer
// coefficients; family combinations add the rational prefactors.
TermList rule_terms(OpTag tag, const Monomial& m) {
    TermList out;
    const int a = m.u_exp;
    switch (tag) {
        case OpTag::N0: {
            long long w = 0;
            for (const auto& [k, e] : m.v_exps) w += static_cast<long long>(std::abs(k)) * e;
            emit(out, m, w);
            break;
        }
        case OpTag::N1:
            emit(out, m, std::abs(a));
            break;
        case OpTag::Nfull: {
            long long w = std::abs(a);
            for (const auto& [k, e] : m.v_exps) w += static_cast<long long>(std::abs(k)) * e;
            emit(out, m, w);
            break;
        }
        case OpTag::Y1p:
            if (a >= 2) {
                for (int k = 1; k <= a - 1; ++k) {
                    Monomial r = m;
                    r.u_exp = a - k;
                    r.bump_v(k, 1);
                    emit(out, std::move(r), a - k);
                }
            }
            break;
        case OpTag::Y1m:
            if (a <= -2) {
                for (int k = a + 1; k <= -1; ++k) {
                    Monomial r = m;
                    r.u_exp = a - k;
                    r.bump_v(k, 1);
                    emit(out, std::move(r), a - k);
                }
            }
            break;
        case OpTag::Y2p:
            for (const auto& [k, e] : m.v_exps) {
                if (k < 2) continue;
                Monomial base = m;
                base.bump_v(k, -1);
                for (int j = 1; j <= k - 1; ++j) {
                    Monomial r = base;
                    r.bump_v(j, 1);
                    r.bump_v(k - j, 1);
                    emit(out, std::move(r), static_cast<long long>(e) * j);
                }
            }
            break;
        case OpTag::Y2m:
            for (const auto& [k, e] : m.v_exps) {
                if (k > -2) continue;
                Monomial base = m;
                base.bump_v(k, -1);
                for (int j = k + 1; j <= -1; ++j) {
                    Monomial r = base;
                    r.bump_v(j, 1);
                    r.bump_v(k - j, 1);
                    emit(out, std::move(r), static_cast<long long>(e) * j);
                }
            }
            break;
        case OpTag::Z1p:
            for (const auto& [k, e] : m.v_exps) {
                if (k < 2) continue;
                Monomial base = m;
                base.bump_v(k, -1);
                for (int j = 1; j <= k - 1; ++j) {
                    Monomial r = base;
                    r.bump_v(k - 2 * j, 1);  // k == 2j gives v_0 = 1
                    emit(out, std::move(r), static_cast<long long>(e) * (k - j));
                }
            }
            break;
        case OpTag::Z1m:
            for (const auto& [k, e] : m.v_exps) {
                if (k > -2) continue;
                Monomial base = m;
                base.bump_v(k, -1);
                for (int j = k + 1; j <= -1; ++j) {
                    Monomial r = base;
                    r.bump_v(k - 2 * j, 1);
                    emit(out, std::move(r), static_cast<long long>(e) * (k - j));
                }
            }
            break;
        case OpTag::Z2p:
            if (a >= 2) {
                for (int k = 1; k <= a - 1; ++k) {
                    Monomial r = m;
                    r.u_exp = a - 2 * k;
                    emit(out, std::move(r), a - k);
                }
            }
            break;
        case OpTag::Z2m:
            if (a <= -2) {
                for (int k = a + 1; k <= -1; ++k) {
                    Monomial r = m;
                    r.u_exp = a - 2 * k;
                    emit(out, std::move(r), a - k);
                }
            }
            break;
        case OpTag::K1p:
            if (a != 0) {
                for (const auto& [k, e] : m.v_exps) {
                    Monomial r = m;
                    r.bump_v(k, -1);
                    r.u_exp = a - k;
                    emit(out, std::move(r), static_cast<long long>(k) * e * a);
                }
            }
            break;
        case OpTag::K1m:
            if (a != 0) {
                for (const auto& [k, e] : m.v_exps) {
                    Monomial r = m;
                    r.bump_v(k, -1);
                    r.u_exp = a + k;
                    emit(out, std::move(r), static_cast<long long>(k) * e * a);
                }
            }
            break;
        case OpTag::K2p:
        case OpTag::K2m: {
            const int sgn = tag == OpTag::K2p ? -1 : +1;  // v_{k-j} vs v_{k+j}
            for (const auto& [j, ej] : m.v_exps) {
                for (const auto& [k, ek] : m.v_exps) {
                    long long w;
                    if (j == k) {
                        w = static_cast<long long>(ej) * (ej - 1);
                        if (w == 0) continue;
                    } else {
                        w = static_cast<long long>(ej) * ek;
                    }
                    Monomial r = m;
                    r.bump_v(j, -1);
                    r.bump_v(k, -1);
                    r.bump_v(tag == OpTag::K2p ? k - j : k + j, 1);
                    emit(out, std::move(r), w * j * k);
                }
            }
            (void)sgn;
            break;
        }
        case OpTag::J: {
            long long wind = a;
            for (const auto& [k, e] : m.v_exps) wind += static_cast<long long>(k) * e;
            emit(out, m, wind * wind);
            break;
        }
        case OpTag::Rplus:
            if (a >= 0) emit(out, m, 1);
            break;
        case OpTag::Rminus:
            if (a <= -1) emit(out, m, 1);
            break;
        default:
            throw DomainError("rule_terms: composite tag");
    }
    return out;
}

template <class C>
void accumulate(TracePolynomialT<C>& acc, OpTag tag, const TracePolynomialT<C>& P, const C& weight) {
    if (ScalarTraits<C>::is_zero(weight)) return;
    for (const auto& [m, c] : P.terms()) {
        for (auto& [rm, w] : rule_terms(tag, m)) {
            acc.add_term(rm, c * weight * ScalarTraits<C>::from_int(w));
        }
    }
}

template <class C>
C from_ratio(long long num, long long den);
template <>
cplx from_ratio<cplx>(long long num, long long den) {
    return cplx(static_cast<double>(num) / static_cast<double>(den), 0.0);
}
template <>
RationalComplex from_ratio<RationalComplex>(long long num, long long den) {
    return RationalComplex(Rational(num, den));
}

}  // namespace

template <class C>
TracePolynomialT<C> apply_op(const OperatorSpec& spec, const TracePolynomialT<C>& P) {
    using Poly = TracePolynomialT<C>;
    const C one = ScalarTraits<C>::from_int(1);
    const C minus_one = ScalarTraits<C>::from_int(-1);
    const C two = ScalarTraits<C>::from_int(2);
    const C minus_two = ScalarTraits<C>::from_int(-2);
    Poly acc;
    switch (spec.tag) {
        case OpTag::Y1:
            accumulate(acc, OpTag::Y1p, P, one);
            accumulate(acc, OpTag::Y1m, P, minus_one);
            return acc;
        case OpTag::Y2:
            accumulate(acc, OpTag::Y2p, P, one);
            accumulate(acc, OpTag::Y2m, P, minus_one);
            return acc;
        case OpTag::Z1:
            accumulate(acc, OpTag::Z1p, P, one);
            accumulate(acc, OpTag::Z1m, P, minus_one);
            return acc;
        case OpTag::Z2:
            accumulate(acc, OpTag::Z2p, P, one);
            accumulate(acc, OpTag::Z2m, P, minus_one);
            return acc;
        case OpTag::K1:
            accumulate(acc, OpTag::K1p, P, one);
            accumulate(acc, OpTag::K1m, P, minus_one);
            return acc;
        case OpTag::K2:
            accumulate(acc, OpTag::K2p, P, one);
            accumulate(acc, OpTag::K2m, P, minus_one);
            return acc;
        case OpTag::L0:
            accumulate(acc, OpTag::Nfull, P, minus_one);
            accumulate(acc, OpTag::Y1p, P, minus_two);
            accumulate(acc, OpTag::Y1m, P, two);
            accumulate(acc, OpTag::Y2p, P, minus_two);
            accumulate(acc, OpTag::Y2m, P, two);
            return acc;
        case OpTag::L1:
            switch (spec.family) {
                case Family::SO:
                    accumulate(acc, OpTag::Nfull, P, one);
                    accumulate(acc, OpTag::Z1p, P, two);
                    accumulate(acc, OpTag::Z1m, P, minus_two);
                    accumulate(acc, OpTag::Z2p, P, two);
                    accumulate(acc, OpTag::Z2m, P, minus_two);
                    return acc;
                case Family::SU:
                case Family::U:
                    return acc;  // identically zero
                case Family::Sp: {
                    const C h = from_ratio<C>(-1, 2);
                    Poly so = apply_op(op_L1(Family::SO), P);
                    return so.scaled(h);
                }
            }
            return acc;
        case OpTag::L2:
            switch (spec.family) {
                case Family::SO:
                    accumulate(acc, OpTag::K1p, P, two);
                    accumulate(acc, OpTag::K1m, P, minus_two);
                    accumulate(acc, OpTag::K2p, P, one);
                    accumulate(acc, OpTag::K2m, P, minus_one);
                    return acc;
                case Family::SU:
                    accumulate(acc, OpTag::K1m, P, minus_two);
                    accumulate(acc, OpTag::K2m, P, minus_one);
                    accumulate(acc, OpTag::J, P, one);
                    return acc;
                case Family::U:
                    accumulate(acc, OpTag::K1m, P, minus_two);
                    accumulate(acc, OpTag::K2m, P, minus_one);
                    return acc;
                case Family::Sp: {
                    Poly so = apply_op(op_L2(Family::SO), P);
                    return so.scaled(from_ratio<C>(1, 4));
                }
            }
            return acc;
        case OpTag::DN: {
            if (spec.N < 1) throw ParameterError("DN: N must be positive");
            acc = apply_op(op(OpTag::L0), P);
            Poly l1 = apply_op(op_L1(spec.family), P);
            Poly l2 = apply_op(op_L2(spec.family), P);
            acc += l1.scaled(from_ratio<C>(1, spec.N));
            acc += l2.scaled(from_ratio<C>(1, static_cast<long long>(spec.N) * spec.N));
            return acc;
        }
        default:
            accumulate(acc, spec.tag, P, one);
            return acc;
    }
}

template TracePolynomial apply_op(const OperatorSpec&, const TracePolynomial&);
template TracePolynomialQ apply_op(const OperatorSpec&, const TracePolynomialQ&);

// ---------------------------------------------------------------------------
// Literal route: primitive operators composed exactly as in the definitions.
// ---------------------------------------------------------------------------

namespace {

template <class C>
TracePolynomialT<C> deriv_u(const TracePolynomialT<C>& P) {
    TracePolynomialT<C> r;
    for (const auto& [m, c] : P.terms()) {
        if (m.u_exp == 0) continue;
        Monomial d = m;
        d.u_exp -= 1;
        r.add_term(d, c * ScalarTraits<C>::from_int(m.u_exp));
    }
    return r;
}

template <class C>
TracePolynomialT<C> deriv_v(const TracePolynomialT<C>& P, int k) {
    TracePolynomialT<C> r;
    for (const auto& [m, c] : P.terms()) {
        const int e = m.v_exponent(k);
        if (e == 0) continue;
        Monomial d = m;
        d.bump_v(k, -1);
        r.add_term(d, c * ScalarTraits<C>::from_int(e));
    }
    return r;
}

template <class C>
TracePolynomialT<C> mult_u(const TracePolynomialT<C>& P, int k) {
    TracePolynomialT<C> r;
    for (const auto& [m, c] : P.terms()) {
        Monomial d = m;
        d.u_exp += k;
        r.add_term(d, c);
    }
    return r;
}

template <class C>
TracePolynomialT<C> mult_v(const TracePolynomialT<C>& P, int k) {
    if (k == 0) return P;  // v_0 is the constant 1
    TracePolynomialT<C> r;
    for (const auto& [m, c] : P.terms()) {
        Monomial d = m;
        d.bump_v(k, 1);
        r.add_term(d, c);
    }
    return r;
}

template <class C>
TracePolynomialT<C> proj(const TracePolynomialT<C>& P, bool plus) {
    TracePolynomialT<C> r;
    for (const auto& [m, c] : P.terms()) {
        if (plus ? m.u_exp >= 0 : m.u_exp <= -1) r.add_term(m, c);
    }
    return r;
}

}  // namespace

template <class C>
TracePolynomialT<C> apply_literal(const OperatorSpec& spec, const TracePolynomialT<C>& P) {
    using Poly = TracePolynomialT<C>;
    const int K = P.trace_degree() + 1;
    auto I = [](long long n) { return ScalarTraits<C>::from_int(n); };
    Poly r;
    switch (spec.tag) {
        case OpTag::N0:
            for (int k = -K; k <= K; ++k) {
                if (k == 0) continue;
                r += mult_v(deriv_v(P, k), k).scaled(I(std::abs(k)));
            }
            return r;
        case OpTag::N1:
            return mult_u(deriv_u(proj(P, true)), 1) - mult_u(deriv_u(proj(P, false)), 1);
        case OpTag::Nfull:
            return apply_literal({OpTag::N0}, P) + apply_literal({OpTag::N1}, P);
        case OpTag::Y1p:
            for (int k = 1; k <= K; ++k)
                r += mult_v(mult_u(proj(deriv_u(mult_u(proj(P, true), -k)), true), 1), k);
            return r;
        case OpTag::Y1m:
            for (int k = -K; k <= -1; ++k)
                r += mult_v(mult_u(proj(deriv_u(mult_u(proj(P, false), -k)), false), 1), k);
            return r;
        case OpTag::Y1:
            return apply_literal({OpTag::Y1p}, P) - apply_literal({OpTag::Y1m}, P);
        case OpTag::Y2p:
            for (int k = 2; k <= K; ++k) {
                const Poly dk = deriv_v(P, k);
                for (int j = 1; j <= k - 1; ++j) r += mult_v(mult_v(dk, j), k - j).scaled(I(j));
            }
            return r;
        case OpTag::Y2m:
            for (int k = -K; k <= -2; ++k) {
                const Poly dk = deriv_v(P, k);
                for (int j = k + 1; j <= -1; ++j) r += mult_v(mult_v(dk, j), k - j).scaled(I(j));
            }
            return r;
        case OpTag::Y2:
            return apply_literal({OpTag::Y2p}, P) - apply_literal({OpTag::Y2m}, P);
        case OpTag::Z1p:
            for (int k = 2; k <= K; ++k) {
                const Poly dk = deriv_v(P, k);
                for (int j = 1; j <= k - 1; ++j) r += mult_v(dk, k - 2 * j).scaled(I(k - j));
            }
            return r;
        case OpTag::Z1m:
            for (int k = -K; k <= -2; ++k) {
                const Poly dk = deriv_v(P, k);
                for (int j = k + 1; j <= -1; ++j) r += mult_v(dk, k - 2 * j).scaled(I(k - j));
            }
            return r;
        case OpTag::Z1:
            return apply_literal({OpTag::Z1p}, P) - apply_literal({OpTag::Z1m}, P);
        case OpTag::Z2p:
            for (int k = 1; k <= K; ++k)
                r += mult_u(proj(deriv_u(mult_u(proj(P, true), -k)), true), -k + 1);
            return r;
        case OpTag::Z2m:
            for (int k = -K; k <= -1; ++k)
                r += mult_u(proj(deriv_u(mult_u(proj(P, false), -k)), false), -k + 1);
            return r;
        case OpTag::Z2:
            return apply_literal({OpTag::Z2p}, P) - apply_literal({OpTag::Z2m}, P);
        case OpTag::K1p:
            for (int k = -K; k <= K; ++k) {
                if (k == 0) continue;
                r += mult_u(deriv_v(deriv_u(P), k), -k + 1).scaled(I(k));
            }
            return r;
        case OpTag::K1m:
            for (int k = -K; k <= K; ++k) {
                if (k == 0) continue;
                r += mult_u(deriv_v(deriv_u(P), k), k + 1).scaled(I(k));
            }
            return r;
        case OpTag::K1:
            return apply_literal({OpTag::K1p}, P) - apply_literal({OpTag::K1m}, P);
        case OpTag::K2p:
            for (int j = -K; j <= K; ++j) {
                if (j == 0) continue;
                const Poly dj = deriv_v(P, j);
                if (dj.is_zero()) continue;
                for (int k = -K; k <= K; ++k) {
                    if (k == 0) continue;
                    r += mult_v(deriv_v(dj, k), k - j).scaled(I(static_cast<long long>(j) * k));
                }
            }
            return r;
        case OpTag::K2m:
            for (int j = -K; j <= K; ++j) {
                if (j == 0) continue;
                const Poly dj = deriv_v(P, j);
                if (dj.is_zero()) continue;
                for (int k = -K; k <= K; ++k) {
                    if (k == 0) continue;
                    r += mult_v(deriv_v(dj, k), k + j).scaled(I(static_cast<long long>(j) * k));
                }
            }
            return r;
        case OpTag::K2:
            return apply_literal({OpTag::K2p}, P) - apply_literal({OpTag::K2m}, P);
        case OpTag::J: {
            const Poly du = deriv_u(P);
            for (int k = -K; k <= K; ++k) {
                if (k == 0) continue;
                r += mult_u(mult_v(deriv_v(du, k), k), 1).scaled(I(2 * k));
                r += mult_v(deriv_v(P, k), k).scaled(I(static_cast<long long>(k) * k));
                for (int j = -K; j <= K; ++j) {
                    if (j == 0) continue;
                    r += mult_v(mult_v(deriv_v(deriv_v(P, k), j), j), k)
                             .scaled(I(static_cast<long long>(j) * k));
                }
            }
            r += mult_u(deriv_u(du), 2);
            r += mult_u(du, 1);
            return r;
        }
        case OpTag::Rplus:
            return proj(P, true);
        case OpTag::Rminus:
            return proj(P, false);
        case OpTag::L0:
            return -apply_literal({OpTag::Nfull}, P) - apply_literal({OpTag::Y1}, P).scaled(I(2)) -
                   apply_literal({OpTag::Y2}, P).scaled(I(2));
        case OpTag::L1:
            switch (spec.family) {
                case Family::SO:
                    return apply_literal({OpTag::Nfull}, P) +
                           apply_literal({OpTag::Z1}, P).scaled(I(2)) +
                           apply_literal({OpTag::Z2}, P).scaled(I(2));
                case Family::SU:
                case Family::U:
                    return r;
                case Family::Sp:
                    return apply_literal(op_L1(Family::SO), P).scaled(from_ratio<C>(-1, 2));
            }
            return r;
        case OpTag::L2:
            switch (spec.family) {
                case Family::SO:
                    return apply_literal({OpTag::K1}, P).scaled(I(2)) + apply_literal({OpTag::K2}, P);
                case Family::SU:
                    return -apply_literal({OpTag::K1m}, P).scaled(I(2)) -
                           apply_literal({OpTag::K2m}, P) + apply_literal({OpTag::J}, P);
                case Family::U:
                    return -apply_literal({OpTag::K1m}, P).scaled(I(2)) -
                           apply_literal({OpTag::K2m}, P);
                case Family::Sp:
                    return apply_literal(op_L2(Family::SO), P).scaled(from_ratio<C>(1, 4));
            }
            return r;
        case OpTag::DN: {
            Poly acc = apply_literal({OpTag::L0}, P);
            acc += apply_literal(op_L1(spec.family), P).scaled(from_ratio<C>(1, spec.N));
            acc += apply_literal(op_L2(spec.family), P)
                       .scaled(from_ratio<C>(1, static_cast<long long>(spec.N) * spec.N));
            return acc;
        }
    }
    return r;
}

template TracePolynomial apply_literal(const OperatorSpec&, const TracePolynomial&);
template TracePolynomialQ apply_literal(const OperatorSpec&, const TracePolynomialQ&);

// ---------------------------------------------------------------------------
// Assembly and exponentials
// ---------------------------------------------------------------------------

namespace {

struct CacheKey {
    OpTag tag;
    Family family;
    int N;
    int m;
    auto operator<=>(const CacheKey&) const = default;
};

std::map<CacheKey, std::unique_ptr<OperatorMatrix>> g_cache;
std::shared_mutex g_cache_mutex;

bool tag_uses_family(OpTag t) { return t == OpTag::L1 || t == OpTag::L2 || t == OpTag::DN; }

}  // namespace

const OperatorMatrix& assemble(const OperatorSpec& op, int m, int cap) {
    if (m > cap) throw SizeError("assemble: degree exceeds cap");
    const CacheKey key{op.tag, tag_uses_family(op.tag) ? op.family : Family::SO,
                       op.tag == OpTag::DN ? op.N : 0, m};
    {
        std::shared_lock lock(g_cache_mutex);
        auto it = g_cache.find(key);
        if (it != g_cache.end()) return *it->second;
    }
    auto om = std::make_unique<OperatorMatrix>();
    om->degree = m;
    om->basis = basis_monomials(m, cap);
    const int dim = static_cast<int>(om->basis.size());
    std::map<Monomial, int> index;
    for (int i = 0; i < dim; ++i) index[om->basis[i]] = i;
    om->entries = Eigen::MatrixXcd::Zero(dim, dim);
    for (int j = 0; j < dim; ++j) {
        const TracePolynomial img = apply_op(op, TracePolynomial::monomial(om->basis[j]));
        for (const auto& [mono, c] : img.terms()) {
            auto it = index.find(mono);
            if (it == index.end())
                throw DomainError("assemble: operator image leaves the filtered subspace");
            om->entries(it->second, j) = c;
        }
    }
    std::unique_lock lock(g_cache_mutex);
    auto [it, inserted] = g_cache.emplace(key, std::move(om));
    return *it->second;
}

TracePolynomial exp_apply(const OperatorSpec& op, cplx scale, const TracePolynomial& P, int cap) {
    if (P.is_zero()) return P;
    const int m = P.trace_degree();
    if (m > cap) throw SizeError("exp_apply: polynomial degree exceeds cap");
    const OperatorMatrix& om = assemble(op, m, cap);
    const int dim = static_cast<int>(om.basis.size());
    std::map<Monomial, int> index;
    for (int i = 0; i < dim; ++i) index[om.basis[i]] = i;
    Eigen::VectorXcd vec = Eigen::VectorXcd::Zero(dim);
    for (const auto& [mono, c] : P.terms()) vec(index.at(mono)) = c;
    const Eigen::MatrixXcd E = expm(scale * om.entries);
    if (!E.allFinite()) throw OverflowError("exp_apply: non-finite matrix exponential");
    const Eigen::VectorXcd out = E * vec;
    TracePolynomial R;
    for (int i = 0; i < dim; ++i) {
        if (std::abs(out(i)) != 0.0) R.add_term(om.basis[i], out(i));
    }
    return R;
}

TracePolynomial boosted_sb(const TransformParams& params, const GroupSpec& spec,
                           const TracePolynomial& P, Direction dir, int cap) {
    const cplx scale = (dir == Direction::Forward ? 0.5 : -0.5) * params.tau;
    return exp_apply(op_DN(spec.family, spec.N), scale, P, cap);
}

}  // namespace sbtrace
