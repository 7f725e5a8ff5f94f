#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "sbtrace/errors.hpp"
#include "sbtrace/group_spec.hpp"
#include "sbtrace/scalar.hpp"

namespace sbtrace {

/// Default trace-degree cap for basis enumeration and operator exponentials.
inline constexpr int kDegreeCap = 10;

/// A monomial u^a * prod_k v_k^{e_k} in the commutative ring C[u,u^-1;v].
/// v_exps is kept sorted in the canonical key order, never stores the key 0,
/// and never stores a zero exponent.
struct Monomial {
    int u_exp = 0;
    std::vector<std::pair<int, int>> v_exps;  // (k, e_k), canonical order, e_k > 0

    /// Canonical order of v-variable indices: 1 < -1 < 2 < -2 < ...
    static bool v_key_less(int a, int b) {
        if (std::abs(a) != std::abs(b)) return std::abs(a) < std::abs(b);
        return a > b;  // positive before negative
    }

    int trace_degree() const {
        int d = std::abs(u_exp);
        for (const auto& [k, e] : v_exps) d += std::abs(k) * e;
        return d;
    }

    int v_exponent(int k) const {
        for (const auto& [kk, e] : v_exps)
            if (kk == k) return e;
        return 0;
    }

    /// Adds delta to the exponent of v_k, keeping canonical form. k == 0 is a
    /// no-op (v_0 is the constant 1).
    void bump_v(int k, int delta);

    Monomial operator*(const Monomial& o) const;

    bool operator==(const Monomial& o) const = default;
    /// Graded order: trace degree, then |u| descending, then sign, then the
    /// v-exponent vector. Fixes the basis layout and map iteration order.
    bool operator<(const Monomial& o) const;

    static Monomial one() { return {}; }
    static Monomial u_power(int a) {
        Monomial m;
        m.u_exp = a;
        return m;
    }
    static Monomial v_var(int k) {
        Monomial m;
        m.bump_v(k, 1);
        return m;
    }
    /// Canonicalizing factory: accepts (k, e) pairs in any order.
    static Monomial make(int a, std::initializer_list<std::pair<int, int>> vs) {
        Monomial m;
        m.u_exp = a;
        for (const auto& [k, e] : vs) m.bump_v(k, e);
        return m;
    }
};

/// Sparse element of C[u,u^-1;v] with coefficients in C (complex double by
/// default, exact rational-complex in the exact mode). Zero coefficients are
/// never stored, so equality is structural.
template <class C>
class TracePolynomialT {
  public:
    using Coeff = C;
    using TermMap = std::map<Monomial, C>;

    TracePolynomialT() = default;
    explicit TracePolynomialT(const C& c) { add_term(Monomial::one(), c); }

    static TracePolynomialT zero() { return {}; }
    static TracePolynomialT one() { return TracePolynomialT(ScalarTraits<C>::from_int(1)); }
    static TracePolynomialT u(int a = 1) { return monomial(Monomial::u_power(a)); }
    static TracePolynomialT v(int k) { return monomial(Monomial::v_var(k)); }
    static TracePolynomialT monomial(const Monomial& m, const C& c = ScalarTraits<C>::from_int(1)) {
        TracePolynomialT p;
        p.add_term(m, c);
        return p;
    }

    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    /// Max trace degree over terms; 0 for the zero polynomial by convention.
    int trace_degree() const {
        int d = 0;
        for (const auto& [m, c] : terms_) d = std::max(d, m.trace_degree());
        return d;
    }

    bool is_laurent() const {
        for (const auto& [m, c] : terms_)
            if (!m.v_exps.empty()) return false;
        return true;
    }
    bool is_v_only() const {
        for (const auto& [m, c] : terms_)
            if (m.u_exp != 0) return false;
        return true;
    }

    C coeff(const Monomial& m) const {
        auto it = terms_.find(m);
        return it == terms_.end() ? C{} : it->second;
    }

    void add_term(const Monomial& m, const C& c) {
        if (ScalarTraits<C>::is_zero(c)) return;
        auto [it, inserted] = terms_.emplace(m, c);
        if (!inserted) {
            it->second += c;
            if (ScalarTraits<C>::is_zero(it->second)) terms_.erase(it);
        }
    }

    TracePolynomialT& operator+=(const TracePolynomialT& o) {
        for (const auto& [m, c] : o.terms_) add_term(m, c);
        return *this;
    }
    TracePolynomialT& operator-=(const TracePolynomialT& o) {
        for (const auto& [m, c] : o.terms_) add_term(m, -c);
        return *this;
    }
    friend TracePolynomialT operator+(TracePolynomialT a, const TracePolynomialT& b) { return a += b; }
    friend TracePolynomialT operator-(TracePolynomialT a, const TracePolynomialT& b) { return a -= b; }
    TracePolynomialT operator-() const {
        TracePolynomialT r;
        for (const auto& [m, c] : terms_) r.terms_.emplace(m, -c);
        return r;
    }

    friend TracePolynomialT operator*(const TracePolynomialT& a, const TracePolynomialT& b) {
        TracePolynomialT r;
        for (const auto& [ma, ca] : a.terms_)
            for (const auto& [mb, cb] : b.terms_) r.add_term(ma * mb, ca * cb);
        return r;
    }
    TracePolynomialT& operator*=(const TracePolynomialT& o) { return *this = *this * o; }

    TracePolynomialT scaled(const C& c) const {
        TracePolynomialT r;
        if (ScalarTraits<C>::is_zero(c)) return r;
        for (const auto& [m, k] : terms_) r.add_term(m, k * c);
        return r;
    }
    friend TracePolynomialT operator*(const C& c, const TracePolynomialT& p) { return p.scaled(c); }

    bool operator==(const TracePolynomialT& o) const { return terms_ == o.terms_; }

  private:
    TermMap terms_;
};

using TracePolynomial = TracePolynomialT<cplx>;
using TracePolynomialQ = TracePolynomialT<RationalComplex>;

TracePolynomial to_complex(const TracePolynomialQ& p);

/// Largest |coefficient| difference between two polynomials.
double coeff_distance(const TracePolynomial& a, const TracePolynomial& b);

/// Complex time pair (s, tau) with tau constrained to the disk D(s,s).
struct TransformParams {
    double s;
    cplx tau;

    TransformParams(double s_, cplx tau_) : s(s_), tau(tau_) {
        if (!(s > 0)) throw ParameterError("TransformParams: s must be positive");
        const double t = tau.real(), th = tau.imag();
        if ((t - s) * (t - s) + th * th >= s * s)
            throw ParameterError("TransformParams: tau must lie in the open disk D(s,s)");
    }
};

/// All monomials of trace degree <= m in canonical order; the first element is
/// the constant monomial. Throws SizeError past the cap.
std::vector<Monomial> basis_monomials(int m, int cap = kDegreeCap);

/// Evaluates P at u = A, v_k = tr(A^k) (normalized trace of the family).
/// A must be invertible and of the dimension mandated by spec.
Eigen::MatrixXcd eval_trace_poly(const TracePolynomial& P, const Eigen::MatrixXcd& A,
                                 const GroupSpec& spec);

/// Scalar substitution u = u_val, v_k = v_vals[k]. Missing v_k throws.
cplx eval_scalar(const TracePolynomial& P, cplx u_val, const std::map<int, cplx>& v_vals);

/// Scalar substitution with every v_k = 1 (evaluation "at the identity").
cplx eval_at_ones(const TracePolynomial& P, cplx u_val = 1.0);

// --- serialization ---

std::string to_json(const TracePolynomial& P);
TracePolynomial poly_from_json(const std::string& json_text);

/// Terse expression parser, e.g. "u^2 - 3*v1*v-2*u^-1 + 2i*v3".
TracePolynomial parse_poly(const std::string& expr);

/// Accepts either a JSON document (leading '{') or a terse expression.
TracePolynomial parse_poly_or_json(const std::string& text);

std::string to_string(const TracePolynomial& P);

}  // namespace sbtrace
