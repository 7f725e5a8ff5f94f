#pragma once

#include <array>
#include <map>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "sbtrace/group_spec.hpp"
#include "sbtrace/trace_poly.hpp"

namespace sbtrace {

inline constexpr int kWordDegreeCap = 8;

/// Letters of a word: A, A^{-1}, A^*, (A^*)^{-1}.
enum class Letter : uint8_t { P1, M1, PS, MS };

/// A word over {+1, -1, +*, -*}. Words indexing the variables v_eps of the
/// word polynomial space; cyclically equivalent words are kept distinct (the
/// evaluations agree, the formal variables do not).
struct Word {
    std::vector<Letter> ls;

    /// eps(j,k): |j| copies of sign(j)*1 followed by |k| copies of sign(k)*;
    /// eps(0,0) is the empty word.
    static Word eps(int j, int k);

    size_t size() const { return ls.size(); }
    bool empty() const { return ls.empty(); }

    /// The word t(w) with A^{t(w)} = (A^w)^{-T-ish} twist: reversal with
    /// 1 <-> -1 and * <-> -* swapped. Satisfies A^{t(w)} = phi(A^w) for the
    /// family's twist phi (transpose for SO, Omega-conjugated transpose for Sp).
    Word transposed() const;

    Word concat(const Word& o) const;
    /// Letters [g..) followed by [..g): the word read from gap g around.
    Word rotated(int gap) const;

    auto operator<=>(const Word&) const = default;
};

/// Monomial in the commuting variables {v_w}: sorted (word, exponent) pairs.
struct WordMonomial {
    std::vector<std::pair<Word, int>> factors;

    int degree() const;
    bool is_one() const { return factors.empty(); }
    void bump(const Word& w, int delta);
    WordMonomial operator*(const WordMonomial& o) const;

    auto operator<=>(const WordMonomial&) const = default;
};

class WordPolynomial {
  public:
    using TermMap = std::map<WordMonomial, cplx>;

    WordPolynomial() = default;
    explicit WordPolynomial(cplx c) { add_term(WordMonomial{}, c); }
    static WordPolynomial monomial(const WordMonomial& m, cplx c = 1.0) {
        WordPolynomial p;
        p.add_term(m, c);
        return p;
    }

    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    int degree() const;

    void add_term(const WordMonomial& m, cplx c) {
        if (c == 0.0) return;
        auto [it, inserted] = terms_.emplace(m, c);
        if (!inserted) {
            it->second += c;
            if (it->second == 0.0) terms_.erase(it);
        }
    }

    WordPolynomial& operator+=(const WordPolynomial& o) {
        for (const auto& [m, c] : o.terms_) add_term(m, c);
        return *this;
    }
    friend WordPolynomial operator*(const WordPolynomial& a, const WordPolynomial& b) {
        WordPolynomial r;
        for (const auto& [ma, ca] : a.terms_)
            for (const auto& [mb, cb] : b.terms_) r.add_term(ma * mb, ca * cb);
        return r;
    }
    WordPolynomial scaled(cplx c) const {
        WordPolynomial r;
        if (c == 0.0) return r;
        for (const auto& [m, k] : terms_) r.add_term(m, k * c);
        return r;
    }
    bool operator==(const WordPolynomial& o) const { return terms_ == o.terms_; }

  private:
    TermMap terms_;
};

/// Linear embedding v_k -> v_{eps(k,0)} of C[v] into the word space.
WordPolynomial iota(const TracePolynomial& Q);
/// Conjugate-linear embedding v_k -> v_{eps(0,k)}.
WordPolynomial iota_star(const TracePolynomial& Q);

/// Sesquilinear form with [B(P,Q)]_N(A) = tr(P_N(A) Q_N(A)^*); built on
/// monomials as B(u^a q, u^b r) = v_{eps(a,b)} iota(q) iota*(r).
WordPolynomial bform(const TracePolynomial& P, const TracePolynomial& Q);

/// tr(A^{eps_1} ... A^{eps_m}) with the family's normalized trace.
cplx eval_word(const Word& w, const Eigen::MatrixXcd& A, const GroupSpec& spec);
cplx eval_word_poly(const WordPolynomial& P, const Eigen::MatrixXcd& A, const GroupSpec& spec);

/// All word monomials of trace degree <= m, deterministic graded order.
std::vector<WordMonomial> word_basis(int m, int cap = kWordDegreeCap);

/// The exact symbolic image of a word monomial under (1/2) A_{s,tau},
/// collected by powers of 1/N: result[0] + result[1]/N + result[2]/N^2.
/// family must be SO or Sp.
std::array<WordPolynomial, 3> apply_generator_symbolic(Family family, double s, cplx tau,
                                                       const WordMonomial& W);

/// Matrices of the three 1/N-orders of the generator over the word basis.
struct GeneratorDecomposition {
    Family family = Family::SO;
    double s = 0;
    cplx tau;
    int degree = 0;
    std::vector<WordMonomial> basis;
    std::map<WordMonomial, int> index;
    Eigen::SparseMatrix<cplx> G0, G1, G2;

    Eigen::SparseMatrix<cplx> at(int N) const;
};

/// Cached symbolic construction. Optional progress callback: return false to
/// cancel (throws).
using ProgressFn = std::function<bool(int done, int total)>;
const GeneratorDecomposition& build_generator(Family family, double s, cplx tau, int m,
                                              int cap = kWordDegreeCap,
                                              const ProgressFn& progress = {});

/// Binary cache of one generator decomposition (versioned).
void save_generator(const std::string& path, const GeneratorDecomposition& gd);
GeneratorDecomposition load_generator(const std::string& path);

enum class Measure { Rho, Mu };

/// Exact squared L^2 norm of the matrix-valued trace polynomial P_N against
/// the heat kernel measure: (e^{generator at N} B(P,P)) evaluated with every
/// word variable set to 1. Measure Rho uses complex time 0 (the boundary case
/// of the generator, where the flow stays on the compact group); Mu uses
/// params.tau. Only SO and Sp carry the word machinery.
double l2_norm_sq(const GroupSpec& spec, const TransformParams& params, const TracePolynomial& P,
                  Measure measure, int cap = kWordDegreeCap);

/// (e^{generator at N} iota(v_k)) at all-ones: the exact finite-N moment of
/// tr(A^k) under the complexified heat kernel.
cplx complexified_moment(const GroupSpec& spec, double s, cplx tau, int k,
                         int cap = kWordDegreeCap);

/// (e^{generator at N} W-polynomial) at all-ones; building block shared by the
/// norm and moment routines.
cplx generator_semigroup_at_ones(const GroupSpec& spec, double s, cplx tau,
                                 const WordPolynomial& P, int cap = kWordDegreeCap);

}  // namespace sbtrace
