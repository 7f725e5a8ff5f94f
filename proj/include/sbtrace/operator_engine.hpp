#pragma once

#include <vector>

#include <Eigen/Dense>

#include "sbtrace/expm.hpp"
#include "sbtrace/trace_poly.hpp"

namespace sbtrace {

/// Operators on C[u,u^-1;v]. The split tags (Y1p/Y1m, ...) are the
/// positive/negative halves; N = N0 + N1, Y1 = Y1p - Y1m and so on.
/// L0 = -N - 2*Y1 - 2*Y2 is shared by all four families; L1/L2 depend on the
/// family and DN = L0 + L1/N + L2/N^2.
enum class OpTag {
    N0, N1, Nfull,
    Y1p, Y1m, Y1,
    Y2p, Y2m, Y2,
    Z1p, Z1m, Z1,
    Z2p, Z2m, Z2,
    K1p, K1m, K1,
    K2p, K2m, K2,
    J,
    Rplus, Rminus,
    L0, L1, L2, DN
};

struct OperatorSpec {
    OpTag tag;
    Family family = Family::SO;  // used by L1, L2, DN
    int N = 1;                   // used by DN
};

inline OperatorSpec op(OpTag t) { return {t}; }
inline OperatorSpec op_L1(Family f) { return {OpTag::L1, f}; }
inline OperatorSpec op_L2(Family f) { return {OpTag::L2, f}; }
inline OperatorSpec op_DN(Family f, int N) { return {OpTag::DN, f, N}; }

/// Closed-form action, term by term. Linear; preserves trace degree.
template <class C>
TracePolynomialT<C> apply_op(const OperatorSpec& spec, const TracePolynomialT<C>& P);

/// Same operators built literally as compositions of the primitive
/// projection / multiplication / differentiation operators, with the infinite
/// k-sums truncated at the trace degree of the argument. Deliberately an
/// independent code path from apply(); agreement between the two is a test.
template <class C>
TracePolynomialT<C> apply_literal(const OperatorSpec& op, const TracePolynomialT<C>& P);

/// Dense matrix of an operator on the filtered subspace C_m[u,u^-1;v], over
/// the canonical monomial basis. Column j holds the coordinates of the image
/// of basis monomial j.
struct OperatorMatrix {
    int degree = 0;
    std::vector<Monomial> basis;
    Eigen::MatrixXcd entries;
};

/// Cached assembler. Safe for concurrent readers; inserts under a writer lock.
const OperatorMatrix& assemble(const OperatorSpec& op, int m, int cap = kDegreeCap);

/// e^{scale * op} restricted to C_{deg P}, via the dense matrix exponential.
TracePolynomial exp_apply(const OperatorSpec& op, cplx scale, const TracePolynomial& P,
                          int cap = kDegreeCap);

enum class Direction { Forward, Inverse };

/// Heat-operator form of the transform on trace polynomials:
/// forward is e^{(tau/2) DN}, inverse is e^{-(tau/2) DN}.
TracePolynomial boosted_sb(const TransformParams& params, const GroupSpec& spec,
                           const TracePolynomial& P, Direction dir, int cap = kDegreeCap);

}  // namespace sbtrace
