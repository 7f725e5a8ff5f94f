#pragma once

#include "sbtrace/operator_engine.hpp"
#include "sbtrace/trace_poly.hpp"

namespace sbtrace {

/// Limiting moment functions nu_k. nu_0 = 1, nu_k = nu_{-k}, entire in tau.
cplx nu(int k, cplx tau);

/// Trace evaluation map: substitutes v_k <- nu_k(tau), leaves u untouched.
/// The result is a Laurent polynomial.
TracePolynomial pi_tau(cplx tau, const TracePolynomial& P);

/// Large-N limit of the transform on Laurent polynomials:
/// forward is pi_{s-tau} after e^{(tau/2) L0}, inverse is pi_s after
/// e^{-(tau/2) L0}.
TracePolynomial free_sb(const TransformParams& params, const TracePolynomial& f, Direction dir,
                        int cap = kDegreeCap);

}  // namespace sbtrace
