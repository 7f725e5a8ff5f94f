#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "sbtrace/scalar.hpp"

namespace sbtrace {

/// Dense matrix exponential by scaling-and-squaring with diagonal Pade
/// approximants (orders 3/5/7/9/13 chosen from the 1-norm). Works for
/// arbitrary complex matrices, including the nonnormal operator matrices
/// produced by the filtered-subspace assembler.
Eigen::MatrixXcd expm(const Eigen::MatrixXcd& A);

/// exp(A) * v without forming exp(A): scales A so each factor has modest norm
/// and applies a truncated Taylor series per factor. Intended for the large
/// sparse word-space generators.
Eigen::VectorXcd expm_multiply(const Eigen::SparseMatrix<cplx>& A, Eigen::VectorXcd v);

}  // namespace sbtrace
