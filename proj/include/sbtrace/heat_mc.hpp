#pragma once

#include <optional>
#include <string>

#include <Eigen/Dense>

#include "sbtrace/group_spec.hpp"
#include "sbtrace/trace_poly.hpp"

namespace sbtrace {

/// Monte-Carlo configuration. steps is the time discretization of one path;
/// paths are reproducible per (seed, sample index) so results do not depend on
/// any worker layout.
struct MCConfig {
    GroupSpec spec;
    double s = 1.0;
    cplx tau = 0.0;      // used by the complexified sampler
    long steps = 200;
    long samples = 1000;
    uint64_t seed = 1;

    static long default_steps(double s) {
        return std::max<long>(200, static_cast<long>(std::ceil(100.0 * s)));
    }
};

/// One draw from the heat kernel on the compact group: a product of
/// exponentials exp(sqrt(s/steps) * sum_j xi_j X_j) with fresh Gaussians per
/// step. Samples stay on the group to machine precision; the weak error is
/// O(s^2/steps) from the time discretization alone.
Eigen::MatrixXcd sample_rho(const MCConfig& cfg, long sample_index);

/// One draw from the complexified heat kernel: per step the algebra element is
/// sum_j (alpha_j + i beta_j) X_j with (alpha, beta) bivariate normal with
/// covariance [[(s - t/2)/m, -theta/(2m)], [-theta/(2m), t/(2m)]], which
/// accumulates the complexified generator since iX commutes with X.
Eigen::MatrixXcd sample_mu(const MCConfig& cfg, long sample_index);

struct MomentEstimate {
    cplx mean;
    double std_error = 0.0;
    long samples = 0;
    std::optional<cplx> exact_finite_N;
    std::optional<cplx> free_limit;
};

/// MC mean of tr(A^k); exact finite-N value from the operator engine (rho) or
/// the word machinery (mu, SO/Sp only), free limit from nu_k.
MomentEstimate estimate_moment(const MCConfig& cfg, int k, bool complexified = false);

/// MC mean of |P_N(A)|^2 in the normalized Hilbert-Schmidt norm; the exact
/// counterpart comes from the word machinery where available.
MomentEstimate estimate_l2(const MCConfig& cfg, const TracePolynomial& P,
                           bool complexified = false);

std::string mc_csv_header();
std::string mc_csv_row(const MCConfig& cfg, const std::string& label, const MomentEstimate& est,
                       bool complexified);

/// FNV-1a of the canonical JSON form, for labeling polynomials in CSV output.
uint64_t poly_hash(const TracePolynomial& P);

}  // namespace sbtrace
