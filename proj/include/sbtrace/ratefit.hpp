#pragma once

#include <cmath>
#include <vector>

#include "sbtrace/errors.hpp"

namespace sbtrace {

/// Least-squares slope of log(value) against log(N). Refuses to fit fewer
/// than 3 points.
inline double fit_loglog_slope(const std::vector<double>& Ns, const std::vector<double>& vals) {
    if (Ns.size() != vals.size()) throw ParameterError("fit_loglog_slope: size mismatch");
    if (Ns.size() < 3) throw ParameterError("fit_loglog_slope: need at least 3 points");
    const size_t n = Ns.size();
    double sx = 0, sy = 0;
    std::vector<double> xs(n), ys(n);
    for (size_t i = 0; i < n; ++i) {
        if (!(Ns[i] > 0)) throw ParameterError("fit_loglog_slope: N must be positive");
        xs[i] = std::log(Ns[i]);
        ys[i] = std::log(std::max(vals[i], 1e-300));
        sx += xs[i];
        sy += ys[i];
    }
    const double mx = sx / n, my = sy / n;
    double num = 0, den = 0;
    for (size_t i = 0; i < n; ++i) {
        num += (xs[i] - mx) * (ys[i] - my);
        den += (xs[i] - mx) * (xs[i] - mx);
    }
    return num / den;
}

}  // namespace sbtrace
