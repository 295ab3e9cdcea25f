#pragma once

#include <vector>

namespace obslab {

/// Least-squares line through (log r_i, log s_i). `halfwidth` is twice the
/// standard error of the slope, a crude confidence half-width.
struct LogLogFit {
    double slope{0.0};
    double intercept{0.0};
    double halfwidth{0.0};
    int points{0};
};

/// Requires at least 4 samples with positive abscissae and ordinates.
LogLogFit fit_loglog(const std::vector<double>& r, const std::vector<double>& s);

}  // namespace obslab
