#include "obslab/geom/fit.hpp"

#include <cmath>
#include <stdexcept>

namespace obslab {

LogLogFit fit_loglog(const std::vector<double>& r, const std::vector<double>& s) {
    if (r.size() != s.size())
        throw std::invalid_argument("fit_loglog: mismatched sample lists");
    const int n = static_cast<int>(r.size());
    if (n < 4) throw std::invalid_argument("fit_loglog: need at least 4 samples");

    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    std::vector<double> xs(r.size()), ys(r.size());
    for (size_t i = 0; i < r.size(); ++i) {
        if (!(r[i] > 0.0 && s[i] > 0.0))
            throw std::invalid_argument("fit_loglog: samples must be positive");
        xs[i] = std::log(r[i]);
        ys[i] = std::log(s[i]);
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    const double det = n * sxx - sx * sx;
    if (det <= 0.0) throw std::invalid_argument("fit_loglog: degenerate abscissae");

    LogLogFit fit;
    fit.points = n;
    fit.slope = (n * sxy - sx * sy) / det;
    fit.intercept = (sy - fit.slope * sx) / n;

    double ss = 0.0;
    for (size_t i = 0; i < r.size(); ++i) {
        const double e = ys[i] - (fit.intercept + fit.slope * xs[i]);
        ss += e * e;
    }
    if (n > 2) {
        const double var = ss / (n - 2) / (sxx - sx * sx / n);
        fit.halfwidth = 2.0 * std::sqrt(std::max(var, 0.0));
    }
    return fit;
}

}  // namespace obslab
