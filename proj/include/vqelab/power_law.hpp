// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

namespace vqelab {

struct FitPoint {
    double x = 0.0;       // e.g. noise strength v
    double y = 0.0;       // e.g. mean escape time
    double y_stderr = 0.0; // standard error of y; 0 means "no error available"
};

struct PowerLawFit {
    double exponent = 0.0;        // slope of log y vs log x
    double log_prefactor = 0.0;   // intercept
    double exponent_stderr = 0.0;
    double r_squared = 0.0;
    std::size_t n_points = 0;

    double prefactor() const { return std::exp(log_prefactor); }
};

/// Weighted least squares of log y on log x with weights (se/y)^-2, i.e. the
/// inverse variance of log y. If any point lacks an error bar the fit falls
/// back to equal weights.
inline PowerLawFit fit_power_law(std::span<const FitPoint> points) {
    if (points.size() < 3) {
        throw std::invalid_argument("fit_power_law: need at least 3 points");
    }
    bool weighted = true;
    for (const auto& p : points) {
        if (!(p.x > 0.0) || !(p.y > 0.0)) {
            throw std::invalid_argument("fit_power_law: x and y must be positive");
        }
        if (!(p.y_stderr > 0.0)) weighted = false;
    }

    double sw = 0, swx = 0, swy = 0, swxx = 0, swxy = 0;
    for (const auto& p : points) {
        const double x = std::log(p.x);
        const double y = std::log(p.y);
        const double rel = p.y_stderr / p.y;
        const double w = weighted ? 1.0 / (rel * rel) : 1.0;
        sw += w;
        swx += w * x;
        swy += w * y;
        swxx += w * x * x;
        swxy += w * x * y;
    }
    const double delta = sw * swxx - swx * swx;
    if (!(delta > 0.0)) {
        throw std::invalid_argument("fit_power_law: degenerate abscissae");
    }

    PowerLawFit fit;
    fit.n_points = points.size();
    fit.exponent = (sw * swxy - swx * swy) / delta;
    fit.log_prefactor = (swxx * swy - swx * swxy) / delta;
    fit.exponent_stderr = std::sqrt(sw / delta);

    // r^2 from weighted residuals about the weighted mean
    const double ybar = swy / sw;
    double ss_res = 0, ss_tot = 0;
    for (const auto& p : points) {
        const double x = std::log(p.x);
        const double y = std::log(p.y);
        const double rel = p.y_stderr / p.y;
        const double w = weighted ? 1.0 / (rel * rel) : 1.0;
        const double fitted = fit.log_prefactor + fit.exponent * x;
        ss_res += w * (y - fitted) * (y - fitted);
        ss_tot += w * (y - ybar) * (y - ybar);
    }
    fit.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;

    // With error bars the slope variance scales with the weights as given;
    // without them, estimate the residual variance from the fit itself.
    if (!weighted && points.size() > 2) {
        const double dof = static_cast<double>(points.size() - 2);
        fit.exponent_stderr = std::sqrt((ss_res / dof) * sw / delta);
    }
    return fit;
}

} // namespace vqelab
