#pragma once

#include <cmath>
#include <span>

#include "revtor/errors.hpp"

namespace revtor {

struct DegenerateWindowError : ValidationError {
    using ValidationError::ValidationError;
};

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;       // coefficient of determination
    double residual = 0.0; // RMS residual
};

/// Ordinary least squares y ~ slope*x + intercept.
inline LineFit fitLine(std::span<const double> x, std::span<const double> y) {
    const std::size_t n = x.size();
    if (n < 2 || y.size() != n)
        throw DegenerateWindowError("fitLine: need at least two points");
    double sx = 0, sy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sx += x[i];
        sy += y[i];
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx == 0.0)
        throw DegenerateWindowError("fitLine: degenerate abscissae");
    LineFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    double ssRes = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = y[i] - (f.slope * x[i] + f.intercept);
        ssRes += r * r;
    }
    f.residual = std::sqrt(ssRes / n);
    f.r2 = syy > 0 ? 1.0 - ssRes / syy : 1.0;
    return f;
}

} // namespace revtor
