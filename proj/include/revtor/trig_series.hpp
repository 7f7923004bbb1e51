#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

namespace revtor {

inline constexpr double pi = 3.1415926535897932384626433832795;
inline constexpr double twoPi = 6.283185307179586476925286766559;

/// Finite trigonometric series with period 1:
///   a0 + sum_k cosCoef[k-1]*cos(2*pi*k*s) + sinCoef[k-1]*sin(2*pi*k*s).
/// Closed under differentiation, so derivatives are exact.
struct TrigSeries {
    double a0 = 0.0;
    std::vector<double> cosCoef;
    std::vector<double> sinCoef;

    std::size_t harmonics() const {
        return std::max(cosCoef.size(), sinCoef.size());
    }

    double eval(double s) const {
        double v = a0;
        const std::size_t n = harmonics();
        for (std::size_t k = 1; k <= n; ++k) {
            const double w = twoPi * static_cast<double>(k) * s;
            if (k <= cosCoef.size() && cosCoef[k - 1] != 0.0)
                v += cosCoef[k - 1] * std::cos(w);
            if (k <= sinCoef.size() && sinCoef[k - 1] != 0.0)
                v += sinCoef[k - 1] * std::sin(w);
        }
        return v;
    }

    TrigSeries derivative() const {
        const std::size_t n = harmonics();
        TrigSeries d;
        d.a0 = 0.0;
        d.cosCoef.assign(n, 0.0);
        d.sinCoef.assign(n, 0.0);
        for (std::size_t k = 1; k <= n; ++k) {
            const double w = twoPi * static_cast<double>(k);
            if (k <= sinCoef.size()) d.cosCoef[k - 1] = w * sinCoef[k - 1];
            if (k <= cosCoef.size()) d.sinCoef[k - 1] = -w * cosCoef[k - 1];
        }
        return d;
    }

    bool isZero() const {
        if (a0 != 0.0) return false;
        for (double c : cosCoef)
            if (c != 0.0) return false;
        for (double c : sinCoef)
            if (c != 0.0) return false;
        return true;
    }
};

} // namespace revtor
