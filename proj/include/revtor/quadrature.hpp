#pragma once

#include <algorithm>
#include <cmath>
#include <queue>
#include <span>
#include <vector>

#include "revtor/errors.hpp"

namespace revtor {

struct QuadratureFailure : NumericalError {
    using NumericalError::NumericalError;
};

struct QuadratureOptions {
    double relTol = 1e-10;
    double absTol = 0.0;
    int maxIntervals = 60000;
};

namespace detail {

// Gauss 7 / Kronrod 15 nodes and weights on [-1, 1].
inline constexpr double gkNodes[8] = {
    0.0,
    0.2077849550078984676006894037732449,
    0.4058451513773971669066064120769615,
    0.5860872354676911302941448382587296,
    0.7415311855993944398638647732807884,
    0.8648644233597690727897127886409262,
    0.9491079123427585245261896840478513,
    0.9914553711208126392068546975263285};
inline constexpr double kronrodW[8] = {
    0.2094821410847278280129991748917143,
    0.2044329400752988924141619992346491,
    0.1903505780647854099132564024210137,
    0.1690047266392679028265834265985503,
    0.1406532597155259187451895905102379,
    0.1047900103222501838398763225415180,
    0.0630920926299785532907006631892043,
    0.0229353220105292249637320080589695};
inline constexpr double gaussW[4] = {
    0.4179591836734693877551020408163265,   // node 0
    0.3818300505051189449503697754889751,   // node +-0.405845...
    0.2797053914892766679014677714237796,   // node +-0.741531...
    0.1294849661688696932706114326790820};  // node +-0.949107...

template <class F>
void gk15(F&& f, double a, double b, double& value, double& error) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    double fc = f(c);
    double kron = kronrodW[0] * fc;
    double gauss = gaussW[0] * fc;
    for (int i = 1; i < 8; ++i) {
        const double dx = h * gkNodes[i];
        const double fsum = f(c - dx) + f(c + dx);
        kron += kronrodW[i] * fsum;
        if (i == 2) gauss += gaussW[1] * fsum;
        if (i == 4) gauss += gaussW[2] * fsum;
        if (i == 6) gauss += gaussW[3] * fsum;
    }
    value = kron * h;
    error = std::abs((kron - gauss) * h);
}

struct Interval {
    double a, b, value, error;
    bool operator<(const Interval& o) const { return error < o.error; }
};

} // namespace detail

/// Adaptive Gauss-Kronrod integration of f over [a, b].
/// Subdivides the interval with the largest local error estimate until
/// sum(err) <= max(absTol, relTol*|sum(value)|).
template <class F>
double integrate(F&& f, double a, double b, const QuadratureOptions& opt = {}) {
    if (a == b) return 0.0;
    std::priority_queue<detail::Interval> heap;
    detail::Interval whole{a, b, 0, 0};
    detail::gk15(f, a, b, whole.value, whole.error);
    heap.push(whole);
    double total = whole.value;
    double totalErr = whole.error;
    int used = 1;
    while (totalErr > std::max(opt.absTol, opt.relTol * std::abs(total))) {
        if (used >= opt.maxIntervals)
            throw QuadratureFailure("quadrature: error target not met after " +
                                    std::to_string(used) + " intervals");
        const detail::Interval top = heap.top();
        heap.pop();
        const double m = 0.5 * (top.a + top.b);
        if (m <= top.a || m >= top.b)
            throw QuadratureFailure("quadrature: interval underflow");
        detail::Interval left{top.a, m, 0, 0}, right{m, top.b, 0, 0};
        detail::gk15(f, left.a, left.b, left.value, left.error);
        detail::gk15(f, right.a, right.b, right.value, right.error);
        total += left.value + right.value - top.value;
        totalErr += left.error + right.error - top.error;
        heap.push(left);
        heap.push(right);
        ++used;
    }
    return total;
}

/// Integration over [pts[0], pts.back()] split at interior breakpoints,
/// e.g. at known kinks or near-singular loci of the integrand.
template <class F>
double integrateSplit(F&& f, std::span<const double> pts,
                      const QuadratureOptions& opt = {}) {
    double total = 0.0;
    QuadratureOptions local = opt;
    // Per-piece relative control would let large pieces mask small ones;
    // use a shared absolute floor derived from a first pass.
    double rough = 0.0;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        double v, e;
        detail::gk15(f, pts[i], pts[i + 1], v, e);
        rough += std::abs(v);
    }
    local.absTol = std::max(opt.absTol, opt.relTol * rough * 0.1);
    for (std::size_t i = 0; i + 1 < pts.size(); ++i)
        total += integrate(f, pts[i], pts[i + 1], local);
    return total;
}

} // namespace revtor
