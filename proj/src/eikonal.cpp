#include "revtor/eikonal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace revtor {

MeridianMetric surfaceMetric(const ProfileCurve& p) {
    MeridianMetric m;
    m.a = [&p](double s) { return twoPi * p.x(s); };
    m.b = [&p](double s) { return p.r(s); };
    return m;
}

MeridianMetric constantMetric(double a, double b) {
    MeridianMetric m;
    m.a = [a](double) { return a; };
    m.b = [b](double) { return b; };
    return m;
}

double DistanceField::distanceAt(double phi, double s) const {
    const double fi = (phi - phi0) / h;
    const double fj = (s - s0) / h;
    const int i = static_cast<int>(std::floor(fi));
    const int j = static_cast<int>(std::floor(fj));
    if (i < 0 || j < 0 || i + 1 >= nPhi || j + 1 >= nS)
        throw ValidationError("DistanceField::distanceAt: point outside the box");
    const double wx = fi - i, wy = fj - j;
    return (1 - wx) * (1 - wy) * value(i, j) + wx * (1 - wy) * value(i + 1, j) +
           (1 - wx) * wy * value(i, j + 1) + wx * wy * value(i + 1, j + 1);
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Grid {
    int nPhi, nS;
    double h;
    std::vector<double> aRow;  // a at row j
    std::vector<double> bMid;  // b at the edge between rows j-1 and j
    std::vector<double>* u;

    double& at(int i, int j) const { return (*u)[static_cast<std::size_t>(j) * nPhi + i]; }

    // Godunov upwind update; returns the decrease (0 if none).
    double update(int i, int j) const {
        double& cell = at(i, j);
        const double h1 = h * aRow[j];
        double u1 = kInf;
        if (i > 0) u1 = at(i - 1, j);
        if (i + 1 < nPhi) u1 = std::min(u1, at(i + 1, j));
        double u2 = kInf, h2 = h;
        if (j > 0 && at(i, j - 1) < u2) {
            u2 = at(i, j - 1);
            h2 = h * bMid[j];
        }
        if (j + 1 < nS && at(i, j + 1) < u2) {
            u2 = at(i, j + 1);
            h2 = h * bMid[j + 1];
        }
        double cand = std::min(u1 + h1, u2 + h2);
        if (u1 < kInf && u2 < kInf) {
            const double A = 1.0 / (h1 * h1) + 1.0 / (h2 * h2);
            const double B = u1 / (h1 * h1) + u2 / (h2 * h2);
            const double C = u1 * u1 / (h1 * h1) + u2 * u2 / (h2 * h2) - 1.0;
            const double disc = B * B - A * C;
            if (disc >= 0) {
                const double both = (B + std::sqrt(disc)) / A;
                if (both >= std::max(u1, u2)) cand = std::min(cand, both);
            }
        }
        if (cand < cell) {
            const double change = cell - cand;
            cell = cand;
            return std::isfinite(change) ? change : kInf;
        }
        return 0.0;
    }
};

// One directional sweep, row-major in the sweep direction. The parallel path
// tiles the grid and walks anti-diagonals of the tile lattice: a cell still
// sees exactly the already-updated upwind neighbors and the previous-sweep
// downwind ones, so tiled and plain orders produce identical values.
double sweep(const Grid& g, int di, int dj, Exec exec) {
    double maxChange = 0.0;
    auto cellRange = [](int blocks, int b, int n, int B) {
        const int lo = b * B;
        const int hi = std::min(n, lo + B);
        (void)blocks;
        return std::pair<int, int>(lo, hi);
    };
    auto sweepRows = [&](int i0, int i1, int j0, int j1) {
        // [i0,i1) x [j0,j1), iterated in the sweep direction
        double mc = 0.0;
        const int jBegin = dj > 0 ? j0 : j1 - 1;
        const int jEnd = dj > 0 ? j1 : j0 - 1;
        const int iBegin = di > 0 ? i0 : i1 - 1;
        const int iEnd = di > 0 ? i1 : i0 - 1;
        for (int j = jBegin; j != jEnd; j += dj)
            for (int i = iBegin; i != iEnd; i += di)
                mc = std::max(mc, g.update(i, j));
        return mc;
    };
    if (exec == Exec::serial)
        return sweepRows(0, g.nPhi, 0, g.nS);

    constexpr int B = 128;
    const int nbx = (g.nPhi + B - 1) / B;
    const int nby = (g.nS + B - 1) / B;
    for (int D = 0; D <= nbx + nby - 2; ++D) {
        const int lo = std::max(0, D - (nby - 1));
        const int hi = std::min(nbx - 1, D);
#pragma omp parallel for schedule(dynamic) reduction(max : maxChange)
        for (int t = lo; t <= hi; ++t) {
            // transformed tile coordinates follow the sweep orientation
            const int bi = di > 0 ? t : nbx - 1 - t;
            const int bj = dj > 0 ? D - t : nby - 1 - (D - t);
            const auto [i0, i1] = cellRange(nbx, bi, g.nPhi, B);
            const auto [j0, j1] = cellRange(nby, bj, g.nS, B);
            maxChange = std::max(maxChange, sweepRows(i0, i1, j0, j1));
        }
    }
    return maxChange;
}

} // namespace

DistanceField solveDistanceField(const MeridianMetric& metric, std::array<double, 2> source,
                                 double rMax, double h, Exec exec, double residual,
                                 int maxSweepRounds) {
    if (h <= 0 || rMax <= 0)
        throw ValidationError("solveDistanceField: need positive h and rMax");

    double minA = kInf, minB = kInf;
    for (int k = 0; k < 4096; ++k) {
        const double s = source[1] + static_cast<double>(k) / 4096.0;
        minA = std::min(minA, metric.a(s));
        minB = std::min(minB, metric.b(s));
    }
    if (!(minA > 0) || !(minB > 0))
        throw ValidationError("solveDistanceField: metric not positive");

    DistanceField f;
    f.h = h;
    f.source = source;
    f.rMax = rMax;
    const double halfPhi = rMax / minA * 1.02 + 4 * h;
    const double halfS = rMax / minB * 1.02 + 4 * h;
    const int iSrc = static_cast<int>(std::ceil(halfPhi / h));
    const int jSrc = static_cast<int>(std::ceil(halfS / h));
    f.nPhi = 2 * iSrc + 1;
    f.nS = 2 * jSrc + 1;
    f.phi0 = source[0] - iSrc * h;
    f.s0 = source[1] - jSrc * h;
    f.u.assign(static_cast<std::size_t>(f.nPhi) * f.nS, kInf);

    Grid g;
    g.nPhi = f.nPhi;
    g.nS = f.nS;
    g.h = h;
    g.aRow.resize(f.nS);
    g.bMid.resize(f.nS + 1);
    f.weight.resize(f.nS);
    for (int j = 0; j < f.nS; ++j) {
        const double s = f.s0 + j * h;
        g.aRow[j] = metric.a(s);
        f.weight[j] = metric.a(s) * metric.b(s);
        g.bMid[j] = metric.b(s - 0.5 * h);
    }
    g.bMid[f.nS] = metric.b(f.s0 + (f.nS - 0.5) * h);
    g.u = &f.u;

    // seed a small disc with the source-frozen metric; removes the worst of
    // the point-source singularity error
    const double aSrc = metric.a(source[1]), bSrc = metric.b(source[1]);
    const int seedRad = 6;
    for (int dj = -seedRad; dj <= seedRad; ++dj)
        for (int di = -seedRad; di <= seedRad; ++di) {
            if (di * di + dj * dj > seedRad * seedRad) continue;
            const int i = iSrc + di, j = jSrc + dj;
            const double dphi = di * h, ds = dj * h;
            g.at(i, j) = std::sqrt(aSrc * aSrc * dphi * dphi + bSrc * bSrc * ds * ds);
        }

    int round = 0;
    for (; round < maxSweepRounds; ++round) {
        double maxChange = 0.0;
        maxChange = std::max(maxChange, sweep(g, +1, +1, exec));
        maxChange = std::max(maxChange, sweep(g, -1, +1, exec));
        maxChange = std::max(maxChange, sweep(g, +1, -1, exec));
        maxChange = std::max(maxChange, sweep(g, -1, -1, exec));
        if (maxChange < residual) break;
    }
    if (round == maxSweepRounds)
        throw NumericalError("solveDistanceField: sweeps did not converge");
    f.sweepRounds = round + 1;

    double boundaryMin = kInf;
    for (int i = 0; i < f.nPhi; ++i) {
        boundaryMin = std::min(boundaryMin, f.value(i, 0));
        boundaryMin = std::min(boundaryMin, f.value(i, f.nS - 1));
    }
    for (int j = 0; j < f.nS; ++j) {
        boundaryMin = std::min(boundaryMin, f.value(0, j));
        boundaryMin = std::min(boundaryMin, f.value(f.nPhi - 1, j));
    }
    if (boundaryMin < rMax)
        throw BoxTooSmallError("solveDistanceField: front reached the boundary at " +
                               std::to_string(boundaryMin) + " < rMax");
    return f;
}

} // namespace revtor
