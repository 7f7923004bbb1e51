#pragma once

#include <array>
#include <functional>
#include <vector>

#include "revtor/exec.hpp"
#include "revtor/profile.hpp"

namespace revtor {

struct BoxTooSmallError : NumericalError {
    using NumericalError::NumericalError;
};

/// Diagonal metric on the (phi, s) plane whose coefficients depend on s only:
/// g = diag(a(s)^2, b(s)^2), area element a(s) b(s) dphi ds.
struct MeridianMetric {
    std::function<double(double)> a; // sqrt(g_phiphi)
    std::function<double(double)> b; // sqrt(g_ss)
};

/// Pullback metric of the revolution surface: a = 2 pi x(s), b = r(s).
MeridianMetric surfaceMetric(const ProfileCurve& p);
MeridianMetric constantMetric(double a, double b);

/// First-order upwind solution of the Eikonal equation
///   u_phi^2 / a(s)^2 + u_s^2 / b(s)^2 = 1,  u(source) = 0,
/// i.e. the geodesic distance field from the source on the universal cover.
struct DistanceField {
    double h = 0;
    double phi0 = 0, s0 = 0; // node (i, j) sits at (phi0 + i h, s0 + j h)
    int nPhi = 0, nS = 0;
    std::array<double, 2> source{};
    double rMax = 0;
    std::vector<double> u;      // row-major, index j * nPhi + i
    std::vector<double> weight; // per-row area weight a(s_j) b(s_j)
    int sweepRounds = 0;

    double value(int i, int j) const { return u[static_cast<std::size_t>(j) * nPhi + i]; }
    /// Bilinear interpolation at an interior point.
    double distanceAt(double phi, double s) const;
};

/// Iterated fast sweeping (four alternating orderings) until the largest
/// update falls below `residual`. The box is sized so the metric ball of
/// radius rMax is strictly interior; BoxTooSmallError if the front still
/// reaches the boundary below rMax. Serial and parallel paths produce
/// bit-identical fields.
DistanceField solveDistanceField(const MeridianMetric& metric, std::array<double, 2> source,
                                 double rMax, double h, Exec exec = Exec::parallel,
                                 double residual = 1e-9, int maxSweepRounds = 512);

} // namespace revtor
