#pragma once

#include <array>
#include <vector>

#include "revtor/ode.hpp"
#include "revtor/profile.hpp"

namespace revtor {

/// Point of T*R^2 in coordinates (phi, s, pPhi, pS); phi, s live on the
/// universal cover. pPhi is the conserved angular momentum.
struct CotangentState {
    double phi = 0, s = 0, pPhi = 0, pS = 0;
};

/// Point of the energy level H^-1({e}) in its circle-bundle coordinates.
struct LevelState {
    double phiBar = 0, sBar = 0, theta = 0;
    double e = 0.5;
};

/// H = (1/2) [ pPhi^2 / (4 pi^2 x^2) + pS^2 / r^2 ].
double hamiltonian(const ProfileCurve& p, const CotangentState& z);

/// (phiBar, sBar, theta) -> (phiBar, sBar, 2 pi sqrt(2e) x cos(theta),
/// sqrt(2e) r sin(theta)); exactly on the level by construction.
CotangentState embedLevel(const ProfileCurve& p, const LevelState& ls);

/// Momentum reversal (m, p) -> (m, -p); conjugates the flow to its reverse.
CotangentState applyZeta(const CotangentState& z);
LevelState applyZeta(const LevelState& ls);

/// Hamiltonian vector field of H on T*R^2.
StateVec<4> cotangentField(const ProfileCurve& p, const CotangentState& z);

/// Restriction of the Hamiltonian field to the level, in (phiBar, sBar,
/// theta); derived from the 4D field through the circle-bundle chart.
StateVec<3> levelField(const ProfileCurve& p, const LevelState& ls);

/// Jacobian of levelField w.r.t. (phiBar, sBar, theta), row-major.
std::array<double, 9> levelFieldJacobian(const ProfileCurve& p, const LevelState& ls);

struct Trajectory {
    std::vector<double> times;
    std::vector<CotangentState> states;
    double energy0 = 0, clairaut0 = 0;
    double maxEnergyDrift = 0, maxClairautDrift = 0;
};

struct LevelTrajectory {
    std::vector<double> times;
    std::vector<std::array<double, 3>> states; // (phiBar, sBar, theta) on the cover
    double e = 0;
    double maxClairautDrift = 0;
};

/// Adaptive embedded Runge-Kutta (Dormand-Prince 5(4)) with dense output at
/// sampleStep. Conservation diagnostics are recorded, not enforced.
Trajectory integrate(const ProfileCurve& p, const CotangentState& z0, double tMax,
                     double tol, double sampleStep);

/// Same integrator on the 3D level field.
LevelTrajectory integrate(const ProfileCurve& p, const LevelState& ls0, double tMax,
                          double tol, double sampleStep);

} // namespace revtor
