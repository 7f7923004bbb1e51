#pragma once

#include <array>
#include <complex>
#include <optional>
#include <vector>

#include "revtor/dynamics.hpp"
#include "revtor/profile.hpp"

namespace revtor {

/// A critical circle of the angular-momentum integral on an energy level:
/// s fixed at a critical point of x, theta fixed at 0 or pi.
struct CriticalCircle {
    enum class Kind { elliptic, hyperbolic };
    double sCrit = 0;
    double xValue = 0;
    double thetaBranch = 0; // 0 or pi
    double e = 0.5;
    double period = 0; // return time of phiBar through one full turn
    std::array<std::complex<double>, 3> floquet{};
    Kind kind = Kind::elliptic;
};

using Mat3 = std::array<double, 9>; // row-major

/// All 2n critical circles at energy e, classified by the sign of x'' and
/// confirmed by their Floquet spectrum.
std::vector<CriticalCircle> criticalCircles(const ProfileCurve& p, double e,
                                            double integratorTol = 1e-12);

/// Fundamental matrix of the variational flow of the level field over one
/// period of the circle, from the identity.
Mat3 monodromyMatrix(const ProfileCurve& p, const CriticalCircle& c, double tol);

/// Eigenvalues of the monodromy matrix, sorted by modulus; computed from the
/// characteristic cubic with the known root 1 deflated.
std::array<std::complex<double>, 3> monodromy(const ProfileCurve& p, const CriticalCircle& c,
                                              double tol);

/// Classification read off a Floquet spectrum; nullopt when the transverse
/// pair is not resolved away from the degenerate configuration.
std::optional<CriticalCircle::Kind>
floquetKind(const std::array<std::complex<double>, 3>& eigs, double margin = 1e-4);

double det3(const Mat3& m);

enum class SeparatrixBranch { zeroPlus, zeroMinus, piPlus, piMinus };

/// One branch of the invariant graph attached to the circle over the global
/// minimum of x: theta(s) = +-acos(x1/x(s)) around theta = 0 or pi.
/// The angular momentum is constant (= +-2 pi sqrt(2e) x1) along it.
struct SeparatrixGraph {
    SeparatrixBranch branch;
    double e = 0.5;
    double clairautValue = 0;
    double sCrit1 = 0; // excluded parameter (the limiting circle)
    double thetaLimit = 0;
    std::vector<double> sSamples;
    std::vector<double> thetaSamples;
};

SeparatrixGraph separatrix(const ProfileCurve& p, double e, SeparatrixBranch branch,
                           int nSamples = 512);

} // namespace revtor
