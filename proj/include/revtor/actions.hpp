#pragma once

#include <utility>
#include <vector>

#include "revtor/profile.hpp"

namespace revtor {

struct DomainError : ValidationError {
    using ValidationError::ValidationError;
};
struct ConvexityViolation : NumericalError {
    using NumericalError::NumericalError;
};
struct BoundViolation : NumericalError {
    using NumericalError::NumericalError;
};

/// Smallest positive critical value of the angular momentum restricted to the
/// energy level: 2 pi sqrt(2e) min(x). The rotational band is (-this, +this).
double clairautCritical(const ProfileCurve& p, double e);

/// Meridian length, integral of r over one period.
double meridianLength(const ProfileCurve& p, double relTol = 1e-12);

/// Meridian return time tau and angular advance phi over one meridian period,
/// by adaptive quadrature in s:
///   tau = int_0^1 r / sqrt(2e - rho^2/(4 pi^2 x^2)) ds
///   phi = int_0^1 rho r / (4 pi^2 x^2 sqrt(2e - rho^2/(4 pi^2 x^2))) ds
/// Requires |rho| strictly inside the rotational band.
std::pair<double, double> tauPhi(const ProfileCurve& p, double e, double rho,
                                 double relTol = 1e-10);

/// d tau / d rho and d phi / d rho by quadrature of the differentiated
/// integrands.
double tauDeriv(const ProfileCurve& p, double e, double rho, double relTol = 1e-10);
double phiDeriv(const ProfileCurve& p, double e, double rho, double relTol = 1e-10);

/// Independent oracle for tauPhi: integrate the 4D flow from s = 0 with
/// upward meridian momentum until s first reaches 1 (event located by
/// bisection on dense output); returns (crossing time, phi advance).
std::pair<double, double> timeOfFlightOracle(const ProfileCurve& p, double e, double rho,
                                             double tol = 1e-12);

/// Second action I2(e, rho) = int_0^1 r sqrt(2e - rho^2/(4 pi^2 x^2)) ds;
/// extends continuously to |rho| = band edge (square-root zero at the
/// minimum of x, handled by a graded mesh).
double actionI2(const ProfileCurve& p, double e, double rho, double relTol = 1e-10);

struct ActionSample {
    double e, rho;
    double i1, i2;
    double tau, phiAdvance;
};

ActionSample sampleActions(const ProfileCurve& p, double e, double rho,
                           double relTol = 1e-10);

/// Increasing bijection u -> int_0^1 r sqrt(u - 1/(4 pi^2 x^2)) ds on
/// (1/(4 pi^2 min(x)^2), inf); satisfies I2(e, rho) = |rho| f(2e/rho^2).
double actionShape(const ProfileCurve& p, double u, double relTol = 1e-10);
double actionShapeDeriv(const ProfileCurve& p, double u, double relTol = 1e-10);
double actionShapeDeriv2(const ProfileCurve& p, double u, double relTol = 1e-10);
/// Inverse of actionShape by monotone root-finding.
double actionShapeInverse(const ProfileCurve& p, double v, double relTol = 1e-10);

struct ConvexityPoint {
    double e, rho;
    double gpp;      // g'' at I2/|I1|
    double hessDet;  // 2 g g'' - g'^2
    double i2Direct; // quadrature I2
    double i2Shape;  // |rho| f(2e/rho^2)
};

struct ConvexityReport {
    std::vector<ConvexityPoint> grid;
    double minGpp = 0, minDet = 0;
    double maxIdentityGap = 0; // max relative gap between the two I2 routes
    // second derivative of u -> f(e^u); positive values mean the log-composed
    // shape integral is not concave there (it is not, away from the domain
    // edge: the integrand carries a factor (u - 2/(4 pi^2 x^2)) which turns
    // positive, already for constant x)
    double maxFtildeSecond = 0;
    bool logShapeConcave = false;
    bool pass = false;
};

/// Positivity of the Hessian principal minors of the action Hamiltonian over
/// a grid; throws ConvexityViolation at the first offending grid point. The
/// log-composed concavity check is evaluated and reported, not asserted.
ConvexityReport verifyConvexity(const ProfileCurve& p, const std::vector<double>& eGrid,
                                const std::vector<double>& rhoFracGrid,
                                double relTol = 1e-10);

struct SuperlinearityReport {
    double k = 0;        // sqrt(2) max(2 pi min x, meridian length)
    double maxRatio = 0; // max over samples of max(|I1|,|I2|) / (k sqrt(e))
    bool pass = false;
};

/// max(|I1|, |I2|) <= k sqrt(e) over a grid of samples.
SuperlinearityReport verifySuperlinearity(const ProfileCurve& p,
                                          const std::vector<double>& eSamples,
                                          const std::vector<double>& rhoFracGrid,
                                          double relTol = 1e-10);

} // namespace revtor
