#pragma once

#include <array>
#include <string>
#include <vector>

#include "revtor/exec.hpp"
#include "revtor/profile.hpp"

namespace revtor {

struct EndpointMismatchError : NumericalError {
    using NumericalError::NumericalError;
};
struct NonConvexError : NumericalError {
    using NumericalError::NumericalError;
};
struct TailEstimateDominatesError : NumericalError {
    using NumericalError::NumericalError;
};
struct PoorFitError : NumericalError {
    using NumericalError::NumericalError;
};
struct ConjugacyViolation : NumericalError {
    using NumericalError::NumericalError;
};

/// Rotation vectors (X, Y) = (phi_rho / tau_rho, 1 / tau_rho) of the
/// rotational invariant tori at e = 1/2, on a grid graded toward the band
/// edge rho0 where tau diverges logarithmically.
struct RotationCurve {
    double e = 0.5;
    double rho0 = 0;
    std::vector<double> rho; // rho[0] = 0, graded toward rho0
    std::vector<double> X, Y;
    double endpointX = 0; // X extended by continuity to rho0 (Y -> 0)
    bool hasEndpoint = false;

    double gap(std::size_t k) const { return rho0 - rho[k]; }
};

RotationCurve rotationCurve(const ProfileCurve& p, int nSamples = 160,
                            Exec exec = Exec::parallel, double relTol = 1e-10);

struct EndpointEstimate {
    double extrapolated = 0;   // rational-in-log extrapolation along the grid
    double orbitFrequency = 0; // angular speed of the waist circle
    double combined = 0;
    double relGap = 0;
    double paperConstant = 0; // printed reference value 1/(4 pi^2 rho0)
    double ratioToPaper = 0;
    // model X ~ combined - c/(L + d), L = -ln(rho0 - rho)
    double modelC = 0, modelD = 0;
};

/// Extend X to the band edge two independent ways and require <=1% agreement;
/// throws EndpointMismatchError otherwise.
EndpointEstimate extendEndpoint(const ProfileCurve& p, const RotationCurve& curve);

/// Attaches the combined endpoint to the curve.
void attachEndpoint(RotationCurve& curve, const EndpointEstimate& ep);

/// The closed convex curve obtained from the rotation curve and its endpoint
/// by the reflections (X,Y) -> (X,-Y) and (X,Y) -> (-X,-Y), oriented
/// counterclockwise, with its enclosed (shoelace) area.
struct StableNormBall {
    std::vector<std::array<double, 2>> vertices;
    double area = 0;
};

StableNormBall stableUnitBall(const RotationCurve& curve);

/// Minkowski gauge of the ball: unique t > 0 with v/t on the boundary.
double stableNorm(const StableNormBall& ball, std::array<double, 2> v);

/// Area enclosed by the curve via the derivative formula
///   area = 2 int_0^rho0 X'(rho) Y(rho) drho,
/// with X', Y from quadratures of rho-differentiated integrands, an
/// integrable log-pole at the edge handled by a graded mesh, and the
/// below-cutoff tail bounded analytically. Must agree with the shoelace
/// area; the comparison is the caller's test.
double asymptoticVolume(const ProfileCurve& p, double relTol = 1e-8,
                        double cutoffFrac = 1e-8, double* tailOut = nullptr);

struct AsymptoticsLaw {
    std::string law;
    double fitted = 0;
    double paperConstant = 0;
    double ratio = 0;
    double r2 = 0;
};

struct AsymptoticsReport {
    AsymptoticsLaw tauLaw;      // tau ~ -A ln(rho0 - rho) + B
    AsymptoticsLaw phiLaw;      // phi ~ -A' ln(rho0 - rho) + B'
    AsymptoticsLaw tauPrimeLaw; // tau' ~ A'' / (rho0 - rho)
    double endpointFromFits = 0;   // A'/A
    double tauPrimeSpread = 0;     // spread of tau' * gap over the last decade
};

/// Functional-form fits over gap/rho0 in [1e-5, 1e-2]; throws PoorFitError
/// if any R^2 <= r2Min.
AsymptoticsReport verifyAsymptotics(const ProfileCurve& p, const RotationCurve& curve,
                                    double relTol = 1e-10, double r2Min = 0.999);

struct ConjugacyReport {
    double maxBiconjugateGap = 0; // relative, over test directions
    bool pass = false;
};

/// Legendre-Fenchel conjugate of q = (1/2) gauge^2 over a direction grid,
/// conjugated again; the biconjugate must return q within `tolerance`.
ConjugacyReport conjugatePair(const StableNormBall& ball, int nDirections = 720,
                              double tolerance = 0.01);

/// Convex conjugate value sup_w (<c, w> - gauge(w)^2 / 2), for tests.
double convexConjugateAt(const StableNormBall& ball, std::array<double, 2> c,
                         int nDirections = 720);

/// Exact-ellipse ball for calibration (axes a, b).
StableNormBall syntheticEllipseBall(double a, double b, int nVertices = 512);

} // namespace revtor
