#include "revtor/stable_norm.hpp"

#include <algorithm>
#include <cmath>

#include "revtor/actions.hpp"
#include "revtor/dynamics.hpp"
#include "revtor/fit.hpp"
#include "revtor/quadrature.hpp"

namespace revtor {

namespace {
constexpr double kGapMin = 1e-6; // deepest relative gap of the graded grid
}

RotationCurve rotationCurve(const ProfileCurve& p, int nSamples, Exec exec, double relTol) {
    if (nSamples < 16)
        throw ValidationError("rotationCurve: need at least 16 samples");
    RotationCurve c;
    c.e = 0.5;
    c.rho0 = clairautCritical(p, c.e);
    c.rho.resize(nSamples);
    c.X.resize(nSamples);
    c.Y.resize(nSamples);
    const double depth = std::log2(1.0 / kGapMin);
    for (int k = 0; k < nSamples; ++k)
        c.rho[k] = c.rho0 * (1.0 - std::pow(2.0, -depth * k / (nSamples - 1.0)));
    c.rho[0] = 0.0;

    auto fill = [&](int k) {
        auto [tau, phi] = tauPhi(p, c.e, c.rho[k], relTol);
        c.X[k] = phi / tau;
        c.Y[k] = 1.0 / tau;
    };
    if (exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic)
        for (int k = 0; k < nSamples; ++k)
            fill(k);
    } else {
        for (int k = 0; k < nSamples; ++k)
            fill(k);
    }
    return c;
}

EndpointEstimate extendEndpoint(const ProfileCurve& p, const RotationCurve& curve) {
    const std::size_t n = curve.rho.size();
    std::size_t lastDecade = 0;
    for (std::size_t k = 0; k < n; ++k)
        if (curve.gap(k) <= curve.rho0 * kGapMin * 10.0)
            ++lastDecade;
    if (lastDecade < 10)
        throw ValidationError("extendEndpoint: need >= 10 points in the last decade");

    EndpointEstimate ep;

    // route (a): X = Xinf - cc/(L + d) with L = -ln(gap); grid is uniform in L
    auto L = [&](std::size_t k) { return -std::log(curve.gap(k)); };
    double acc = 0, accC = 0, accD = 0;
    int used = 0;
    for (std::size_t k = n - 5; k + 2 < n; ++k) {
        const double d0 = curve.X[k + 1] - curve.X[k];
        const double d1 = curve.X[k + 2] - curve.X[k + 1];
        if (d1 == 0.0) continue;
        const double ra = d0 / d1;
        if (ra <= 1.0) continue;
        const double h = L(k + 1) - L(k);
        const double Lkd = 2.0 * h / (ra - 1.0);
        const double cc = d0 * Lkd * (Lkd + h) / h;
        acc += curve.X[k] + cc / Lkd;
        accC += cc;
        accD += Lkd - L(k);
        ++used;
    }
    if (used == 0)
        throw NumericalError("extendEndpoint: extrapolation triples degenerate");
    ep.extrapolated = acc / used;
    ep.modelC = accC / used;
    ep.modelD = accD / used;

    // route (b): rotation vector of the measure on the waist circle
    const LevelState waist{0.0, p.sAtMinX(), 0.0, curve.e};
    ep.orbitFrequency = std::abs(levelField(p, waist)[0]);

    ep.relGap = std::abs(ep.extrapolated - ep.orbitFrequency) / ep.orbitFrequency;
    if (ep.relGap > 0.01)
        throw EndpointMismatchError("extendEndpoint: routes disagree by " +
                                    std::to_string(100 * ep.relGap) + "%");
    ep.combined = 0.5 * (ep.extrapolated + ep.orbitFrequency);
    ep.paperConstant = 1.0 / (4.0 * pi * pi * curve.rho0);
    ep.ratioToPaper = ep.combined / ep.paperConstant;
    return ep;
}

void attachEndpoint(RotationCurve& curve, const EndpointEstimate& ep) {
    curve.endpointX = ep.combined;
    curve.hasEndpoint = true;
}

namespace {

// Densify the logarithmic sliver between the deepest grid point and the
// endpoint using the fitted model X = Xinf - c/(L+d), Y = 1/(A L + B);
// the polygon chord there would otherwise bias the shoelace area.
std::vector<std::array<double, 2>> sliverPoints(const RotationCurve& c) {
    std::vector<std::array<double, 2>> pts;
    const std::size_t n = c.rho.size();
    const double L1 = -std::log(c.gap(n - 2)), L2 = -std::log(c.gap(n - 1));
    const double tau1 = 1.0 / c.Y[n - 2], tau2 = 1.0 / c.Y[n - 1];
    const double A = (tau2 - tau1) / (L2 - L1);
    const double B = tau2 - A * L2;
    // c/(L+d): pin through the last two X values
    const double g1 = c.endpointX - c.X[n - 2], g2 = c.endpointX - c.X[n - 1];
    if (g1 <= 0 || g2 <= 0 || g2 >= g1) return pts;
    // g = cc/(L+d) -> d from the pair, then cc
    const double d = (g2 * L2 - g1 * L1) / (g1 - g2);
    const double cc = g2 * (L2 + d);
    for (double L = L2 * 1.08; L < 400.0; L *= 1.08) {
        const double X = c.endpointX - cc / (L + d);
        const double tau = A * L + B;
        if (tau <= 0) break;
        const double Y = 1.0 / tau;
        if (cc / ((L + d) * tau) < 1e-7) break;
        pts.push_back({X, Y});
    }
    return pts;
}

double cross(const std::array<double, 2>& a, const std::array<double, 2>& b) {
    return a[0] * b[1] - a[1] * b[0];
}

} // namespace

StableNormBall stableUnitBall(const RotationCurve& curve) {
    if (!curve.hasEndpoint)
        throw ValidationError("stableUnitBall: curve has no endpoint");
    const std::size_t n = curve.rho.size();

    // quarter arc from (0, Ymax) down to the edge vertex, rho increasing
    std::vector<std::array<double, 2>> quarter;
    quarter.reserve(n + 64);
    for (std::size_t k = 0; k < n; ++k)
        quarter.push_back({curve.X[k], curve.Y[k]});
    for (const auto& v : sliverPoints(curve))
        quarter.push_back(v);

    StableNormBall ball;
    auto& V = ball.vertices;
    V.reserve(4 * quarter.size() + 2);
    V.push_back({curve.endpointX, 0.0});
    for (std::size_t k = quarter.size(); k-- > 0;)
        V.push_back(quarter[k]); // ends at (0, Ymax)
    for (std::size_t k = 1; k < quarter.size(); ++k)
        V.push_back({-quarter[k][0], quarter[k][1]});
    V.push_back({-curve.endpointX, 0.0});
    for (std::size_t k = quarter.size(); k-- > 0;)
        V.push_back({-quarter[k][0], -quarter[k][1]});
    for (std::size_t k = 1; k < quarter.size(); ++k)
        V.push_back({quarter[k][0], -quarter[k][1]});

    // convexity of consecutive edges, with a scale-relative slack
    double scale = 0;
    for (const auto& v : V)
        scale = std::max(scale, std::abs(v[0]) + std::abs(v[1]));
    const std::size_t m = V.size();
    for (std::size_t i = 0; i < m; ++i) {
        const auto& a = V[i];
        const auto& b = V[(i + 1) % m];
        const auto& c = V[(i + 2) % m];
        const std::array<double, 2> e1{b[0] - a[0], b[1] - a[1]};
        const std::array<double, 2> e2{c[0] - b[0], c[1] - b[1]};
        if (cross(e1, e2) < -1e-10 * scale * scale)
            throw NonConvexError("stableUnitBall: reflex vertex at index " + std::to_string(i));
    }

    double area = 0;
    for (std::size_t i = 0; i < m; ++i)
        area += cross(V[i], V[(i + 1) % m]);
    ball.area = 0.5 * area;
    if (ball.area <= 0)
        throw NonConvexError("stableUnitBall: non-positive area");
    return ball;
}

double stableNorm(const StableNormBall& ball, std::array<double, 2> v) {
    if (v[0] == 0 && v[1] == 0)
        throw ValidationError("stableNorm: zero vector");
    const std::size_t m = ball.vertices.size();
    for (std::size_t i = 0; i < m; ++i) {
        const auto& a = ball.vertices[i];
        const auto& b = ball.vertices[(i + 1) % m];
        const std::array<double, 2> d{b[0] - a[0], b[1] - a[1]};
        const double denom = cross(v, d);
        if (denom == 0.0) continue;
        const double t = cross(a, d) / denom;
        if (t <= 0) continue;
        // u along the edge
        const std::array<double, 2> w{t * v[0] - a[0], t * v[1] - a[1]};
        const double dd = d[0] * d[0] + d[1] * d[1];
        const double u = (w[0] * d[0] + w[1] * d[1]) / dd;
        if (u >= -1e-12 && u <= 1.0 + 1e-12)
            return 1.0 / t;
    }
    throw NumericalError("stableNorm: ray missed the boundary");
}

double asymptoticVolume(const ProfileCurve& p, double relTol, double cutoffFrac,
                        double* tailOut) {
    const double e = 0.5;
    const double rho0 = clairautCritical(p, e);
    auto F = [&](double rho) {
        // the radicand is evaluated with ~1e-16 absolute noise, which caps
        // the reachable relative accuracy near the band edge
        const double gap = std::max(rho0 - rho, 1e-300);
        const double tol = std::max(relTol, 1e-16 * rho0 / gap);
        auto [tau, phi] = tauPhi(p, e, rho, tol);
        const double dtau = tauDeriv(p, e, rho, tol);
        const double dphi = phiDeriv(p, e, rho, tol);
        return (dphi * tau - phi * dtau) / (tau * tau * tau);
    };
    const double rhoCut = rho0 * (1.0 - cutoffFrac);
    std::vector<double> breaks{0.0};
    for (double g = 0.5; g > cutoffFrac * 1.5; g *= 0.5)
        breaks.push_back(rho0 * (1.0 - g));
    breaks.push_back(rhoCut);
    const double body = integrateSplit(F, breaks, {1e-7, 0.0, 40000});

    // Below the cutoff, integrate the fitted edge model instead of the
    // integrand: X = Xinf - c/(L+d), tau = A L + B in L = -ln(rho0 - rho)
    // give X' Y drho = c dL/((L+d)^2 (A L + B)). Anchors sit at ln-spacing 1.
    const double gCut = rho0 - rhoCut;
    const double Lcut = -std::log(gCut);
    double Lanchor[3], Xa[3], Ta[3];
    for (int i = 0; i < 3; ++i) {
        const double g = gCut * std::exp(2.0 - i); // L = Lcut-2, Lcut-1, Lcut
        Lanchor[i] = -std::log(g);
        auto [tau, phi] = tauPhi(p, e, rho0 - g, std::max(relTol, 1e-15 * rho0 / g));
        Ta[i] = tau;
        Xa[i] = phi / tau;
    }
    const double A = (Ta[2] - Ta[0]) / (Lanchor[2] - Lanchor[0]);
    const double B = Ta[2] - A * Lanchor[2];
    const double ra = (Xa[1] - Xa[0]) / (Xa[2] - Xa[1]);
    if (ra <= 1.0)
        throw TailEstimateDominatesError("asymptoticVolume: edge model degenerate");
    const double d = 2.0 / (ra - 1.0) - Lanchor[0];
    const double c = (Xa[1] - Xa[0]) * (Lanchor[0] + d) * (Lanchor[1] + d);
    const double tail = c * integrate(
                                [&](double w) {
                                    return 1.0 / ((w + d) * (w + d) * (A * w + B));
                                },
                                Lcut, Lcut + 2e5, {1e-9, 0.0});

    // X odd and Y even in rho, and the closed curve is the upper branch over
    // [-rho0, rho0] plus its reflection: the enclosed area is four times the
    // quarter integral (the flat closed form, quarter = pi/4 vs disc area pi,
    // pins the factor)
    const double total = 4.0 * (body + tail);
    if (tailOut) *tailOut = 4.0 * tail;
    if (std::abs(4.0 * tail) > 0.05 * std::abs(total))
        throw TailEstimateDominatesError("asymptoticVolume: tail " + std::to_string(tail) +
                                         " exceeds 5% of " + std::to_string(total));
    return total;
}

AsymptoticsReport verifyAsymptotics(const ProfileCurve& p, const RotationCurve& curve,
                                    double relTol, double r2Min) {
    AsymptoticsReport rep;
    const double rho0 = curve.rho0;
    std::vector<double> lnGap, tau, phi, dtau, gap;
    for (std::size_t k = 0; k < curve.rho.size(); ++k) {
        const double g = curve.gap(k) / rho0;
        if (g < 1e-5 || g > 1e-2) continue;
        gap.push_back(curve.gap(k));
        lnGap.push_back(std::log(curve.gap(k)));
        tau.push_back(1.0 / curve.Y[k]);
        phi.push_back(curve.X[k] / curve.Y[k]);
        dtau.push_back(tauDeriv(p, curve.e, curve.rho[k], relTol));
    }
    if (lnGap.size() < 10)
        throw ValidationError("verifyAsymptotics: too few grid points in the fit band");

    const double sMin = p.sAtMinX();
    const double gamma = p.ddx(sMin);
    const double r0 = p.r(sMin);
    const double paperA = std::pow(rho0, 1.5) / rho0 * r0 / (2.0 * std::sqrt(pi * gamma));
    const double paperAp = (1.0 / (4.0 * pi * pi)) / std::sqrt(rho0) * r0 /
                           (2.0 * std::sqrt(pi * gamma));

    const LineFit ftau = fitLine(lnGap, tau);
    rep.tauLaw = {"tau_log", -ftau.slope, paperA, -ftau.slope / paperA, ftau.r2};

    const LineFit fphi = fitLine(lnGap, phi);
    rep.phiLaw = {"phi_log", -fphi.slope, paperAp, -fphi.slope / paperAp, fphi.r2};

    // pole fit: tau' ~ A'' / gap, least squares against 1/gap
    std::vector<double> invGap(gap.size());
    for (std::size_t i = 0; i < gap.size(); ++i)
        invGap[i] = 1.0 / gap[i];
    const LineFit fpole = fitLine(invGap, dtau);
    rep.tauPrimeLaw = {"tauPrime_pole", fpole.slope, paperAp, fpole.slope / paperAp, fpole.r2};

    rep.endpointFromFits = rep.phiLaw.fitted / rep.tauLaw.fitted;

    // spread of tau' * gap over the last decade of the band
    double lo = 1e300, hi = 0;
    for (std::size_t i = 0; i < gap.size(); ++i) {
        if (gap[i] / rho0 > 1e-4) continue;
        const double v = dtau[i] * gap[i];
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    rep.tauPrimeSpread = lo < hi ? hi / lo - 1.0 : 0.0;

    for (const AsymptoticsLaw* law : {&rep.tauLaw, &rep.phiLaw, &rep.tauPrimeLaw})
        if (law->r2 <= r2Min)
            throw PoorFitError("verifyAsymptotics: " + law->law + " fit R^2 = " +
                               std::to_string(law->r2));
    return rep;
}

double convexConjugateAt(const StableNormBall& ball, std::array<double, 2> c,
                         int nDirections) {
    double best = 0;
    for (int i = 0; i < nDirections; ++i) {
        const double a = twoPi * i / nDirections;
        const std::array<double, 2> w{std::cos(a), std::sin(a)};
        const double G = stableNorm(ball, w);
        const double dot = c[0] * w[0] + c[1] * w[1];
        if (dot <= 0) continue;
        best = std::max(best, dot * dot / (2.0 * G * G));
    }
    return best;
}

ConjugacyReport conjugatePair(const StableNormBall& ball, int nDirections,
                              double tolerance) {
    // alphaDir[i] = alpha on the unit vector of direction i (degree-2 homogeneous)
    std::vector<double> gauge(nDirections), alphaDir(nDirections);
    for (int i = 0; i < nDirections; ++i) {
        const double a = twoPi * i / nDirections;
        gauge[i] = stableNorm(ball, {std::cos(a), std::sin(a)});
    }
    for (int i = 0; i < nDirections; ++i) {
        const double a = twoPi * i / nDirections;
        double best = 0;
        for (int j = 0; j < nDirections; ++j) {
            const double b = twoPi * j / nDirections;
            const double dot = std::cos(a - b);
            if (dot <= 0) continue;
            best = std::max(best, dot * dot / (2.0 * gauge[j] * gauge[j]));
        }
        alphaDir[i] = best;
    }
    ConjugacyReport rep;
    for (int i = 0; i < nDirections; ++i) {
        // biconjugate on the unit vector of direction i
        double best = 0;
        for (int j = 0; j < nDirections; ++j) {
            const double dot = std::cos(twoPi * (i - j) / nDirections);
            if (dot <= 0) continue;
            best = std::max(best, dot * dot / (4.0 * alphaDir[j]));
        }
        const double qExact = 0.5 * gauge[i] * gauge[i];
        rep.maxBiconjugateGap =
            std::max(rep.maxBiconjugateGap, std::abs(best - qExact) / qExact);
    }
    if (rep.maxBiconjugateGap > tolerance)
        throw ConjugacyViolation("conjugatePair: biconjugate deviates by " +
                                 std::to_string(100 * rep.maxBiconjugateGap) + "%");
    rep.pass = true;
    return rep;
}

StableNormBall syntheticEllipseBall(double a, double b, int nVertices) {
    StableNormBall ball;
    ball.vertices.resize(nVertices);
    for (int i = 0; i < nVertices; ++i) {
        const double t = twoPi * i / nVertices;
        ball.vertices[i] = {a * std::cos(t), b * std::sin(t)};
    }
    double area = 0;
    for (int i = 0; i < nVertices; ++i) {
        const auto& u = ball.vertices[i];
        const auto& v = ball.vertices[(i + 1) % nVertices];
        area += u[0] * v[1] - u[1] * v[0];
    }
    ball.area = 0.5 * area;
    return ball;
}

} // namespace revtor
