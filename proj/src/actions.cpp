#include "revtor/actions.hpp"

#include <algorithm>
#include <cmath>

#include "revtor/dynamics.hpp"
#include "revtor/ode.hpp"
#include "revtor/quadrature.hpp"

namespace revtor {

namespace {

// quadrature breakpoints: the critical parameters of x, where the integrands
// kink or peak, plus a graded cluster around sPeak when requested
std::vector<double> meridianBreakpoints(const ProfileCurve& p, double gradeAt = -1.0) {
    std::vector<double> pts{0.0, 1.0};
    for (const CriticalPoint& c : p.criticalPoints()) {
        pts.push_back(c.sCrit);
        pts.push_back(c.sCrit + 1.0); // folded out below
    }
    if (gradeAt >= 0.0) {
        for (int k = 2; k < 40; k += 2) {
            const double w = std::pow(0.5, k);
            pts.push_back(gradeAt - w);
            pts.push_back(gradeAt + w);
        }
    }
    std::vector<double> folded;
    for (double s : pts) {
        s -= std::floor(s);
        folded.push_back(s);
    }
    folded.push_back(1.0);
    std::sort(folded.begin(), folded.end());
    folded.erase(std::unique(folded.begin(), folded.end(),
                             [](double a, double b) { return std::abs(a - b) < 1e-13; }),
                 folded.end());
    if (folded.front() > 0.0) folded.insert(folded.begin(), 0.0);
    return folded;
}

double invXX2(const ProfileCurve& p, double s) {
    const double xx = twoPi * p.x(s);
    return 1.0 / (xx * xx);
}

} // namespace

double clairautCritical(const ProfileCurve& p, double e) {
    return twoPi * std::sqrt(2.0 * e) * p.minX();
}

double meridianLength(const ProfileCurve& p, double relTol) {
    return integrate([&p](double s) { return p.r(s); }, 0.0, 1.0, {relTol, 0.0});
}

std::pair<double, double> tauPhi(const ProfileCurve& p, double e, double rho,
                                 double relTol) {
    const double edge = clairautCritical(p, e);
    if (std::abs(rho) >= edge)
        throw DomainError("tauPhi: rho = " + std::to_string(rho) +
                          " outside the open rotational band (+-" + std::to_string(edge) + ")");
    const auto pts = meridianBreakpoints(p, p.sAtMinX());
    QuadratureOptions opt{relTol, 0.0};
    const double rho2 = rho * rho;
    auto tauIntegrand = [&](double s) {
        return p.r(s) / std::sqrt(2.0 * e - rho2 * invXX2(p, s));
    };
    auto phiIntegrand = [&](double s) {
        const double q = invXX2(p, s);
        return rho * q * p.r(s) / std::sqrt(2.0 * e - rho2 * q);
    };
    const double tau = integrateSplit(tauIntegrand, pts, opt);
    const double phi = rho == 0.0 ? 0.0 : integrateSplit(phiIntegrand, pts, opt);
    return {tau, phi};
}

double tauDeriv(const ProfileCurve& p, double e, double rho, double relTol) {
    const double edge = clairautCritical(p, e);
    if (std::abs(rho) >= edge)
        throw DomainError("tauDeriv: rho outside the open rotational band");
    const auto pts = meridianBreakpoints(p, p.sAtMinX());
    const double rho2 = rho * rho;
    auto f = [&](double s) {
        const double q = invXX2(p, s);
        const double rad = 2.0 * e - rho2 * q;
        return p.r(s) * rho * q / (rad * std::sqrt(rad));
    };
    return integrateSplit(f, pts, {relTol, 0.0});
}

double phiDeriv(const ProfileCurve& p, double e, double rho, double relTol) {
    const double edge = clairautCritical(p, e);
    if (std::abs(rho) >= edge)
        throw DomainError("phiDeriv: rho outside the open rotational band");
    const auto pts = meridianBreakpoints(p, p.sAtMinX());
    const double rho2 = rho * rho;
    auto f = [&](double s) {
        const double q = invXX2(p, s);
        const double rad = 2.0 * e - rho2 * q;
        return p.r(s) * (q / std::sqrt(rad) + rho2 * q * q / (rad * std::sqrt(rad)));
    };
    return integrateSplit(f, pts, {relTol, 0.0});
}

std::pair<double, double> timeOfFlightOracle(const ProfileCurve& p, double e, double rho,
                                             double tol) {
    const double edge = clairautCritical(p, e);
    if (std::abs(rho) >= edge)
        throw DomainError("timeOfFlightOracle: rho outside the open rotational band");
    const Geometry g0 = p.geometry(0.0);
    const double rad = 2.0 * e - rho * rho * invXX2(p, 0.0);
    const CotangentState z0{0.0, 0.0, rho, std::sqrt(rad) * g0.r};

    auto rhs = [&p](double, const StateVec<4>& y, StateVec<4>& dy) {
        dy = cotangentField(p, CotangentState{y[0], y[1], y[2], y[3]});
    };
    OdeOptions opt;
    opt.relTol = tol;
    opt.absTol = tol;
    StateVec<4> yc{};
    const double tau = integrateToCrossing<4>(
        rhs, {z0.phi, z0.s, z0.pPhi, z0.pS}, 0.0, 1e4,
        [](const StateVec<4>& y) { return y[1]; }, 1.0, opt, &yc);
    return {tau, yc[0]};
}

double actionI2(const ProfileCurve& p, double e, double rho, double relTol) {
    const double edge = clairautCritical(p, e);
    if (std::abs(rho) > edge * (1.0 + 1e-12))
        throw DomainError("actionI2: rho outside the closed rotational band");
    const double rho2 = std::min(rho * rho, edge * edge);
    const auto pts = meridianBreakpoints(p, p.sAtMinX());
    auto f = [&](double s) {
        const double rad = std::max(0.0, 2.0 * e - rho2 * invXX2(p, s));
        return p.r(s) * std::sqrt(rad);
    };
    return integrateSplit(f, pts, {relTol, 0.0});
}

ActionSample sampleActions(const ProfileCurve& p, double e, double rho, double relTol) {
    ActionSample a;
    a.e = e;
    a.rho = rho;
    a.i1 = rho;
    a.i2 = actionI2(p, e, rho, relTol);
    auto [tau, phi] = tauPhi(p, e, rho, relTol);
    a.tau = tau;
    a.phiAdvance = phi;
    return a;
}

double actionShape(const ProfileCurve& p, double u, double relTol) {
    const double uMin = invXX2(p, p.sAtMinX());
    if (u < uMin * (1.0 - 1e-12))
        throw DomainError("actionShape: u below the domain edge");
    const auto pts = meridianBreakpoints(p, p.sAtMinX());
    auto f = [&](double s) {
        return p.r(s) * std::sqrt(std::max(0.0, u - invXX2(p, s)));
    };
    return integrateSplit(f, pts, {relTol, 0.0});
}

double actionShapeDeriv(const ProfileCurve& p, double u, double relTol) {
    const auto pts = meridianBreakpoints(p, p.sAtMinX());
    auto f = [&](double s) { return 0.5 * p.r(s) / std::sqrt(u - invXX2(p, s)); };
    return integrateSplit(f, pts, {relTol, 0.0});
}

double actionShapeDeriv2(const ProfileCurve& p, double u, double relTol) {
    const auto pts = meridianBreakpoints(p, p.sAtMinX());
    auto f = [&](double s) {
        const double d = u - invXX2(p, s);
        return -0.25 * p.r(s) / (d * std::sqrt(d));
    };
    return integrateSplit(f, pts, {relTol, 0.0});
}

double actionShapeInverse(const ProfileCurve& p, double v, double relTol) {
    const double uMin = invXX2(p, p.sAtMinX());
    double lo = uMin, hi = std::max(2.0 * uMin, 1.0);
    while (actionShape(p, hi, relTol) < v) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e30)
            throw NumericalError("actionShapeInverse: value out of range");
    }
    for (int it = 0; it < 200 && hi - lo > 1e-14 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (actionShape(p, mid, relTol) < v)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

ConvexityReport verifyConvexity(const ProfileCurve& p, const std::vector<double>& eGrid,
                                const std::vector<double>& rhoFracGrid, double relTol) {
    ConvexityReport rep;
    rep.minGpp = 1e300;
    rep.minDet = 1e300;
    rep.maxFtildeSecond = -1e300;
    for (double e : eGrid) {
        const double edge = clairautCritical(p, e);
        for (double frac : rhoFracGrid) {
            const double rho = frac * edge;
            if (rho == 0.0)
                throw DomainError("verifyConvexity: rho = 0 not in the shape chart");
            ConvexityPoint pt;
            pt.e = e;
            pt.rho = rho;
            const double u = 2.0 * e / (rho * rho);
            const double fp = actionShapeDeriv(p, u, relTol);
            const double fpp = actionShapeDeriv2(p, u, relTol);
            const double gp = 1.0 / fp;
            pt.gpp = -fpp * gp * gp * gp;
            pt.hessDet = 2.0 * u * pt.gpp - gp * gp;
            pt.i2Direct = actionI2(p, e, rho, relTol);
            pt.i2Shape = std::abs(rho) * actionShape(p, u, relTol);
            rep.maxIdentityGap = std::max(
                rep.maxIdentityGap, std::abs(pt.i2Direct - pt.i2Shape) / pt.i2Direct);
            rep.minGpp = std::min(rep.minGpp, pt.gpp);
            rep.minDet = std::min(rep.minDet, pt.hessDet);
            rep.grid.push_back(pt);
            if (pt.gpp <= 0 || pt.hessDet <= 0)
                throw ConvexityViolation("verifyConvexity: minor not positive at e=" +
                                         std::to_string(e) + " rho=" + std::to_string(rho));
            const double ftpp = fpp * u * u + fp * u;
            rep.maxFtildeSecond = std::max(rep.maxFtildeSecond, ftpp);
        }
    }
    rep.logShapeConcave = rep.maxFtildeSecond < 0;
    rep.pass = true;
    return rep;
}

SuperlinearityReport verifySuperlinearity(const ProfileCurve& p,
                                          const std::vector<double>& eSamples,
                                          const std::vector<double>& rhoFracGrid,
                                          double relTol) {
    SuperlinearityReport rep;
    rep.k = std::sqrt(2.0) * std::max(twoPi * p.minX(), meridianLength(p, relTol));
    for (double e : eSamples) {
        const double edge = clairautCritical(p, e);
        for (double frac : rhoFracGrid) {
            const double rho = frac * edge;
            const double i2 = actionI2(p, e, rho, relTol);
            const double ratio = std::max(std::abs(rho), std::abs(i2)) / (rep.k * std::sqrt(e));
            rep.maxRatio = std::max(rep.maxRatio, ratio);
            if (ratio > 1.0 + 1e-12)
                throw BoundViolation("verifySuperlinearity: bound violated at e=" +
                                     std::to_string(e) + " rho=" + std::to_string(rho));
        }
    }
    rep.pass = true;
    return rep;
}

} // namespace revtor
