#include "revtor/profile.hpp"

#include <algorithm>
#include <cmath>

namespace revtor {

namespace {

// Bisection on [a, b] with f(a), f(b) of opposite sign, polished by Newton
// steps while they stay inside the bracket.
double refineRoot(const TrigSeries& f, const TrigSeries& df, double a, double b,
                  double tolerance) {
    double fa = f.eval(a);
    for (int it = 0; it < 200; ++it) {
        const double m = 0.5 * (a + b);
        const double fm = f.eval(m);
        if ((fa < 0) == (fm < 0)) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
        if (b - a < 1e-15)
            break;
    }
    double s = 0.5 * (a + b);
    for (int it = 0; it < 8; ++it) {
        const double fs = f.eval(s);
        if (std::abs(fs) < tolerance)
            break;
        const double dfs = df.eval(s);
        if (dfs == 0.0)
            break;
        const double sn = s - fs / dfs;
        if (sn < a || sn > b)
            break;
        s = sn;
    }
    return s;
}

std::vector<double> signChangeRoots(const TrigSeries& f, const TrigSeries& df,
                                    int nScan, double tolerance) {
    std::vector<double> roots;
    double sPrev = 0.0;
    double fPrev = f.eval(0.0);
    for (int i = 1; i <= nScan; ++i) {
        const double s = static_cast<double>(i) / nScan;
        const double fs = f.eval(s);
        if (fPrev == 0.0) {
            roots.push_back(sPrev);
        } else if ((fPrev < 0) != (fs < 0)) {
            roots.push_back(refineRoot(f, df, sPrev, s, tolerance));
        }
        sPrev = s;
        fPrev = fs;
    }
    for (double& r : roots)
        r -= std::floor(r);
    std::sort(roots.begin(), roots.end());
    return roots;
}

double maxAbsOnGrid(const TrigSeries& f, int nScan) {
    double m = 0.0;
    for (int i = 0; i < nScan; ++i)
        m = std::max(m, std::abs(f.eval(static_cast<double>(i) / nScan)));
    return m;
}

} // namespace

double ProfileCurve::r(double s) const {
    const double a = dx_.eval(s);
    const double b = dy_.eval(s);
    return std::sqrt(a * a + b * b);
}

Geometry ProfileCurve::geometry(double s) const {
    Geometry g;
    g.x = x_.eval(s);
    g.dx = dx_.eval(s);
    g.ddx = ddx_.eval(s);
    g.dy = dy_.eval(s);
    g.r = std::sqrt(g.dx * g.dx + g.dy * g.dy);
    return g;
}

GeometryJet ProfileCurve::jet(double s) const {
    GeometryJet j;
    j.x = x_.eval(s);
    j.dx = dx_.eval(s);
    j.ddx = ddx_.eval(s);
    j.dy = dy_.eval(s);
    j.ddy = ddy_.eval(s);
    j.r = std::sqrt(j.dx * j.dx + j.dy * j.dy);
    j.dr = (j.dx * j.ddx + j.dy * j.ddy) / j.r;
    return j;
}

double ProfileCurve::sAtMinX() const {
    return crit_.front().sCrit;
}

ProfileCurve makeProfile(const TrigSeries& xSeries, const TrigSeries& ySeries,
                         double tolerance) {
    if (tolerance <= 0)
        throw ValidationError("makeProfile: tolerance must be positive");

    ProfileCurve p;
    p.x_ = xSeries;
    p.y_ = ySeries;
    p.dx_ = xSeries.derivative();
    p.ddx_ = p.dx_.derivative();
    p.dddx_ = p.ddx_.derivative();
    p.dy_ = ySeries.derivative();
    p.ddy_ = p.dy_.derivative();

    const int nScan = std::max<int>(4096, 1024 * static_cast<int>(xSeries.harmonics()));

    if (p.dx_.isZero())
        throw NotMorseError("profile: x is constant, no Morse critical points");

    const double ddxScale = maxAbsOnGrid(p.ddx_, nScan);
    const double dxScale = maxAbsOnGrid(p.dx_, nScan);

    auto roots = signChangeRoots(p.dx_, p.ddx_, nScan, tolerance);
    if (roots.empty())
        throw NotMorseError("profile: no critical points of x located");

    // Tangency sweep: a zero of x' without sign change sits at a zero of x''
    // with |x'| small as well.
    for (double sc : signChangeRoots(p.ddx_, p.dddx_, nScan, tolerance)) {
        if (std::abs(p.dx_.eval(sc)) < 1e-7 * dxScale) {
            bool known = false;
            for (double r0 : roots)
                if (std::abs(sc - r0) < 1e-6 || std::abs(std::abs(sc - r0) - 1.0) < 1e-6)
                    known = true;
            if (!known)
                throw NotMorseError("profile: x' tangent to zero near s=" + std::to_string(sc));
        }
    }

    std::vector<CriticalPoint> crit;
    for (double s : roots) {
        CriticalPoint c;
        c.sCrit = s;
        c.xValue = p.x_.eval(s);
        c.secondDeriv = p.ddx_.eval(s);
        if (std::abs(c.secondDeriv) < 1e-8 * ddxScale)
            throw NotMorseError("profile: degenerate critical point at s=" + std::to_string(s));
        c.kind = c.secondDeriv > 0 ? CriticalPoint::Kind::minimum : CriticalPoint::Kind::maximum;
        crit.push_back(c);
    }

    std::sort(crit.begin(), crit.end(),
              [](const CriticalPoint& a, const CriticalPoint& b) { return a.xValue < b.xValue; });

    const double range = crit.back().xValue - crit.front().xValue;
    for (std::size_t i = 0; i + 1 < crit.size(); ++i)
        if (crit[i + 1].xValue - crit[i].xValue < 1e-6 * range)
            throw RepeatedCriticalValueError(
                "profile: critical values " + std::to_string(crit[i].xValue) + " and " +
                std::to_string(crit[i + 1].xValue) + " are not resolved");

    // min of a smooth periodic x is attained at a critical point
    if (crit.front().xValue <= 0)
        throw NotPositiveError("profile: min x = " + std::to_string(crit.front().xValue));

    // immersion: locate the minimum of r^2 = x'^2 + y'^2 by dense scan plus
    // local parabolic tightening
    double minR2 = 1e300, maxR2 = 0.0;
    const int nR = 8192;
    int argMin = 0;
    auto r2At = [&](double s) {
        const double a = p.dx_.eval(s), b = p.dy_.eval(s);
        return a * a + b * b;
    };
    for (int i = 0; i < nR; ++i) {
        const double v = r2At(static_cast<double>(i) / nR);
        if (v < minR2) {
            minR2 = v;
            argMin = i;
        }
        maxR2 = std::max(maxR2, v);
    }
    {
        double lo = (argMin - 1.0) / nR, hi = (argMin + 1.0) / nR;
        for (int it = 0; it < 60; ++it) {
            const double m1 = lo + (hi - lo) / 3, m2 = hi - (hi - lo) / 3;
            if (r2At(m1) < r2At(m2))
                hi = m2;
            else
                lo = m1;
        }
        minR2 = std::min(minR2, r2At(0.5 * (lo + hi)));
    }
    if (minR2 <= 1e-12 * maxR2)
        throw NotImmersedError("profile: meridian speed vanishes, min r^2 = " +
                               std::to_string(minR2));
    p.minR_ = std::sqrt(minR2);
    p.maxR_ = std::sqrt(maxR2);

    p.crit_ = std::move(crit);
    return p;
}

} // namespace revtor
