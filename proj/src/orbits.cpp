#include "revtor/orbits.hpp"

#include <algorithm>
#include <cmath>

#include "revtor/ode.hpp"

namespace revtor {

double det3(const Mat3& m) {
    return m[0] * (m[4] * m[8] - m[5] * m[7]) - m[1] * (m[3] * m[8] - m[5] * m[6]) +
           m[2] * (m[3] * m[7] - m[4] * m[6]);
}

Mat3 monodromyMatrix(const ProfileCurve& p, const CriticalCircle& c, double tol) {
    // state: (phiBar, sBar, theta, M[0..8]); dM/dt = J(state) M
    auto rhs = [&p, e = c.e](double, const StateVec<12>& y, StateVec<12>& dy) {
        const LevelState ls{y[0], y[1], y[2], e};
        const StateVec<3> f = levelField(p, ls);
        const std::array<double, 9> J = levelFieldJacobian(p, ls);
        dy[0] = f[0];
        dy[1] = f[1];
        dy[2] = f[2];
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                dy[3 + 3 * i + j] = J[3 * i + 0] * y[3 + j] + J[3 * i + 1] * y[6 + j] +
                                    J[3 * i + 2] * y[9 + j];
    };
    StateVec<12> y0{};
    y0[0] = 0.0;
    y0[1] = c.sCrit;
    y0[2] = c.thetaBranch;
    y0[3] = y0[7] = y0[11] = 1.0;

    OdeOptions opt;
    opt.relTol = tol;
    opt.absTol = tol;
    Dopri5<12, decltype(rhs)> stepper(rhs, opt);
    stepper.init(0.0, y0);
    while (stepper.t() < c.period)
        stepper.step(c.period);
    Mat3 m;
    for (int i = 0; i < 9; ++i)
        m[i] = stepper.y()[3 + i];
    return m;
}

namespace {

std::array<std::complex<double>, 3> eigsByDeflation(const Mat3& m) {
    const double c2 = m[0] + m[4] + m[8];
    const double c0 = det3(m);
    // lambda^3 - c2 l^2 + c1 l - c0 = (l - 1)(l^2 + p l + q) up to the
    // residual of the invariant root
    const double pq = 1.0 - c2;
    const double q = c0;
    const double disc = pq * pq - 4.0 * q;
    std::array<std::complex<double>, 3> eigs;
    eigs[0] = {1.0, 0.0};
    if (disc >= 0) {
        const double sq = std::sqrt(disc);
        // stable quadratic roots
        const double r1 = pq >= 0 ? (-pq - sq) / 2.0 : (-pq + sq) / 2.0;
        const double r2 = r1 != 0.0 ? q / r1 : (-pq - r1);
        eigs[1] = {r1, 0.0};
        eigs[2] = {r2, 0.0};
    } else {
        const double re = -pq / 2.0;
        const double im = std::sqrt(-disc) / 2.0;
        eigs[1] = {re, im};
        eigs[2] = {re, -im};
    }
    std::sort(eigs.begin(), eigs.end(), [](const auto& a, const auto& b) {
        const double ma = std::abs(a), mb = std::abs(b);
        if (ma != mb) return ma < mb;
        return a.imag() < b.imag();
    });
    return eigs;
}

} // namespace

std::array<std::complex<double>, 3> monodromy(const ProfileCurve& p, const CriticalCircle& c,
                                              double tol) {
    return eigsByDeflation(monodromyMatrix(p, c, tol));
}

std::optional<CriticalCircle::Kind>
floquetKind(const std::array<std::complex<double>, 3>& eigs, double margin) {
    double maxImag = 0, maxMod = 0;
    for (const auto& L : eigs) {
        maxImag = std::max(maxImag, std::abs(L.imag()));
        maxMod = std::max(maxMod, std::abs(L));
    }
    if (maxMod > 1.0 + margin && maxImag <= margin * maxMod)
        return CriticalCircle::Kind::hyperbolic;
    if (maxImag > margin && maxMod <= 1.0 + margin)
        return CriticalCircle::Kind::elliptic;
    return std::nullopt;
}

std::vector<CriticalCircle> criticalCircles(const ProfileCurve& p, double e,
                                            double integratorTol) {
    if (e <= 0)
        throw ValidationError("criticalCircles: energy must be positive");
    std::vector<CriticalCircle> out;
    const double c = std::sqrt(2.0 * e);
    for (const CriticalPoint& cp : p.criticalPoints()) {
        for (double thetaBranch : {0.0, pi}) {
            CriticalCircle cc;
            cc.sCrit = cp.sCrit;
            cc.xValue = cp.xValue;
            cc.thetaBranch = thetaBranch;
            cc.e = e;
            cc.period = twoPi * cp.xValue / c; // |dphiBar/dt| = c / (2 pi x)
            cc.kind = cp.secondDeriv > 0 ? CriticalCircle::Kind::hyperbolic
                                         : CriticalCircle::Kind::elliptic;
            cc.floquet = monodromy(p, cc, integratorTol);
            out.push_back(cc);
        }
    }
    return out;
}

SeparatrixGraph separatrix(const ProfileCurve& p, double e, SeparatrixBranch branch,
                           int nSamples) {
    SeparatrixGraph g;
    g.branch = branch;
    g.e = e;
    const double x1 = p.minX();
    g.sCrit1 = p.sAtMinX();
    const bool aroundPi = branch == SeparatrixBranch::piPlus || branch == SeparatrixBranch::piMinus;
    const bool plus = branch == SeparatrixBranch::zeroPlus || branch == SeparatrixBranch::piPlus;
    g.thetaLimit = aroundPi ? pi : 0.0;
    g.clairautValue = (aroundPi ? -1.0 : 1.0) * twoPi * std::sqrt(2.0 * e) * x1;

    g.sSamples.reserve(nSamples);
    g.thetaSamples.reserve(nSamples);
    for (int k = 0; k < nSamples; ++k) {
        // midpoints of a uniform partition starting at the excluded parameter
        double s = g.sCrit1 + (k + 0.5) / nSamples;
        s -= std::floor(s);
        const double ratio = std::min(1.0, x1 / p.x(s));
        const double a = std::acos(ratio);
        double theta;
        if (!aroundPi)
            theta = plus ? a : -a;
        else
            theta = plus ? pi + a : pi - a;
        g.sSamples.push_back(s);
        g.thetaSamples.push_back(theta);
    }
    return g;
}

} // namespace revtor
