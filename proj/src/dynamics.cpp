#include "revtor/dynamics.hpp"

#include <cmath>

namespace revtor {

double hamiltonian(const ProfileCurve& p, const CotangentState& z) {
    const Geometry g = p.geometry(z.s);
    const double xx = twoPi * g.x;
    return 0.5 * (z.pPhi * z.pPhi / (xx * xx) + z.pS * z.pS / (g.r * g.r));
}

CotangentState embedLevel(const ProfileCurve& p, const LevelState& ls) {
    const Geometry g = p.geometry(ls.sBar);
    const double c = std::sqrt(2.0 * ls.e);
    CotangentState z;
    z.phi = ls.phiBar;
    z.s = ls.sBar;
    z.pPhi = twoPi * c * g.x * std::cos(ls.theta);
    z.pS = c * g.r * std::sin(ls.theta);
    return z;
}

CotangentState applyZeta(const CotangentState& z) {
    return {z.phi, z.s, -z.pPhi, -z.pS};
}

LevelState applyZeta(const LevelState& ls) {
    return {ls.phiBar, ls.sBar, ls.theta + pi, ls.e};
}

StateVec<4> cotangentField(const ProfileCurve& p, const CotangentState& z) {
    const GeometryJet j = p.jet(z.s);
    const double xx = twoPi * j.x;
    const double invXX2 = 1.0 / (xx * xx);
    const double invR2 = 1.0 / (j.r * j.r);
    StateVec<4> f;
    f[0] = z.pPhi * invXX2;
    f[1] = z.pS * invR2;
    f[2] = 0.0;
    f[3] = z.pPhi * z.pPhi * j.dx / (xx * xx * j.x) + z.pS * z.pS * j.dr / (j.r * j.r * j.r);
    return f;
}

StateVec<3> levelField(const ProfileCurve& p, const LevelState& ls) {
    const Geometry g = p.geometry(ls.sBar);
    const double c = std::sqrt(2.0 * ls.e);
    const double ct = std::cos(ls.theta), st = std::sin(ls.theta);
    StateVec<3> f;
    f[0] = c * ct / (twoPi * g.x);
    f[1] = c * st / g.r;
    f[2] = c * g.dx * ct / (g.r * g.x);
    return f;
}

std::array<double, 9> levelFieldJacobian(const ProfileCurve& p, const LevelState& ls) {
    const GeometryJet j = p.jet(ls.sBar);
    const double c = std::sqrt(2.0 * ls.e);
    const double ct = std::cos(ls.theta), st = std::sin(ls.theta);
    std::array<double, 9> J{};
    // rows: d(phiBar'), d(sBar'), d(theta'); columns: phiBar, sBar, theta
    J[0] = 0.0;
    J[1] = -c * ct * j.dx / (twoPi * j.x * j.x);
    J[2] = -c * st / (twoPi * j.x);
    J[3] = 0.0;
    J[4] = -c * st * j.dr / (j.r * j.r);
    J[5] = c * ct / j.r;
    J[6] = 0.0;
    J[7] = c * ct * (j.ddx / (j.r * j.x) - j.dx * (j.dr / (j.r * j.r * j.x) + j.dx / (j.r * j.x * j.x)));
    J[8] = -c * st * j.dx / (j.r * j.x);
    return J;
}

Trajectory integrate(const ProfileCurve& p, const CotangentState& z0, double tMax,
                     double tol, double sampleStep) {
    Trajectory tr;
    tr.energy0 = hamiltonian(p, z0);
    tr.clairaut0 = z0.pPhi;

    auto rhs = [&p](double, const StateVec<4>& y, StateVec<4>& dy) {
        dy = cotangentField(p, CotangentState{y[0], y[1], y[2], y[3]});
    };
    OdeOptions opt;
    // step tolerances sit below the requested accuracy so that the
    // accumulated drift stays within the documented 100*tol budget
    opt.relTol = 0.05 * tol;
    opt.absTol = 0.05 * tol;
    integrateSampled<4>(rhs, {z0.phi, z0.s, z0.pPhi, z0.pS}, 0.0, tMax, sampleStep, opt,
                        [&](double t, const StateVec<4>& y) {
                            CotangentState z{y[0], y[1], y[2], y[3]};
                            tr.times.push_back(t);
                            tr.states.push_back(z);
                            tr.maxEnergyDrift = std::max(
                                tr.maxEnergyDrift, std::abs(hamiltonian(p, z) - tr.energy0));
                            tr.maxClairautDrift =
                                std::max(tr.maxClairautDrift, std::abs(z.pPhi - tr.clairaut0));
                        });
    return tr;
}

LevelTrajectory integrate(const ProfileCurve& p, const LevelState& ls0, double tMax,
                          double tol, double sampleStep) {
    LevelTrajectory tr;
    tr.e = ls0.e;
    const double c0 = embedLevel(p, ls0).pPhi;

    auto rhs = [&p, e = ls0.e](double, const StateVec<3>& y, StateVec<3>& dy) {
        dy = levelField(p, LevelState{y[0], y[1], y[2], e});
    };
    OdeOptions opt;
    opt.relTol = 0.05 * tol;
    opt.absTol = 0.05 * tol;
    integrateSampled<3>(rhs, {ls0.phiBar, ls0.sBar, ls0.theta}, 0.0, tMax, sampleStep, opt,
                        [&](double t, const StateVec<3>& y) {
                            tr.times.push_back(t);
                            tr.states.push_back({y[0], y[1], y[2]});
                            const double pphi = embedLevel(p, {y[0], y[1], y[2], tr.e}).pPhi;
                            tr.maxClairautDrift =
                                std::max(tr.maxClairautDrift, std::abs(pphi - c0));
                        });
    return tr;
}

} // namespace revtor
