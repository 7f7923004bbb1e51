#include "revtor/entropy.hpp"

#include <algorithm>
#include <cmath>

#include "revtor/dynamics.hpp"
#include "revtor/fit.hpp"
#include "revtor/ode.hpp"
#include "revtor/sampling.hpp"

namespace revtor {

namespace {

inline double wrapDist(double d, double period) {
    if (period <= 0) return std::abs(d);
    d = std::abs(d);
    d -= period * std::floor(d / period);
    return std::min(d, period - d);
}

inline float wrapCoord(double v, double period) {
    if (period <= 0) return static_cast<float>(v);
    v -= period * std::floor(v / period);
    return static_cast<float>(v);
}

} // namespace

double TrajectoryTable::stateDistance(int a, int b, int k) const {
    const float* pa = state(a, k);
    const float* pb = state(b, k);
    double d = 0;
    for (int c = 0; c < 3; ++c)
        d = std::max(d, scale[c] * wrapDist(static_cast<double>(pa[c]) - pb[c], period[c]));
    return d;
}

double TrajectoryTable::dynDistance(int a, int b, int kMax) const {
    double d = 0;
    for (int k = 0; k <= kMax; ++k)
        d = std::max(d, stateDistance(a, b, k));
    return d;
}

bool TrajectoryTable::separated(int a, int b, int kMax, double eps) const {
    // shear grows with time, so late grid points witness separation first
    for (int k = kMax; k >= 0; --k)
        if (stateDistance(a, b, k) >= eps) return true;
    return false;
}

int TrajectoryTable::timeIndexFor(double t) const {
    const int k = static_cast<int>(std::floor(t / dt + 1e-9));
    return std::clamp(k, 0, nTimes - 1);
}

TrajectoryTable revolutionFlowTable(const ProfileCurve& p, double e, int nSamples,
                                    double tMax, double dt, std::uint64_t seed, Exec exec,
                                    double tol) {
    TrajectoryTable tab;
    tab.nSamples = nSamples;
    tab.nTimes = static_cast<int>(std::floor(tMax / dt + 1e-9)) + 1;
    tab.dt = dt;
    tab.scale = {twoPi * p.maxX(), p.maxR(), 1.0};
    tab.period = {1.0, 1.0, twoPi};
    tab.data.resize(static_cast<std::size_t>(nSamples) * tab.nTimes * 3);

    const HaltonSampler sampler(seed);
    auto run = [&](int i) {
        const std::array<double, 3> u = sampler.point(i);
        const LevelState ls0{u[0], u[1], twoPi * u[2], e};
        auto rhs = [&p, e](double, const StateVec<3>& y, StateVec<3>& dy) {
            dy = levelField(p, LevelState{y[0], y[1], y[2], e});
        };
        OdeOptions opt;
        opt.relTol = tol;
        opt.absTol = tol;
        int k = 0;
        integrateSampled<3>(rhs, {ls0.phiBar, ls0.sBar, ls0.theta}, 0.0, tMax, dt, opt,
                            [&](double, const StateVec<3>& y) {
                                if (k >= tab.nTimes) return;
                                float* out = tab.stateMut(i, k);
                                out[0] = wrapCoord(y[0], 1.0);
                                out[1] = wrapCoord(y[1], 1.0);
                                out[2] = wrapCoord(y[2], twoPi);
                                ++k;
                            });
    };
    if (exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic, 8)
        for (int i = 0; i < nSamples; ++i)
            run(i);
    } else {
        for (int i = 0; i < nSamples; ++i)
            run(i);
    }
    return tab;
}

TrajectoryTable flatGeodesicTable(int nSamples, double tMax, double dt, std::uint64_t seed) {
    TrajectoryTable tab;
    tab.nSamples = nSamples;
    tab.nTimes = static_cast<int>(std::floor(tMax / dt + 1e-9)) + 1;
    tab.dt = dt;
    tab.scale = {1.0, 1.0, 1.0};
    tab.period = {1.0, 1.0, twoPi};
    tab.data.resize(static_cast<std::size_t>(nSamples) * tab.nTimes * 3);
    const HaltonSampler sampler(seed);
    for (int i = 0; i < nSamples; ++i) {
        const std::array<double, 3> u = sampler.point(i);
        const double alpha = twoPi * u[2];
        const double vx = std::cos(alpha), vy = std::sin(alpha);
        for (int k = 0; k < tab.nTimes; ++k) {
            const double t = k * dt;
            float* out = tab.stateMut(i, k);
            out[0] = wrapCoord(u[0] + t * vx, 1.0);
            out[1] = wrapCoord(u[1] + t * vy, 1.0);
            out[2] = static_cast<float>(alpha);
        }
    }
    return tab;
}

TrajectoryTable kroneckerTable(int nSamples, double tMax, double dt, std::uint64_t seed,
                               std::array<double, 2> omega) {
    TrajectoryTable tab;
    tab.nSamples = nSamples;
    tab.nTimes = static_cast<int>(std::floor(tMax / dt + 1e-9)) + 1;
    tab.dt = dt;
    tab.scale = {1.0, 1.0, 0.0};
    tab.period = {1.0, 1.0, 0.0};
    tab.data.resize(static_cast<std::size_t>(nSamples) * tab.nTimes * 3);
    const HaltonSampler sampler(seed);
    for (int i = 0; i < nSamples; ++i) {
        const std::array<double, 3> u = sampler.point(i);
        for (int k = 0; k < tab.nTimes; ++k) {
            const double t = k * dt;
            float* out = tab.stateMut(i, k);
            out[0] = wrapCoord(u[0] + t * omega[0], 1.0);
            out[1] = wrapCoord(u[1] + t * omega[1], 1.0);
            out[2] = 0.0f;
        }
    }
    return tab;
}

TrajectoryTable twistFamilyTable(int nSamples, double tMax, double dt, std::uint64_t seed,
                                 int rank) {
    if (rank != 0 && rank != 1)
        throw ValidationError("twistFamilyTable: rank must be 0 or 1");
    TrajectoryTable tab;
    tab.nSamples = nSamples;
    tab.nTimes = static_cast<int>(std::floor(tMax / dt + 1e-9)) + 1;
    tab.dt = dt;
    tab.scale = {1.0, 1.0, 1.0};
    tab.period = {1.0, 1.0, 0.0}; // the action coordinate is linear
    tab.data.resize(static_cast<std::size_t>(nSamples) * tab.nTimes * 3);
    const HaltonSampler sampler(seed);
    const double om0 = 1.0, om1fix = 0.5 * (std::sqrt(5.0) - 1.0);
    for (int i = 0; i < nSamples; ++i) {
        const std::array<double, 3> u = sampler.point(i);
        const double I = u[2];
        const double w1 = rank == 1 ? I : om1fix;
        for (int k = 0; k < tab.nTimes; ++k) {
            const double t = k * dt;
            float* out = tab.stateMut(i, k);
            out[0] = wrapCoord(u[0] + t * om0, 1.0);
            out[1] = wrapCoord(u[1] + t * w1, 1.0);
            out[2] = static_cast<float>(I);
        }
    }
    return tab;
}

int separatedCount(const TrajectoryTable& table, double t, double eps) {
    if (eps <= 0)
        throw ValidationError("separatedCount: eps must be positive");
    const int kMax = table.timeIndexFor(t);
    std::vector<int> accepted;
    accepted.reserve(256);
    for (int i = 0; i < table.nSamples; ++i) {
        bool keep = true;
        for (int a : accepted) {
            if (!table.separated(i, a, kMax, eps)) {
                keep = false;
                break;
            }
        }
        if (keep) accepted.push_back(i);
    }
    return static_cast<int>(accepted.size());
}

SeparationTable separationTable(const TrajectoryTable& table, const std::vector<double>& tList,
                                const std::vector<double>& epsList, Exec exec) {
    SeparationTable st;
    st.tList = tList;
    st.epsList = epsList;
    st.counts.assign(epsList.size(), std::vector<int>(tList.size(), 0));
    const int nCells = static_cast<int>(epsList.size() * tList.size());
    auto cell = [&](int c) {
        const int e = c / static_cast<int>(tList.size());
        const int ti = c % static_cast<int>(tList.size());
        st.counts[e][ti] = separatedCount(table, tList[ti], epsList[e]);
    };
    if (exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic)
        for (int c = 0; c < nCells; ++c)
            cell(c);
    } else {
        for (int c = 0; c < nCells; ++c)
            cell(c);
    }
    return st;
}

EntropyEstimate polyEntropyEstimate(const TrajectoryTable& table,
                                    const std::vector<double>& epsList, double tLo,
                                    double tHi, int nT, Exec exec) {
    if (tLo <= 0 || tHi <= tLo)
        throw ValidationError("polyEntropyEstimate: bad window");
    EntropyEstimate est;
    est.tLo = tLo;
    est.tHi = tHi;
    std::vector<double> tList(nT);
    for (int i = 0; i < nT; ++i)
        tList[i] = tLo * std::pow(tHi / tLo, static_cast<double>(i) / (nT - 1));
    est.table = separationTable(table, tList, epsList, exec);

    const int ceiling = table.nSamples / 4;
    est.hPol = 0;
    for (std::size_t e = 0; e < epsList.size(); ++e) {
        EntropyEstimate::PerEps pe;
        pe.eps = epsList[e];
        pe.countAtEnd = est.table.counts[e].back();
        if (pe.countAtEnd >= ceiling)
            throw SaturatedError("polyEntropyEstimate: counts at eps=" +
                                 std::to_string(pe.eps) + " reach the sample ceiling " +
                                 std::to_string(ceiling));
        std::vector<double> lx(nT), ly(nT);
        for (int i = 0; i < nT; ++i) {
            lx[i] = std::log(tList[i]);
            ly[i] = std::log(static_cast<double>(est.table.counts[e][i]));
        }
        const LineFit f = fitLine(lx, ly);
        pe.slope = f.slope;
        pe.r2 = f.r2;
        est.perEps.push_back(pe);
        est.hPol = std::max(est.hPol, pe.slope);
    }
    return est;
}

TheoremOneReport theoremOneCheck(double tauHat, double hPolHat, double slack) {
    TheoremOneReport rep;
    rep.tauHat = tauHat;
    rep.hPol = hPolHat;
    rep.slack = slack;
    rep.holds = tauHat <= hPolHat + 1.0 + slack;
    if (!rep.holds)
        throw InequalityViolatedError("theoremOneCheck: " + std::to_string(tauHat) + " > " +
                                      std::to_string(hPolHat) + " + 1 + " +
                                      std::to_string(slack));
    return rep;
}

} // namespace revtor
