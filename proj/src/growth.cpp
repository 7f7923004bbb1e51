#include "revtor/growth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>

#include "revtor/quadrature.hpp"

namespace revtor {

GrowthSeries ballVolume(const DistanceField& field, const std::vector<double>& rList) {
    if (!std::is_sorted(rList.begin(), rList.end()))
        throw ValidationError("ballVolume: rList must be ascending");
    if (!rList.empty() && rList.back() > field.rMax)
        throw ValidationError("ballVolume: r beyond the validated radius");
    std::vector<double> bins(rList.size(), 0.0);
    const double cellArea = field.h * field.h;
    for (int j = 0; j < field.nS; ++j) {
        const double w = field.weight[j] * cellArea;
        for (int i = 0; i < field.nPhi; ++i) {
            const double d = field.value(i, j);
            const auto it = std::upper_bound(rList.begin(), rList.end(), d);
            if (it != rList.end())
                bins[static_cast<std::size_t>(it - rList.begin())] += w;
        }
    }
    GrowthSeries g;
    g.param = rList;
    g.value.resize(rList.size());
    double acc = 0;
    for (std::size_t k = 0; k < rList.size(); ++k) {
        acc += bins[k];
        g.value[k] = acc;
    }
    return g;
}

LineFit growthExponent(const GrowthSeries& series, double windowLo, double windowHi) {
    std::vector<double> lx, ly;
    for (std::size_t k = 0; k < series.param.size(); ++k) {
        if (series.param[k] < windowLo || series.param[k] > windowHi) continue;
        if (series.param[k] <= 0 || series.value[k] <= 0) continue;
        lx.push_back(std::log(series.param[k]));
        ly.push_back(std::log(series.value[k]));
    }
    if (lx.size() < 2)
        throw DegenerateWindowError("growthExponent: window holds fewer than two points");
    return fitLine(lx, ly);
}

double fundamentalVolume(const ProfileCurve& p, double relTol) {
    return integrate([&p](double s) { return twoPi * p.x(s) * p.r(s); }, 0.0, 1.0,
                     {relTol, 0.0});
}

BuragoIvanovReport buragoIvanovCheck(const ProfileCurve& p, const DistanceField& field,
                                     double ballArea, const std::vector<double>& rList,
                                     double spreadTol, double gapTol) {
    BuragoIvanovReport rep;
    rep.vg = fundamentalVolume(p);
    rep.ballArea = ballArea;
    rep.predicted = rep.vg * ballArea;

    const GrowthSeries vols = ballVolume(field, rList);
    rep.ratios.param = vols.param;
    rep.ratios.value.resize(vols.value.size());
    for (std::size_t k = 0; k < vols.value.size(); ++k)
        rep.ratios.value[k] = vols.value[k] / (vols.param[k] * vols.param[k]);

    rep.finalRatio = rep.ratios.value.back();
    const double decadeLo = rep.ratios.param.back() / 10.0;
    double lo = 1e300, hi = 0;
    for (std::size_t k = 0; k < rep.ratios.param.size(); ++k) {
        if (rep.ratios.param[k] < decadeLo) continue;
        lo = std::min(lo, rep.ratios.value[k]);
        hi = std::max(hi, rep.ratios.value[k]);
    }
    rep.lastDecadeSpread = hi / lo - 1.0;
    rep.relGapToPredicted = std::abs(rep.finalRatio - rep.predicted) / rep.predicted;
    if (rep.lastDecadeSpread > spreadTol)
        throw NoConvergenceTrendError("buragoIvanovCheck: Vol/r^2 spread " +
                                      std::to_string(rep.lastDecadeSpread) +
                                      " over the last decade");
    rep.pass = rep.relGapToPredicted <= gapTol;
    return rep;
}

GrowthSeries groupGrowth(int rank, const std::vector<std::array<int, 3>>& generators,
                         int kMax) {
    if (rank < 1 || rank > 3)
        throw ValidationError("groupGrowth: rank must be 1, 2 or 3");
    if (generators.empty() || kMax < 1)
        throw ValidationError("groupGrowth: need generators and kMax >= 1");

    int gMax = 1;
    for (const auto& g : generators)
        for (int d = 0; d < rank; ++d)
            gMax = std::max(gMax, std::abs(g[d]));
    const long side = 2L * kMax * gMax + 1;
    double cells = 1;
    for (int d = 0; d < rank; ++d)
        cells *= static_cast<double>(side);
    if (cells > 5e8)
        throw ValidationError("groupGrowth: lattice box too large");

    const long offset = static_cast<long>(kMax) * gMax;
    auto index = [&](const std::array<long, 3>& q) {
        long idx = 0;
        for (int d = 0; d < rank; ++d)
            idx = idx * side + (q[d] + offset);
        return static_cast<std::size_t>(idx);
    };

    std::vector<std::uint8_t> visited(static_cast<std::size_t>(cells), 0);
    std::deque<std::array<long, 3>> frontier;
    frontier.push_back({0, 0, 0});
    visited[index({0, 0, 0})] = 1;

    GrowthSeries series;
    series.param.reserve(kMax + 1);
    series.value.reserve(kMax + 1);
    series.param.push_back(0);
    series.value.push_back(1);
    double total = 1;

    for (int depth = 1; depth <= kMax; ++depth) {
        std::deque<std::array<long, 3>> next;
        for (const auto& q : frontier) {
            for (const auto& g : generators) {
                for (int sign : {+1, -1}) {
                    std::array<long, 3> nq = q;
                    bool inBox = true;
                    for (int d = 0; d < rank; ++d) {
                        nq[d] += sign * g[d];
                        if (std::abs(nq[d]) > offset) inBox = false;
                    }
                    if (!inBox) continue;
                    std::uint8_t& v = visited[index(nq)];
                    if (!v) {
                        v = 1;
                        next.push_back(nq);
                    }
                }
            }
        }
        total += static_cast<double>(next.size());
        series.param.push_back(depth);
        series.value.push_back(total);
        frontier.swap(next);
    }

    // the generating set must reach a whole fundamental box around the origin
    std::array<long, 3> probe{0, 0, 0};
    const int combos = rank == 1 ? 3 : rank == 2 ? 9 : 27;
    for (int c = 0; c < combos; ++c) {
        int cc = c;
        for (int d = 0; d < rank; ++d) {
            probe[d] = cc % 3 - 1;
            cc /= 3;
        }
        if (!visited[index(probe)])
            throw NotGeneratingError("groupGrowth: lattice box around the origin not covered");
    }
    return series;
}

namespace {

double stepEval(const GrowthSeries& s, double t) {
    const auto it = std::upper_bound(s.param.begin(), s.param.end(), t);
    if (it == s.param.begin())
        throw ValidationError("stepEval: t below the series range");
    return s.value[static_cast<std::size_t>(it - s.param.begin()) - 1];
}

bool dominates(const GrowthSeries& a, const GrowthSeries& b, double lambda, double C) {
    // a(t) <= lambda * b(lambda t + C) + C wherever both sides are defined;
    // the checkable window must reach at least half of a's range, otherwise
    // a large lambda could hide the divergence of incomparable series
    int checked = 0;
    double tMaxChecked = 0;
    for (std::size_t k = 0; k < a.param.size(); ++k) {
        const double t = a.param[k];
        const double tb = lambda * t + C;
        if (tb < b.param.front() || tb > b.param.back()) continue;
        ++checked;
        tMaxChecked = std::max(tMaxChecked, t);
        if (a.value[k] > lambda * stepEval(b, tb) + C) return false;
    }
    return checked >= 3 && tMaxChecked >= 0.5 * a.param.back();
}

} // namespace

std::optional<std::pair<double, double>>
weakEquivalenceWitness(const GrowthSeries& a, const GrowthSeries& b) {
    static constexpr double lambdas[] = {1, 1.5, 2, 3, 5, 8};
    static constexpr double cs[] = {0, 1, 5, 20, 100};
    for (double lambda : lambdas)
        for (double C : cs)
            if (dominates(a, b, lambda, C) && dominates(b, a, lambda, C))
                return std::make_pair(lambda, C);
    return std::nullopt;
}

} // namespace revtor
