#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "revtor/exec.hpp"
#include "revtor/profile.hpp"

namespace revtor {

struct SaturatedError : NumericalError {
    using NumericalError::NumericalError;
};
struct InequalityViolatedError : NumericalError {
    using NumericalError::NumericalError;
};

/// Coarse trajectories of N flow samples on a shared uniform time grid,
/// stored as three wrapped coordinates per state. The ambient distance is the
/// max over coordinates of (wrapped coordinate distance * scale); it is
/// equivalent to the geometric one, which is all entropy slopes need.
class TrajectoryTable {
public:
    int nSamples = 0;
    int nTimes = 0; // grid 0, dt, ..., (nTimes-1) dt
    double dt = 0;
    std::array<double, 3> scale{1, 1, 1};
    std::array<double, 3> period{1, 1, 1}; // 0 marks a linear coordinate
    std::vector<float> data;               // [sample][time][coord]

    const float* state(int sample, int k) const {
        return data.data() + (static_cast<std::size_t>(sample) * nTimes + k) * 3;
    }
    float* stateMut(int sample, int k) {
        return data.data() + (static_cast<std::size_t>(sample) * nTimes + k) * 3;
    }

    double stateDistance(int a, int b, int k) const;
    /// Dynamical metric: max over time-grid indices 0..kMax.
    double dynDistance(int a, int b, int kMax) const;
    /// True iff dynDistance(a, b, kMax) >= eps; scans from late times first
    /// and stops at the first witness.
    bool separated(int a, int b, int kMax, double eps) const;

    int timeIndexFor(double t) const;
};

/// Geodesic-flow samples on the energy level of a revolution torus, from a
/// seeded low-discrepancy point set, integrated in level coordinates.
TrajectoryTable revolutionFlowTable(const ProfileCurve& p, double e, int nSamples,
                                    double tMax, double dt, std::uint64_t seed,
                                    Exec exec = Exec::parallel, double tol = 1e-8);

/// Unit-speed straight-line flow on the flat unit 2-torus, state (x, y,
/// direction); closed form.
TrajectoryTable flatGeodesicTable(int nSamples, double tMax, double dt, std::uint64_t seed);

/// Single fixed translation flow on the 2-torus (no transverse family).
TrajectoryTable kroneckerTable(int nSamples, double tMax, double dt, std::uint64_t seed,
                               std::array<double, 2> omega);

/// Translation family (x, y, I) -> (x + t w1(I), y + t w2(I), I) with
/// frequency map of the given rank: rank 1 uses w = (1, I), rank 0 a
/// constant irrational pair.
TrajectoryTable twistFamilyTable(int nSamples, double tMax, double dt, std::uint64_t seed,
                                 int rank);

/// Size of the greedy maximal (t, eps)-separated subset of the samples, in
/// sample order; the accepted set is simultaneously an eps-cover of the
/// samples.
int separatedCount(const TrajectoryTable& table, double t, double eps);

struct SeparationTable {
    std::vector<double> tList;
    std::vector<double> epsList;
    std::vector<std::vector<int>> counts; // counts[epsIdx][tIdx]
};

SeparationTable separationTable(const TrajectoryTable& table, const std::vector<double>& tList,
                                const std::vector<double>& epsList,
                                Exec exec = Exec::parallel);

struct EntropyEstimate {
    struct PerEps {
        double eps = 0;
        double slope = 0;
        double r2 = 0;
        int countAtEnd = 0;
    };
    std::vector<PerEps> perEps;
    double hPol = 0;
    double tLo = 0, tHi = 0;
    SeparationTable table;
};

/// Per-epsilon log-log slopes of the separated counts over a trailing time
/// window, and their max as the entropy estimate. Throws SaturatedError when
/// a count reaches nSamples/4 inside the window.
EntropyEstimate polyEntropyEstimate(const TrajectoryTable& table,
                                    const std::vector<double>& epsList, double tLo,
                                    double tHi, int nT = 14, Exec exec = Exec::parallel);

struct TheoremOneReport {
    double tauHat = 0;
    double hPol = 0;
    double slack = 0;
    bool holds = false;
};

/// tauHat <= hPol + 1 + slack; throws InequalityViolatedError beyond slack.
TheoremOneReport theoremOneCheck(double tauHat, double hPolHat, double slack = 0.3);

} // namespace revtor
