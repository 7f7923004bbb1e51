#pragma once

#include <array>
#include <optional>
#include <utility>
#include <vector>

#include "revtor/eikonal.hpp"
#include "revtor/fit.hpp"
#include "revtor/profile.hpp"
#include "revtor/stable_norm.hpp"

namespace revtor {

struct NotGeneratingError : ValidationError {
    using ValidationError::ValidationError;
};
struct NoConvergenceTrendError : NumericalError {
    using NumericalError::NumericalError;
};

/// A nondecreasing (parameter, count-or-volume) series, shared by ball
/// volumes, group growth and separated-set counts.
struct GrowthSeries {
    std::vector<double> param;
    std::vector<double> value;
};

/// Vol B(source, r) for each r: sum of (area weight * h^2) over grid cells
/// with distance < r.
GrowthSeries ballVolume(const DistanceField& field, const std::vector<double>& rList);

/// Least-squares slope of log(value) against log(parameter) over params in
/// [windowLo, windowHi].
LineFit growthExponent(const GrowthSeries& series, double windowLo, double windowHi);

/// Riemannian volume of the fundamental domain, integral of 2 pi x r over s.
double fundamentalVolume(const ProfileCurve& p, double relTol = 1e-12);

struct BuragoIvanovReport {
    double vg = 0;           // fundamental-domain volume
    double ballArea = 0;     // stable-norm unit-ball area
    double predicted = 0;    // vg * ballArea
    GrowthSeries ratios;     // (r, Vol B / r^2)
    double finalRatio = 0;
    double lastDecadeSpread = 0;
    double relGapToPredicted = 0;
    bool pass = false;
};

/// Vol B(x, r) / r^2 must trend toward vg * ballArea: spread over the last
/// decade of r below `spreadTol` and the final value within `gapTol` of the
/// prediction.
BuragoIvanovReport buragoIvanovCheck(const ProfileCurve& p, const DistanceField& field,
                                     double ballArea, const std::vector<double>& rList,
                                     double spreadTol = 0.10, double gapTol = 0.10);

/// Ball cardinalities of the Cayley graph of Z^rank (rank <= 3) under the
/// word metric of the given generating set, by breadth-first search.
GrowthSeries groupGrowth(int rank, const std::vector<std::array<int, 3>>& generators,
                         int kMax);

/// Searches the fixed (lambda, C) grid for one pair realizing mutual
/// domination  a(t) <= lambda b(lambda t + C) + C  and symmetrically, over
/// the overlapping parameter ranges. Failure is a value, not an error.
std::optional<std::pair<double, double>>
weakEquivalenceWitness(const GrowthSeries& a, const GrowthSeries& b);

} // namespace revtor
