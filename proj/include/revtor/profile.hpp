#pragma once

#include <vector>

#include "revtor/errors.hpp"
#include "revtor/trig_series.hpp"

namespace revtor {

struct NotPositiveError : ValidationError {
    using ValidationError::ValidationError;
};
struct NotMorseError : ValidationError {
    using ValidationError::ValidationError;
};
struct RepeatedCriticalValueError : ValidationError {
    using ValidationError::ValidationError;
};
struct NotImmersedError : ValidationError {
    using ValidationError::ValidationError;
};

struct CriticalPoint {
    enum class Kind { minimum, maximum };
    double sCrit;      // in [0, 1)
    double xValue;     // x(sCrit)
    Kind kind;         // minimum iff secondDeriv > 0
    double secondDeriv;
};

/// All pointwise meridian data at one parameter value.
struct Geometry {
    double x, dx, ddx, dy, r;
};

/// Geometry plus the derivatives needed by variational flows.
struct GeometryJet {
    double x, dx, ddx;
    double dy, ddy;
    double r, dr;
};

/// A validated 1-periodic meridian profile (x, y), x > 0 Morse with distinct
/// critical values each attained once, and r = sqrt(x'^2 + y'^2) > 0.
/// Immutable after construction; evaluation is pure and thread-safe.
class ProfileCurve {
public:
    const TrigSeries& xSeries() const { return x_; }
    const TrigSeries& ySeries() const { return y_; }

    /// Critical points of x ordered by increasing critical value.
    const std::vector<CriticalPoint>& criticalPoints() const { return crit_; }

    double minX() const { return crit_.front().xValue; }
    double maxX() const { return crit_.back().xValue; }
    double minR() const { return minR_; }
    double maxR() const { return maxR_; }

    /// Parameter of the global minimum of x.
    double sAtMinX() const;

    double x(double s) const { return x_.eval(s); }
    double dx(double s) const { return dx_.eval(s); }
    double ddx(double s) const { return ddx_.eval(s); }
    double y(double s) const { return y_.eval(s); }
    double dy(double s) const { return dy_.eval(s); }
    double r(double s) const;

    Geometry geometry(double s) const;
    GeometryJet jet(double s) const;

private:
    friend ProfileCurve makeProfile(const TrigSeries&, const TrigSeries&, double);
    ProfileCurve() = default;

    TrigSeries x_, y_, dx_, ddx_, dddx_, dy_, ddy_;
    std::vector<CriticalPoint> crit_;
    double minR_ = 0.0, maxR_ = 0.0;
};

/// Validate a profile; `tolerance` governs root refinement of x'.
/// Throws NotPositiveError, NotMorseError, RepeatedCriticalValueError or
/// NotImmersedError.
ProfileCurve makeProfile(const TrigSeries& xSeries, const TrigSeries& ySeries,
                         double tolerance = 1e-12);

/// (x, x', x'', y', r) at s; 1-periodic, exact term-by-term evaluation.
inline Geometry evalGeometry(const ProfileCurve& p, double s) { return p.geometry(s); }

} // namespace revtor
