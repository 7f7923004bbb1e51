#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>

#include "revtor/errors.hpp"

namespace revtor {

struct StepFailure : NumericalError {
    using NumericalError::NumericalError;
};

struct OdeOptions {
    double relTol = 1e-10;
    double absTol = 1e-12;
    double hMin = 1e-13;
    std::int64_t maxSteps = 200000000;
};

template <int N>
using StateVec = std::array<double, N>;

/// Dormand-Prince 5(4) embedded pair with FSAL and 4th-order dense output.
/// F has signature void(double t, const StateVec<N>&, StateVec<N>& dydt).
template <int N, class F>
class Dopri5 {
public:
    Dopri5(F f, const OdeOptions& opt = {}) : f_(f), opt_(opt) {}

    void init(double t0, const StateVec<N>& y0, double direction = 1.0) {
        t_ = tPrev_ = t0;
        y_ = yPrev_ = y0;
        f_(t_, y_, k_[0]);
        dir_ = direction;
        h_ = dir_ * 1e-4;
        steps_ = 0;
    }

    double t() const { return t_; }
    double tPrev() const { return tPrev_; }
    const StateVec<N>& y() const { return y_; }

    /// Advance one accepted step, not overshooting tLimit.
    void step(double tLimit) {
        if (dir_ * (tLimit - t_) <= 0.0) return;
        for (;;) {
            if (++steps_ > opt_.maxSteps)
                throw StepFailure("ode: step budget exhausted");
            if (std::abs(h_) < opt_.hMin * std::max(1.0, std::abs(t_)))
                throw StepFailure("ode: step size underflow at t=" + std::to_string(t_));
            double h = h_;
            if (dir_ * (t_ + h - tLimit) > 0.0) h = tLimit - t_;

            StateVec<N> ytmp;
            stage(ytmp, h, 1);
            stage(ytmp, h, 2);
            stage(ytmp, h, 3);
            stage(ytmp, h, 4);
            stage(ytmp, h, 5);      // k6 at t + h
            StateVec<N> ynew;
            for (int i = 0; i < N; ++i)
                ynew[i] = y_[i] + h * (a7_[0] * k_[0][i] + a7_[2] * k_[2][i] + a7_[3] * k_[3][i] +
                                       a7_[4] * k_[4][i] + a7_[5] * k_[5][i]);
            f_(t_ + h, ynew, k_[6]);

            double err = 0.0;
            for (int i = 0; i < N; ++i) {
                const double e = h * (e_[0] * k_[0][i] + e_[2] * k_[2][i] + e_[3] * k_[3][i] +
                                      e_[4] * k_[4][i] + e_[5] * k_[5][i] + e_[6] * k_[6][i]);
                const double sc = opt_.absTol + opt_.relTol * std::max(std::abs(y_[i]), std::abs(ynew[i]));
                err += (e / sc) * (e / sc);
            }
            err = std::sqrt(err / N);

            const double fac = std::clamp(0.9 * std::pow(std::max(err, 1e-30), -0.2), 0.2, 5.0);
            if (err <= 1.0) {
                makeDense(h, ynew);
                tPrev_ = t_;
                yPrev_ = y_;
                t_ += h;
                y_ = ynew;
                k_[0] = k_[6]; // FSAL
                h_ = dir_ * std::min(std::abs(h * fac), std::abs(h_) * 5.0);
                return;
            }
            h_ = h * fac;
        }
    }

    /// Interpolant on the last accepted step [tPrev, t].
    void dense(double tq, StateVec<N>& out) const {
        const double h = t_ - tPrev_;
        const double th = h == 0.0 ? 0.0 : (tq - tPrev_) / h;
        const double th1 = 1.0 - th;
        for (int i = 0; i < N; ++i)
            out[i] = rc1_[i] + th * (rc2_[i] + th1 * (rc3_[i] + th * (rc4_[i] + th1 * rc5_[i])));
    }

private:
    void stage(StateVec<N>& ytmp, double h, int stageIdx) {
        static constexpr double a[6][6] = {
            {0, 0, 0, 0, 0, 0},
            {1.0 / 5, 0, 0, 0, 0, 0},
            {3.0 / 40, 9.0 / 40, 0, 0, 0, 0},
            {44.0 / 45, -56.0 / 15, 32.0 / 9, 0, 0, 0},
            {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729, 0, 0},
            {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656, 0}};
        static constexpr double c[7] = {0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
        for (int i = 0; i < N; ++i) {
            double acc = 0.0;
            for (int j = 0; j < stageIdx; ++j) acc += a[stageIdx][j] * k_[j][i];
            ytmp[i] = y_[i] + h * acc;
        }
        f_(t_ + c[stageIdx] * h, ytmp, k_[stageIdx]);
    }

    void makeDense(double h, const StateVec<N>& ynew) {
        static constexpr double d1 = -12715105075.0 / 11282082432.0;
        static constexpr double d3 = 87487479700.0 / 32700410799.0;
        static constexpr double d4 = -10690763975.0 / 1880347072.0;
        static constexpr double d5 = 701980252875.0 / 199316789632.0;
        static constexpr double d6 = -1453857185.0 / 822651844.0;
        static constexpr double d7 = 69997945.0 / 29380423.0;
        for (int i = 0; i < N; ++i) {
            const double ydiff = ynew[i] - y_[i];
            const double bspl = h * k_[0][i] - ydiff;
            rc1_[i] = y_[i];
            rc2_[i] = ydiff;
            rc3_[i] = bspl;
            rc4_[i] = ydiff - h * k_[6][i] - bspl;
            rc5_[i] = h * (d1 * k_[0][i] + d3 * k_[2][i] + d4 * k_[3][i] + d5 * k_[4][i] +
                           d6 * k_[5][i] + d7 * k_[6][i]);
        }
    }

    static constexpr double a7_[6] = {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192,
                                      -2187.0 / 6784, 11.0 / 84};
    static constexpr double e_[7] = {71.0 / 57600, 0.0, -71.0 / 16695, 71.0 / 1920,
                                     -17253.0 / 339200, 22.0 / 525, -1.0 / 40};

    F f_;
    OdeOptions opt_;
    double t_ = 0, tPrev_ = 0, h_ = 0, dir_ = 1;
    std::int64_t steps_ = 0;
    StateVec<N> y_{}, yPrev_{};
    StateVec<N> k_[7]{};
    StateVec<N> rc1_{}, rc2_{}, rc3_{}, rc4_{}, rc5_{};
};

/// Integrate y' = f(t, y) from t0 to t1, invoking onSample(t, y) at
/// t0, t0+dt, t0+2dt, ..., t1 via dense output.
template <int N, class F, class CB>
void integrateSampled(F f, const StateVec<N>& y0, double t0, double t1, double dt,
                      const OdeOptions& opt, CB onSample) {
    Dopri5<N, F> stepper(f, opt);
    const double dir = t1 >= t0 ? 1.0 : -1.0;
    stepper.init(t0, y0, dir);
    onSample(t0, y0);
    long i = 1;
    double tNext = t0 + dir * dt * i;
    const double slack = 1e-9 * std::max(1.0, std::abs(t1 - t0));
    while (dir * (t1 - stepper.t()) > 1e-14 * std::max(1.0, std::abs(t1))) {
        stepper.step(t1);
        while (dir * (tNext - t1) <= slack && dir * (stepper.t() - tNext) >= -slack) {
            // clamp rounding overshoot of the final sample onto t1
            const double tq = dir * (tNext - t1) > 0 ? t1 : tNext;
            StateVec<N> ys;
            stepper.dense(tq, ys);
            onSample(tq, ys);
            ++i;
            tNext = t0 + dir * dt * i;
        }
    }
}

/// Integrate forward until the scalar monitor m(y) first reaches `target`
/// (m strictly increasing through the crossing). Returns the crossing time
/// and writes the crossing state; throws StepFailure if not reached by tMax.
template <int N, class F, class M>
double integrateToCrossing(F f, const StateVec<N>& y0, double t0, double tMax, M monitor,
                           double target, const OdeOptions& opt, StateVec<N>* yOut = nullptr) {
    Dopri5<N, F> stepper(f, opt);
    stepper.init(t0, y0, 1.0);
    double mPrev = monitor(y0);
    while (stepper.t() < tMax) {
        stepper.step(tMax);
        const double mNow = monitor(stepper.y());
        if (mPrev < target && mNow >= target) {
            double lo = stepper.tPrev(), hi = stepper.t();
            StateVec<N> ym;
            for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, hi); ++it) {
                const double mid = 0.5 * (lo + hi);
                stepper.dense(mid, ym);
                if (monitor(ym) >= target)
                    hi = mid;
                else
                    lo = mid;
            }
            const double tc = 0.5 * (lo + hi);
            if (yOut) stepper.dense(tc, *yOut);
            return tc;
        }
        mPrev = mNow;
    }
    throw StepFailure("ode: monitor never reached target before tMax");
}

} // namespace revtor
