#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "revtor/dynamics.hpp"
#include "revtor/ode.hpp"
#include "revtor/orbits.hpp"

using namespace revtor;

namespace {

ProfileCurve canonical() {
    TrigSeries x;
    x.a0 = 2.0;
    x.cosCoef = {1.0};
    TrigSeries y;
    y.sinCoef = {1.0};
    return makeProfile(x, y);
}

// return time of phiBar through one full turn, by direct integration
double returnTimeOracle(const ProfileCurve& p, const CriticalCircle& c) {
    auto rhs = [&p, e = c.e](double, const StateVec<3>& y, StateVec<3>& dy) {
        dy = levelField(p, LevelState{y[0], y[1], y[2], e});
    };
    OdeOptions opt;
    opt.relTol = 1e-12;
    opt.absTol = 1e-12;
    return integrateToCrossing<3>(
        rhs, {0.0, c.sCrit, c.thetaBranch}, 0.0, 1e4,
        [](const StateVec<3>& y) { return std::abs(y[0]); }, 1.0, opt);
}

const ProfileCurve& canon() {
    static const ProfileCurve p = canonical();
    return p;
}

CriticalCircle findCircle(const std::vector<CriticalCircle>& cs, double xValue,
                          double theta) {
    for (const auto& c : cs)
        if (std::abs(c.xValue - xValue) < 1e-9 && std::abs(c.thetaBranch - theta) < 1e-9)
            return c;
    REQUIRE(false);
    return cs.front();
}

} // namespace

TEST_CASE("canonical circles: count, kinds, and integrated return times") {
    const auto circles = criticalCircles(canon(), 0.5, 1e-12);
    REQUIRE(circles.size() == 4);

    const CriticalCircle hyp = findCircle(circles, 1.0, 0.0);
    CHECK(hyp.kind == CriticalCircle::Kind::hyperbolic);
    CHECK(hyp.period == doctest::Approx(twoPi).epsilon(1e-12));
    CHECK(returnTimeOracle(canon(), hyp) == doctest::Approx(hyp.period).epsilon(1e-8));
    // golden multiplier, frozen from the first verified computation; equals
    // exp(period) here since the transverse rate is exactly 1
    CHECK(std::abs(hyp.floquet[2]) == doctest::Approx(535.49165552476473).epsilon(1e-9));

    const CriticalCircle ell = findCircle(circles, 3.0, 0.0);
    CHECK(ell.kind == CriticalCircle::Kind::elliptic);
    CHECK(returnTimeOracle(canon(), ell) == doctest::Approx(ell.period).epsilon(1e-8));
}

TEST_CASE("doubling the energy contracts every period by sqrt(2)") {
    const auto a = criticalCircles(canon(), 0.5, 1e-10);
    const auto b = criticalCircles(canon(), 1.0, 1e-10);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        CHECK(b[i].period == doctest::Approx(a[i].period / std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("monodromy spectrum matches the constant-block exponential") {
    const auto circles = criticalCircles(canon(), 0.5, 1e-12);
    for (const auto& c : circles) {
        // transverse block is constant along the circle: multipliers
        // exp(+-T sqrt(2e x''/(r^2 x)))
        const double mu2 =
            2.0 * c.e * canon().ddx(c.sCrit) / (std::pow(canon().r(c.sCrit), 2) * c.xValue);
        const Mat3 M = monodromyMatrix(canon(), c, 1e-12);
        CHECK(std::abs(det3(M) - 1.0) < 1e-6);
        if (c.kind == CriticalCircle::Kind::hyperbolic) {
            const double lambda = std::exp(c.period * std::sqrt(mu2));
            CHECK(std::abs(c.floquet[2]) == doctest::Approx(lambda).epsilon(1e-6));
            CHECK(std::abs(c.floquet[0]) == doctest::Approx(1.0 / lambda).epsilon(1e-6));
            CHECK(std::abs(c.floquet[2].imag()) < 1e-8 * std::abs(c.floquet[2]));
        } else {
            const double alpha = c.period * std::sqrt(-mu2);
            std::complex<double> rot = c.floquet[0];
            for (const auto& L : c.floquet) {
                CHECK(std::abs(std::abs(L) - 1.0) < 1e-6);
                if (L.imag() > rot.imag()) rot = L;
            }
            const double alphaMod = std::abs(std::remainder(alpha, twoPi));
            CHECK(std::abs(std::arg(rot)) == doctest::Approx(alphaMod).epsilon(1e-6));
        }
    }
}

TEST_CASE("spectrum is stable under halving the integrator tolerance") {
    const auto circles = criticalCircles(canon(), 0.5, 1e-10);
    for (const auto& c : circles) {
        const auto eig1 = monodromy(canon(), c, 1e-10);
        const auto eig2 = monodromy(canon(), c, 5e-11);
        for (int k = 0; k < 3; ++k) {
            // match each eigenvalue to its closest partner
            double best = 1e300;
            for (int j = 0; j < 3; ++j)
                best = std::min(best, std::abs(eig1[k] - eig2[j]));
            CHECK(best <= 1e-6 * std::max(1.0, std::abs(eig1[k])));
        }
    }
}

TEST_CASE("theta = 0 and theta = pi circles have identical periods and spectra") {
    const auto circles = criticalCircles(canon(), 0.5, 1e-12);
    for (const auto& c : circles) {
        if (c.thetaBranch != 0.0) continue;
        const CriticalCircle mirror = findCircle(circles, c.xValue, pi);
        CHECK(mirror.period == doctest::Approx(c.period).epsilon(1e-12));
        for (int k = 0; k < 3; ++k)
            CHECK(std::abs(std::abs(mirror.floquet[k]) - std::abs(c.floquet[k])) < 1e-8 *
                      std::max(1.0, std::abs(c.floquet[k])));
    }
}

TEST_CASE("analytic and Floquet classifications agree on random profiles") {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> uni(0, 1);
    int built = 0;
    while (built < 5) {
        TrigSeries x;
        x.a0 = 1.8 + 1.4 * uni(rng);
        x.cosCoef = {0.35 + 0.55 * uni(rng), 0.5 * uni(rng) - 0.25};
        x.sinCoef = {0.5 * uni(rng) - 0.25};
        TrigSeries y;
        y.sinCoef = {0.8 + 0.5 * uni(rng)};
        y.cosCoef = {0.6 * uni(rng) - 0.3};
        try {
            const ProfileCurve p = makeProfile(x, y);
            ++built;
            for (const auto& c : criticalCircles(p, 0.5, 1e-10)) {
                const auto fk = floquetKind(c.floquet);
                REQUIRE(fk.has_value());
                CHECK(*fk == c.kind);
            }
        } catch (const ValidationError&) {
            continue;
        }
    }
}

TEST_CASE("separatrix graph holds the Clairaut value and limits onto the circle") {
    const ProfileCurve& p = canon();
    const double e = 0.5;
    const double target = twoPi * std::sqrt(2 * e) * p.minX();
    for (const SeparatrixBranch br :
         {SeparatrixBranch::zeroPlus, SeparatrixBranch::zeroMinus, SeparatrixBranch::piPlus,
          SeparatrixBranch::piMinus}) {
        const SeparatrixGraph g = separatrix(p, e, br, 101);
        for (std::size_t k = 0; k < g.sSamples.size(); ++k) {
            const double P = twoPi * std::sqrt(2 * e) * p.x(g.sSamples[k]) *
                             std::cos(g.thetaSamples[k]);
            CHECK(std::abs(P - g.clairautValue) < 1e-10);
        }
        CHECK(std::abs(std::abs(g.clairautValue) - target) < 1e-12);
    }

    // sample index 50 of 101 lands on s = 0 for the canonical profile
    const SeparatrixGraph g = separatrix(p, e, SeparatrixBranch::zeroPlus, 101);
    CHECK(g.sSamples[50] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(g.thetaSamples[50] == doctest::Approx(std::acos(1.0 / 3.0)).epsilon(1e-12));
    // theta tends to the limit circle value near the excluded parameter
    CHECK(std::abs(g.thetaSamples[0]) < 0.1);
    CHECK(std::abs(g.thetaSamples.back()) < 0.1);
}

TEST_CASE("a trajectory started on the separatrix shadows the sampled graph") {
    const ProfileCurve& p = canon();
    const SeparatrixGraph g = separatrix(p, 0.5, SeparatrixBranch::zeroPlus, 1024);
    // start away from the circle, where the graph is well resolved
    const std::size_t k0 = 512;
    const LevelState ls0{0.0, g.sSamples[k0], g.thetaSamples[k0], 0.5};
    const LevelTrajectory tr = integrate(p, ls0, 10.0, 1e-12, 0.05);

    auto thetaOnGraph = [&](double s) {
        // piecewise-linear interpolation in the unwrapped coordinate
        double u = s - g.sCrit1;
        u -= std::floor(u);
        const double pos = u * g.sSamples.size() - 0.5;
        const long k = std::clamp<long>(static_cast<long>(std::floor(pos)), 0,
                                        static_cast<long>(g.sSamples.size()) - 2);
        const double w = pos - k;
        return (1 - w) * g.thetaSamples[k] + w * g.thetaSamples[k + 1];
    };
    for (const auto& st : tr.states) {
        const double dTheta = std::abs(st[2] - thetaOnGraph(st[1]));
        CHECK(dTheta < 1e-4);
    }
}
