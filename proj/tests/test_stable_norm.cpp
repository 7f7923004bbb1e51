#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "revtor/stable_norm.hpp"

using namespace revtor;

namespace {

const ProfileCurve& canon() {
    static const ProfileCurve p = [] {
        TrigSeries x;
        x.a0 = 2.0;
        x.cosCoef = {1.0};
        TrigSeries y;
        y.sinCoef = {1.0};
        return makeProfile(x, y);
    }();
    return p;
}

const RotationCurve& canonCurve() {
    static const RotationCurve c = [] {
        RotationCurve c0 = rotationCurve(canon(), 160);
        attachEndpoint(c0, extendEndpoint(canon(), c0));
        return c0;
    }();
    return c;
}

const StableNormBall& canonBall() {
    static const StableNormBall b = stableUnitBall(canonCurve());
    return b;
}

} // namespace

TEST_CASE("rotation curve starts at the meridian vector and flattens at the edge") {
    const RotationCurve& c = canonCurve();
    CHECK(c.rho0 == doctest::Approx(twoPi).epsilon(1e-13));
    CHECK(c.X[0] == 0.0);
    CHECK(c.Y[0] == doctest::Approx(1.0 / twoPi).epsilon(1e-10));
    for (std::size_t k = 1; k < c.rho.size(); ++k)
        CHECK(c.X[k] > c.X[k - 1]); // monotone observed on the grid
    CHECK(c.Y.back() < c.Y[c.Y.size() * 3 / 4]);
    CHECK(c.Y.back() > 0);
}

TEST_CASE("endpoint: extrapolation matches the waist-circle frequency") {
    const EndpointEstimate ep = extendEndpoint(canon(), canonCurve());
    CHECK(ep.orbitFrequency == doctest::Approx(1.0 / twoPi).epsilon(1e-12));
    CHECK(ep.relGap < 0.01);
    CHECK(ep.combined == doctest::Approx(1.0 / twoPi).epsilon(0.01));
    // printed reference value is 1/(4 pi^2 rho0); the computed endpoint sits
    // a factor 4 pi^2 above it
    CHECK(ep.paperConstant == doctest::Approx(1.0 / (8 * pi * pi * pi)).epsilon(1e-12));
    CHECK(ep.ratioToPaper == doctest::Approx(4 * pi * pi).epsilon(0.01));
}

TEST_CASE("unit ball is convex, doubly symmetric, and has positive area") {
    const StableNormBall& b = canonBall();
    CHECK(b.area > 0);
    // golden value, frozen from the first verified computation (the
    // quadrature route agrees to 6e-5)
    CHECK(b.area == doctest::Approx(0.0621047).epsilon(2e-4));
    for (const auto& v : b.vertices) {
        bool foundY = false, foundXY = false;
        for (const auto& u : b.vertices) {
            if (std::abs(u[0] - v[0]) < 1e-12 && std::abs(u[1] + v[1]) < 1e-12) foundY = true;
            if (std::abs(u[0] + v[0]) < 1e-12 && std::abs(u[1] + v[1]) < 1e-12) foundXY = true;
        }
        CHECK(foundY);
        CHECK(foundXY);
    }
}

TEST_CASE("synthetic ellipse ball has area pi a b") {
    const StableNormBall e = syntheticEllipseBall(1.5, 0.4);
    CHECK(e.area == doctest::Approx(pi * 1.5 * 0.4).epsilon(1e-4));
}

TEST_CASE("gauge values on the canonical ball") {
    const StableNormBall& b = canonBall();
    // meridian class: the ball's top vertex is (0, 1/(2 pi))
    CHECK(stableNorm(b, {0.0, 1.0}) == doctest::Approx(twoPi).epsilon(1e-8));
    // equator class: right vertex is the endpoint (1/(2 pi), 0)
    CHECK(stableNorm(b, {1.0, 0.0}) == doctest::Approx(twoPi).epsilon(0.01));
    // homogeneity
    const double n1 = stableNorm(b, {0.3, -0.7});
    CHECK(stableNorm(b, {0.9, -2.1}) == doctest::Approx(3 * n1).epsilon(1e-12));
    // vertices have gauge 1
    for (std::size_t k = 0; k < b.vertices.size(); k += 97)
        CHECK(stableNorm(b, b.vertices[k]) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("two routes to the enclosed area agree") {
    double tail = 0;
    const double quad = asymptoticVolume(canon(), 1e-8, 1e-8, &tail);
    CHECK(quad > 0);
    CHECK(std::abs(quad - canonBall().area) / canonBall().area < 1e-3);
    CHECK(tail < 0.05 * quad);
}

TEST_CASE("profile scaling x,y -> c x, c y rescales the area by 1/c^2") {
    TrigSeries x;
    x.a0 = 4.0;
    x.cosCoef = {2.0};
    TrigSeries y;
    y.sinCoef = {2.0};
    const ProfileCurve doubled = makeProfile(x, y);
    RotationCurve c = rotationCurve(doubled, 128);
    attachEndpoint(c, extendEndpoint(doubled, c));
    const StableNormBall b = stableUnitBall(c);
    CHECK(b.area == doctest::Approx(canonBall().area / 4.0).epsilon(1e-3));
}

TEST_CASE("edge asymptotics: log fits, pole fit, and the endpoint ratio") {
    const AsymptoticsReport rep = verifyAsymptotics(canon(), canonCurve());
    CHECK(rep.tauLaw.r2 > 0.999);
    CHECK(rep.phiLaw.r2 > 0.999);
    CHECK(rep.tauPrimeLaw.r2 > 0.999);
    // fitted tau coefficient is 1 for the canonical profile
    CHECK(rep.tauLaw.fitted == doctest::Approx(1.0).epsilon(0.02));
    CHECK(rep.tauLaw.ratio == doctest::Approx(std::sqrt(2.0)).epsilon(0.02));
    CHECK(rep.endpointFromFits ==
          doctest::Approx(canonCurve().endpointX).epsilon(0.01));
    CHECK(rep.tauPrimeSpread < 0.02);
}

TEST_CASE("the ball construction stays convex across random profiles") {
    std::mt19937_64 rng(331);
    std::uniform_real_distribution<double> uni(0, 1);
    int built = 0;
    while (built < 10) {
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
            RotationCurve c = rotationCurve(p, 96);
            attachEndpoint(c, extendEndpoint(p, c));
            // stableUnitBall throws NonConvexError on any reflex vertex
            const StableNormBall b = stableUnitBall(c);
            CHECK(b.area > 0);
        } catch (const ValidationError&) {
            continue;
        }
    }
}

TEST_CASE("convex conjugate: Euclidean ball is self-dual, biconjugate returns q") {
    const StableNormBall disc = syntheticEllipseBall(1.0, 1.0, 1024);
    for (const std::array<double, 2> c :
         {std::array<double, 2>{0.7, 0.2}, std::array<double, 2>{-1.1, 0.5}}) {
        const double alpha = convexConjugateAt(disc, c, 1440);
        const double expected = 0.5 * (c[0] * c[0] + c[1] * c[1]);
        CHECK(std::abs(alpha - expected) / expected < 1e-3);
    }
    // alpha grows monotonically along rays
    double prev = 0;
    for (double t : {0.5, 1.0, 2.0, 4.0}) {
        const double a = convexConjugateAt(disc, {0.3 * t, 0.4 * t}, 720);
        CHECK(a > prev);
        prev = a;
    }
    const ConjugacyReport rep = conjugatePair(canonBall(), 720, 0.01);
    CHECK(rep.pass);
    CHECK(rep.maxBiconjugateGap < 0.01);
}
