#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "revtor/dynamics.hpp"

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

} // namespace

TEST_CASE("hamiltonian hand values") {
    const ProfileCurve p = canonical();
    CHECK(hamiltonian(p, {0, 0, 0, twoPi}) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(hamiltonian(p, {0, 0.5, twoPi, 0}) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(hamiltonian(p, {0.3, 0.7, 0, 0}) == 0.0);
}

TEST_CASE("embedLevel hand values and exactness") {
    const ProfileCurve p = canonical();
    const CotangentState a = embedLevel(p, {0, 0, 0, 0.5});
    CHECK(a.pPhi == doctest::Approx(6 * pi).epsilon(1e-14));
    CHECK(a.pS == doctest::Approx(0.0).epsilon(1e-14));
    const CotangentState b = embedLevel(p, {0, 0, pi / 2, 0.5});
    CHECK(b.pPhi == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(b.pS == doctest::Approx(twoPi).epsilon(1e-14));

    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> uni(0, 1);
    for (int i = 0; i < 300; ++i) {
        const LevelState ls{uni(rng), uni(rng), twoPi * uni(rng), 0.2 + 2 * uni(rng)};
        CHECK(hamiltonian(p, embedLevel(p, ls)) ==
              doctest::Approx(ls.e).epsilon(1e-14));
    }
}

TEST_CASE("level field hand values") {
    const ProfileCurve p = canonical();
    const auto fCrit = levelField(p, {0.2, 0.5, 0.0, 0.5});
    CHECK(fCrit[0] == doctest::Approx(1.0 / twoPi).epsilon(1e-13));
    CHECK(fCrit[1] == doctest::Approx(0.0).epsilon(1e-13));
    CHECK(fCrit[2] == doctest::Approx(0.0).epsilon(1e-13));

    const auto fMer = levelField(p, {0.0, 0.0, pi / 2, 0.5});
    CHECK(fMer[1] == doctest::Approx(1.0 / twoPi).epsilon(1e-13));
}

TEST_CASE("level field is the chart pushforward of the 4D field") {
    const ProfileCurve p = canonical();
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> uni(0, 1);
    for (int i = 0; i < 100; ++i) {
        const LevelState ls{uni(rng), uni(rng), twoPi * uni(rng), 0.3 + uni(rng)};
        const auto f = levelField(p, ls);
        const double delta = 1e-6;
        // chart curve ls + t f, pushed to T*R^2, differentiated at t = 0
        const LevelState plus{ls.phiBar + delta * f[0], ls.sBar + delta * f[1],
                              ls.theta + delta * f[2], ls.e};
        const LevelState minus{ls.phiBar - delta * f[0], ls.sBar - delta * f[1],
                               ls.theta - delta * f[2], ls.e};
        const CotangentState zp = embedLevel(p, plus), zm = embedLevel(p, minus);
        const CotangentState z = embedLevel(p, ls);
        const auto f4 = cotangentField(p, z);
        const double scale = std::sqrt(2 * ls.e) * twoPi * p.maxX();
        CHECK(std::abs((zp.phi - zm.phi) / (2 * delta) - f4[0]) < 1e-8 * scale);
        CHECK(std::abs((zp.s - zm.s) / (2 * delta) - f4[1]) < 1e-8 * scale);
        CHECK(std::abs((zp.pPhi - zm.pPhi) / (2 * delta) - f4[2]) < 1e-8 * scale);
        CHECK(std::abs((zp.pS - zm.pS) / (2 * delta) - f4[3]) < 1e-8 * scale);
    }
}

TEST_CASE("meridian geodesic advances s by one per period") {
    const ProfileCurve p = canonical();
    // pPhi = 0, e = 1/2: ds/dt = 1/(2 pi) along the meridian
    const CotangentState z0{0, 0, 0, twoPi};
    const Trajectory tr = integrate(p, z0, twoPi, 1e-12, twoPi / 8);
    CHECK(tr.states.back().s == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(tr.states.back().phi == doctest::Approx(0.0).epsilon(1e-10));
}

TEST_CASE("critical circles are invariant for the level flow") {
    const ProfileCurve p = canonical();
    // elliptic circle: neutral transverse dynamics, holds for long times
    const LevelTrajectory ell = integrate(p, LevelState{0, 0.0, 0, 0.5}, 100.0, 1e-12, 0.5);
    for (const auto& st : ell.states) {
        CHECK(std::abs(st[1]) < 1e-8);
        CHECK(std::abs(st[2]) < 1e-8);
    }
    // hyperbolic circle: roundoff in sin(pi) seeds e^t transverse growth
    // (unit rate at e = 1/2), so the invariance budget only holds while
    // 1e-16 e^t stays below it
    const LevelTrajectory hyp = integrate(p, LevelState{0, 0.5, 0, 0.5}, 15.0, 1e-12, 0.25);
    for (const auto& st : hyp.states) {
        CHECK(std::abs(st[1] - 0.5) < 1e-8);
        CHECK(std::abs(st[2]) < 1e-8);
    }
}

TEST_CASE("energy and angular momentum are conserved along random orbits") {
    const ProfileCurve p = canonical();
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> uni(0, 1);
    for (int i = 0; i < 10; ++i) {
        const LevelState ls{uni(rng), uni(rng), twoPi * uni(rng), 0.5};
        const Trajectory tr = integrate(p, embedLevel(p, ls), 100.0, 1e-10, 0.25);
        CHECK(tr.maxEnergyDrift < 1e-8);
        CHECK(tr.maxClairautDrift < 1e-8);
    }
}

TEST_CASE("zeta reverses momenta and conjugates the flow to its reverse") {
    const ProfileCurve p = canonical();
    const CotangentState z{0, 0, 1, 2};
    const CotangentState zz = applyZeta(z);
    CHECK(zz.pPhi == -1.0);
    CHECK(zz.pS == -2.0);
    const CotangentState zzz = applyZeta(zz);
    CHECK(zzz.pPhi == z.pPhi);
    CHECK(zzz.pS == z.pS);

    const LevelState ls{0.37, 0.21, 1.1, 0.5};
    const CotangentState z0 = embedLevel(p, ls);
    const double T = 7.0;
    const Trajectory fwd = integrate(p, applyZeta(z0), T, 1e-11, T / 10);
    const Trajectory bwd = integrate(p, z0, -T, 1e-11, T / 10);
    for (std::size_t k = 0; k < fwd.states.size(); ++k) {
        const CotangentState a = fwd.states[k];
        const CotangentState b = applyZeta(bwd.states[k]);
        CHECK(std::abs(a.phi - b.phi) < 1e-6);
        CHECK(std::abs(a.s - b.s) < 1e-6);
        CHECK(std::abs(a.pPhi - b.pPhi) < 1e-6);
        CHECK(std::abs(a.pS - b.pS) < 1e-6);
    }
}

TEST_CASE("level-coordinate and 4D integration agree through the chart") {
    const ProfileCurve p = canonical();
    const LevelState ls{0.1, 0.62, 0.8, 0.5};
    const double T = 20.0, dt = 0.5;
    const LevelTrajectory lt = integrate(p, ls, T, 1e-11, dt);
    const Trajectory ct = integrate(p, embedLevel(p, ls), T, 1e-11, dt);
    REQUIRE(lt.states.size() == ct.states.size());
    for (std::size_t k = 0; k < lt.states.size(); ++k) {
        const CotangentState viaLevel =
            embedLevel(p, {lt.states[k][0], lt.states[k][1], lt.states[k][2], 0.5});
        CHECK(std::abs(viaLevel.phi - ct.states[k].phi) < 1e-6);
        CHECK(std::abs(viaLevel.s - ct.states[k].s) < 1e-6);
        CHECK(std::abs(viaLevel.pPhi - ct.states[k].pPhi) < 1e-6);
        CHECK(std::abs(viaLevel.pS - ct.states[k].pS) < 1e-6);
    }
}
