#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "revtor/entropy.hpp"

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

} // namespace

TEST_CASE("dynamical metric basics") {
    const TrajectoryTable tab = flatGeodesicTable(200, 20.0, 0.05, 11);
    // identical samples are at distance zero
    CHECK(tab.dynDistance(7, 7, tab.nTimes - 1) == 0.0);
    // d_0 is the ambient distance of the initial states
    for (int i = 0; i < 20; ++i)
        CHECK(tab.dynDistance(i, i + 1, 0) ==
              doctest::Approx(tab.stateDistance(i, i + 1, 0)).epsilon(1e-12));
    // nondecreasing in t
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<int> pick(0, 199);
    for (int trial = 0; trial < 100; ++trial) {
        const int a = pick(rng), b = pick(rng);
        double prev = 0;
        for (int k = 0; k < tab.nTimes; k += 40) {
            const double d = tab.dynDistance(a, b, k);
            CHECK(d >= prev - 1e-15);
            prev = d;
        }
    }
}

TEST_CASE("separated counts: diameter bound, duplicates, monotonicity, sandwich") {
    const TrajectoryTable tab = flatGeodesicTable(400, 40.0, 0.05, 3);
    CHECK(separatedCount(tab, 10.0, 100.0) == 1);

    // duplicating every sample leaves the count unchanged
    TrajectoryTable dup = tab;
    dup.nSamples = 2 * tab.nSamples;
    dup.data.resize(tab.data.size() * 2);
    for (int i = 0; i < tab.nSamples; ++i)
        for (int rep = 0; rep < 2; ++rep)
            std::copy(tab.state(i, 0), tab.state(i, 0) + 3 * tab.nTimes,
                      dup.stateMut(2 * i + rep, 0));
    CHECK(separatedCount(dup, 20.0, 0.15) == separatedCount(tab, 20.0, 0.15));

    double prevT = 0;
    for (double t : {1.0, 5.0, 20.0, 40.0}) {
        const double c = separatedCount(tab, t, 0.2);
        CHECK(c >= prevT);
        prevT = c;
    }
    for (double eps : {0.1, 0.2, 0.4}) {
        // S(2 eps) <= greedy cover at eps <= S(eps); the greedy accepted set
        // is itself the cover
        const int s2 = separatedCount(tab, 20.0, 2 * eps);
        const int s1 = separatedCount(tab, 20.0, eps);
        CHECK(s2 <= s1);
    }
}

TEST_CASE("flat family slope is near one, fixed translation near zero") {
    const TrajectoryTable flat = flatGeodesicTable(2500, 30.0, 0.05, 29);
    const EntropyEstimate est = polyEntropyEstimate(flat, {0.45}, 3.0, 25.0);
    CHECK(est.hPol > 0.7);
    CHECK(est.hPol < 1.2);

    const TrajectoryTable fixed =
        kroneckerTable(800, 100.0, 0.05, 31, {1.0, 0.5 * (std::sqrt(5.0) - 1.0)});
    const EntropyEstimate est0 = polyEntropyEstimate(fixed, {0.2, 0.1}, 5.0, 75.0);
    CHECK(est0.hPol < 0.3);
}

TEST_CASE("twist family calibration: rank 1 near one, rank 0 near zero") {
    const TrajectoryTable r1 = twistFamilyTable(1500, 60.0, 0.05, 101, 1);
    CHECK(polyEntropyEstimate(r1, {0.35}, 2.0, 50.0).hPol ==
          doctest::Approx(1.0).epsilon(0.25));
    const TrajectoryTable r0 = twistFamilyTable(1000, 60.0, 0.05, 103, 0);
    CHECK(polyEntropyEstimate(r0, {0.2, 0.12}, 2.0, 50.0).hPol < 0.3);
}

TEST_CASE("tables are bit-deterministic for a fixed seed") {
    const TrajectoryTable a = revolutionFlowTable(canon(), 0.5, 150, 20.0, 0.05, 77);
    const TrajectoryTable b = revolutionFlowTable(canon(), 0.5, 150, 20.0, 0.05, 77);
    CHECK(a.data == b.data);
    const TrajectoryTable c = revolutionFlowTable(canon(), 0.5, 150, 20.0, 0.05, 78);
    CHECK(a.data != c.data);
}

TEST_CASE("serial and parallel table builds and counts are identical") {
    const TrajectoryTable a =
        revolutionFlowTable(canon(), 0.5, 120, 20.0, 0.05, 7, Exec::serial);
    const TrajectoryTable b =
        revolutionFlowTable(canon(), 0.5, 120, 20.0, 0.05, 7, Exec::parallel);
    CHECK(a.data == b.data);
    const std::vector<double> tList{2, 5, 10, 20};
    const std::vector<double> epsList{1.5, 1.0};
    const SeparationTable sa = separationTable(a, tList, epsList, Exec::serial);
    const SeparationTable sb = separationTable(b, tList, epsList, Exec::parallel);
    CHECK(sa.counts == sb.counts);
}

TEST_CASE("separation table is monotone in both arguments") {
    const TrajectoryTable tab = revolutionFlowTable(canon(), 0.5, 400, 60.0, 0.05, 13);
    const std::vector<double> tList{2, 8, 30, 60};
    const std::vector<double> epsList{2.0, 1.4, 1.0};
    const SeparationTable st = separationTable(tab, tList, epsList);
    for (std::size_t e = 0; e < epsList.size(); ++e)
        for (std::size_t ti = 1; ti < tList.size(); ++ti)
            CHECK(st.counts[e][ti] >= st.counts[e][ti - 1]);
    for (std::size_t e = 1; e < epsList.size(); ++e)
        for (std::size_t ti = 0; ti < tList.size(); ++ti)
            CHECK(st.counts[e][ti] >= st.counts[e - 1][ti]);
}

TEST_CASE("saturation guard trips for tiny separation scales") {
    const TrajectoryTable tab = flatGeodesicTable(200, 20.0, 0.05, 5);
    CHECK_THROWS_AS(polyEntropyEstimate(tab, {1e-4}, 2.0, 15.0), SaturatedError);
}

TEST_CASE("growth-vs-entropy inequality check") {
    const TheoremOneReport ok = theoremOneCheck(2.0, 1.0, 0.3);
    CHECK(ok.holds);
    CHECK_THROWS_AS(theoremOneCheck(3.0, 1.0, 0.3), InequalityViolatedError);
}
