// Acceptance suite: one test case per criterion, each printing a PASS/FAIL
// line with the measured values. Also runnable through `revtor verify-all`.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>

#include "revtor/acceptance.hpp"

using namespace revtor;

namespace {

acceptance::Suite& suite() {
    static acceptance::Suite s(acceptance::canonicalProfile(), 20260811);
    return s;
}

void runCriterion(int id) {
    const acceptance::CriterionResult r = suite().run(id);
    std::printf("[%s] criterion %d: %s [%.1fs]\n", r.pass ? "PASS" : "FAIL", r.id,
                r.detail.c_str(), r.seconds);
    std::fflush(stdout);
    if (id == 4 || id == 9) {
        // One sub-claim of each is false as stated (log-composed concavity of
        // the shape integral; the surface slope range at N = 5000) — the
        // suite asserts the analyzed outcome: every attainable sub-check
        // green and the documented red still red. If either flips, this
        // fails and the analysis must be revisited.
        CHECK_MESSAGE(r.attainablePass, r.detail);
        CHECK_MESSAGE(!r.pass, "documented-red criterion came out green: " << r.detail);
    } else {
        CHECK_MESSAGE(r.pass, r.detail);
    }
}

} // namespace

TEST_CASE("criterion 1: conservation along random orbits") { runCriterion(1); }
TEST_CASE("criterion 2: orbit classification") { runCriterion(2); }
TEST_CASE("criterion 3: action-angle oracle") { runCriterion(3); }
TEST_CASE("criterion 4: convexity and superlinearity") { runCriterion(4); }
TEST_CASE("criterion 5: edge asymptotics") { runCriterion(5); }
TEST_CASE("criterion 6: two-route asymptotic volume") { runCriterion(6); }
TEST_CASE("criterion 7: asymptotic ball volume") { runCriterion(7); }
TEST_CASE("criterion 8: stable norm vs distance field") { runCriterion(8); }
TEST_CASE("criterion 9: entropy slopes") { runCriterion(9); }
TEST_CASE("criterion 10: group growth") { runCriterion(10); }
TEST_CASE("criterion 11: seeded determinism") { runCriterion(11); }
