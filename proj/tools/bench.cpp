// Serial vs OpenMP timings for the data-parallel kernels, with result checks.

#include <chrono>
#include <cmath>
#include <cstdio>

#include "revtor/acceptance.hpp"
#include "revtor/eikonal.hpp"
#include "revtor/entropy.hpp"
#include "revtor/stable_norm.hpp"

using namespace revtor;

namespace {

template <class F>
double timeIt(F&& f) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void report(const char* name, double serial, double parallel, bool identical) {
    std::printf("%-28s %9.3fs %9.3fs %7.2fx   %s\n", name, serial, parallel,
                serial / parallel, identical ? "identical" : "MISMATCH");
}

} // namespace

int main() {
    const ProfileCurve p = acceptance::canonicalProfile();
    std::printf("%-28s %10s %10s %8s\n", "kernel", "serial", "openmp", "speedup");

    {
        DistanceField a, b;
        const double ts = timeIt([&] {
            a = solveDistanceField(surfaceMetric(p), {0.0, p.sAtMinX()}, 40.0, 0.01,
                                   Exec::serial);
        });
        const double tp = timeIt([&] {
            b = solveDistanceField(surfaceMetric(p), {0.0, p.sAtMinX()}, 40.0, 0.01,
                                   Exec::parallel);
        });
        report("eikonal sweep 40x0.01", ts, tp, a.u == b.u);
    }

    {
        RotationCurve a, b;
        const double ts = timeIt([&] { a = rotationCurve(p, 96, Exec::serial); });
        const double tp = timeIt([&] { b = rotationCurve(p, 96, Exec::parallel); });
        report("rotation curve n=96", ts, tp, a.X == b.X && a.Y == b.Y);
    }

    {
        TrajectoryTable a, b;
        const double ts = timeIt(
            [&] { a = revolutionFlowTable(p, 0.5, 800, 60.0, 0.05, 7, Exec::serial); });
        const double tp = timeIt(
            [&] { b = revolutionFlowTable(p, 0.5, 800, 60.0, 0.05, 7, Exec::parallel); });
        const bool same = a.data == b.data;
        report("flow table N=800 t=60", ts, tp, same);

        SeparationTable sa, sb;
        const std::vector<double> tList{5, 10, 20, 40, 60};
        const std::vector<double> epsList{1.8, 1.2};
        const double ss =
            timeIt([&] { sa = separationTable(a, tList, epsList, Exec::serial); });
        const double sp =
            timeIt([&] { sb = separationTable(b, tList, epsList, Exec::parallel); });
        report("separation table 5x2", ss, sp, sa.counts == sb.counts);
    }

    return 0;
}
