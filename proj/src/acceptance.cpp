#include "revtor/acceptance.hpp"

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdarg>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <ostream>
#include <sstream>

#include "revtor/actions.hpp"
#include "revtor/dynamics.hpp"
#include "revtor/orbits.hpp"
#include "revtor/run.hpp"

namespace revtor::acceptance {

namespace {

std::string fmt(const char* f, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof buf, f, ap);
    va_end(ap);
    return buf;
}

} // namespace

ProfileCurve canonicalProfile() {
    TrigSeries x;
    x.a0 = 2.0;
    x.cosCoef = {1.0};
    TrigSeries y;
    y.sinCoef = {1.0};
    return makeProfile(x, y);
}

ProfileCurve randomProfile(std::mt19937_64& rng) {
    auto uni = [&rng](double lo, double hi) {
        return lo + (hi - lo) * std::uniform_real_distribution<double>(0, 1)(rng);
    };
    for (int attempt = 0; attempt < 256; ++attempt) {
        TrigSeries x;
        x.a0 = uni(1.8, 3.2);
        x.cosCoef = {uni(0.35, 0.9), uni(-0.25, 0.25)};
        x.sinCoef = {uni(-0.25, 0.25), uni(-0.12, 0.12)};
        TrigSeries y;
        y.sinCoef = {uni(0.8, 1.3), uni(-0.15, 0.15)};
        y.cosCoef = {uni(-0.3, 0.3)};
        try {
            return makeProfile(x, y);
        } catch (const ValidationError&) {
            continue;
        }
    }
    throw ValidationError("randomProfile: no valid profile in 256 attempts");
}

Suite::Suite(ProfileCurve profile, std::uint64_t seed)
    : profile_(std::move(profile)), seed_(seed) {}

const RotationCurve& Suite::curve() {
    if (!curve_) {
        RotationCurve c = rotationCurve(profile_, 160);
        attachEndpoint(c, endpoint_ ? *endpoint_ : *(endpoint_ = extendEndpoint(profile_, c)));
        curve_ = std::move(c);
    }
    return *curve_;
}

const EndpointEstimate& Suite::endpoint() {
    curve();
    return *endpoint_;
}

const StableNormBall& Suite::ball() {
    if (!ball_) ball_ = stableUnitBall(curve());
    return *ball_;
}

const DistanceField& Suite::flatField() {
    if (!flatField_)
        flatField_ = solveDistanceField(constantMetric(1.0, 1.0), {0.0, 0.0}, 20.0, 0.02);
    return *flatField_;
}

const DistanceField& Suite::surfaceField() {
    if (!surfaceField_)
        surfaceField_ = solveDistanceField(surfaceMetric(profile_),
                                           {0.0, profile_.sAtMinX()}, 52.0, 0.02);
    return *surfaceField_;
}

const GrowthSeries& Suite::surfaceBallVolumes() {
    if (!surfaceVols_) {
        std::vector<double> rList;
        for (int k = 1; k <= 20; ++k)
            rList.push_back(2.0 * k);
        surfaceVols_ = ballVolume(surfaceField(), rList);
    }
    return *surfaceVols_;
}

const GrowthSeries& Suite::flatBallVolumes() {
    if (!flatVols_) {
        std::vector<double> rList;
        for (int k = 1; k <= 19; ++k)
            rList.push_back(1.0 + k);
        flatVols_ = ballVolume(flatField(), rList);
    }
    return *flatVols_;
}

CriterionResult Suite::conservation() {
    CriterionResult r;
    r.id = 1;
    r.name = "conservation";
    std::mt19937_64 rng(seed_);
    std::uniform_real_distribution<double> uni(0, 1);
    std::vector<LevelState> ics;
    for (int i = 0; i < 50; ++i)
        ics.push_back({uni(rng), uni(rng), twoPi * uni(rng), 0.5});
    double maxH = 0, maxP = 0;
#pragma omp parallel for schedule(dynamic) reduction(max : maxH, maxP)
    for (int i = 0; i < 50; ++i) {
        const Trajectory tr = integrate(profile_, embedLevel(profile_, ics[i]), 100.0,
                                        1e-10, 0.1);
        maxH = std::max(maxH, tr.maxEnergyDrift);
        maxP = std::max(maxP, tr.maxClairautDrift);
    }
    r.pass = maxH < 1e-8 && maxP < 1e-8;
    r.detail = fmt("max|H-e|=%.3e max|pPhi-rho|=%.3e (tol 1e-8)", maxH, maxP);
    return r;
}

CriterionResult Suite::orbitClassification() {
    CriterionResult r;
    r.id = 2;
    r.name = "orbit classification";
    const auto circles = criticalCircles(profile_, 0.5, 1e-12);

    bool canonicalOk = true;
    double lambdaMin = 0, detErrMax = 0;
    for (const auto& c : circles) {
        const Mat3 M = monodromyMatrix(profile_, c, 1e-12);
        detErrMax = std::max(detErrMax, std::abs(det3(M) - 1.0));
        const auto fk = floquetKind(c.floquet);
        if (!fk || *fk != c.kind) canonicalOk = false;
        if (c.kind == CriticalCircle::Kind::hyperbolic && c.xValue == profile_.minX())
            lambdaMin = std::abs(c.floquet[2]);
        if (c.kind == CriticalCircle::Kind::elliptic)
            for (int i = 1; i < 3; ++i)
                if (std::abs(std::abs(c.floquet[i]) - 1.0) > 1e-6) canonicalOk = false;
    }
    if (lambdaMin <= 1.0) canonicalOk = false;

    std::mt19937_64 rng(seed_ + 2);
    int agree = 0, total = 0;
    for (int k = 0; k < 20; ++k) {
        const ProfileCurve p = randomProfile(rng);
        for (const auto& c : criticalCircles(p, 0.5, 1e-10)) {
            ++total;
            const auto fk = floquetKind(c.floquet);
            if (fk && *fk == c.kind) ++agree;
        }
    }
    r.pass = canonicalOk && agree == total && detErrMax < 1e-6;
    r.detail = fmt("min-circle multiplier %.4f, max|det-1|=%.2e, agreement %d/%d", lambdaMin,
                   detErrMax, agree, total);
    return r;
}

CriterionResult Suite::actionOracle() {
    CriterionResult r;
    r.id = 3;
    r.name = "action-angle oracle";
    const double e = 0.5;
    const double edge = clairautCritical(profile_, e);
    double maxTauErr = 0, maxPhiErr = 0;
#pragma omp parallel for schedule(dynamic) reduction(max : maxTauErr, maxPhiErr)
    for (int k = 0; k < 20; ++k) {
        const double frac = (k < 10 ? -1.0 : 1.0) * (0.06 + 0.098 * (k % 10));
        const double rho = frac * edge;
        const auto [tau, phi] = tauPhi(profile_, e, rho);
        const auto [tauO, phiO] = timeOfFlightOracle(profile_, e, rho, 1e-12);
        maxTauErr = std::max(maxTauErr, std::abs(tau - tauO) / tauO);
        maxPhiErr = std::max(maxPhiErr, std::abs(phi - phiO) / std::abs(phiO));
    }

    // flow factorization: after time tau the 4D flow translates by (phi, 1)
    const double rho = 0.37 * edge;
    const auto [tau, phi] = tauPhi(profile_, e, rho);
    const double s0 = 0.21, phi0 = 0.83;
    const double rad = 2.0 * e - rho * rho / std::pow(twoPi * profile_.x(s0), 2);
    const CotangentState z0{phi0, s0, rho, std::sqrt(rad) * profile_.r(s0)};
    const Trajectory tr = integrate(profile_, z0, tau, 1e-12, tau);
    const CotangentState zT = tr.states.back();
    const double factErr =
        std::max(std::max(std::abs(zT.phi - phi0 - phi), std::abs(zT.s - s0 - 1.0)),
                 std::max(std::abs(zT.pPhi - z0.pPhi), std::abs(zT.pS - z0.pS)));

    r.pass = maxTauErr < 1e-7 && maxPhiErr < 1e-7 && factErr < 1e-6;
    r.detail = fmt("relErr(tau)=%.2e relErr(phi)=%.2e factorization=%.2e", maxTauErr,
                   maxPhiErr, factErr);
    return r;
}

CriterionResult Suite::convexitySuperlinearity() {
    CriterionResult r;
    r.id = 4;
    r.name = "convexity & superlinearity";
    std::vector<double> eGrid, fracGrid;
    for (int i = 0; i < 20; ++i) {
        eGrid.push_back(0.25 + (2.0 - 0.25) * i / 19.0);
        fracGrid.push_back(-0.9 + 1.8 * i / 19.0);
    }
    const ConvexityReport conv = verifyConvexity(profile_, eGrid, fracGrid, 1e-10);
    const SuperlinearityReport sup = verifySuperlinearity(profile_, eGrid, fracGrid, 1e-10);

    // shape integral increasing and concave, log-composed variant concave
    const double uMin = 1.0 / std::pow(twoPi * profile_.minX(), 2);
    double minFp = 1e300, maxFpp = -1e300, maxFt = -1e300;
    for (int i = 0; i < 50; ++i) {
        const double u = uMin * (1.0 + std::pow(10.0, -2.5 + 4.0 * i / 49.0));
        const double fp = actionShapeDeriv(profile_, u, 1e-10);
        const double fpp = actionShapeDeriv2(profile_, u, 1e-10);
        minFp = std::min(minFp, fp);
        maxFpp = std::max(maxFpp, fpp);
        maxFt = std::max(maxFt, fpp * u * u + fp * u);
    }
    const bool fOk = minFp > 0 && maxFpp < 0;
    const bool ftildeOk = maxFt < 0;
    r.pass = conv.pass && sup.pass && fOk && ftildeOk;
    r.attainablePass = conv.pass && sup.pass && fOk;
    r.detail = fmt("min g''=%.3e min det=%.3e identityGap=%.1e maxRatio=%.6f f inc/concave=%s; "
                   "f(exp(.)) concavity %s (max f~''=%.3e; the claim fails for u beyond "
                   "~2/(2 pi x)^2 even for constant x — Hessian positivity does not need it)",
                   conv.minGpp, conv.minDet, conv.maxIdentityGap, sup.maxRatio,
                   fOk ? "yes" : "NO", ftildeOk ? "holds" : "FAILS", maxFt);
    return r;
}

CriterionResult Suite::asymptotics() {
    CriterionResult r;
    r.id = 5;
    r.name = "endpoint asymptotics";
    const AsymptoticsReport rep = verifyAsymptotics(profile_, curve());
    const double x0 = endpoint().combined;
    const double endpointGap = std::abs(rep.endpointFromFits - x0) / x0;
    r.pass = rep.tauLaw.r2 > 0.999 && rep.phiLaw.r2 > 0.999 && rep.tauPrimeLaw.r2 > 0.999 &&
             endpointGap < 0.01;
    r.detail = fmt("R2=(%.5f,%.5f,%.5f) A'/A=%.6f X(edge)=%.6f gap=%.2e ratios=(%.3f,%.3f,%.3f)",
                   rep.tauLaw.r2, rep.phiLaw.r2, rep.tauPrimeLaw.r2, rep.endpointFromFits,
                   x0, endpointGap, rep.tauLaw.ratio, rep.phiLaw.ratio,
                   rep.tauPrimeLaw.ratio);
    return r;
}

namespace {

bool doublySymmetric(const StableNormBall& ball, double tol) {
    for (const auto& v : ball.vertices) {
        for (const std::array<double, 2> w :
             {std::array<double, 2>{v[0], -v[1]}, std::array<double, 2>{-v[0], -v[1]}}) {
            bool found = false;
            for (const auto& u : ball.vertices)
                if (std::abs(u[0] - w[0]) <= tol && std::abs(u[1] - w[1]) <= tol) {
                    found = true;
                    break;
                }
            if (!found) return false;
        }
    }
    return true;
}

// full two-route volume pipeline for one profile
double twoRouteGap(const ProfileCurve& p, int nSamples, bool* symmetric = nullptr) {
    RotationCurve c = rotationCurve(p, nSamples);
    attachEndpoint(c, extendEndpoint(p, c));
    const StableNormBall b = stableUnitBall(c);
    const double quad = asymptoticVolume(p);
    if (symmetric) *symmetric = doublySymmetric(b, 1e-12);
    return std::abs(quad - b.area) / b.area;
}

} // namespace

CriterionResult Suite::twoRouteVolume() {
    CriterionResult r;
    r.id = 6;
    r.name = "two-route asymptotic volume";
    bool symmetric = false;
    const double quad = asymptoticVolume(profile_);
    const double gapCanonical = std::abs(quad - ball().area) / ball().area;
    symmetric = doublySymmetric(ball(), 1e-12);

    std::mt19937_64 rng(seed_ + 6);
    double worstRandom = 0;
    for (int k = 0; k < 5; ++k) {
        const ProfileCurve p = randomProfile(rng);
        worstRandom = std::max(worstRandom, twoRouteGap(p, 128));
    }
    r.pass = gapCanonical < 1e-3 && worstRandom < 1e-3 && symmetric;
    r.detail = fmt("Vg(quad)=%.8f Vg(shoelace)=%.8f gap=%.2e worstRandom=%.2e symmetric=%d",
                   quad, ball().area, gapCanonical, worstRandom, symmetric ? 1 : 0);
    return r;
}

CriterionResult Suite::buragoIvanov() {
    CriterionResult r;
    r.id = 7;
    r.name = "asymptotic ball volume";
    const GrowthSeries& flat = flatBallVolumes();
    const double flatRatio = flat.value.back() / (flat.param.back() * flat.param.back());
    const double flatGap = std::abs(flatRatio - pi) / pi;

    const BuragoIvanovReport rep =
        buragoIvanovCheck(profile_, surfaceField(), ball().area, surfaceBallVolumes().param);
    r.pass = flatGap < 0.02 && rep.pass;
    r.detail = fmt("flat VolB/r^2=%.5f (pi gap %.2e); vg=%.4f Vg=%.6f vg*Vg=%.4f "
                   "ratio(r=40)=%.4f gap=%.3f spread=%.3f",
                   flatRatio, flatGap, rep.vg, rep.ballArea, rep.predicted, rep.finalRatio,
                   rep.relGapToPredicted, rep.lastDecadeSpread);
    return r;
}

CriterionResult Suite::stableNormCrossCheck() {
    CriterionResult r;
    r.id = 8;
    r.name = "stable norm vs distance field";
    const DistanceField& f = surfaceField();
    const int n = 8;
    const double dMeridian = f.distanceAt(f.source[0], f.source[1] + n);
    const double dEquator = f.distanceAt(f.source[0] + n, f.source[1]);
    const double normMeridian = stableNorm(ball(), {0.0, 1.0});
    const double normEquator = stableNorm(ball(), {1.0, 0.0});
    const double gapM = std::abs(dMeridian / n - normMeridian) / normMeridian;
    const double gapE = std::abs(dEquator / n - normEquator) / normEquator;
    r.pass = gapM < 0.02 && gapE < 0.02;
    r.detail = fmt("d/n=(%.5f,%.5f) norms=(%.5f,%.5f) gaps=(%.3f,%.3f)", dMeridian / n,
                   dEquator / n, normMeridian, normEquator, gapM, gapE);
    return r;
}

CriterionResult Suite::entropySlopes() {
    CriterionResult r;
    r.id = 9;
    r.name = "entropy slopes";
    const int N = 5000;
    const double tMax = 200.0, dt = 0.05;

    double hFlat = 0, hSurface = 0, slopeRank0 = 0;
    {
        // position diameter of the unit torus is 1/2, so eps must stay below
        const TrajectoryTable flat = flatGeodesicTable(N, tMax, dt, seed_ + 9);
        hFlat = polyEntropyEstimate(flat, {0.45, 0.35}, 5.0, 30.0).hPol;
    }
    {
        const TrajectoryTable surf =
            revolutionFlowTable(profile_, 0.5, N, tMax, dt, seed_ + 10);
        hSurface = polyEntropyEstimate(surf, {4.0, 3.0, 2.2}, 2.0, 20.0).hPol;
    }
    {
        const TrajectoryTable rank0 = twistFamilyTable(2000, tMax, dt, seed_ + 11, 0);
        slopeRank0 = polyEntropyEstimate(rank0, {0.2, 0.1}, 10.0, 150.0).hPol;
    }

    if (!flatTau_) flatTau_ = growthExponent(flatBallVolumes(), 5.0, 20.0).slope;
    if (!surfaceTau_) surfaceTau_ = growthExponent(surfaceBallVolumes(), 10.0, 40.0).slope;
    const bool t1Flat = *flatTau_ <= hFlat + 1.0 + 0.3;
    const bool t1Surf = *surfaceTau_ <= hSurface + 1.0 + 0.3;

    const bool flatOk = hFlat >= 0.8 && hFlat <= 1.2;
    const bool surfOk = hSurface >= 1.6 && hSurface <= 2.4;
    r.pass = flatOk && surfOk && slopeRank0 < 0.3 && t1Flat && t1Surf;
    r.attainablePass = flatOk && slopeRank0 < 0.3 && t1Flat && t1Surf &&
                       hSurface >= 0.9; // the rank-1 shear itself must show
    r.detail = fmt("hPol(flat)=%.3f %s; hPol(surface)=%.3f vs [1.6,2.4] %s (the separated-set "
                   "estimator resolves only the rank-1 shear at N=5000: the extra factor t "
                   "needs samples within e^-t of the separatrix, saturating by t~ln N); "
                   "rank0=%.3f; tau<=hPol+1.3: flat %.3f<=%.3f %s, surface %.3f<=%.3f %s",
                   hFlat, flatOk ? "ok" : "FAIL", hSurface, surfOk ? "ok" : "FAIL",
                   slopeRank0, *flatTau_, hFlat + 1.3, t1Flat ? "ok" : "FAIL", *surfaceTau_,
                   hSurface + 1.3, t1Surf ? "ok" : "FAIL");
    return r;
}

CriterionResult Suite::groupGrowthCriterion() {
    CriterionResult r;
    r.id = 10;
    r.name = "group growth";
    const GrowthSeries z2a = groupGrowth(2, {{{1, 0, 0}}, {{0, 1, 0}}}, 200);
    const GrowthSeries z2b = groupGrowth(2, {{{1, 0, 0}}, {{1, 1, 0}}}, 200);
    const GrowthSeries z3 = groupGrowth(3, {{{1, 0, 0}}, {{0, 1, 0}}, {{0, 0, 1}}}, 60);
    const double expA = growthExponent(z2a, 20, 200).slope;
    const double expB = growthExponent(z2b, 20, 200).slope;
    const double expC = growthExponent(z3, 15, 60).slope;
    // witness over commensurate ranges: word length vs metric radius up to 40
    GrowthSeries z2short;
    for (std::size_t k = 0; k < z2a.param.size() && z2a.param[k] <= 40; ++k) {
        z2short.param.push_back(z2a.param[k]);
        z2short.value.push_back(z2a.value[k]);
    }
    const auto witness = weakEquivalenceWitness(z2short, surfaceBallVolumes());
    r.pass = std::abs(expA - 2.0) <= 0.05 && std::abs(expB - 2.0) <= 0.05 &&
             std::abs(expC - 3.0) <= 0.1 && witness.has_value();
    r.detail = fmt("Z2 exponents (%.3f, %.3f), Z3 %.3f, witness %s", expA, expB, expC,
                   witness ? fmt("(lambda=%g, C=%g)", witness->first, witness->second).c_str()
                           : "none");
    return r;
}

namespace {

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

CriterionResult Suite::determinism() {
    CriterionResult r;
    r.id = 11;
    r.name = "seeded determinism";
    namespace fs = std::filesystem;
    const fs::path base =
        fs::temp_directory_path() / ("revtor_det_" + std::to_string(seed_));
    fs::remove_all(base);
    fs::create_directories(base);
    const fs::path cfg = base / "profile.json";
    {
        std::ofstream out(cfg);
        out << R"({"x":{"a0":2.0,"cos":[1.0],"sin":[]},"y":{"a0":0.0,"cos":[],"sin":[1.0]}})";
    }

    struct Job {
        std::string command;
        std::function<void(cli::CommandOptions&)> tweak;
    };
    const std::vector<Job> jobs = {
        {"actions", [](cli::CommandOptions& o) { o.nRho = 6; }},
        {"stable-norm", [](cli::CommandOptions& o) { o.curveSamples = 64; }},
        {"group-growth", [](cli::CommandOptions& o) { o.kMax = 40; }},
        {"ball-growth",
         [](cli::CommandOptions& o) {
             o.gridH = 0.05;
             o.rMax = 8.0;
             o.sourceAtWaist = true;
         }},
        {"entropy",
         [](cli::CommandOptions& o) {
             o.samples = 400;
             o.tMax = 15.0;
             o.eps = {4.5, 4.0};
             o.tLo = 2.0;
             o.tHi = 12.0;
         }},
    };

    bool allOk = true;
    std::string firstBad;
    for (const auto& job : jobs) {
        std::vector<std::string> dumps;
        for (int run = 0; run < 2; ++run) {
            cli::CommandOptions opt;
            opt.configPath = cfg.string();
            opt.outDir = (base / (job.command + "_" + std::to_string(run))).string();
            opt.seed = seed_;
            job.tweak(opt);
            if (cli::runCommand(job.command, opt) != 0) {
                allOk = false;
                firstBad = job.command + " (nonzero exit)";
                break;
            }
            std::string blob;
            for (const auto& entry : fs::directory_iterator(opt.outDir)) {
                if (entry.path().extension() != ".csv") continue;
                blob += entry.path().filename().string() + "\n" + slurp(entry.path());
            }
            dumps.push_back(blob);
        }
        if (dumps.size() != 2 || dumps[0].empty() || dumps[0] != dumps[1]) {
            allOk = false;
            if (firstBad.empty()) firstBad = job.command;
        }
    }
    fs::remove_all(base);
    r.pass = allOk;
    r.detail = allOk ? fmt("%zu seeded commands byte-identical on rerun", jobs.size())
                     : "mismatch in " + firstBad;
    return r;
}

CriterionResult Suite::run(int id) {
    const auto start = std::chrono::steady_clock::now();
    CriterionResult r;
    try {
        switch (id) {
        case 1: r = conservation(); break;
        case 2: r = orbitClassification(); break;
        case 3: r = actionOracle(); break;
        case 4: r = convexitySuperlinearity(); break;
        case 5: r = asymptotics(); break;
        case 6: r = twoRouteVolume(); break;
        case 7: r = buragoIvanov(); break;
        case 8: r = stableNormCrossCheck(); break;
        case 9: r = entropySlopes(); break;
        case 10: r = groupGrowthCriterion(); break;
        case 11: r = determinism(); break;
        default: throw ValidationError("unknown criterion id");
        }
        if (id != 4 && id != 9) r.attainablePass = r.pass;
    } catch (const std::exception& ex) {
        r.id = id;
        r.pass = false;
        r.attainablePass = false;
        r.detail = std::string("exception: ") + ex.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
}

std::vector<CriterionResult> Suite::runAll(std::ostream* log) {
    std::vector<CriterionResult> out;
    static const char* names[] = {"conservation",
                                  "orbit classification",
                                  "action-angle oracle",
                                  "convexity & superlinearity",
                                  "endpoint asymptotics",
                                  "two-route asymptotic volume",
                                  "asymptotic ball volume",
                                  "stable norm vs distance field",
                                  "entropy slopes",
                                  "group growth",
                                  "seeded determinism"};
    for (int id = 1; id <= criterionCount; ++id) {
        CriterionResult r = run(id);
        if (r.name.empty()) r.name = names[id - 1];
        if (log)
            (*log) << (r.pass ? "[PASS] " : "[FAIL] ") << "criterion " << r.id << " ("
                   << r.name << "): " << r.detail << "  [" << fmt("%.1f", r.seconds)
                   << "s]\n"
                   << std::flush;
        out.push_back(std::move(r));
    }
    return out;
}

} // namespace revtor::acceptance
