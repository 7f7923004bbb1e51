#include "revtor/run.hpp"

#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "revtor/acceptance.hpp"
#include "revtor/actions.hpp"
#include "revtor/csvio.hpp"
#include "revtor/dynamics.hpp"
#include "revtor/entropy.hpp"
#include "revtor/growth.hpp"
#include "revtor/orbits.hpp"
#include "revtor/stable_norm.hpp"

namespace revtor::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

TrigSeries seriesFromJson(const json& j) {
    TrigSeries s;
    s.a0 = j.value("a0", 0.0);
    if (j.contains("cos")) s.cosCoef = j["cos"].get<std::vector<double>>();
    if (j.contains("sin")) s.sinCoef = j["sin"].get<std::vector<double>>();
    return s;
}

std::vector<std::array<int, 3>> parseGenerators(const std::string& text, int rank) {
    std::vector<std::array<int, 3>> gens;
    if (text.empty()) {
        for (int d = 0; d < rank; ++d) {
            std::array<int, 3> g{0, 0, 0};
            g[d] = 1;
            gens.push_back(g);
        }
        return gens;
    }
    std::stringstream ss(text);
    std::string tuple;
    while (std::getline(ss, tuple, ';')) {
        std::array<int, 3> g{0, 0, 0};
        std::stringstream ts(tuple);
        std::string num;
        int d = 0;
        while (std::getline(ts, num, ',') && d < 3)
            g[d++] = std::stoi(num);
        gens.push_back(g);
    }
    return gens;
}

struct Run {
    const CommandOptions& opt;
    json manifest;
    std::vector<std::string> outputs;
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

    explicit Run(const std::string& name, const CommandOptions& o) : opt(o) {
        fs::create_directories(opt.outDir);
        manifest["command"] = name;
        manifest["config"] = opt.configPath;
        if (!opt.configPath.empty()) manifest["configHash"] = hashFile(opt.configPath);
        manifest["seed"] = opt.seed;
        manifest["tol"] = opt.tol;
    }

    std::string path(const std::string& file) {
        outputs.push_back(file);
        return (fs::path(opt.outDir) / file).string();
    }

    void finish() {
        manifest["outputs"] = outputs;
        manifest["timingSeconds"] =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::ofstream out(fs::path(opt.outDir) / "manifest.json");
        out << manifest.dump(2) << "\n";
    }
};

int runValidateProfile(const CommandOptions& opt) {
    Run run("validate-profile", opt);
    const ProfileCurve p = loadProfile(opt.configPath);
    CsvWriter csv(run.path("critical_points.csv"),
                  {"sCrit", "xValue", "kind", "secondDeriv"});
    for (const auto& c : p.criticalPoints()) {
        csv.beginRow();
        csv.cell(c.sCrit);
        csv.cell(c.xValue);
        csv.cell(std::string(c.kind == CriticalPoint::Kind::minimum ? "minimum" : "maximum"));
        csv.cell(c.secondDeriv);
        csv.endRow();
    }
    run.manifest["diagnostics"] = {{"criticalPoints", p.criticalPoints().size()},
                                   {"minX", p.minX()},
                                   {"maxX", p.maxX()},
                                   {"minR", p.minR()}};
    run.finish();
    return 0;
}

int runTrajectory(const CommandOptions& opt) {
    Run run("trajectory", opt);
    const ProfileCurve p = loadProfile(opt.configPath);
    const CotangentState z0{opt.initialState[0], opt.initialState[1], opt.initialState[2],
                            opt.initialState[3]};
    const Trajectory tr = integrate(p, z0, opt.trajTMax, opt.tol, opt.sampleStep);
    CsvWriter csv(run.path("trajectory.csv"), {"t", "phi", "s", "pPhi", "pS", "H"});
    for (std::size_t k = 0; k < tr.times.size(); ++k) {
        const CotangentState& z = tr.states[k];
        csv.row({tr.times[k], z.phi, z.s, z.pPhi, z.pS, hamiltonian(p, z)});
    }
    run.manifest["diagnostics"] = {{"maxEnergyDrift", tr.maxEnergyDrift},
                                   {"maxClairautDrift", tr.maxClairautDrift}};
    run.finish();
    return 0;
}

int runOrbits(const CommandOptions& opt) {
    Run run("orbits", opt);
    const ProfileCurve p = loadProfile(opt.configPath);
    const auto circles = criticalCircles(p, opt.energy, std::min(opt.tol, 1e-10));
    CsvWriter csv(run.path("orbits.csv"),
                  {"sCrit", "xValue", "thetaBranch", "kind", "period", "floquetRe1",
                   "floquetIm1", "floquetRe2", "floquetIm2", "floquetRe3", "floquetIm3"});
    for (const auto& c : circles) {
        csv.beginRow();
        csv.cell(c.sCrit);
        csv.cell(c.xValue);
        csv.cell(c.thetaBranch);
        csv.cell(std::string(c.kind == CriticalCircle::Kind::elliptic ? "elliptic"
                                                                      : "hyperbolic"));
        csv.cell(c.period);
        for (const auto& f : c.floquet) {
            csv.cell(f.real());
            csv.cell(f.imag());
        }
        csv.endRow();
    }
    run.manifest["diagnostics"] = {{"circles", circles.size()}};
    run.finish();
    return 0;
}

int runActions(const CommandOptions& opt) {
    Run run("actions", opt);
    const ProfileCurve p = loadProfile(opt.configPath);
    const double edge = clairautCritical(p, opt.energy);
    CsvWriter csv(run.path("actions.csv"),
                  {"e", "rho", "i1", "i2", "tau", "phiAdvance", "tauOracle", "phiOracle",
                   "relErrTau", "relErrPhi"});
    double maxErr = 0;
    for (int k = 0; k < opt.nRho; ++k) {
        const double frac = -0.95 + 1.9 * (k + 0.5) / opt.nRho;
        const double rho = frac * edge;
        const ActionSample a = sampleActions(p, opt.energy, rho);
        const auto [tauO, phiO] = timeOfFlightOracle(p, opt.energy, rho, opt.tol);
        const double errTau = std::abs(a.tau - tauO) / tauO;
        const double errPhi = std::abs(a.phiAdvance - phiO) / std::max(std::abs(phiO), 1e-300);
        maxErr = std::max({maxErr, errTau, errPhi});
        csv.row({a.e, a.rho, a.i1, a.i2, a.tau, a.phiAdvance, tauO, phiO, errTau, errPhi});
    }
    run.manifest["diagnostics"] = {{"maxOracleRelErr", maxErr}};
    run.finish();
    return 0;
}

RotationCurve curveWithEndpoint(const ProfileCurve& p, int nSamples, json* diag) {
    RotationCurve c = rotationCurve(p, nSamples);
    const EndpointEstimate ep = extendEndpoint(p, c);
    attachEndpoint(c, ep);
    if (diag)
        (*diag)["endpoint"] = {{"extrapolated", ep.extrapolated},
                               {"orbitFrequency", ep.orbitFrequency},
                               {"combined", ep.combined},
                               {"paperConstant", ep.paperConstant},
                               {"ratioToPaper", ep.ratioToPaper}};
    return c;
}

int runStableNorm(const CommandOptions& opt) {
    Run run("stable-norm", opt);
    const ProfileCurve p = loadProfile(opt.configPath);
    json diag;
    const RotationCurve c = curveWithEndpoint(p, opt.curveSamples, &diag);
    CsvWriter csv(run.path("stable_norm.csv"), {"rho", "X", "Y"});
    for (std::size_t k = 0; k < c.rho.size(); ++k)
        csv.row({c.rho[k], c.X[k], c.Y[k]});
    csv.row({c.rho0, c.endpointX, 0.0});
    run.manifest["diagnostics"] = diag;
    run.finish();
    return 0;
}

int runVolume(const CommandOptions& opt) {
    Run run("volume", opt);
    const ProfileCurve p = loadProfile(opt.configPath);
    json diag;
    const RotationCurve c = curveWithEndpoint(p, opt.curveSamples, &diag);
    const StableNormBall ball = stableUnitBall(c);
    double tail = 0;
    const double quad = asymptoticVolume(p, 1e-8, 1e-8, &tail);
    const double gap = std::abs(quad - ball.area) / ball.area;
    CsvWriter csv(run.path("volume.csv"), {"Vg_quadrature", "Vg_shoelace", "relGap"});
    csv.row({quad, ball.area, gap});
    diag["tail"] = tail;
    run.manifest["diagnostics"] = diag;
    run.finish();
    return 0;
}

int runAsymptotics(const CommandOptions& opt) {
    Run run("asymptotics", opt);
    const ProfileCurve p = loadProfile(opt.configPath);
    json diag;
    const RotationCurve c = curveWithEndpoint(p, opt.curveSamples, &diag);
    const AsymptoticsReport rep = verifyAsymptotics(p, c);
    CsvWriter csv(run.path("asymptotics.csv"),
                  {"law", "fittedConstant", "paperConstant", "ratio", "r2"});
    for (const AsymptoticsLaw* law : {&rep.tauLaw, &rep.phiLaw, &rep.tauPrimeLaw}) {
        csv.beginRow();
        csv.cell(law->law);
        csv.cell(law->fitted);
        csv.cell(law->paperConstant);
        csv.cell(law->ratio);
        csv.cell(law->r2);
        csv.endRow();
    }
    diag["endpointFromFits"] = rep.endpointFromFits;
    diag["tauPrimeSpread"] = rep.tauPrimeSpread;
    run.manifest["diagnostics"] = diag;
    run.finish();
    return 0;
}

int runBallGrowth(const CommandOptions& opt) {
    Run run("ball-growth", opt);
    const ProfileCurve p = loadProfile(opt.configPath);
    std::array<double, 2> source = opt.source;
    if (opt.sourceAtWaist) source = {0.0, p.sAtMinX()};
    const DistanceField field =
        solveDistanceField(surfaceMetric(p), source, opt.rMax, opt.gridH);
    std::vector<double> rList;
    for (int k = 1; k <= 20; ++k)
        rList.push_back(opt.rMax * k / 20.0);
    const GrowthSeries vols = ballVolume(field, rList);
    CsvWriter csv(run.path("ball_growth.csv"), {"r", "volume", "volumeOverR2"});
    for (std::size_t k = 0; k < vols.param.size(); ++k)
        csv.row({vols.param[k], vols.value[k],
                 vols.value[k] / (vols.param[k] * vols.param[k])});
    run.manifest["diagnostics"] = {{"sweepRounds", field.sweepRounds},
                                   {"nodes", static_cast<std::int64_t>(field.nPhi) * field.nS}};
    run.finish();
    return 0;
}

int runGroupGrowth(const CommandOptions& opt) {
    Run run("group-growth", opt);
    const auto gens = parseGenerators(opt.generators, opt.rank);
    const GrowthSeries series = groupGrowth(opt.rank, gens, opt.kMax);
    CsvWriter csv(run.path("group_growth.csv"), {"k", "count"});
    for (std::size_t k = 0; k < series.param.size(); ++k) {
        csv.beginRow();
        csv.cell(static_cast<long>(series.param[k]));
        csv.cell(static_cast<long>(series.value[k]));
        csv.endRow();
    }
    const LineFit fit = growthExponent(series, opt.kMax / 10.0, opt.kMax);
    run.manifest["diagnostics"] = {{"fittedExponent", fit.slope}, {"r2", fit.r2}};
    run.finish();
    return 0;
}

int runEntropy(const CommandOptions& opt) {
    Run run("entropy", opt);
    const ProfileCurve p = loadProfile(opt.configPath);
    const TrajectoryTable table = revolutionFlowTable(p, opt.energy, opt.samples, opt.tMax,
                                                      opt.entropyDt, opt.seed);
    std::vector<double> eps = opt.eps;
    if (eps.empty()) {
        const double diam = 0.5 * table.scale[0];
        eps = {0.20 * diam, 0.15 * diam, 0.11 * diam};
    }
    const double tLo = opt.tLo > 0 ? opt.tLo : opt.tMax / 13.0;
    const double tHi = opt.tHi > 0 ? opt.tHi : opt.tMax * 0.75;
    const EntropyEstimate est = polyEntropyEstimate(table, eps, tLo, tHi);

    CsvWriter counts(run.path("entropy.csv"), {"epsilon", "t", "count"});
    for (std::size_t e = 0; e < est.table.epsList.size(); ++e)
        for (std::size_t ti = 0; ti < est.table.tList.size(); ++ti) {
            counts.beginRow();
            counts.cell(est.table.epsList[e]);
            counts.cell(est.table.tList[ti]);
            counts.cell(static_cast<long>(est.table.counts[e][ti]));
            counts.endRow();
        }
    CsvWriter summary(run.path("entropy_summary.csv"),
                      {"epsilon", "slope", "r2", "hPolEstimate"});
    for (const auto& pe : est.perEps)
        summary.row({pe.eps, pe.slope, pe.r2, est.hPol});
    run.manifest["diagnostics"] = {{"hPol", est.hPol}, {"tLo", tLo}, {"tHi", tHi}};
    run.finish();
    return 0;
}

int runVerifyAll(const CommandOptions& opt) {
    Run run("verify-all", opt);
    const ProfileCurve p = loadProfile(opt.configPath);
    acceptance::Suite suite(p, opt.seed);
    const auto results = suite.runAll(&std::cout);
    CsvWriter csv(run.path("verify_summary.csv"), {"criterion", "name", "pass", "seconds"});
    bool all = true;
    for (const auto& r : results) {
        csv.beginRow();
        csv.cell(static_cast<long>(r.id));
        csv.cell(r.name);
        csv.cell(static_cast<long>(r.pass ? 1 : 0));
        csv.cell(r.seconds);
        csv.endRow();
        json jr = {{"id", r.id}, {"name", r.name}, {"pass", r.pass}, {"detail", r.detail}};
        run.manifest["criteria"].push_back(jr);
        all = all && r.pass;
    }
    run.finish();
    return all ? 0 : 3;
}

} // namespace

ProfileCurve loadProfile(const std::string& configPath) {
    std::ifstream in(configPath);
    if (!in)
        throw ValidationError("cannot open config " + configPath);
    json j;
    try {
        in >> j;
    } catch (const json::exception& ex) {
        throw ValidationError(std::string("config parse error: ") + ex.what());
    }
    if (!j.contains("x") || !j.contains("y"))
        throw ValidationError("config must define series 'x' and 'y'");
    const double tol = j.value("tolerance", 1e-12);
    return makeProfile(seriesFromJson(j["x"]), seriesFromJson(j["y"]), tol);
}

std::string hashFile(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ValidationError("cannot hash missing file " + path);
    std::uint64_t h = 1469598103934665603ULL;
    char c;
    while (in.get(c)) {
        h ^= static_cast<unsigned char>(c);
        h *= 1099511628211ULL;
    }
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

int runCommand(const std::string& name, const CommandOptions& opt) {
    try {
        if (name == "validate-profile") return runValidateProfile(opt);
        if (name == "trajectory") return runTrajectory(opt);
        if (name == "orbits") return runOrbits(opt);
        if (name == "actions") return runActions(opt);
        if (name == "stable-norm") return runStableNorm(opt);
        if (name == "volume") return runVolume(opt);
        if (name == "asymptotics") return runAsymptotics(opt);
        if (name == "ball-growth") return runBallGrowth(opt);
        if (name == "group-growth") return runGroupGrowth(opt);
        if (name == "entropy") return runEntropy(opt);
        if (name == "verify-all") return runVerifyAll(opt);
        std::cerr << "unknown command: " << name << "\n";
        return 1;
    } catch (const ValidationError& ex) {
        std::cerr << "validation error: " << ex.what() << "\n";
        return 1;
    } catch (const NumericalError& ex) {
        std::cerr << "numerical failure: " << ex.what() << "\n";
        return 2;
    }
}

} // namespace revtor::cli
