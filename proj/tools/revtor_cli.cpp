// Batch front-end: profile configs in, CSV artifacts + a JSON manifest out.

#include <string>
#include <vector>

#include <CLI11.hpp>

#include "revtor/run.hpp"

int main(int argc, char** argv) {
    CLI::App app{"geodesic-flow toolkit for tori of revolution"};
    app.require_subcommand(1);

    revtor::cli::CommandOptions opt;
    std::string sourceSpec;

    auto addCommon = [&](CLI::App* cmd, bool needsConfig = true) {
        if (needsConfig)
            cmd->add_option("--config", opt.configPath, "profile config (JSON)")->required();
        cmd->add_option("--out", opt.outDir, "output directory");
        cmd->add_option("--seed", opt.seed, "seed for stochastic commands");
        cmd->add_option("--tol", opt.tol, "integration/quadrature tolerance");
    };

    CLI::App* validate = app.add_subcommand("validate-profile", "validate a profile config");
    addCommon(validate);

    CLI::App* traj = app.add_subcommand("trajectory", "integrate and dump one trajectory");
    addCommon(traj);
    traj->add_option("--phi", opt.initialState[0], "initial phi");
    traj->add_option("--s", opt.initialState[1], "initial s");
    traj->add_option("--p-phi", opt.initialState[2], "initial pPhi");
    traj->add_option("--p-s", opt.initialState[3], "initial pS");
    traj->add_option("--t-max", opt.trajTMax, "integration time");
    traj->add_option("--sample-step", opt.sampleStep, "output sampling step");

    CLI::App* orbits = app.add_subcommand("orbits", "critical circles and Floquet spectra");
    addCommon(orbits);
    orbits->add_option("--energy", opt.energy, "energy level");

    CLI::App* actions = app.add_subcommand("actions", "action-angle table with ODE oracle");
    addCommon(actions);
    actions->add_option("--energy", opt.energy, "energy level");
    actions->add_option("--n-rho", opt.nRho, "number of rho samples");

    CLI::App* snorm = app.add_subcommand("stable-norm", "rotation curve of the stable norm");
    addCommon(snorm);
    snorm->add_option("--curve-samples", opt.curveSamples, "graded grid size");

    CLI::App* volume = app.add_subcommand("volume", "two-route asymptotic volume");
    addCommon(volume);
    volume->add_option("--curve-samples", opt.curveSamples, "graded grid size");

    CLI::App* asym = app.add_subcommand("asymptotics", "edge asymptotics fits");
    addCommon(asym);
    asym->add_option("--curve-samples", opt.curveSamples, "graded grid size");

    CLI::App* ball = app.add_subcommand("ball-growth", "distance field and ball volumes");
    addCommon(ball);
    ball->add_option("--grid-h", opt.gridH, "grid spacing");
    ball->add_option("--r-max", opt.rMax, "largest validated radius");
    ball->add_option("--source", sourceSpec, "source as 'phi,s' (default waist)");

    CLI::App* group = app.add_subcommand("group-growth", "lattice Cayley-ball counts");
    group->add_option("--out", opt.outDir, "output directory");
    group->add_option("--seed", opt.seed, "seed");
    group->add_option("--rank", opt.rank, "lattice rank (1-3)");
    group->add_option("--k-max", opt.kMax, "largest word length");
    group->add_option("--generators", opt.generators, "e.g. '1,0;1,1' (default standard)");

    CLI::App* entropy = app.add_subcommand("entropy", "separated-set entropy estimate");
    addCommon(entropy);
    entropy->add_option("--energy", opt.energy, "energy level");
    entropy->add_option("--samples", opt.samples, "number of flow samples");
    entropy->add_option("--t-max", opt.tMax, "trajectory horizon");
    entropy->add_option("--eps", opt.eps, "separation scales")->delimiter(',');
    entropy->add_option("--t-lo", opt.tLo, "fit window start");
    entropy->add_option("--t-hi", opt.tHi, "fit window end");

    CLI::App* verify = app.add_subcommand("verify-all", "run the full verification pipeline");
    addCommon(verify);

    CLI11_PARSE(app, argc, argv);

    if (!sourceSpec.empty()) {
        const auto comma = sourceSpec.find(',');
        if (comma == std::string::npos) {
            std::fprintf(stderr, "--source expects 'phi,s'\n");
            return 1;
        }
        opt.source = {std::stod(sourceSpec.substr(0, comma)),
                      std::stod(sourceSpec.substr(comma + 1))};
    } else {
        opt.sourceAtWaist = true;
    }

    const std::string name = app.get_subcommands().front()->get_name();
    return revtor::cli::runCommand(name, opt);
}
