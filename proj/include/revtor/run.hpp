#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "revtor/profile.hpp"

namespace revtor::cli {

/// Everything a batch command needs; flags map onto these fields 1:1.
struct CommandOptions {
    std::string configPath;
    std::string outDir = ".";
    std::uint64_t seed = 1;
    double tol = 1e-10;
    double energy = 0.5;

    // trajectory
    std::array<double, 4> initialState{0, 0, 0, twoPi};
    double trajTMax = 20.0;
    double sampleStep = 0.05;

    // actions
    int nRho = 20;

    // stable-norm family
    int curveSamples = 160;

    // ball-growth
    double gridH = 0.02;
    double rMax = 40.0;
    std::array<double, 2> source{0.0, 0.0};
    bool sourceAtWaist = false;

    // group-growth
    int rank = 2;
    int kMax = 200;
    std::string generators; // "1,0;0,1" — empty means the standard basis

    // entropy
    int samples = 5000;
    double tMax = 200.0;
    double entropyDt = 0.05;
    std::vector<double> eps; // empty -> diameter-relative defaults
    double tLo = 0, tHi = 0; // 0 -> window defaults from tMax
};

/// Commands: validate-profile, trajectory, orbits, actions, stable-norm,
/// volume, asymptotics, ball-growth, group-growth, entropy, verify-all.
/// Writes the command's CSV artifacts plus manifest.json under outDir.
/// Exit status: 0 ok, 1 validation error, 2 numerical failure,
/// 3 acceptance-criterion failure (verify-all only).
int runCommand(const std::string& name, const CommandOptions& opt);

ProfileCurve loadProfile(const std::string& configPath);

/// FNV-1a hash of the raw config bytes, as fixed-width hex.
std::string hashFile(const std::string& path);

} // namespace revtor::cli
