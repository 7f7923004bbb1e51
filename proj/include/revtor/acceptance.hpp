#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "revtor/eikonal.hpp"
#include "revtor/entropy.hpp"
#include "revtor/growth.hpp"
#include "revtor/profile.hpp"
#include "revtor/stable_norm.hpp"

namespace revtor::acceptance {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    // pass with the sub-claims that are false as stated excluded (criteria 4
    // and 9 carry one such sub-claim each; see their detail strings)
    bool attainablePass = false;
    std::string detail;
    double seconds = 0;
};

/// The x = 2 + cos, y = sin torus used as the standing example throughout.
ProfileCurve canonicalProfile();

/// Seeded generator of valid random profiles (retries until validation
/// passes).
ProfileCurve randomProfile(std::mt19937_64& rng);

/// Runs the full verification pipeline on one profile. Heavy artifacts
/// (distance fields, rotation curve, entropy tables) are computed once and
/// shared across criteria.
class Suite {
public:
    static constexpr int criterionCount = 11;

    Suite(ProfileCurve profile, std::uint64_t seed);

    CriterionResult run(int id);
    std::vector<CriterionResult> runAll(std::ostream* log = nullptr);

    // shared artifacts, computed on first use
    const RotationCurve& curve();
    const EndpointEstimate& endpoint();
    const StableNormBall& ball();
    const DistanceField& flatField();
    const DistanceField& surfaceField();
    const GrowthSeries& surfaceBallVolumes();
    const GrowthSeries& flatBallVolumes();

    const ProfileCurve& profile() const { return profile_; }

private:
    CriterionResult conservation();
    CriterionResult orbitClassification();
    CriterionResult actionOracle();
    CriterionResult convexitySuperlinearity();
    CriterionResult asymptotics();
    CriterionResult twoRouteVolume();
    CriterionResult buragoIvanov();
    CriterionResult stableNormCrossCheck();
    CriterionResult entropySlopes();
    CriterionResult groupGrowthCriterion();
    CriterionResult determinism();

    ProfileCurve profile_;
    std::uint64_t seed_;

    std::optional<RotationCurve> curve_;
    std::optional<EndpointEstimate> endpoint_;
    std::optional<StableNormBall> ball_;
    std::optional<DistanceField> flatField_;
    std::optional<DistanceField> surfaceField_;
    std::optional<GrowthSeries> surfaceVols_;
    std::optional<GrowthSeries> flatVols_;
    std::optional<double> surfaceTau_;
    std::optional<double> flatTau_;
};

} // namespace revtor::acceptance
