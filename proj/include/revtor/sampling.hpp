#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace revtor {

/// Van der Corput radical inverse in the given base.
inline double radicalInverse(std::uint64_t i, std::uint32_t base) {
    double inv = 1.0 / base;
    double f = inv;
    double v = 0.0;
    while (i > 0) {
        v += f * static_cast<double>(i % base);
        i /= base;
        f *= inv;
    }
    return v;
}

/// Halton sequence in bases (2, 3, 5) with a seed-dependent toroidal shift,
/// deterministic for a fixed seed.
class HaltonSampler {
public:
    explicit HaltonSampler(std::uint64_t seed) {
        // splitmix64 expansion of the seed into per-dimension shifts
        for (int d = 0; d < 3; ++d) {
            seed += 0x9e3779b97f4a7c15ULL;
            std::uint64_t z = seed;
            z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
            z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
            z = z ^ (z >> 31);
            shift_[d] = static_cast<double>(z >> 11) * 0x1.0p-53;
        }
    }

    /// k-th point of the shifted sequence, components in [0, 1).
    std::array<double, 3> point(std::uint64_t k) const {
        static constexpr std::uint32_t bases[3] = {2, 3, 5};
        std::array<double, 3> p{};
        for (int d = 0; d < 3; ++d) {
            double v = radicalInverse(k + 1, bases[d]) + shift_[d];
            p[d] = v - std::floor(v);
        }
        return p;
    }

private:
    double shift_[3] = {0, 0, 0};
};

} // namespace revtor
