#pragma once

#include <cstdint>
#include <utility>
#include <cmath>
#include <numbers>

namespace bmlab {

// Counter-based random numbers: value(i) of a stream is the SplitMix64 output
// at state base + i * gamma, so any (path, step, slot) triple can be generated
// independently, in any order, on any thread, with identical results. Stream
// bases are themselves SplitMix64 outputs of the master seed indexed by
// path id.
class PathRng {
  public:
    PathRng(std::uint64_t master_seed, std::uint64_t path_id)
        : base_(finalize(master_seed + (path_id + 1) * kGamma)) {}

    // Uniform in (0, 1]; never 0, so logs are safe.
    double uniform(std::uint64_t ctr) const {
        const std::uint64_t bits = finalize(base_ + ctr * kGamma);
        return static_cast<double>((bits >> 11) + 1) * 0x1.0p-53;
    }

    // Independent standard normal pair (Box-Muller) from counters 2c, 2c+1.
    std::pair<double, double> normal_pair(std::uint64_t c) const {
        const double u1 = uniform(2 * c);
        const double u2 = uniform(2 * c + 1);
        const double rho = std::sqrt(-2.0 * std::log(u1));
        const double ang = 2.0 * std::numbers::pi * u2;
        return {rho * std::cos(ang), rho * std::sin(ang)};
    }

  private:
    static constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;

    static std::uint64_t finalize(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    std::uint64_t base_;
};

} // namespace bmlab
