#pragma once

#include <cstdint>
#include <random>
#include <string_view>

#include "hyperslice/linalg.hpp"

namespace hyperslice {

/// Identifier written into every report so a run can be replayed bit for bit.
/// Bump the suffix whenever the mapping from seed to samples changes.
inline constexpr std::string_view kRngAlgorithm = "mt19937_64+u53+marsaglia-polar/v1";

/// SplitMix64 finalizer. Used to turn (seed, stream) pairs into well-mixed
/// sub-seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Sub-seed for stream `stream` of a run seeded with `seed`:
/// splitmix64(seed ^ splitmix64(stream + 1)).
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream)
{
    return splitmix64(seed ^ splitmix64(stream + 1));
}

/// Deterministic generator with a 64-bit seed. Single owner: never share one
/// instance between threads; give each worker its own derive_seed() stream.
///
/// Uniform and Gaussian variates are produced by hand (53-bit mantissa fill
/// and the Marsaglia polar method) rather than by <random> distributions, whose
/// output is implementation defined.
class SeededRng {
public:
    explicit SeededRng(std::uint64_t seed) : engine_(seed), seed_(seed) {}

    std::uint64_t seed() const { return seed_; }

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform on [0, 1).
    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform on [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    double standard_normal();

private:
    std::mt19937_64 engine_;
    std::uint64_t seed_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

/// Uniform point on S^{n-1} from normalized Gaussian draws. An all-zero draw
/// is discarded and redrawn.
Vector sample_unit_sphere(SeededRng& rng, std::size_t n);

}  // namespace hyperslice
