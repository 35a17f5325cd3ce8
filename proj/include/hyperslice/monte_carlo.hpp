#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string_view>
#include <vector>

#include "hyperslice/combinatorics.hpp"
#include "hyperslice/rng.hpp"
#include "hyperslice/slice.hpp"
#include "hyperslice/zonotope.hpp"

namespace hyperslice {

/// Samples per chunk. Chunk c draws from SeededRng(derive_seed(seed, c)) and
/// chunk results are reduced in chunk order, so reports do not depend on the
/// number of worker threads.
inline constexpr std::size_t kChunkSize = 4096;
/// Orientation redraws tolerated before the RNG is considered broken.
inline constexpr std::size_t kMaxOrientationRedraws = 100;

enum class OrientationMode { isotropic, fixed, axis };

std::string_view to_string(OrientationMode mode);
/// Accepts "isotropic", "fixed", "axis"; throws InvalidInput otherwise.
OrientationMode parse_orientation_mode(std::string_view text);

struct SimulationConfig {
    std::size_t n = 0;
    std::size_t k = 0;
    std::size_t samples = 0;
    std::uint64_t seed = 0;
    OrientationMode mode = OrientationMode::isotropic;
    std::optional<FlatOrientation> fixed_orientation;  // required for mode == fixed
    std::optional<Body> body;                          // defaults to the cube [-1, 1]^n
    std::size_t translation_resample_per_orientation = 1;

    Body resolved_body() const { return body ? *body : Body::cube(n); }
    /// Throws InvalidInput for inconsistent settings.
    void validate() const;
};

struct EstimateReport {
    double mean = 0.0;
    double std_error = 0.0;  // sample standard deviation / sqrt(samples_used)
    std::map<std::size_t, std::uint64_t> histogram;          // vertex count -> samples
    std::map<std::size_t, std::uint64_t> flagged_histogram;  // same, restricted to flagged samples
    std::uint64_t samples_used = 0;
    std::uint64_t degenerate_count = 0;     // 0 < count < k + 1
    std::uint64_t flagged_count = 0;        // near-boundary or merged solutions
    std::uint64_t singular_face_systems = 0;
    std::uint64_t orientation_redraws = 0;
    SamplingStats translation_sampling;
    std::uint64_t count_sum = 0;
    std::uint64_t count_sum_squares = 0;

    double rejection_acceptance_rate() const { return translation_sampling.acceptance_rate(); }
};

/// k independent uniform unit vectors, redrawn as a set while rank < k.
/// Throws InternalError after kMaxOrientationRedraws redraws.
FlatOrientation sample_orientation(SeededRng& rng, std::size_t n, std::size_t k,
                                   std::uint64_t* redraws = nullptr);

/// Uniform translations over P_N(body) for one orientation.
class TranslationSampler {
public:
    TranslationSampler(const Body& body, const FlatOrientation& orientation);

    /// tau in normal-space coordinates.
    Vector sample(SeededRng& rng, SamplingStats& stats) const { return sampler_.sample(rng, stats); }
    Flat flat(Vector tau) const { return Flat(orientation_, basis_, std::move(tau)); }

    const NormalBasis& basis() const { return basis_; }
    const Zonotope& projected_body() const { return projected_; }

private:
    FlatOrientation orientation_;
    NormalBasis basis_;
    Zonotope projected_;
    UniformSampler sampler_;
};

Vector sample_translation(SeededRng& rng, const Body& body, const FlatOrientation& orientation);

/// Mean vertex count over random slices. Chunks run under OpenMP.
/// Sampling failures are rethrown as SamplingFailure naming the sample index.
EstimateReport estimate_expected_vertices(const SimulationConfig& config);
/// Serial reference; returns the identical report.
EstimateReport estimate_expected_vertices_serial(const SimulationConfig& config);

struct FaceHitReport {
    std::size_t n = 0;
    std::size_t k = 0;
    std::uint64_t samples = 0;
    std::vector<IndexSet> subsets;           // free subsets, lexicographic
    std::vector<std::uint64_t> hits;         // face_intersects == true, summed over the subset's 2^k faces
    std::vector<double> frequencies;         // hits / (samples * 2^k)
    double mean_faces_hit = 0.0;             // sum over subsets of 2^k * frequency
    double mean_vertex_count = 0.0;
    std::uint64_t mismatched_samples = 0;    // vertex count != faces hit
    std::uint64_t flagged_samples = 0;
};

/// Per-subset empirical face-hit probabilities for a fixed orientation.
FaceHitReport face_hit_frequencies(const SimulationConfig& config);
FaceHitReport face_hit_frequencies_serial(const SimulationConfig& config);

}  // namespace hyperslice
