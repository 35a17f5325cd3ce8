#include "hyperslice/monte_carlo.hpp"

#include <cmath>
#include <exception>
#include <string>
#include <utility>

#include "hyperslice/errors.hpp"
#include "hyperslice/expectation.hpp"
#include "hyperslice/parallel.hpp"

namespace hyperslice {

std::string_view to_string(OrientationMode mode)
{
    switch (mode) {
    case OrientationMode::isotropic: return "isotropic";
    case OrientationMode::fixed: return "fixed";
    case OrientationMode::axis: return "axis";
    }
    return "unknown";
}

OrientationMode parse_orientation_mode(std::string_view text)
{
    if (text == "isotropic") return OrientationMode::isotropic;
    if (text == "fixed") return OrientationMode::fixed;
    if (text == "axis") return OrientationMode::axis;
    throw InvalidInput("unknown orientation mode '" + std::string(text) + "'");
}

void SimulationConfig::validate() const
{
    if (n == 0 || n > kMaxExactDimension) {
        throw InvalidInput("n must be in [1, " + std::to_string(kMaxExactDimension) + "]");
    }
    if (k == 0 || k > n) throw InvalidInput("k must be in [1, n]");
    if (samples == 0) throw InvalidInput("samples must be at least 1");
    if (translation_resample_per_orientation == 0) throw InvalidInput("translation resample count must be at least 1");
    if (body && body->n() != n) throw InvalidInput("body dimension does not match n");
    if (mode == OrientationMode::fixed) {
        if (!fixed_orientation) throw InvalidInput("fixed mode needs an orientation");
        if (fixed_orientation->n() != n || fixed_orientation->k() != k) {
            throw InvalidInput("fixed orientation does not have shape (n, k)");
        }
    }
}

FlatOrientation sample_orientation(SeededRng& rng, std::size_t n, std::size_t k, std::uint64_t* redraws)
{
    if (k == 0 || k > n) throw InvalidInput("orientation sampling needs 1 <= k <= n");
    for (std::size_t attempt = 0; attempt <= kMaxOrientationRedraws; ++attempt) {
        VectorList spans;
        spans.reserve(k);
        for (std::size_t j = 0; j < k; ++j) spans.push_back(sample_unit_sphere(rng, n));
        if (rank(spans) == k) return FlatOrientation(std::move(spans));
        if (redraws) ++*redraws;
    }
    throw InternalError("orientation sampling produced " + std::to_string(kMaxOrientationRedraws) +
                        " rank-deficient draws in a row; the generator is broken");
}

TranslationSampler::TranslationSampler(const Body& body, const FlatOrientation& orientation)
    : orientation_(orientation),
      basis_(orientation.normal_basis()),
      projected_(project(body.zonotope(), basis_)),
      sampler_(projected_)
{
}

Vector sample_translation(SeededRng& rng, const Body& body, const FlatOrientation& orientation)
{
    SamplingStats stats;
    return TranslationSampler(body, orientation).sample(rng, stats);
}

namespace {

struct ChunkRange {
    std::size_t begin = 0;
    std::size_t end = 0;
};

std::vector<ChunkRange> chunk_ranges(const SimulationConfig& config)
{
    const std::size_t r = config.translation_resample_per_orientation;
    const std::size_t len = r * ((kChunkSize + r - 1) / r);
    std::vector<ChunkRange> out;
    for (std::size_t b = 0; b < config.samples; b += len) out.push_back({b, std::min(config.samples, b + len)});
    return out;
}

// First failure of a chunk, remembered so the lowest failing sample is reported
// whatever the thread schedule.
struct ChunkError {
    std::size_t sample = 0;
    std::exception_ptr error;
};

[[noreturn]] void rethrow_chunk_error(const ChunkError& e)
{
    try {
        std::rethrow_exception(e.error);
    } catch (const SamplingFailure& f) {
        throw SamplingFailure("sample " + std::to_string(e.sample) + ": " + f.what());
    }
}

// Drives per-sample work over a chunk: draws an orientation at the start of
// every resample group (isotropic mode), then a translation per sample.
template <typename PerSample>
void run_chunk(const SimulationConfig& config, const Body& body, const TranslationSampler* shared,
               std::size_t chunk_index, const ChunkRange& range, SamplingStats& stats,
               std::uint64_t& redraws, std::optional<ChunkError>& error, PerSample&& per_sample)
{
    SeededRng rng(derive_seed(config.seed, chunk_index));
    std::optional<TranslationSampler> own;
    std::size_t i = range.begin;
    try {
        for (; i < range.end; ++i) {
            if (!shared && (i - range.begin) % config.translation_resample_per_orientation == 0) {
                own.emplace(body, sample_orientation(rng, config.n, config.k, &redraws));
            }
            const TranslationSampler& sampler = shared ? *shared : *own;
            Vector tau = sampler.sample(rng, stats);
            per_sample(sampler.flat(std::move(tau)));
        }
    } catch (...) {
        error = ChunkError{i, std::current_exception()};
    }
}

std::optional<TranslationSampler> shared_sampler(const SimulationConfig& config, const Body& body)
{
    switch (config.mode) {
    case OrientationMode::fixed: return TranslationSampler(body, *config.fixed_orientation);
    case OrientationMode::axis: return TranslationSampler(body, FlatOrientation::axis(config.n, config.k));
    case OrientationMode::isotropic: break;
    }
    return std::nullopt;
}

struct EstimateChunk {
    EstimateReport partial;
    std::optional<ChunkError> error;
};

void estimate_chunk(const SimulationConfig& config, const Body& body, const std::vector<Face>& faces,
                    const TranslationSampler* shared, std::size_t c, const ChunkRange& range, EstimateChunk& out)
{
    EstimateReport& r = out.partial;
    run_chunk(config, body, shared, c, range, r.translation_sampling, r.orientation_redraws, out.error,
              [&](const Flat& flat) {
                  const SliceResult slice = slice_vertices(body, flat, faces);
                  const std::size_t count = slice.vertices.size();
                  ++r.samples_used;
                  ++r.histogram[count];
                  r.count_sum += count;
                  r.count_sum_squares += static_cast<std::uint64_t>(count) * count;
                  r.singular_face_systems += slice.diagnostics.singular_systems;
                  if (count > 0 && count < config.k + 1) ++r.degenerate_count;
                  if (slice.diagnostics.flagged()) {
                      ++r.flagged_count;
                      ++r.flagged_histogram[count];
                  }
              });
}

EstimateReport reduce(const SimulationConfig& config, std::vector<EstimateChunk>& chunks)
{
    for (const EstimateChunk& c : chunks) {
        if (c.error) rethrow_chunk_error(*c.error);
    }
    EstimateReport total;
    for (const EstimateChunk& c : chunks) {
        const EstimateReport& p = c.partial;
        for (const auto& [count, freq] : p.histogram) total.histogram[count] += freq;
        for (const auto& [count, freq] : p.flagged_histogram) total.flagged_histogram[count] += freq;
        total.samples_used += p.samples_used;
        total.degenerate_count += p.degenerate_count;
        total.flagged_count += p.flagged_count;
        total.singular_face_systems += p.singular_face_systems;
        total.orientation_redraws += p.orientation_redraws;
        total.translation_sampling += p.translation_sampling;
        total.count_sum += p.count_sum;
        total.count_sum_squares += p.count_sum_squares;
    }
    if (total.samples_used != config.samples) throw InternalError("sample accounting mismatch");

    // Integer moments keep the reduction exact; the variance numerator
    // N Q - S^2 is formed in 128 bits.
    __extension__ using u128 = unsigned __int128;
    const auto n = static_cast<u128>(total.samples_used);
    const auto s = static_cast<u128>(total.count_sum);
    const auto q = static_cast<u128>(total.count_sum_squares);
    total.mean = static_cast<double>(total.count_sum) / static_cast<double>(total.samples_used);
    if (total.samples_used > 1) {
        const double numerator = static_cast<double>(n * q - s * s);
        const double variance = numerator / (static_cast<double>(total.samples_used) *
                                             static_cast<double>(total.samples_used - 1));
        total.std_error = std::sqrt(variance / static_cast<double>(total.samples_used));
    }
    return total;
}

template <bool Parallel>
EstimateReport estimate_impl(const SimulationConfig& config)
{
    config.validate();
    const Body body = config.resolved_body();
    const std::vector<Face> faces = enumerate_faces(config.n, config.k);
    const std::optional<TranslationSampler> shared = shared_sampler(config, body);
    const TranslationSampler* shared_ptr = shared ? &*shared : nullptr;
    const std::vector<ChunkRange> ranges = chunk_ranges(config);
    std::vector<EstimateChunk> chunks(ranges.size());

    if constexpr (Parallel) {
        const auto count = static_cast<std::ptrdiff_t>(ranges.size());
#pragma omp parallel for schedule(dynamic, 1)
        for (std::ptrdiff_t c = 0; c < count; ++c) {
            const auto ci = static_cast<std::size_t>(c);
            estimate_chunk(config, body, faces, shared_ptr, ci, ranges[ci], chunks[ci]);
        }
    } else {
        for (std::size_t c = 0; c < ranges.size(); ++c) {
            estimate_chunk(config, body, faces, shared_ptr, c, ranges[c], chunks[c]);
        }
    }
    return reduce(config, chunks);
}

struct HitChunk {
    std::vector<std::uint64_t> hits;
    std::uint64_t vertex_sum = 0;
    std::uint64_t mismatched = 0;
    std::uint64_t flagged = 0;
    SamplingStats stats;
    std::uint64_t redraws = 0;
    std::optional<ChunkError> error;
};

template <bool Parallel>
FaceHitReport face_hits_impl(const SimulationConfig& config)
{
    config.validate();
    if (config.mode == OrientationMode::isotropic) {
        throw InvalidInput("face-hit frequencies need a fixed orientation");
    }
    const Body body = config.resolved_body();
    const std::vector<Face> faces = enumerate_faces(config.n, config.k);
    const TranslationSampler shared = *shared_sampler(config, body);

    FaceHitReport report;
    report.n = config.n;
    report.k = config.k;
    report.samples = config.samples;
    report.subsets = combinations(config.n, config.n - config.k);
    std::map<IndexSet, std::size_t> subset_index;
    for (std::size_t s = 0; s < report.subsets.size(); ++s) subset_index.emplace(report.subsets[s], s);

    std::vector<MembershipTest> tests;
    std::vector<std::size_t> face_subset;
    tests.reserve(faces.size());
    for (const Face& f : faces) {
        tests.emplace_back(face_zonotope(body, f, shared.basis()));
        face_subset.push_back(subset_index.at(f.free));
    }

    const std::vector<ChunkRange> ranges = chunk_ranges(config);
    std::vector<HitChunk> chunks(ranges.size());
    auto work = [&](std::size_t c) {
        HitChunk& out = chunks[c];
        out.hits.assign(report.subsets.size(), 0);
        run_chunk(config, body, &shared, c, ranges[c], out.stats, out.redraws, out.error, [&](const Flat& flat) {
            std::uint64_t faces_hit = 0;
            for (std::size_t f = 0; f < faces.size(); ++f) {
                if (tests[f](flat.tau())) {
                    ++out.hits[face_subset[f]];
                    ++faces_hit;
                }
            }
            const SliceResult slice = slice_vertices(body, flat, faces);
            out.vertex_sum += slice.vertices.size();
            if (slice.vertices.size() != faces_hit) ++out.mismatched;
            if (slice.diagnostics.flagged()) ++out.flagged;
        });
    };
    if constexpr (Parallel) {
        const auto count = static_cast<std::ptrdiff_t>(ranges.size());
#pragma omp parallel for schedule(dynamic, 1)
        for (std::ptrdiff_t c = 0; c < count; ++c) work(static_cast<std::size_t>(c));
    } else {
        for (std::size_t c = 0; c < ranges.size(); ++c) work(c);
    }

    for (const HitChunk& c : chunks) {
        if (c.error) rethrow_chunk_error(*c.error);
    }
    report.hits.assign(report.subsets.size(), 0);
    std::uint64_t vertex_sum = 0;
    for (const HitChunk& c : chunks) {
        for (std::size_t s = 0; s < c.hits.size(); ++s) report.hits[s] += c.hits[s];
        vertex_sum += c.vertex_sum;
        report.mismatched_samples += c.mismatched;
        report.flagged_samples += c.flagged;
    }
    const double multiplicity = std::ldexp(1.0, static_cast<int>(config.k));
    const double n_samples = static_cast<double>(config.samples);
    std::uint64_t total_hits = 0;
    for (std::size_t s = 0; s < report.hits.size(); ++s) {
        report.frequencies.push_back(static_cast<double>(report.hits[s]) / (n_samples * multiplicity));
        total_hits += report.hits[s];
    }
    report.mean_faces_hit = static_cast<double>(total_hits) / n_samples;
    report.mean_vertex_count = static_cast<double>(vertex_sum) / n_samples;
    return report;
}

}  // namespace

EstimateReport estimate_expected_vertices(const SimulationConfig& config)
{
    return estimate_impl<true>(config);
}

EstimateReport estimate_expected_vertices_serial(const SimulationConfig& config)
{
    return estimate_impl<false>(config);
}

FaceHitReport face_hit_frequencies(const SimulationConfig& config)
{
    return face_hits_impl<true>(config);
}

FaceHitReport face_hit_frequencies_serial(const SimulationConfig& config)
{
    return face_hits_impl<false>(config);
}

}  // namespace hyperslice
