#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <string>

#include "hyperslice/errors.hpp"
#include "hyperslice/expectation.hpp"
#include "hyperslice/monte_carlo.hpp"
#include "hyperslice/parallel.hpp"
#include "oracles.hpp"

using namespace hyperslice;

namespace {

const double kR3 = std::sqrt(3.0);

FlatOrientation hexagon_plane()
{
    const double r2 = std::sqrt(2.0);
    const double r6 = std::sqrt(6.0);
    return FlatOrientation({{1 / r2, -1 / r2, 0}, {1 / r6, 1 / r6, -2 / r6}});
}

SimulationConfig config(std::size_t n, std::size_t k, std::size_t samples, std::uint64_t seed,
                        OrientationMode mode = OrientationMode::isotropic)
{
    SimulationConfig c;
    c.n = n;
    c.k = k;
    c.samples = samples;
    c.seed = seed;
    c.mode = mode;
    return c;
}

SimulationConfig fixed_config(const FlatOrientation& o, std::size_t samples, std::uint64_t seed)
{
    SimulationConfig c = config(o.n(), o.k(), samples, seed, OrientationMode::fixed);
    c.fixed_orientation = o;
    return c;
}

void expect_identical(const EstimateReport& a, const EstimateReport& b)
{
    EXPECT_EQ(a.mean, b.mean);
    EXPECT_EQ(a.std_error, b.std_error);
    EXPECT_EQ(a.histogram, b.histogram);
    EXPECT_EQ(a.flagged_histogram, b.flagged_histogram);
    EXPECT_EQ(a.samples_used, b.samples_used);
    EXPECT_EQ(a.degenerate_count, b.degenerate_count);
    EXPECT_EQ(a.flagged_count, b.flagged_count);
    EXPECT_EQ(a.singular_face_systems, b.singular_face_systems);
    EXPECT_EQ(a.orientation_redraws, b.orientation_redraws);
    EXPECT_EQ(a.translation_sampling.proposals, b.translation_sampling.proposals);
    EXPECT_EQ(a.translation_sampling.accepted, b.translation_sampling.accepted);
}

}  // namespace

TEST(SampleOrientation, ShapeAndRank)
{
    SeededRng rng(301);
    for (std::size_t n = 1; n <= 8; ++n) {
        for (std::size_t k = 1; k <= n; ++k) {
            const FlatOrientation o = sample_orientation(rng, n, k);
            EXPECT_EQ(n, o.n());
            EXPECT_EQ(k, o.k());
            EXPECT_EQ(k, rank(o.spans(), 1e-9));
            for (const Vector& v : o.spans()) EXPECT_NEAR(1.0, norm(v), 1e-12);
        }
    }
    EXPECT_THROW(sample_orientation(rng, 3, 0), InvalidInput);
    EXPECT_THROW(sample_orientation(rng, 3, 4), InvalidInput);
}

TEST(SampleOrientation, MeanAbsoluteCosineOfSpherePairs)
{
    // density of the angle between two uniform directions in R^3 is sin(t) / 2
    const double expected = oracle::simpson([](double t) { return std::abs(std::cos(t)) * std::sin(t) / 2; }, 0.0,
                                            M_PI, 2000);
    EXPECT_NEAR(0.5, expected, 1e-9);
    SeededRng rng(307);
    double mean = 0.0;
    const int draws = 10000;
    for (int i = 0; i < draws; ++i) {
        const FlatOrientation o = sample_orientation(rng, 3, 2);
        mean += std::abs(dot(o.spans()[0], o.spans()[1])) / draws;
    }
    EXPECT_NEAR(expected, mean, 0.02);
}

TEST(SampleTranslation, AxisPlaneIsSymmetricInterval)
{
    SeededRng rng(311);
    const TranslationSampler ts(Body::cube(3), FlatOrientation::axis(3, 2));
    SamplingStats stats;
    double mean = 0.0;
    for (int i = 0; i < 10000; ++i) {
        const Vector tau = ts.sample(rng, stats);
        ASSERT_EQ(1u, tau.size());
        ASSERT_LE(std::abs(tau[0]), 1.0);
        mean += tau[0] / 10000;
    }
    EXPECT_NEAR(0.0, mean, 0.02);
}

TEST(SampleTranslation, DiagonalNormalReachesSupport)
{
    SeededRng rng(313);
    const FlatOrientation o = hexagon_plane();
    const TranslationSampler ts(Body::cube(3), o);
    SamplingStats stats;
    double largest = 0.0;
    for (int i = 0; i < 10000; ++i) {
        const Vector tau = ts.sample(rng, stats);
        ASSERT_LE(std::abs(tau[0]), kR3 + 1e-12);
        largest = std::max(largest, std::abs(tau[0]));
    }
    EXPECT_GT(largest, kR3 - 0.01);
    EXPECT_EQ(1u, sample_translation(rng, Body::cube(3), o).size());
}

TEST(SampleTranslation, AcceptanceRateFourCube)
{
    SeededRng rng(317);
    const TranslationSampler ts(Body::cube(4), sample_orientation(rng, 4, 2));
    SamplingStats stats;
    for (int i = 0; i < 10000; ++i) {
        const Vector tau = ts.sample(rng, stats);
        ASSERT_TRUE(contains(ts.projected_body(), tau));
    }
    EXPECT_GT(stats.acceptance_rate(), 0.1);
}

TEST(Estimate, FourCubePlanesAverageFour)
{
    const EstimateReport r = estimate_expected_vertices(config(4, 2, 100000, 42));
    EXPECT_LE(std::abs(r.mean - 4.0), 3 * r.std_error);
    EXPECT_EQ(100000u, r.samples_used);
    std::uint64_t total = 0;
    for (const auto& [count, freq] : r.histogram) total += freq;
    EXPECT_EQ(r.samples_used, total);
    EXPECT_GT(r.rejection_acceptance_rate(), 0.1);
}

TEST(Estimate, ThreeCubeLinesAverageTwo)
{
    const EstimateReport r = estimate_expected_vertices(config(3, 1, 100000, 43));
    EXPECT_LE(std::abs(r.mean - 2.0), 3 * r.std_error);
}

TEST(Estimate, WholeCubeSingleSample)
{
    const EstimateReport r = estimate_expected_vertices(config(3, 3, 1, 44));
    EXPECT_EQ(8.0, r.mean);
    EXPECT_EQ((std::map<std::size_t, std::uint64_t>{{8, 1}}), r.histogram);
    EXPECT_EQ(0.0, r.std_error);
}

TEST(Estimate, AxisModeSquares)
{
    const EstimateReport r = estimate_expected_vertices(config(3, 2, 1000, 1, OrientationMode::axis));
    EXPECT_EQ((std::map<std::size_t, std::uint64_t>{{4, 1000}}), r.histogram);
}

TEST(Estimate, StdErrorMatchesDefinition)
{
    const EstimateReport r = estimate_expected_vertices(config(4, 2, 5000, 45));
    // sample standard deviation / sqrt(N) from the histogram
    const double n = static_cast<double>(r.samples_used);
    double mean = 0.0;
    for (const auto& [count, freq] : r.histogram) mean += static_cast<double>(count * freq) / n;
    double ss = 0.0;
    for (const auto& [count, freq] : r.histogram) ss += static_cast<double>(freq) * std::pow(count - mean, 2);
    EXPECT_NEAR(mean, r.mean, 1e-12);
    EXPECT_NEAR(std::sqrt(ss / (n - 1)) / std::sqrt(n), r.std_error, 1e-12);
}

TEST(Estimate, HistogramSupportForPlanes)
{
    for (std::size_t n = 3; n <= 5; ++n) {
        const EstimateReport r = estimate_expected_vertices(config(n, 2, 20000, 46 + n));
        for (const auto& [count, freq] : r.histogram) {
            if (count == 0) continue;
            const bool inside = count >= 3 && count <= 2 * n;
            if (!inside) {
                const auto it = r.flagged_histogram.find(count);
                EXPECT_TRUE(it != r.flagged_histogram.end() && it->second == freq) << "n=" << n << " count=" << count;
            }
        }
    }
}

TEST(Estimate, ParallelMatchesSerial)
{
    SimulationConfig c = config(4, 2, 20000, 47);
    expect_identical(estimate_expected_vertices_serial(c), estimate_expected_vertices(c));
    c.translation_resample_per_orientation = 7;
    expect_identical(estimate_expected_vertices_serial(c), estimate_expected_vertices(c));
}

TEST(Estimate, IndependentOfThreadCount)
{
    const SimulationConfig c = config(4, 2, 20000, 48);
    const int before = max_threads();
    set_threads(1);
    const EstimateReport one = estimate_expected_vertices(c);
    set_threads(4);
    const EstimateReport four = estimate_expected_vertices(c);
    set_threads(before);
    expect_identical(one, four);
}

TEST(Estimate, Reproducible)
{
    const SimulationConfig c = fixed_config(hexagon_plane(), 10000, 49);
    expect_identical(estimate_expected_vertices(c), estimate_expected_vertices(c));
}

TEST(Estimate, DisjointSeedsAgree)
{
    const EstimateReport a = estimate_expected_vertices(config(4, 2, 20000, 50));
    const EstimateReport b = estimate_expected_vertices(config(4, 2, 20000, 51));
    EXPECT_NE(a.mean, b.mean);
    EXPECT_LE(std::abs(a.mean - b.mean), 6 * std::hypot(a.std_error, b.std_error));
}

TEST(Estimate, FixedOrientationConsistentOverSeeds)
{
    SeededRng rng(52);
    const FlatOrientation o = sample_orientation(rng, 4, 2);
    const double exact = expected_vertices_exact(Body::cube(4), o);
    int within = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const EstimateReport r = estimate_expected_vertices(fixed_config(o, 5000, 1000 + seed));
        within += std::abs(r.mean - exact) <= 3 * r.std_error;
    }
    EXPECT_GE(within, 20 * 99 / 100);
}

TEST(Estimate, ParallelotopeBody)
{
    SimulationConfig c = config(3, 2, 20000, 53);
    c.body = Body::parallelotope({{2, 0.5, 0}, {0, 1, 0.3}, {0.2, 0, 3}}, {1, 2, 3});
    const EstimateReport r = estimate_expected_vertices(c);
    EXPECT_LE(std::abs(r.mean - 4.0), 3 * r.std_error);
}

TEST(Estimate, ConfigValidation)
{
    EXPECT_THROW(estimate_expected_vertices(config(3, 0, 10, 1)), InvalidInput);
    EXPECT_THROW(estimate_expected_vertices(config(3, 4, 10, 1)), InvalidInput);
    EXPECT_THROW(estimate_expected_vertices(config(3, 2, 0, 1)), InvalidInput);
    EXPECT_THROW(estimate_expected_vertices(config(3, 2, 10, 1, OrientationMode::fixed)), InvalidInput);
    SimulationConfig c = config(3, 2, 10, 1);
    c.body = Body::cube(4);
    EXPECT_THROW(estimate_expected_vertices(c), InvalidInput);
    EXPECT_THROW(parse_orientation_mode("sideways"), InvalidInput);
    EXPECT_EQ(OrientationMode::axis, parse_orientation_mode(to_string(OrientationMode::axis)));
}

TEST(Estimate, SamplingFailureNamesTheSample)
{
    // a needle-thin body projected onto a plane: acceptance around 1e-7
    SimulationConfig c = fixed_config(FlatOrientation({{1, 0, 0}}), 3, 54);
    c.body = Body::parallelotope({{1, 1, 1}, {1, 1, 1 + 1e-7}, {1, 1 + 1e-7, 1}}, {0, 0, 0});
    try {
        estimate_expected_vertices(c);
        FAIL() << "expected a sampling failure";
    } catch (const SamplingFailure& e) {
        EXPECT_EQ(0u, std::string(e.what()).rfind("sample ", 0));
    }
}

TEST(FaceHits, HexagonPlaneThirds)
{
    const FaceHitReport r = face_hit_frequencies(fixed_config(hexagon_plane(), 100000, 55));
    const FaceProbabilityTable exact = probability_table(Body::cube(3), hexagon_plane());
    ASSERT_EQ(3u, r.frequencies.size());
    for (std::size_t i = 0; i < 3; ++i) EXPECT_NEAR(exact.entries[i].probability, r.frequencies[i], 0.005);
}

TEST(FaceHits, AxisPlaneExact)
{
    const FaceHitReport r = face_hit_frequencies(fixed_config(FlatOrientation::axis(3, 2), 2000, 56));
    EXPECT_EQ(0.0, r.frequencies[0]);
    EXPECT_EQ(0.0, r.frequencies[1]);
    EXPECT_EQ(1.0, r.frequencies[2]);
    const FaceHitReport a = face_hit_frequencies(config(3, 2, 2000, 56, OrientationMode::axis));
    EXPECT_EQ(r.frequencies, a.frequencies);
}

TEST(FaceHits, CountingIdentityAndPerSampleAgreement)
{
    SeededRng rng(57);
    for (std::size_t n = 3; n <= 5; ++n) {
        const FlatOrientation o = sample_orientation(rng, n, 2);
        const FaceHitReport r = face_hit_frequencies(fixed_config(o, 5000, 58 + n));
        double identity = 0.0;
        for (double f : r.frequencies) identity += 4.0 * f;
        EXPECT_NEAR(r.mean_faces_hit, identity, 1e-12);
        EXPECT_EQ(0u, r.mismatched_samples);
        EXPECT_NEAR(r.mean_vertex_count, r.mean_faces_hit, 1e-12);
    }
}

TEST(FaceHits, MatchExactProbabilitiesWithinBinomialErrors)
{
    SeededRng rng(59);
    const FlatOrientation o = sample_orientation(rng, 4, 2);
    const std::size_t samples = 50000;
    const FaceHitReport r = face_hit_frequencies(fixed_config(o, samples, 60));
    const FaceProbabilityTable exact = probability_table(Body::cube(4), o);
    for (std::size_t i = 0; i < r.frequencies.size(); ++i) {
        const double p = exact.entries[i].probability;
        EXPECT_LE(std::abs(r.frequencies[i] - p), 3 * std::sqrt(p * (1 - p) / samples) + 1e-12) << i;
    }
}

TEST(FaceHits, ParallelMatchesSerialAndNeedsFixedOrientation)
{
    SeededRng rng(61);
    const SimulationConfig c = fixed_config(sample_orientation(rng, 5, 3), 9000, 62);
    const FaceHitReport a = face_hit_frequencies(c);
    const FaceHitReport b = face_hit_frequencies_serial(c);
    EXPECT_EQ(a.hits, b.hits);
    EXPECT_EQ(a.mean_vertex_count, b.mean_vertex_count);
    EXPECT_THROW(face_hit_frequencies(config(3, 2, 10, 1)), InvalidInput);
}
