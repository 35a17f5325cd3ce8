#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "hyperslice/errors.hpp"
#include "hyperslice/expectation.hpp"
#include "hyperslice/io.hpp"
#include "hyperslice/monte_carlo.hpp"
#include "hyperslice/parallel.hpp"
#include "hyperslice/rng.hpp"

namespace hyperslice::cli {

using nlohmann::json;

namespace {

constexpr const char* kSeedEnv = "HYPERSLICE_SEED";

struct Range {
    std::size_t lo = 0;
    std::size_t hi = 0;
};

std::uint64_t parse_u64(const std::string& text, const std::string& what)
{
    std::size_t used = 0;
    unsigned long long v = 0;
    try {
        if (text.empty() || text.front() == '-') throw std::invalid_argument(text);
        v = std::stoull(text, &used, 10);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != text.size()) throw InvalidInput(what + " '" + text + "' is not a non-negative integer");
    return static_cast<std::uint64_t>(v);
}

// "a..b" or "a"
Range parse_range(const std::string& text, const std::string& what)
{
    const auto dots = text.find("..");
    Range r;
    if (dots == std::string::npos) {
        r.lo = r.hi = static_cast<std::size_t>(parse_u64(text, what));
    } else {
        r.lo = static_cast<std::size_t>(parse_u64(text.substr(0, dots), what));
        r.hi = static_cast<std::size_t>(parse_u64(text.substr(dots + 2), what));
    }
    if (r.lo > r.hi) throw InvalidInput(what + " range '" + text + "' is empty");
    return r;
}

// Explicit flag, else HYPERSLICE_SEED, else 0.
std::uint64_t resolve_seed(const std::optional<std::string>& flag)
{
    if (flag) return parse_u64(*flag, "seed");
    if (const char* env = std::getenv(kSeedEnv); env && *env) return parse_u64(env, kSeedEnv);
    return 0;
}

json vectors_json(const VectorList& vs)
{
    json a = json::array();
    for (const Vector& v : vs) a.push_back(v);
    return a;
}

json body_json(const std::optional<Body>& body, std::size_t n)
{
    if (!body) return json{{"kind", "cube"}, {"n", n}};
    return json{{"kind", "parallelotope"},
                {"n", body->n()},
                {"edge_generators", vectors_json(body->edge_generators())},
                {"base", body->base()}};
}

struct OrientationSource {
    FlatOrientation orientation;
    std::optional<std::uint64_t> seed;
};

// "axis", "random:<seed>", or a file path.
OrientationSource resolve_orientation(const std::string& source, std::size_t n, std::size_t k)
{
    if (source == "axis") return {FlatOrientation::axis(n, k), std::nullopt};
    if (source.rfind("random:", 0) == 0) {
        const std::uint64_t seed = parse_u64(source.substr(7), "orientation seed");
        SeededRng rng(seed);
        return {sample_orientation(rng, n, k), seed};
    }
    FlatOrientation o = read_orientation_file(source);
    if (o.n() != n || o.k() != k) {
        throw InvalidInput("orientation file " + source + " holds " + std::to_string(o.k()) + " vectors in R^" +
                           std::to_string(o.n()) + ", expected " + std::to_string(k) + " in R^" +
                           std::to_string(n));
    }
    return {std::move(o), std::nullopt};
}

json manifest(const std::string& command, json config, std::optional<std::uint64_t> seed, double seconds,
              int threads)
{
    json m;
    m["command"] = command;
    m["config"] = std::move(config);
    m["version"] = HYPERSLICE_VERSION;
    m["rng_algorithm"] = std::string(kRngAlgorithm);
    m["seed"] = seed ? json(*seed) : json(nullptr);
    // Everything outside "runtime" is a pure function of the config.
    m["runtime"] = {{"duration_s", seconds}, {"threads", threads}};
    return m;
}

double seconds_since(std::chrono::steady_clock::time_point start)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

void emit(std::ostream& out, const json& payload)
{
    out << payload.dump(2) << '\n';
}

void write_orientation_to(const std::string& path, const FlatOrientation& o)
{
    std::ofstream f(path);
    if (!f) throw InvalidInput("cannot write " + path);
    write_orientation(f, o);
}

std::optional<Body> load_body(const std::string& path)
{
    if (path.empty()) return std::nullopt;
    return read_body_file(path);
}

std::size_t resolve_n(std::optional<std::size_t> flag, const std::optional<Body>& body)
{
    if (body) {
        if (flag && *flag != body->n()) {
            throw InvalidInput("--n " + std::to_string(*flag) + " disagrees with the body file (n=" +
                               std::to_string(body->n()) + ")");
        }
        return body->n();
    }
    if (!flag) throw InvalidInput("--n is required without --body");
    return *flag;
}

void check_nk(std::size_t n, std::size_t k)
{
    if (n == 0 || n > kMaxExactDimension) {
        throw InvalidInput("n must be in [1, " + std::to_string(kMaxExactDimension) + "]");
    }
    if (k == 0 || k > n) throw InvalidInput("k must be in [1, n]");
}

// ---- exact ---------------------------------------------------------------

struct ExactArgs {
    std::optional<std::size_t> n;
    std::size_t k = 0;
    std::string orientation;
    std::string body;
    std::string write_orientation;
    int threads = 0;
};

int cmd_exact(const ExactArgs& a, std::ostream& out)
{
    const auto start = std::chrono::steady_clock::now();
    const std::optional<Body> body = load_body(a.body);
    const std::size_t n = resolve_n(a.n, body);
    check_nk(n, a.k);
    const OrientationSource src = resolve_orientation(a.orientation, n, a.k);
    if (!a.write_orientation.empty()) write_orientation_to(a.write_orientation, src.orientation);

    const Body resolved = body ? *body : Body::cube(n);
    const FaceProbabilityTable table = probability_table(resolved, src.orientation);
    TelescopingCheck tele;
    for (const SubsetProbability& e : table.entries) tele.lhs += e.projected_volume;
    tele.rhs = table.projected_body_volume;
    const double target = std::ldexp(1.0, static_cast<int>(a.k));

    json rows = json::array();
    for (const SubsetProbability& e : table.entries) {
        rows.push_back({{"free_indices", e.free_indices},
                        {"projected_volume", e.projected_volume},
                        {"probability", e.probability},
                        {"multiplicity", e.multiplicity}});
    }
    json payload;
    payload["schema"] = std::string("hyperslice/exact/") + kSchemaVersion;
    payload["n"] = n;
    payload["k"] = a.k;
    payload["orientation"] = vectors_json(src.orientation.spans());
    payload["body"] = body_json(body, n);
    payload["expectation"] = table.total_expectation;
    payload["target"] = target;
    payload["deviation"] = std::abs(table.total_expectation - target);
    payload["projected_body_volume"] = table.projected_body_volume;
    payload["telescoping"] = {{"lhs", tele.lhs}, {"rhs", tele.rhs}, {"relative_gap", tele.relative_gap()}};
    payload["table"] = std::move(rows);
    json config = {{"n", n}, {"k", a.k}, {"orientation", a.orientation}, {"body", a.body}};
    payload["manifest"] = manifest("exact", std::move(config), src.seed, seconds_since(start), max_threads());
    emit(out, payload);
    return kSuccess;
}

// ---- mc ------------------------------------------------------------------

struct McArgs {
    std::optional<std::size_t> n;
    std::size_t k = 0;
    std::size_t samples = 0;
    std::optional<std::string> seed;
    std::string mode = "isotropic";
    std::string orientation;
    std::string body;
    std::size_t resample = 1;
    std::string hist;
    std::string write_orientation;
    bool face_hits = false;
    int threads = 0;
};

json histogram_json(const std::map<std::size_t, std::uint64_t>& h)
{
    json a = json::array();
    for (const auto& [count, freq] : h) a.push_back({{"count", count}, {"frequency", freq}});
    return a;
}

int cmd_mc(const McArgs& a, std::ostream& out)
{
    const auto start = std::chrono::steady_clock::now();
    const std::optional<Body> body = load_body(a.body);
    const std::size_t n = resolve_n(a.n, body);
    check_nk(n, a.k);
    const std::uint64_t seed = resolve_seed(a.seed);

    SimulationConfig config;
    config.n = n;
    config.k = a.k;
    config.samples = a.samples;
    config.seed = seed;
    config.mode = parse_orientation_mode(a.mode);
    config.body = body;
    config.translation_resample_per_orientation = a.resample;
    if (config.mode == OrientationMode::fixed) {
        if (a.orientation.empty()) throw InvalidInput("--mode fixed needs --orientation");
        config.fixed_orientation = resolve_orientation(a.orientation, n, a.k).orientation;
        if (!a.write_orientation.empty()) write_orientation_to(a.write_orientation, *config.fixed_orientation);
    } else if (!a.orientation.empty()) {
        throw InvalidInput("--orientation only applies to --mode fixed");
    }
    if (a.face_hits && config.mode == OrientationMode::isotropic) {
        throw InvalidInput("--face-hits needs --mode fixed or --mode axis");
    }

    const EstimateReport r = estimate_expected_vertices(config);
    const double target = std::ldexp(1.0, static_cast<int>(a.k));

    json payload;
    payload["schema"] = std::string("hyperslice/mc/") + kSchemaVersion;
    payload["n"] = n;
    payload["k"] = a.k;
    payload["mean"] = r.mean;
    payload["std_error"] = r.std_error;
    payload["target"] = target;
    payload["z_score"] = r.std_error > 0.0 ? json((r.mean - target) / r.std_error) : json(nullptr);
    payload["histogram"] = histogram_json(r.histogram);
    payload["flagged_histogram"] = histogram_json(r.flagged_histogram);
    payload["samples_used"] = r.samples_used;
    payload["degenerate_count"] = r.degenerate_count;
    payload["flagged_count"] = r.flagged_count;
    payload["singular_face_systems"] = r.singular_face_systems;
    payload["orientation_redraws"] = r.orientation_redraws;
    payload["rejection_acceptance_rate"] = r.rejection_acceptance_rate();
    payload["proposals"] = r.translation_sampling.proposals;
    payload["body"] = body_json(body, n);
    if (config.fixed_orientation) payload["orientation"] = vectors_json(config.fixed_orientation->spans());

    if (a.face_hits) {
        const FaceHitReport hits = face_hit_frequencies(config);
        const Body resolved = config.resolved_body();
        const FlatOrientation o = config.fixed_orientation ? *config.fixed_orientation
                                                           : FlatOrientation::axis(n, a.k);
        const FaceProbabilityTable table = probability_table(resolved, o);
        json rows = json::array();
        for (std::size_t s = 0; s < hits.subsets.size(); ++s) {
            const double p = table.entries[s].probability;
            rows.push_back({{"free_indices", hits.subsets[s]},
                            {"frequency", hits.frequencies[s]},
                            {"probability", p},
                            {"binomial_std_error", std::sqrt(p * (1.0 - p) / static_cast<double>(a.samples))}});
        }
        payload["face_hits"] = {{"subsets", std::move(rows)},
                                {"mean_faces_hit", hits.mean_faces_hit},
                                {"mean_vertex_count", hits.mean_vertex_count},
                                {"mismatched_samples", hits.mismatched_samples}};
    }

    if (!a.hist.empty()) {
        std::ofstream f(a.hist);
        if (!f) throw InvalidInput("cannot write " + a.hist);
        f << "count,frequency\n";
        for (const auto& [count, freq] : r.histogram) f << count << ',' << freq << '\n';
    }

    json cfg = {{"n", n},
                {"k", a.k},
                {"samples", a.samples},
                {"seed", seed},
                {"mode", a.mode},
                {"orientation", a.orientation},
                {"body", a.body},
                {"translation_resample_per_orientation", a.resample},
                {"chunk_size", kChunkSize},
                {"face_hits", a.face_hits}};
    payload["manifest"] = manifest("mc", std::move(cfg), seed, seconds_since(start), max_threads());
    emit(out, payload);
    return kSuccess;
}

// ---- verify --------------------------------------------------------------

struct VerifyArgs {
    std::string n = "1..8";
    std::string k = "all";
    std::size_t trials = 20;
    std::optional<std::string> seed;
    double tol = 1e-6;
    std::string body;
    bool n_given = false;
    int threads = 0;
};

// Stream id for trial t of (n, k); kept injective for n, k <= 64.
std::uint64_t trial_stream(std::size_t n, std::size_t k, std::size_t t)
{
    return (static_cast<std::uint64_t>(n) * 64 + k) * (std::uint64_t{1} << 32) + t;
}

int cmd_verify(const VerifyArgs& a, std::ostream& out, std::ostream& err)
{
    const auto start = std::chrono::steady_clock::now();
    if (!(a.tol >= 0.0)) throw InvalidInput("--tol must be non-negative");
    if (a.trials == 0) throw InvalidInput("--trials must be at least 1");
    const std::optional<Body> body = load_body(a.body);
    Range nr = parse_range(a.n, "n");
    if (body) {
        if (a.n_given && (body->n() < nr.lo || body->n() > nr.hi)) {
            throw InvalidInput("body dimension " + std::to_string(body->n()) + " is outside --n " + a.n);
        }
        nr = {body->n(), body->n()};
    }
    if (nr.lo == 0 || nr.hi > kMaxExactDimension) {
        throw InvalidInput("n must be in [1, " + std::to_string(kMaxExactDimension) + "]");
    }
    const Range kr = a.k == "all" ? Range{1, kMaxExactDimension} : parse_range(a.k, "k");
    if (kr.lo == 0) throw InvalidInput("k must be at least 1");
    const std::uint64_t seed = resolve_seed(a.seed);

    json rows = json::array();
    json violations = json::array();
    bool all_pass = true;
    err << std::setw(4) << "n" << std::setw(4) << "k" << std::setw(8) << "trials" << std::setw(16) << "max_dev"
        << std::setw(16) << "max_tele_gap" << "  status\n";
    for (std::size_t n = nr.lo; n <= nr.hi; ++n) {
        const Body resolved = body ? *body : Body::cube(n);
        const std::size_t k_hi = std::min(kr.hi, n);
        for (std::size_t k = kr.lo; k <= k_hi; ++k) {
            const double target = std::ldexp(1.0, static_cast<int>(k));
            double max_dev = 0.0;
            double max_gap = 0.0;
            for (std::size_t t = 0; t < a.trials; ++t) {
                SeededRng rng(derive_seed(seed, trial_stream(n, k, t)));
                const FlatOrientation o = sample_orientation(rng, n, k);
                const FaceProbabilityTable table = probability_table(resolved, o);
                TelescopingCheck tele;
                for (const SubsetProbability& e : table.entries) tele.lhs += e.projected_volume;
                tele.rhs = table.projected_body_volume;
                const double dev = std::abs(table.total_expectation - target);
                const double gap = tele.relative_gap();
                max_dev = std::max(max_dev, dev);
                max_gap = std::max(max_gap, gap);
                if (!(dev <= a.tol) || !(gap <= a.tol)) {
                    violations.push_back({{"n", n},
                                          {"k", k},
                                          {"trial", t},
                                          {"expectation", table.total_expectation},
                                          {"deviation", dev},
                                          {"telescoping_gap", gap},
                                          {"orientation", vectors_json(o.spans())}});
                }
            }
            const bool pass = max_dev <= a.tol && max_gap <= a.tol;
            all_pass = all_pass && pass;
            rows.push_back({{"n", n},
                            {"k", k},
                            {"trials", a.trials},
                            {"max_deviation", max_dev},
                            {"max_telescoping_gap", max_gap},
                            {"pass", pass}});
            std::ostringstream line;
            line << std::setw(4) << n << std::setw(4) << k << std::setw(8) << a.trials << std::setw(16)
                 << std::setprecision(3) << std::scientific << max_dev << std::setw(16) << max_gap << "  "
                 << (pass ? "ok" : "FAIL") << '\n';
            err << line.str();
        }
    }

    json payload;
    payload["schema"] = std::string("hyperslice/verify/") + kSchemaVersion;
    payload["tolerance"] = a.tol;
    payload["rows"] = std::move(rows);
    payload["violations"] = std::move(violations);
    payload["pass"] = all_pass;
    payload["body"] = body_json(body, nr.lo);
    json cfg = {{"n", a.n}, {"k", a.k}, {"trials", a.trials}, {"seed", seed}, {"tol", a.tol}, {"body", a.body}};
    payload["manifest"] = manifest("verify", std::move(cfg), seed, seconds_since(start), max_threads());
    emit(out, payload);
    return all_pass ? kSuccess : kVerificationFailed;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Vertex statistics of random slices of hypercubes and parallelotopes"};
    app.name("hyperslice");
    app.require_subcommand(1);
    app.set_version_flag("--version", HYPERSLICE_VERSION);
    app.footer("Exit codes: 0 success, 1 verification failure, 2 invalid input, 3 degenerate geometry, "
               "4 sampling failure.\nSeeds default to $HYPERSLICE_SEED, then 0. Exact computation is capped at "
               "n <= 20.");

    ExactArgs ea;
    auto* exact = app.add_subcommand("exact", "Exact expected vertex count for one orientation");
    exact->add_option("--n", ea.n, "Ambient dimension (taken from --body if given)");
    exact->add_option("--k", ea.k, "Slice dimension")->required();
    exact->add_option("--orientation", ea.orientation, "axis | random:<seed> | orientation file")->required();
    exact->add_option("--body", ea.body, "Parallelotope body file (default: cube [-1,1]^n)");
    exact->add_option("--write-orientation", ea.write_orientation, "Save the orientation used to a file");
    exact->add_option("--threads", ea.threads, "Worker threads (results do not depend on it)");

    McArgs ma;
    auto* mc = app.add_subcommand("mc", "Monte Carlo estimate of the expected vertex count");
    mc->add_option("--n", ma.n, "Ambient dimension (taken from --body if given)");
    mc->add_option("--k", ma.k, "Slice dimension")->required();
    mc->add_option("--samples", ma.samples, "Number of random slices")->required();
    mc->add_option("--seed", ma.seed, "64-bit seed");
    mc->add_option("--mode", ma.mode, "isotropic | fixed | axis")->capture_default_str();
    mc->add_option("--orientation", ma.orientation, "For --mode fixed: random:<seed> | orientation file");
    mc->add_option("--body", ma.body, "Parallelotope body file (default: cube [-1,1]^n)");
    mc->add_option("--resample", ma.resample, "Translations drawn per orientation")->capture_default_str();
    mc->add_option("--hist", ma.hist, "Write the vertex-count histogram as CSV");
    mc->add_option("--write-orientation", ma.write_orientation, "Save the fixed orientation to a file");
    mc->add_flag("--face-hits", ma.face_hits, "Also report per-subset face-hit frequencies");
    mc->add_option("--threads", ma.threads, "Worker threads (results do not depend on it)");

    VerifyArgs va;
    auto* verify = app.add_subcommand("verify", "Check the 2^k identity over random orientations");
    verify->add_option("--n", va.n, "Dimension range a..b")->capture_default_str();
    verify->add_option("--k", va.k, "all | a..b | a")->capture_default_str();
    verify->add_option("--trials", va.trials, "Random orientations per (n, k)")->capture_default_str();
    verify->add_option("--seed", va.seed, "64-bit seed");
    verify->add_option("--tol", va.tol, "Tolerance on |E - 2^k| and the telescoping gap")->capture_default_str();
    verify->add_option("--body", va.body, "Parallelotope body file; restricts n to the body's dimension");
    verify->add_option("--threads", va.threads, "Worker threads (results do not depend on it)");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kSuccess;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kSuccess;
    } catch (const CLI::CallForVersion&) {
        out << HYPERSLICE_VERSION << '\n';
        return kSuccess;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kInvalidInput;
    }

    try {
        if (exact->parsed()) {
            set_threads(ea.threads);
            return cmd_exact(ea, out);
        }
        if (mc->parsed()) {
            set_threads(ma.threads);
            return cmd_mc(ma, out);
        }
        set_threads(va.threads);
        va.n_given = verify->get_option("--n")->count() > 0;
        return cmd_verify(va, out, err);
    } catch (const InvalidInput& e) {
        err << "invalid input: " << e.what() << '\n';
        return kInvalidInput;
    } catch (const DegenerateGeometry& e) {
        err << "degenerate geometry: " << e.what() << '\n';
        return kDegenerateGeometry;
    } catch (const SamplingFailure& e) {
        err << "sampling failure: " << e.what() << '\n';
        return kSamplingFailure;
    }
}

}  // namespace hyperslice::cli
