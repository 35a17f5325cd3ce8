#include <gtest/gtest.h>

#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "../tools/cli.hpp"

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Result {
    int code = 0;
    std::string out;
    std::string err;
    json payload() const { return json::parse(out); }
};

Result run(const std::vector<std::string>& args)
{
    std::ostringstream out;
    std::ostringstream err;
    Result r;
    r.code = hyperslice::cli::run(args, out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

json load_schema(const std::string& name)
{
    std::ifstream f(fs::path(HYPERSLICE_SCHEMA_DIR) / name);
    return json::parse(f);
}

bool type_matches(const std::string& type, const json& v)
{
    if (type == "object") return v.is_object();
    if (type == "array") return v.is_array();
    if (type == "string") return v.is_string();
    if (type == "integer") return v.is_number_integer();
    if (type == "number") return v.is_number();
    if (type == "boolean") return v.is_boolean();
    if (type == "null") return v.is_null();
    return false;
}

// The subset of draft-07 the shipped schemas use.
void validate(const json& schema, const json& v, const std::string& path, std::vector<std::string>& errors)
{
    if (schema.contains("type")) {
        const json& t = schema["type"];
        bool ok = false;
        if (t.is_string()) ok = type_matches(t.get<std::string>(), v);
        for (const json& alt : t.is_array() ? t : json::array()) ok = ok || type_matches(alt.get<std::string>(), v);
        if (!ok) {
            errors.push_back(path + ": wrong type");
            return;
        }
    }
    if (schema.contains("enum")) {
        bool found = false;
        for (const json& e : schema["enum"]) found = found || e == v;
        if (!found) errors.push_back(path + ": not in enum");
    }
    if (v.is_number()) {
        if (schema.contains("minimum") && v.get<double>() < schema["minimum"].get<double>()) {
            errors.push_back(path + ": below minimum");
        }
        if (schema.contains("maximum") && v.get<double>() > schema["maximum"].get<double>()) {
            errors.push_back(path + ": above maximum");
        }
    }
    if (v.is_object()) {
        for (const json& req : schema.value("required", json::array())) {
            if (!v.contains(req.get<std::string>())) errors.push_back(path + ": missing " + req.get<std::string>());
        }
        const json props = schema.value("properties", json::object());
        for (const auto& [key, value] : v.items()) {
            if (props.contains(key)) {
                validate(props[key], value, path + "." + key, errors);
            } else if (schema.contains("additionalProperties") && schema["additionalProperties"] == false) {
                errors.push_back(path + ": unexpected " + key);
            }
        }
    }
    if (v.is_array() && schema.contains("items")) {
        for (std::size_t i = 0; i < v.size(); ++i) validate(schema["items"], v[i], path + "[" + std::to_string(i) + "]", errors);
    }
}

void expect_valid(const std::string& schema_file, const json& payload)
{
    std::vector<std::string> errors;
    validate(load_schema(schema_file), payload, "$", errors);
    for (const std::string& e : errors) ADD_FAILURE() << schema_file << " " << e;
}

json without_runtime(json j)
{
    j["manifest"].erase("runtime");
    return j;
}

fs::path temp_path(const std::string& name)
{
    return fs::temp_directory_path() / ("hyperslice_test_" + name);
}

}  // namespace

TEST(SchemaValidator, CatchesViolations)
{
    const json schema = {{"type", "object"},
                         {"required", {"a"}},
                         {"additionalProperties", false},
                         {"properties", {{"a", {{"type", "integer"}, {"minimum", 1}}}}}};
    std::vector<std::string> errors;
    validate(schema, json{{"a", 0}, {"b", 1}}, "$", errors);
    EXPECT_EQ(2u, errors.size());
    errors.clear();
    validate(schema, json{{"a", 2.5}}, "$", errors);
    EXPECT_EQ(1u, errors.size());
    errors.clear();
    validate(schema, json{{"a", 3}}, "$", errors);
    EXPECT_TRUE(errors.empty());
}

TEST(CliExact, RandomOrientation)
{
    const Result r = run({"exact", "--n", "3", "--k", "2", "--orientation", "random:7"});
    ASSERT_EQ(0, r.code) << r.err;
    const json j = r.payload();
    EXPECT_NEAR(4.0, j["expectation"].get<double>(), 1e-9);
    EXPECT_LE(j["deviation"].get<double>(), 1e-9);
    EXPECT_EQ(3u, j["table"].size());
    EXPECT_EQ(7u, j["manifest"]["seed"].get<std::uint64_t>());
    expect_valid("exact.schema.json", j);
}

TEST(CliExact, WholeCubeAxis)
{
    const Result r = run({"exact", "--n", "3", "--k", "3", "--orientation", "axis"});
    ASSERT_EQ(0, r.code) << r.err;
    EXPECT_EQ(8.0, r.payload()["expectation"].get<double>());
    expect_valid("exact.schema.json", r.payload());
}

TEST(CliExact, ParallelotopeBodyFile)
{
    const fs::path body = temp_path("body5.txt");
    {
        std::ofstream f(body);
        f << "5\n";
        for (int i = 0; i < 5; ++i) {
            for (int j = 0; j < 5; ++j) f << (i == j ? 3.0 : 0.1 * (i + 2 * j) - 0.5) << ' ';
            f << '\n';
        }
        f << "1 -2 0.5 0 3\n";
    }
    const Result r = run({"exact", "--n", "5", "--k", "2", "--body", body.string(), "--orientation", "random:7"});
    ASSERT_EQ(0, r.code) << r.err;
    EXPECT_NEAR(4.0, r.payload()["expectation"].get<double>(), 1e-6);
    expect_valid("exact.schema.json", r.payload());
    fs::remove(body);
}

TEST(CliExact, OrientationFileRoundTrip)
{
    const fs::path o = temp_path("orientation.txt");
    const Result first =
        run({"exact", "--n", "6", "--k", "3", "--orientation", "random:11", "--write-orientation", o.string()});
    ASSERT_EQ(0, first.code) << first.err;
    const Result second = run({"exact", "--n", "6", "--k", "3", "--orientation", o.string()});
    ASSERT_EQ(0, second.code) << second.err;
    EXPECT_EQ(first.payload()["table"], second.payload()["table"]);
    EXPECT_EQ(first.payload()["expectation"], second.payload()["expectation"]);
    EXPECT_EQ(first.payload()["orientation"], second.payload()["orientation"]);
    // a file with the wrong shape
    EXPECT_EQ(2, run({"exact", "--n", "5", "--k", "3", "--orientation", o.string()}).code);
    fs::remove(o);
}

TEST(CliExact, ExitCodes)
{
    EXPECT_EQ(2, run({"exact", "--n", "3", "--k", "4", "--orientation", "axis"}).code);
    EXPECT_EQ(2, run({"exact", "--n", "3", "--k", "2", "--orientation", "random:x"}).code);
    EXPECT_EQ(2, run({"exact", "--n", "3", "--k", "2", "--orientation", "/nonexistent"}).code);
    EXPECT_EQ(2, run({"exact", "--n", "3", "--k", "2", "--orientation", "axis", "--bogus"}).code);
    EXPECT_EQ(2, run({"exact", "--k", "2", "--orientation", "axis"}).code);
    EXPECT_EQ(2, run({"nonsense"}).code);

    const fs::path o = temp_path("parallel.txt");
    {
        std::ofstream f(o);
        f << "1 0 0\n2 0 0\n";
    }
    const Result degenerate = run({"exact", "--n", "3", "--k", "2", "--orientation", o.string()});
    EXPECT_EQ(3, degenerate.code);
    EXPECT_FALSE(degenerate.err.empty());
    EXPECT_TRUE(degenerate.out.empty());
    fs::remove(o);

    EXPECT_EQ(0, run({"--help"}).code);
    EXPECT_EQ(0, run({"--version"}).code);
}

TEST(CliMc, FourCubeMatchesTwoToTheK)
{
    const Result r = run({"mc", "--n", "4", "--k", "2", "--samples", "100000", "--seed", "42"});
    ASSERT_EQ(0, r.code) << r.err;
    const json j = r.payload();
    EXPECT_LE(std::abs(j["mean"].get<double>() - 4.0), 3 * j["std_error"].get<double>());
    EXPECT_EQ(42u, j["manifest"]["seed"].get<std::uint64_t>());
    EXPECT_EQ("mt19937_64+u53+marsaglia-polar/v1", j["manifest"]["rng_algorithm"].get<std::string>());
    expect_valid("mc.schema.json", j);
}

TEST(CliMc, AxisModeHistogramAndCsv)
{
    const fs::path csv = temp_path("hist.csv");
    const Result r = run({"mc", "--n", "3", "--k", "2", "--samples", "1000", "--seed", "1", "--mode", "axis",
                          "--hist", csv.string(), "--face-hits"});
    ASSERT_EQ(0, r.code) << r.err;
    const json j = r.payload();
    ASSERT_EQ(1u, j["histogram"].size());
    EXPECT_EQ(4u, j["histogram"][0]["count"].get<std::size_t>());
    EXPECT_EQ(1000u, j["histogram"][0]["frequency"].get<std::size_t>());
    expect_valid("mc.schema.json", j);
    std::ifstream f(csv);
    std::stringstream text;
    text << f.rdbuf();
    EXPECT_EQ("count,frequency\n4,1000\n", text.str());
    fs::remove(csv);
}

TEST(CliMc, DeterministicApartFromRuntime)
{
    const std::vector<std::string> args{"mc", "--n", "4", "--k", "2", "--samples", "20000", "--seed", "5",
                                        "--mode", "fixed", "--orientation", "random:3", "--face-hits"};
    std::vector<std::string> one = args;
    one.insert(one.end(), {"--threads", "1"});
    std::vector<std::string> four = args;
    four.insert(four.end(), {"--threads", "4"});
    const Result a = run(one);
    const Result b = run(four);
    ASSERT_EQ(0, a.code) << a.err;
    ASSERT_EQ(0, b.code) << b.err;
    EXPECT_EQ(without_runtime(a.payload()).dump(), without_runtime(b.payload()).dump());
    EXPECT_EQ(without_runtime(a.payload()).dump(), without_runtime(run(one).payload()).dump());
    expect_valid("mc.schema.json", a.payload());
}

TEST(CliMc, SeedFromEnvironment)
{
    ::setenv("HYPERSLICE_SEED", "77", 1);
    const Result env = run({"mc", "--n", "3", "--k", "2", "--samples", "500"});
    const Result flag_wins = run({"mc", "--n", "3", "--k", "2", "--samples", "500", "--seed", "78"});
    ::unsetenv("HYPERSLICE_SEED");
    const Result explicit_seed = run({"mc", "--n", "3", "--k", "2", "--samples", "500", "--seed", "77"});
    const Result fallback = run({"mc", "--n", "3", "--k", "2", "--samples", "500"});
    ASSERT_EQ(0, env.code) << env.err;
    EXPECT_EQ(77u, env.payload()["manifest"]["seed"].get<std::uint64_t>());
    EXPECT_EQ(78u, flag_wins.payload()["manifest"]["seed"].get<std::uint64_t>());
    EXPECT_EQ(0u, fallback.payload()["manifest"]["seed"].get<std::uint64_t>());
    EXPECT_EQ(env.payload()["histogram"], explicit_seed.payload()["histogram"]);
}

TEST(CliMc, ExitCodes)
{
    EXPECT_EQ(2, run({"mc", "--n", "3", "--k", "2", "--samples", "0"}).code);
    EXPECT_EQ(2, run({"mc", "--n", "3", "--k", "2", "--samples", "10", "--mode", "sideways"}).code);
    EXPECT_EQ(2, run({"mc", "--n", "3", "--k", "2", "--samples", "10", "--mode", "fixed"}).code);
    EXPECT_EQ(2, run({"mc", "--n", "3", "--k", "2", "--samples", "10", "--face-hits"}).code);
    EXPECT_EQ(2, run({"mc", "--n", "3", "--k", "2", "--samples", "10", "--seed", "-1"}).code);

    const fs::path body = temp_path("needle.txt");
    {
        std::ofstream f(body);
        f << "3\n1 1 1\n1 1 1.0000001\n1 1.0000001 1\n0 0 0\n";
    }
    const fs::path o = temp_path("line.txt");
    {
        std::ofstream f(o);
        f << "1 0 0\n";
    }
    const Result r = run({"mc", "--k", "1", "--samples", "3", "--body", body.string(), "--mode", "fixed",
                          "--orientation", o.string()});
    EXPECT_EQ(4, r.code);
    EXPECT_NE(std::string::npos, r.err.find("sample 0"));
    fs::remove(body);
    fs::remove(o);
}

TEST(CliVerify, TheoremSweep)
{
    const Result r = run({"verify", "--n", "1..8", "--k", "all", "--trials", "20", "--seed", "9", "--tol", "1e-6"});
    ASSERT_EQ(0, r.code) << r.err;
    const json j = r.payload();
    EXPECT_TRUE(j["pass"].get<bool>());
    EXPECT_EQ(36u, j["rows"].size());
    EXPECT_TRUE(j["violations"].empty());
    expect_valid("verify.schema.json", j);
}

TEST(CliVerify, ToleranceBelowFloatNoise)
{
    const Result r = run({"verify", "--n", "3..3", "--k", "all", "--trials", "1", "--seed", "9", "--tol", "1e-15"});
    ASSERT_TRUE(r.code == 0 || r.code == 1) << r.err;
    const json j = r.payload();
    expect_valid("verify.schema.json", j);
    EXPECT_EQ(r.code == 0, j["pass"].get<bool>());
    for (const json& v : j["violations"]) EXPECT_TRUE(v.contains("orientation"));

    // a tolerance of zero is only met by exact cancellation, so violations carry replayable orientations
    const Result strict = run({"verify", "--n", "4..6", "--k", "all", "--trials", "3", "--seed", "9", "--tol", "0"});
    if (strict.code == 1) {
        ASSERT_FALSE(strict.payload()["violations"].empty());
        expect_valid("verify.schema.json", strict.payload());
    }
}

TEST(CliVerify, SingularBodyIsInvalidInput)
{
    const fs::path body = temp_path("singular.txt");
    {
        std::ofstream f(body);
        f << "3\n1 0 0\n0 1 0\n1 1 0\n0 0 0\n";
    }
    const Result r = run({"verify", "--body", body.string()});
    EXPECT_EQ(2, r.code);
    EXPECT_NE(std::string::npos, r.err.find("rank"));
    fs::remove(body);
}

TEST(CliVerify, ParallelotopeBody)
{
    const fs::path body = temp_path("body3.txt");
    {
        std::ofstream f(body);
        f << "3\n2 0.3 0\n0 1 0.4\n0.1 0 1.5\n-1 0 2\n";
    }
    const Result r = run({"verify", "--body", body.string(), "--trials", "5", "--seed", "3"});
    ASSERT_EQ(0, r.code) << r.err;
    EXPECT_EQ(3u, r.payload()["rows"].size());
    expect_valid("verify.schema.json", r.payload());
    EXPECT_EQ(2, run({"verify", "--body", body.string(), "--n", "4..5"}).code);
    fs::remove(body);
}
