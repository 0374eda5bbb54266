#include <doctest.h>

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <map>
#include <string>

#include "hb/cli.hpp"
#include "hb/config.hpp"
#include "hb/io.hpp"

using namespace hb;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& tag) : path(fs::temp_directory_path() / tag) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

void write_file(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::trunc);
    f << text;
}

std::map<std::string, std::string> manifest_digests(const std::string& manifest_path) {
    std::ifstream in(manifest_path);
    json j = json::parse(in);
    std::map<std::string, std::string> out;
    for (const auto& o : j.at("outputs")) out[o.at("path")] = o.at("sha256");
    return out;
}

const char* kSampleConfig = R"({
  "params": {"q": 1, "d": 1, "H": [0.7, 0.7], "nu": 0.5},
  "grid": {"t_max": 1.0, "n_t": 2, "L": 1.0, "n_x": 2},
  "seed": {"master_seed": 42, "stream_index": 0},
  "n_samples": 3
})";

} // namespace

TEST_CASE("config round-trip is the identity on the key set") {
    const ExperimentConfig a = parse_config_text(kSampleConfig);
    const std::string s1 = serialize_config(a);
    const ExperimentConfig b = parse_config_text(s1);
    CHECK(serialize_config(b) == s1);
}

TEST_CASE("config parser rejects unknown keys and reports parse locations") {
    CHECK_THROWS_WITH_AS(parse_config_text(R"({"params": {"qq": 1}})"),
                         doctest::Contains("unknown key"), ConfigError);
    try {
        parse_config_text("{\n  \"params\": {,}\n}");
        CHECK(false);
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }
}

TEST_CASE("cmd_validate exit codes") {
    TempDir dir("hb_cli_validate");
    write_file(dir.file("ok.json"), kSampleConfig);
    CHECK(run_cli({"validate", "--config", dir.file("ok.json")}) == 0);

    write_file(dir.file("bad.json"), R"({
      "params": {"q": 2, "d": 2, "H": [0.51, 0.51, 0.51], "nu": 0.5}
    })");
    CHECK(run_cli({"validate", "--config", dir.file("bad.json")}) == 1);

    write_file(dir.file("broken.json"), "{ not json");
    CHECK(run_cli({"validate", "--config", dir.file("broken.json")}) == 2);

    CHECK(run_cli({"validate"}) == 2); // missing --config
}

TEST_CASE("cmd_sample determinism, stream separation and format contract") {
    TempDir dir("hb_cli_sample");
    write_file(dir.file("cfg.json"), kSampleConfig);

    CHECK(run_cli({"sample", "--config", dir.file("cfg.json"), "--out", dir.file("a")}) == 0);
    CHECK(run_cli({"sample", "--config", dir.file("cfg.json"), "--out", dir.file("b")}) == 0);
    const auto da = manifest_digests(dir.file("a/manifest.json"));
    const auto db = manifest_digests(dir.file("b/manifest.json"));
    CHECK(da == db);
    CHECK(da.size() == 3);

    CHECK(run_cli({"sample", "--config", dir.file("cfg.json"), "--stream", "7", "--out",
                   dir.file("c")}) == 0);
    CHECK(manifest_digests(dir.file("c/manifest.json")) != da);

    // Header round-trips q and H exactly.
    const FieldFile ff = read_field_bin(dir.file("a/sheet_0000.hbf"));
    CHECK(ff.q == 1);
    CHECK(ff.H == std::vector<double>{0.7, 0.7});
    CHECK(ff.field.kind == FieldKind::Sheet);
}

TEST_CASE("cmd_sample reproduces digests from its own manifest at any thread count") {
    TempDir dir("hb_cli_rerun");
    write_file(dir.file("cfg.json"), kSampleConfig);
    CHECK(run_cli({"sample", "--config", dir.file("cfg.json"), "--out", dir.file("a"),
                   "--threads", "1"}) == 0);
    CHECK(run_cli({"sample", "--config", dir.file("a/manifest.json"), "--out", dir.file("b"),
                   "--threads", "4"}) == 0);
    CHECK(manifest_digests(dir.file("a/manifest.json")) ==
          manifest_digests(dir.file("b/manifest.json")));

    // A manifest from another command is rejected.
    CHECK(run_cli({"solve", "--config", dir.file("a/manifest.json"), "--out", dir.file("x")}) ==
          2);
}

TEST_CASE("cmd_solve: deterministic runs and forced non-convergence") {
    TempDir dir("hb_cli_solve");
    write_file(dir.file("zero.json"), R"({
      "params": {"q": 1, "d": 1, "H": [0.7, 0.7], "nu": 0.1},
      "grid": {"t_max": 0.25, "n_t": 8, "L": 6.283185307179586, "n_x": 16},
      "sigma": {"kind": "constant", "parameters": [0.0]},
      "u0": {"kind": "zero"}
    })");
    CHECK(run_cli({"solve", "--config", dir.file("zero.json"), "--out", dir.file("z")}) == 0);
    const FieldFile sol = read_field_bin(dir.file("z/solution.hbf"));
    CHECK(sol.field.kind == FieldKind::Solution);
    for (double v : sol.field.values) CHECK(v == 0.0);

    write_file(dir.file("hard.json"), R"({
      "params": {"q": 1, "d": 1, "H": [0.7, 0.7], "nu": 0.1},
      "grid": {"t_max": 0.25, "n_t": 16, "L": 6.283185307179586, "n_x": 16},
      "sigma": {"kind": "constant", "parameters": [0.1]},
      "solver": {"picard_tol": 1e-12, "max_iters": 1},
      "u0": {"kind": "sine", "value": 0.5},
      "seed": {"master_seed": 5, "stream_index": 0}
    })");
    CHECK(run_cli({"solve", "--config", dir.file("hard.json"), "--out", dir.file("h")}) == 3);
    std::ifstream diag(dir.file("h/diagnostics.json"));
    const json d = json::parse(diag);
    CHECK_FALSE(d.at("converged").get<bool>());
    CHECK(d.at("distances").size() == 1);
}

TEST_CASE("cmd_solve reports the Hopf-Cole benchmark error") {
    TempDir dir("hb_cli_colehopf");
    write_file(dir.file("bench.json"), R"({
      "params": {"q": 1, "d": 1, "H": [0.7, 0.7], "nu": 0.1},
      "grid": {"t_max": 1.0, "n_t": 512, "L": 6.283185307179586, "n_x": 256},
      "sigma": {"kind": "constant", "parameters": [0.0]},
      "solver": {"picard_tol": 1e-9, "max_iters": 20},
      "u0": {"kind": "sine", "value": 0.5}
    })");
    CHECK(run_cli({"solve", "--config", dir.file("bench.json"), "--out", dir.file("b")}) == 0);
    std::ifstream diag(dir.file("b/diagnostics.json"));
    const json d = json::parse(diag);
    CHECK(d.at("cole_hopf_max_error").get<double>() <= 1e-3);
}

TEST_CASE("cmd_solve accepts a stored noise field") {
    TempDir dir("hb_cli_noise");
    write_file(dir.file("cfg.json"), R"({
      "params": {"q": 1, "d": 1, "H": [0.7, 0.7], "nu": 0.1},
      "grid": {"t_max": 0.25, "n_t": 8, "L": 6.283185307179586, "n_x": 16},
      "sigma": {"kind": "constant", "parameters": [0.1]},
      "u0": {"kind": "sine", "value": 0.5},
      "n_samples": 1,
      "seed": {"master_seed": 11, "stream_index": 0}
    })");
    CHECK(run_cli({"sample", "--config", dir.file("cfg.json"), "--out", dir.file("n")}) == 0);
    CHECK(run_cli({"solve", "--config", dir.file("cfg.json"), "--noise",
                   dir.file("n/sheet_0000.hbf"), "--out", dir.file("s")}) == 0);

    // Same noise twice gives the identical solution file.
    CHECK(run_cli({"solve", "--config", dir.file("cfg.json"), "--noise",
                   dir.file("n/sheet_0000.hbf"), "--out", dir.file("s2")}) == 0);
    CHECK(sha256_file(dir.file("s/solution.hbf")) == sha256_file(dir.file("s2/solution.hbf")));
}

TEST_CASE("cmd_verify exit codes: pass, statistical failure, unknown check") {
    TempDir dir("hb_cli_verify");
    write_file(dir.file("cfg.json"), R"({
      "params": {"q": 1, "d": 1, "H": [0.7, 0.7], "nu": 0.5},
      "grid": {"t_max": 1.0, "n_t": 2, "L": 1.0, "n_x": 2},
      "seed": {"master_seed": 99, "stream_index": 0},
      "verify": {"covariance_n": 600, "scaling_n": 800, "lambda": [4.0, 1.0]}
    })");
    CHECK(run_cli({"verify", "--config", dir.file("cfg.json"), "--which", "covariance",
                   "--out", dir.file("cov")}) == 0);
    CHECK(fs::exists(dir.file("cov/report_covariance.json")));
    CHECK(fs::exists(dir.file("cov/report_covariance.csv")));

    CHECK(run_cli({"verify", "--config", dir.file("cfg.json"), "--which", "nonsense", "--out",
                   dir.file("x")}) == 2);

    // Deliberately wrong scaling exponent: the negative control must fail.
    write_file(dir.file("neg.json"), R"({
      "params": {"q": 1, "d": 1, "H": [0.7, 0.7], "nu": 0.5},
      "grid": {"t_max": 1.0, "n_t": 2, "L": 1.0, "n_x": 2},
      "seed": {"master_seed": 99, "stream_index": 0},
      "verify": {"scaling_n": 2000, "lambda": [4.0, 1.0], "exponent_offset": -0.2}
    })");
    CHECK(run_cli({"verify", "--config", dir.file("neg.json"), "--which", "scaling", "--out",
                   dir.file("neg")}) == 4);
}

TEST_CASE("cmd_verify isometry, holder and moments run end to end") {
    TempDir dir("hb_cli_verify_rest");
    write_file(dir.file("cfg.json"), R"({
      "params": {"q": 1, "d": 1, "H": [0.7, 0.7], "nu": 0.1},
      "grid": {"t_max": 1.0, "n_t": 16, "L": 6.283185307179586, "n_x": 16},
      "sigma": {"kind": "constant", "parameters": [0.1]},
      "u0": {"kind": "sine", "value": 0.5},
      "seed": {"master_seed": 321, "stream_index": 0},
      "verify": {"isometry_n": 2000, "holder_n": 2000, "holder_solution_n": 300,
                 "holder_lags": [1, 2, 3, 4, 6], "moments_n": 200,
                 "horizons": [0.25, 0.5, 1.0]}
    })");
    CHECK(run_cli({"verify", "--config", dir.file("cfg.json"), "--which", "isometry", "--out",
                   dir.file("iso")}) == 0);
    CHECK(run_cli({"verify", "--config", dir.file("cfg.json"), "--which", "holder", "--out",
                   dir.file("hol")}) == 0);
    CHECK(run_cli({"verify", "--config", dir.file("cfg.json"), "--which", "moments", "--out",
                   dir.file("mom")}) == 0);
    for (const char* name : {"iso/report_isometry.csv", "hol/report_holder.csv",
                             "mom/report_moments.csv"})
        CHECK(fs::exists(dir.file(name)));
}

TEST_CASE("cmd_sample emits JSON fields on request") {
    TempDir dir("hb_cli_json");
    write_file(dir.file("cfg.json"), kSampleConfig);
    CHECK(run_cli({"sample", "--config", dir.file("cfg.json"), "--n-samples", "1", "--format",
                   "json", "--out", dir.file("a")}) == 0);
    std::ifstream f(dir.file("a/sheet_0000.json"));
    const json j = json::parse(f);
    CHECK(j.at("q") == 1);
    CHECK(j.at("values").size() == 9);
}

TEST_CASE("verify reports are reproducible for any thread count") {
    TempDir dir("hb_cli_verify_threads");
    write_file(dir.file("cfg.json"), R"({
      "params": {"q": 1, "d": 1, "H": [0.7, 0.7], "nu": 0.5},
      "grid": {"t_max": 1.0, "n_t": 2, "L": 1.0, "n_x": 2},
      "seed": {"master_seed": 17, "stream_index": 0},
      "verify": {"covariance_n": 500}
    })");
    CHECK(run_cli({"verify", "--config", dir.file("cfg.json"), "--which", "covariance",
                   "--threads", "1", "--out", dir.file("t1")}) == 0);
    CHECK(run_cli({"verify", "--config", dir.file("cfg.json"), "--which", "covariance",
                   "--threads", "3", "--out", dir.file("t3")}) == 0);
    CHECK(sha256_file(dir.file("t1/report_covariance.json")) ==
          sha256_file(dir.file("t3/report_covariance.json")));
}

TEST_CASE("cmd_report renders manifests and reports") {
    TempDir dir("hb_cli_report");
    write_file(dir.file("cfg.json"), kSampleConfig);
    CHECK(run_cli({"sample", "--config", dir.file("cfg.json"), "--out", dir.file("a")}) == 0);
    CHECK(run_cli({"report", "--in", dir.file("a/manifest.json")}) == 0);

    write_file(dir.file("junk.json"), "{\"hello\": 1}");
    CHECK(run_cli({"report", "--in", dir.file("junk.json")}) == 2);
    CHECK(run_cli({"report", "--in", dir.file("missing.json")}) == 2);
}
