#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "hb/noise.hpp"
#include "hb/solver.hpp"
#include "hb/types.hpp"

namespace hb {

/// Parse/validation failure with location information when available.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

struct VerifySpec {
    int covariance_n = 4000;
    int isometry_n = 10000;
    std::vector<double> lambda{4.0, 1.0};
    double exponent_offset = 0.0; // nonzero = deliberate negative control
    int scaling_n = 4000;
    int holder_p = 2;
    std::vector<int> holder_lags{1, 2, 3, 4, 6, 8};
    int holder_n = 10000;
    int holder_solution_n = 1000;
    std::vector<double> horizons{0.25, 0.5, 1.0};
    int moments_n = 1000;
};

/// One experiment per file. All quantities are dimensionless model units.
struct ExperimentConfig {
    HermiteParams params{1, {0.7, 0.7}, 1, 0.5};
    GridSpec grid{1.0, 4, 1.0, 4, 1};
    SeedSpec seed{};
    SamplerSpec sampler{};
    SigmaSpec sigma = SigmaSpec::zero();
    SolverConfig solver{}; // solver.domain mirrors grid after parsing
    enum class U0Kind { Zero, Constant, Sine };
    U0Kind u0_kind = U0Kind::Zero;
    double u0_value = 0.0; // constant value, or sine amplitude
    int n_samples = 1;
    VerifySpec verify{};

    std::vector<double> make_u0() const;
};

ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig load_config(const std::filesystem::path& path);
std::string serialize_config(const ExperimentConfig& cfg);

struct ManifestOutput {
    std::string path;
    std::string sha256;
};

struct RunManifest {
    std::string tool_version;
    std::string command;
    ExperimentConfig config;
    int threads = 1;
    std::string started_utc;
    std::string finished_utc;
    std::string sign_convention;
    std::vector<ManifestOutput> outputs;
};

std::string serialize_manifest(const RunManifest& m);
/// Returns the embedded config and command when `text` is a manifest.
std::optional<std::pair<std::string, ExperimentConfig>> parse_manifest_text(
    const std::string& text);

inline constexpr const char* kSignConvention =
    "mild form: nonlinear term enters as -int dxG * (u^2/2); the alternative "
    "'+1/2 grad G u^2' display is not used";

} // namespace hb
