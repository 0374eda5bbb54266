#include "hb/config.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include "hb/version.hpp"

namespace hb {

using nlohmann::json;

namespace {

[[noreturn]] void fail_at_offset(const std::string& text, std::size_t byte, const char* what) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    std::ostringstream os;
    os << "config parse error at line " << line << ", column " << col << ": " << what;
    throw ConfigError(os.str());
}

void reject_unknown(const json& obj, const std::set<std::string>& allowed,
                    const std::string& where) {
    for (const auto& [key, _] : obj.items())
        if (!allowed.contains(key))
            throw ConfigError("unknown key \"" + key + "\" in " + where);
}

template <typename T>
T get_or(const json& obj, const char* key, T fallback) {
    if (!obj.contains(key)) return fallback;
    try {
        return obj.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("bad value for \"") + key + "\": " + e.what());
    }
}

SigmaSpec parse_sigma(const json& j) {
    reject_unknown(j, {"kind", "parameters", "lipschitz_bound", "growth_bound"}, "sigma");
    const std::string kind = get_or<std::string>(j, "kind", "constant");
    const auto params = get_or<std::vector<double>>(j, "parameters", {0.0});
    SigmaSpec s;
    if (kind == "constant") {
        require(params.size() == 1, "sigma constant needs one parameter");
        s = SigmaSpec::constant(params[0]);
    } else if (kind == "affine") {
        require(params.size() == 2, "sigma affine needs two parameters");
        s = SigmaSpec::affine(params[0], params[1]);
    } else if (kind == "tabulated") {
        s = SigmaSpec::tabulated(params);
    } else {
        throw ConfigError("sigma.kind must be constant, affine or tabulated");
    }
    if (j.contains("lipschitz_bound")) s.lipschitz_bound = j.at("lipschitz_bound").get<double>();
    if (j.contains("growth_bound")) s.growth_bound = j.at("growth_bound").get<double>();
    return s;
}

json sigma_to_json(const SigmaSpec& s) {
    json j;
    switch (s.kind) {
    case SigmaSpec::Kind::Constant:
        j["kind"] = "constant";
        break;
    case SigmaSpec::Kind::Affine:
        j["kind"] = "affine";
        break;
    case SigmaSpec::Kind::TabulatedLipschitz:
        j["kind"] = "tabulated";
        break;
    }
    j["parameters"] = s.parameters;
    j["lipschitz_bound"] = s.lipschitz_bound;
    j["growth_bound"] = s.growth_bound;
    return j;
}

ExperimentConfig parse_config_json(const json& root) {
    reject_unknown(root,
                   {"params", "grid", "seed", "sampler", "sigma", "solver", "u0", "n_samples",
                    "verify"},
                   "config");
    ExperimentConfig cfg;

    if (root.contains("params")) {
        const json& p = root.at("params");
        reject_unknown(p, {"q", "d", "H", "nu"}, "params");
        cfg.params.q = get_or<int>(p, "q", 1);
        cfg.params.d = get_or<int>(p, "d", 1);
        cfg.params.H = get_or<std::vector<double>>(p, "H", {0.7, 0.7});
        cfg.params.nu = get_or<double>(p, "nu", 0.5);
    }
    if (root.contains("grid")) {
        const json& g = root.at("grid");
        reject_unknown(g, {"t_max", "n_t", "L", "n_x"}, "grid");
        cfg.grid.t_max = get_or<double>(g, "t_max", 1.0);
        cfg.grid.n_t = get_or<int>(g, "n_t", 4);
        cfg.grid.L = get_or<double>(g, "L", 1.0);
        cfg.grid.n_x = get_or<int>(g, "n_x", 4);
    }
    cfg.grid.d = cfg.params.d;
    if (root.contains("seed")) {
        const json& s = root.at("seed");
        reject_unknown(s, {"master_seed", "stream_index"}, "seed");
        cfg.seed.master_seed = get_or<std::uint64_t>(s, "master_seed", 0);
        cfg.seed.stream_index = get_or<std::uint64_t>(s, "stream_index", 0);
    }
    if (root.contains("sampler")) {
        const json& s = root.at("sampler");
        reject_unknown(s, {"method", "s_refine", "cost_budget", "m"}, "sampler");
        const std::string method = get_or<std::string>(s, "method", "auto");
        if (method == "auto")
            cfg.sampler.method = SamplerSpec::Method::Auto;
        else if (method == "exact")
            cfg.sampler.method = SamplerSpec::Method::Exact;
        else if (method == "kernel")
            cfg.sampler.method = SamplerSpec::Method::Kernel;
        else if (method == "ncl")
            cfg.sampler.method = SamplerSpec::Method::Ncl;
        else
            throw ConfigError("sampler.method must be auto, exact, kernel or ncl");
        cfg.sampler.trunc.s_refine = get_or<int>(s, "s_refine", cfg.sampler.trunc.s_refine);
        cfg.sampler.trunc.cost_budget =
            get_or<double>(s, "cost_budget", cfg.sampler.trunc.cost_budget);
        cfg.sampler.m = get_or<int>(s, "m", cfg.sampler.m);
    }
    if (root.contains("sigma")) cfg.sigma = parse_sigma(root.at("sigma"));
    if (root.contains("solver")) {
        const json& s = root.at("solver");
        reject_unknown(s, {"picard_tol", "max_iters", "scheme", "dealias", "initial_guess"},
                       "solver");
        cfg.solver.picard_tol = get_or<double>(s, "picard_tol", cfg.solver.picard_tol);
        cfg.solver.max_iters = get_or<int>(s, "max_iters", cfg.solver.max_iters);
        const std::string scheme = get_or<std::string>(s, "scheme", "picard");
        if (scheme == "picard")
            cfg.solver.scheme = SolverConfig::Scheme::Picard;
        else if (scheme == "step")
            cfg.solver.scheme = SolverConfig::Scheme::Step;
        else
            throw ConfigError("solver.scheme must be picard or step");
        cfg.solver.dealias = get_or<bool>(s, "dealias", false);
        const std::string guess = get_or<std::string>(s, "initial_guess", "heat");
        if (guess == "heat")
            cfg.solver.initial_guess = SolverConfig::InitialGuess::HeatFlow;
        else if (guess == "zero")
            cfg.solver.initial_guess = SolverConfig::InitialGuess::Zero;
        else
            throw ConfigError("solver.initial_guess must be heat or zero");
    }
    cfg.solver.domain = cfg.grid;
    if (root.contains("u0")) {
        const json& u = root.at("u0");
        reject_unknown(u, {"kind", "value"}, "u0");
        const std::string kind = get_or<std::string>(u, "kind", "zero");
        if (kind == "zero")
            cfg.u0_kind = ExperimentConfig::U0Kind::Zero;
        else if (kind == "constant")
            cfg.u0_kind = ExperimentConfig::U0Kind::Constant;
        else if (kind == "sine")
            cfg.u0_kind = ExperimentConfig::U0Kind::Sine;
        else
            throw ConfigError("u0.kind must be zero, constant or sine");
        cfg.u0_value = get_or<double>(u, "value", 0.0);
    }
    cfg.n_samples = get_or<int>(root, "n_samples", 1);
    if (root.contains("verify")) {
        const json& v = root.at("verify");
        reject_unknown(v,
                       {"covariance_n", "isometry_n", "lambda", "exponent_offset", "scaling_n",
                        "holder_p", "holder_lags", "holder_n", "holder_solution_n", "horizons",
                        "moments_n"},
                       "verify");
        cfg.verify.covariance_n = get_or<int>(v, "covariance_n", cfg.verify.covariance_n);
        cfg.verify.isometry_n = get_or<int>(v, "isometry_n", cfg.verify.isometry_n);
        cfg.verify.lambda = get_or<std::vector<double>>(v, "lambda", cfg.verify.lambda);
        cfg.verify.exponent_offset =
            get_or<double>(v, "exponent_offset", cfg.verify.exponent_offset);
        cfg.verify.scaling_n = get_or<int>(v, "scaling_n", cfg.verify.scaling_n);
        cfg.verify.holder_p = get_or<int>(v, "holder_p", cfg.verify.holder_p);
        cfg.verify.holder_lags = get_or<std::vector<int>>(v, "holder_lags", cfg.verify.holder_lags);
        cfg.verify.holder_n = get_or<int>(v, "holder_n", cfg.verify.holder_n);
        cfg.verify.holder_solution_n =
            get_or<int>(v, "holder_solution_n", cfg.verify.holder_solution_n);
        cfg.verify.horizons = get_or<std::vector<double>>(v, "horizons", cfg.verify.horizons);
        cfg.verify.moments_n = get_or<int>(v, "moments_n", cfg.verify.moments_n);
    }
    return cfg;
}

json config_to_json(const ExperimentConfig& cfg) {
    json root;
    root["params"] = {{"q", cfg.params.q}, {"d", cfg.params.d}, {"H", cfg.params.H},
                      {"nu", cfg.params.nu}};
    root["grid"] = {{"t_max", cfg.grid.t_max}, {"n_t", cfg.grid.n_t}, {"L", cfg.grid.L},
                    {"n_x", cfg.grid.n_x}};
    root["seed"] = {{"master_seed", cfg.seed.master_seed},
                    {"stream_index", cfg.seed.stream_index}};
    const char* method = "auto";
    switch (cfg.sampler.method) {
    case SamplerSpec::Method::Auto: method = "auto"; break;
    case SamplerSpec::Method::Exact: method = "exact"; break;
    case SamplerSpec::Method::Kernel: method = "kernel"; break;
    case SamplerSpec::Method::Ncl: method = "ncl"; break;
    }
    root["sampler"] = {{"method", method},
                       {"s_refine", cfg.sampler.trunc.s_refine},
                       {"cost_budget", cfg.sampler.trunc.cost_budget},
                       {"m", cfg.sampler.m}};
    root["sigma"] = sigma_to_json(cfg.sigma);
    root["solver"] = {
        {"picard_tol", cfg.solver.picard_tol},
        {"max_iters", cfg.solver.max_iters},
        {"scheme", cfg.solver.scheme == SolverConfig::Scheme::Picard ? "picard" : "step"},
        {"dealias", cfg.solver.dealias},
        {"initial_guess",
         cfg.solver.initial_guess == SolverConfig::InitialGuess::HeatFlow ? "heat" : "zero"}};
    const char* u0kind = cfg.u0_kind == ExperimentConfig::U0Kind::Zero
                             ? "zero"
                             : (cfg.u0_kind == ExperimentConfig::U0Kind::Constant ? "constant"
                                                                                  : "sine");
    root["u0"] = {{"kind", u0kind}, {"value", cfg.u0_value}};
    root["n_samples"] = cfg.n_samples;
    root["verify"] = {{"covariance_n", cfg.verify.covariance_n},
                      {"isometry_n", cfg.verify.isometry_n},
                      {"lambda", cfg.verify.lambda},
                      {"exponent_offset", cfg.verify.exponent_offset},
                      {"scaling_n", cfg.verify.scaling_n},
                      {"holder_p", cfg.verify.holder_p},
                      {"holder_lags", cfg.verify.holder_lags},
                      {"holder_n", cfg.verify.holder_n},
                      {"holder_solution_n", cfg.verify.holder_solution_n},
                      {"horizons", cfg.verify.horizons},
                      {"moments_n", cfg.verify.moments_n}};
    return root;
}

} // namespace

std::vector<double> ExperimentConfig::make_u0() const {
    std::vector<double> u0(grid.n_x, 0.0);
    switch (u0_kind) {
    case U0Kind::Zero:
        break;
    case U0Kind::Constant:
        std::fill(u0.begin(), u0.end(), u0_value);
        break;
    case U0Kind::Sine:
        for (int j = 0; j < grid.n_x; ++j)
            u0[j] = u0_value * std::sin(2.0 * std::numbers::pi * j / grid.n_x);
        break;
    }
    return u0;
}

ExperimentConfig parse_config_text(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        fail_at_offset(text, e.byte, e.what());
    }
    if (!root.is_object()) throw ConfigError("config root must be a JSON object");
    if (root.contains("hb_manifest")) {
        // Re-run from a manifest: use its embedded config.
        if (!root.contains("config")) throw ConfigError("manifest lacks an embedded config");
        return parse_config_json(root.at("config"));
    }
    return parse_config_json(root);
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path.string());
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse_config_text(text);
}

std::string serialize_config(const ExperimentConfig& cfg) {
    return config_to_json(cfg).dump(2) + "\n";
}

std::string serialize_manifest(const RunManifest& m) {
    json j;
    j["hb_manifest"] = 1;
    j["tool_version"] = m.tool_version;
    j["command"] = m.command;
    j["config"] = config_to_json(m.config);
    j["threads"] = m.threads;
    j["started_utc"] = m.started_utc;
    j["finished_utc"] = m.finished_utc;
    j["sign_convention"] = m.sign_convention;
    j["outputs"] = json::array();
    for (const auto& o : m.outputs) j["outputs"].push_back({{"path", o.path}, {"sha256", o.sha256}});
    return j.dump(2) + "\n";
}

std::optional<std::pair<std::string, ExperimentConfig>> parse_manifest_text(
    const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error&) {
        return std::nullopt;
    }
    if (!root.is_object() || !root.contains("hb_manifest")) return std::nullopt;
    if (!root.contains("config") || !root.contains("command"))
        throw ConfigError("manifest lacks config/command fields");
    return std::make_pair(root.at("command").get<std::string>(),
                          parse_config_json(root.at("config")));
}

} // namespace hb
