#include "hb/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include "hb/analysis.hpp"
#include "hb/config.hpp"
#include "hb/io.hpp"
#include "hb/kernels.hpp"
#include "hb/parallel.hpp"
#include "hb/stats.hpp"
#include "hb/stochint.hpp"
#include "hb/version.hpp"

namespace hb {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

enum ExitCode : int {
    kOk = 0,
    kInvalidParams = 1,
    kParseError = 2,
    kNoConvergence = 3,
    kStatFailure = 4,
};

struct CommonOpts {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> stream;
    std::optional<int> n_samples;
    std::string out_dir = ".";
    int threads = 0; // 0: resolve from HB_THREADS or default 1
    std::string format = "bin";
};

int resolve_threads(int cli_value) {
    if (cli_value > 0) return cli_value;
    if (const char* env = std::getenv("HB_THREADS")) {
        const int v = std::atoi(env);
        if (v > 0) return v;
    }
    return 1;
}

std::string utc_now() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    return buf;
}

/// Loads the experiment config; accepts a plain config or a run manifest
/// (whose embedded config is reused; the command must match).
ExperimentConfig load_for_command(const CommonOpts& opts, const std::string& command) {
    std::ifstream in(opts.config_path);
    if (!in) throw ConfigError("cannot open config file " + opts.config_path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());

    ExperimentConfig cfg;
    if (auto manifest = parse_manifest_text(text)) {
        if (manifest->first != command)
            throw ConfigError("manifest was produced by '" + manifest->first +
                              "', not '" + command + "'");
        cfg = manifest->second;
    } else {
        cfg = parse_config_text(text);
    }
    if (opts.seed) cfg.seed.master_seed = *opts.seed;
    if (opts.stream) cfg.seed.stream_index = *opts.stream;
    if (opts.n_samples) cfg.n_samples = *opts.n_samples;
    return cfg;
}

/// Collects output files and emits the manifest on completion.
class RunContext {
  public:
    RunContext(std::string command, const ExperimentConfig& cfg, const CommonOpts& opts)
        : opts_(opts) {
        manifest_.command = std::move(command);
        manifest_.tool_version = kToolVersion;
        manifest_.config = cfg;
        manifest_.threads = resolve_threads(opts.threads);
        manifest_.started_utc = utc_now();
        manifest_.sign_convention = kSignConvention;
        fs::create_directories(opts_.out_dir);
    }

    int threads() const { return manifest_.threads; }
    fs::path out(const std::string& name) const { return fs::path(opts_.out_dir) / name; }

    void record(const fs::path& path) {
        manifest_.outputs.push_back({path.filename().string(), sha256_file(path)});
    }

    void write_json(const std::string& name, const json& doc) {
        const fs::path p = out(name);
        std::ofstream f(p, std::ios::trunc);
        f << doc.dump(2) << "\n";
        f.close();
        record(p);
    }

    void write_text(const std::string& name, const std::string& text) {
        const fs::path p = out(name);
        std::ofstream f(p, std::ios::trunc);
        f << text;
        f.close();
        record(p);
    }

    fs::path finish() {
        manifest_.finished_utc = utc_now();
        const fs::path p = out("manifest.json");
        std::ofstream f(p, std::ios::trunc);
        f << serialize_manifest(manifest_);
        return p;
    }

  private:
    CommonOpts opts_;
    RunManifest manifest_;
};

void write_field(RunContext& ctx, const std::string& stem, const FieldSample& field, int q,
                 const std::vector<double>& H, const std::string& format) {
    if (format == "bin" || format == "json") {
        const fs::path p = ctx.out(stem + ".hbf");
        write_field_bin(p, field, q, H);
        ctx.record(p);
    }
    if (format == "csv") {
        const fs::path p = ctx.out(stem + ".csv");
        write_field_csv(p, field);
        ctx.record(p);
    }
    if (format == "json") {
        json j;
        j["grid"] = {{"t_max", field.grid.t_max}, {"n_t", field.grid.n_t},
                     {"L", field.grid.L}, {"n_x", field.grid.n_x}, {"d", field.grid.d}};
        j["q"] = q;
        j["H"] = H;
        j["values"] = field.values;
        ctx.write_json(stem + ".json", j);
    }
}

int cmd_validate(const CommonOpts& opts) {
    const ExperimentConfig cfg = load_for_command(opts, "validate");
    const ValidationReport rep = validate_params(cfg.params);

    std::cout << "parameter gate: 2 H_0 + sum H_i > d + 1 - 1/q\n"
              << "  lhs = " << rep.lhs << "\n  rhs = " << rep.rhs << "\n  valid = "
              << (rep.valid ? "yes" : "no") << "\n";
    for (const auto& v : rep.violations) std::cout << "  violation: " << v << "\n";

    json j;
    j["check"] = "validate";
    j["valid"] = rep.valid;
    j["lhs"] = rep.lhs;
    j["rhs"] = rep.rhs;
    j["violations"] = rep.violations;
    std::cout << j.dump(2) << "\n";
    return rep.valid ? kOk : kInvalidParams;
}

int cmd_sample(const CommonOpts& opts) {
    const ExperimentConfig cfg = load_for_command(opts, "sample");
    const ValidationReport rep = validate_params(cfg.params);
    if (!rep.valid) {
        std::cerr << "invalid parameters; run 'hb validate' for details\n";
        return kInvalidParams;
    }

    RunContext ctx("sample", cfg, opts);
    std::vector<FieldSample> fields;
    try {
        fields = sheet_ensemble(cfg.params, cfg.grid, cfg.sampler, cfg.n_samples, cfg.seed,
                                ctx.threads());
    } catch (const std::runtime_error& e) {
        std::cerr << "sampler resource error: " << e.what() << "\n";
        return kParseError;
    }
    for (int i = 0; i < cfg.n_samples; ++i) {
        char stem[32];
        std::snprintf(stem, sizeof(stem), "sheet_%04d", i);
        write_field(ctx, stem, fields[i], cfg.params.q, cfg.params.H, opts.format);
    }
    const fs::path manifest = ctx.finish();
    std::cout << "wrote " << cfg.n_samples << " field(s) and " << manifest.string() << "\n";
    return kOk;
}

int cmd_solve(const CommonOpts& opts, const std::string& noise_path) {
    const ExperimentConfig cfg = load_for_command(opts, "solve");
    const ValidationReport rep = validate_params(cfg.params);
    if (!rep.valid) {
        std::cerr << "invalid parameters; run 'hb validate' for details\n";
        return kInvalidParams;
    }
    if (cfg.params.d != 1) {
        std::cerr << "the solver supports d = 1 only\n";
        return kInvalidParams;
    }

    RunContext ctx("solve", cfg, opts);

    FieldSample sheet;
    const bool deterministic =
        cfg.sigma.kind == SigmaSpec::Kind::Constant && cfg.sigma.parameters.at(0) == 0.0;
    if (!noise_path.empty()) {
        const FieldFile ff = read_field_bin(noise_path);
        if (ff.field.kind != FieldKind::Sheet) {
            std::cerr << "noise file does not contain a sheet field\n";
            return kParseError;
        }
        sheet = ff.field;
        if (!(sheet.grid == cfg.grid)) {
            std::cerr << "noise grid does not match the config grid\n";
            return kParseError;
        }
    } else if (deterministic) {
        sheet = zero_sheet(cfg.grid);
    } else {
        sheet = SheetSampler(cfg.params, cfg.grid, cfg.sampler).sample(cfg.seed);
    }

    const std::vector<double> u0 = cfg.make_u0();
    const SolveResult result = cfg.solver.scheme == SolverConfig::Scheme::Picard
                                   ? picard_solve(cfg.params, cfg.sigma, u0, sheet, cfg.solver)
                                   : step_solve(cfg.params, cfg.sigma, u0, sheet, cfg.solver);

    write_field(ctx, "solution", result.field, cfg.params.q, cfg.params.H, opts.format);

    json diag;
    diag["check"] = "solve";
    diag["converged"] = result.converged;
    diag["iterations"] = result.iterations;
    diag["distances"] = result.iter_distances;
    diag["warnings"] = result.warnings;
    if (deterministic) {
        // Benchmark against the Hopf-Cole reference at the final time.
        const int n_modes = std::min(256, cfg.grid.n_x / 2);
        const auto ref =
            cole_hopf_exact(u0, cfg.grid.t_max, cfg.params.nu, cfg.grid.L, n_modes);
        double err = 0.0;
        for (int j = 0; j < cfg.grid.n_x; ++j)
            err = std::max(err,
                           std::abs(result.field.solution_at(cfg.grid.n_t, j) - ref[j]));
        diag["cole_hopf_max_error"] = err;
        std::cout << "Hopf-Cole max error at t_max: " << err << "\n";
    }
    diag["seed"] = {{"master_seed", sheet.seed.master_seed},
                    {"stream_index", sheet.seed.stream_index}};
    diag["config"] = json::parse(serialize_config(cfg));
    ctx.write_json("diagnostics.json", diag);

    const fs::path manifest = ctx.finish();
    std::cout << (result.converged ? "converged" : "did NOT converge") << " after "
              << result.iterations << " iteration(s); wrote " << manifest.string() << "\n";
    return result.converged ? kOk : kNoConvergence;
}

// ---- verify subchecks ----------------------------------------------------

json verify_covariance(const ExperimentConfig& cfg, int threads, bool& pass, std::string& csv) {
    const int n = cfg.verify.covariance_n;
    const auto ens = sheet_ensemble(cfg.params, cfg.grid, cfg.sampler, n, cfg.seed, threads);

    const GridSpec& g = cfg.grid;
    std::vector<std::pair<int, int>> pts = {
        {g.n_t, g.n_x},
        {std::max(1, g.n_t / 2), std::max(1, g.n_x / 2)},
        {g.n_t, std::max(1, g.n_x / 2)},
        {std::max(1, g.n_t / 2), g.n_x},
        {std::max(1, g.n_t / 4), std::max(1, 3 * g.n_x / 4)},
    };

    json pairs = json::array();
    std::ostringstream table;
    table << "ka,ja,kb,jb,empirical,exact,se,z\n";
    pass = true;
    std::vector<double> prod(n);
    for (const auto& [ka, ja] : pts)
        for (const auto& [kb, jb] : pts) {
            for (int i = 0; i < n; ++i)
                prod[i] = ens[i].sheet_at(ka, ja) * ens[i].sheet_at(kb, jb);
            const auto m = jackknife_mean(prod);
            const std::array<double, 2> pa{ka * g.dt(), ja * g.dx()},
                pb{kb * g.dt(), jb * g.dx()};
            const double exact = sheet_covariance(pa, pb, cfg.params.H);
            const double z = m.se > 0 ? (m.value - exact) / m.se : 0.0;
            pass = pass && std::abs(z) <= 3.0;
            pairs.push_back({{"a", {ka, ja}}, {"b", {kb, jb}}, {"empirical", m.value},
                             {"exact", exact}, {"se", m.se}, {"z", z}});
            table << ka << ',' << ja << ',' << kb << ',' << jb << ',' << m.value << ',' << exact
                  << ',' << m.se << ',' << z << "\n";
        }
    csv = table.str();
    json j;
    j["check"] = "covariance";
    j["n"] = n;
    j["pairs"] = pairs;
    j["pass"] = pass;
    return j;
}

json verify_isometry(const ExperimentConfig& cfg, int threads, bool& pass, std::string& csv) {
    (void)threads;
    const auto battery = isometry_battery(cfg.grid);
    json items = json::array();
    std::ostringstream table;
    table << "phi,h_norm,empirical,se,z\n";
    pass = true;
    for (std::size_t b = 0; b < battery.size(); ++b) {
        const auto rep = isometry_report(battery[b], cfg.params, cfg.verify.isometry_n,
                                         {cfg.seed.master_seed, cfg.seed.stream_index + b * 1000000},
                                         cfg.sampler.trunc);
        pass = pass && std::abs(rep.z_score) < 3.0;
        items.push_back({{"phi", b}, {"h_norm", rep.h_norm},
                         {"empirical", rep.empirical_second_moment},
                         {"se", rep.standard_error}, {"z", rep.z_score}});
        table << b << ',' << rep.h_norm << ',' << rep.empirical_second_moment << ','
              << rep.standard_error << ',' << rep.z_score << "\n";
    }
    csv = table.str();
    json j;
    j["check"] = "isometry";
    j["n"] = cfg.verify.isometry_n;
    j["battery"] = items;
    j["pass"] = pass;
    return j;
}

json verify_scaling(const ExperimentConfig& cfg, int threads, bool& pass, std::string& csv) {
    std::vector<double> exponents = cfg.params.H;
    for (double& e : exponents) e += cfg.verify.exponent_offset;
    const ScalingReport rep =
        sheet_scaling_test(cfg.params, cfg.grid, cfg.verify.lambda, cfg.verify.scaling_n,
                           cfg.seed, exponents, cfg.sampler, threads);
    pass = rep.pass;
    json pts = json::array();
    std::ostringstream table;
    table << "k,j,ks_statistic,p_value\n";
    for (const auto& p : rep.points) {
        pts.push_back({{"k", p.k}, {"j", p.j}, {"ks", p.ks_statistic}, {"p", p.p_value}});
        table << p.k << ',' << p.j << ',' << p.ks_statistic << ',' << p.p_value << "\n";
    }
    csv = table.str();
    json j;
    j["check"] = "scaling";
    j["lambda"] = rep.lambda;
    j["exponents"] = rep.exponents_used;
    j["threshold"] = rep.threshold;
    j["min_p_value"] = rep.min_p_value;
    j["points"] = pts;
    j["pass"] = pass;
    return j;
}

json verify_holder(const ExperimentConfig& cfg, int threads, bool& pass, std::string& csv) {
    // (a) sheet-exponent recovery in the time direction at p = 2 (the
    // covariance fixes the second-moment power law for every q).
    GridSpec g = cfg.grid;
    const auto ens =
        sheet_ensemble(cfg.params, g, cfg.sampler, cfg.verify.holder_n, cfg.seed, threads);
    const auto sheet_fit =
        estimate_holder(ens, HolderFit::Direction::Time, 2, cfg.verify.holder_lags);
    const bool sheet_ok =
        !sheet_fit.degenerate && std::abs(sheet_fit.exponent - cfg.params.H[0]) <= 0.05;

    // (b) one-sided regularity bound checks on a solution ensemble.
    SolverConfig scfg = cfg.solver;
    scfg.scheme = SolverConfig::Scheme::Step;
    const auto sols =
        solution_ensemble(cfg.params, cfg.sigma, cfg.make_u0(), scfg, cfg.sampler,
                          cfg.verify.holder_solution_n,
                          {cfg.seed.master_seed, cfg.seed.stream_index + 7000000}, threads);
    const auto time_fit = estimate_holder(sols, HolderFit::Direction::Time, cfg.verify.holder_p,
                                          cfg.verify.holder_lags);
    const auto space_fit = estimate_holder(sols, HolderFit::Direction::Space,
                                           cfg.verify.holder_p, cfg.verify.holder_lags);
    const auto tb = holder_bound_check(time_fit, cfg.params);
    const auto sb = holder_bound_check(space_fit, cfg.params);
    pass = sheet_ok && tb.pass && sb.pass;

    std::ostringstream table;
    table << "target,exponent,se,bound,pass\n";
    table << "sheet_time," << sheet_fit.exponent << ',' << sheet_fit.exponent_se << ','
          << cfg.params.H[0] << ',' << sheet_ok << "\n";
    table << "solution_time," << time_fit.exponent << ',' << time_fit.exponent_se << ','
          << tb.bound << ',' << tb.pass << "\n";
    table << "solution_space," << space_fit.exponent << ',' << space_fit.exponent_se << ','
          << sb.bound << ',' << sb.pass << "\n";
    csv = table.str();

    json j;
    j["check"] = "holder";
    j["sheet_time"] = {{"exponent", sheet_fit.exponent}, {"se", sheet_fit.exponent_se},
                       {"target", cfg.params.H[0]}, {"pass", sheet_ok}};
    j["solution_time"] = {{"exponent", time_fit.exponent}, {"se", time_fit.exponent_se},
                          {"bound", tb.bound}, {"pass", tb.pass}};
    j["solution_space"] = {{"exponent", space_fit.exponent}, {"se", space_fit.exponent_se},
                           {"bound", sb.bound}, {"pass", sb.pass}};
    j["pass"] = pass;
    return j;
}

json verify_moments(const ExperimentConfig& cfg, int threads, bool& pass, std::string& csv) {
    SolverConfig scfg = cfg.solver;
    scfg.scheme = SolverConfig::Scheme::Step;
    std::vector<std::pair<double, EnsembleStats>> horizons;
    const double base_t = cfg.grid.t_max;
    for (double T : cfg.verify.horizons) {
        GridSpec g = cfg.grid;
        g.t_max = T;
        g.n_t = std::max(1, static_cast<int>(std::lround(cfg.grid.n_t * T / base_t)));
        scfg.domain = g;
        const auto ens = solution_ensemble(cfg.params, cfg.sigma, cfg.make_u0(), scfg,
                                           cfg.sampler, cfg.verify.moments_n, cfg.seed, threads);
        horizons.emplace_back(T, empirical_moments(ens, {2, 4}));
    }
    const auto rep2 = moment_growth_check(horizons, 2);
    const auto rep4 = moment_growth_check(horizons, 4);
    bool finite = true;
    std::ostringstream table;
    table << "horizon,sup_p2,sup_p4\n";
    for (const auto& [T, stats] : horizons) {
        finite = finite && std::isfinite(stats.sup_moment[0]) && std::isfinite(stats.sup_moment[1]);
        table << T << ',' << stats.sup_moment[0] << ',' << stats.sup_moment[1] << "\n";
    }
    pass = finite && !rep2.super_exponential_flag && !rep4.super_exponential_flag;
    csv = table.str();

    json j;
    j["check"] = "moments";
    j["n"] = cfg.verify.moments_n;
    j["horizons"] = cfg.verify.horizons;
    j["p2"] = {{"rate", rep2.fitted_rate}, {"max_residual", rep2.max_residual},
               {"super_exponential", rep2.super_exponential_flag}};
    j["p4"] = {{"rate", rep4.fitted_rate}, {"max_residual", rep4.max_residual},
               {"super_exponential", rep4.super_exponential_flag}};
    j["pass"] = pass;
    return j;
}

int cmd_verify(const CommonOpts& opts, const std::string& which) {
    ExperimentConfig cfg = load_for_command(opts, "verify");
    if (opts.n_samples) {
        cfg.verify.covariance_n = *opts.n_samples;
        cfg.verify.isometry_n = *opts.n_samples;
        cfg.verify.scaling_n = *opts.n_samples;
        cfg.verify.holder_n = *opts.n_samples;
        cfg.verify.moments_n = *opts.n_samples;
    }
    const ValidationReport rep = validate_params(cfg.params);
    if (!rep.valid) {
        std::cerr << "invalid parameters; run 'hb validate' for details\n";
        return kInvalidParams;
    }

    RunContext ctx("verify", cfg, opts);
    bool pass = false;
    std::string csv;
    json report;
    if (which == "covariance")
        report = verify_covariance(cfg, ctx.threads(), pass, csv);
    else if (which == "isometry")
        report = verify_isometry(cfg, ctx.threads(), pass, csv);
    else if (which == "scaling")
        report = verify_scaling(cfg, ctx.threads(), pass, csv);
    else if (which == "holder")
        report = verify_holder(cfg, ctx.threads(), pass, csv);
    else if (which == "moments")
        report = verify_moments(cfg, ctx.threads(), pass, csv);
    else {
        std::cerr << "unknown check '" << which
                  << "' (expected covariance, isometry, scaling, holder or moments)\n";
        return kParseError;
    }

    ctx.write_json("report_" + which + ".json", report);
    ctx.write_text("report_" + which + ".csv", csv);
    const fs::path manifest = ctx.finish();
    std::cout << "check " << which << ": " << (pass ? "PASS" : "FAIL") << "; wrote "
              << manifest.string() << "\n";
    return pass ? kOk : kStatFailure;
}

int cmd_report(const std::string& in_path) {
    std::ifstream in(in_path);
    if (!in) {
        std::cerr << "cannot open " << in_path << "\n";
        return kParseError;
    }
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        std::cerr << "not a JSON document: " << e.what() << "\n";
        return kParseError;
    }
    if (j.contains("hb_manifest")) {
        std::cout << "run manifest (tool " << j.value("tool_version", "?") << ")\n"
                  << "  command:  " << j.value("command", "?") << "\n"
                  << "  started:  " << j.value("started_utc", "?") << "\n"
                  << "  finished: " << j.value("finished_utc", "?") << "\n"
                  << "  sign convention: " << j.value("sign_convention", "?") << "\n"
                  << "  outputs:\n";
        for (const auto& o : j.value("outputs", json::array()))
            std::cout << "    " << o.value("path", "?") << "  sha256=" << o.value("sha256", "?")
                      << "\n";
        return kOk;
    }
    if (j.contains("check")) {
        std::cout << "report: " << j["check"].get<std::string>() << "\n";
        if (j.contains("pass"))
            std::cout << "  pass: " << (j["pass"].get<bool>() ? "yes" : "no") << "\n";
        for (const auto& [k, v] : j.items())
            if (k != "check" && k != "pass" && !v.is_array())
                std::cout << "  " << k << ": " << v.dump() << "\n";
        return kOk;
    }
    std::cerr << "unrecognized document (neither manifest nor report)\n";
    return kParseError;
}

} // namespace

int run_cli(const std::vector<std::string>& args) {
    CLI::App app{"hermite-burgers simulation and verification toolkit"};
    app.require_subcommand(1);

    CommonOpts opts;
    std::string noise_path, which, in_path;

    const auto add_common = [&](CLI::App* sub, bool needs_config) {
        auto* c = sub->add_option("--config", opts.config_path, "experiment config or manifest");
        if (needs_config) c->required();
        sub->add_option("--seed", opts.seed, "override master seed");
        sub->add_option("--stream", opts.stream, "override stream index");
        sub->add_option("--n-samples", opts.n_samples, "override sample count");
        sub->add_option("--out", opts.out_dir, "output directory");
        sub->add_option("--threads", opts.threads, "worker threads (HB_THREADS as fallback)");
        sub->add_option("--format", opts.format, "field output format")
            ->check(CLI::IsMember({"csv", "bin", "json"}));
    };

    auto* validate = app.add_subcommand("validate", "check the parameter gate");
    add_common(validate, true);

    auto* sample = app.add_subcommand("sample", "sample Hermite sheet realizations");
    add_common(sample, true);

    auto* solve = app.add_subcommand("solve", "solve the mild-form equation");
    add_common(solve, true);
    solve->add_option("--noise", noise_path, "use a stored sheet field instead of sampling");

    auto* verify = app.add_subcommand("verify", "statistical verification checks");
    add_common(verify, true);
    verify->add_option("--which", which, "covariance|isometry|scaling|holder|moments")
        ->required();

    auto* report = app.add_subcommand("report", "render a JSON report or manifest");
    report->add_option("--in", in_path, "report or manifest path")->required();

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) { // --help
            std::cout << app.help();
            return kOk;
        }
        std::cerr << e.what() << "\n";
        return kParseError;
    }

    try {
        if (app.got_subcommand(validate)) return cmd_validate(opts);
        if (app.got_subcommand(sample)) return cmd_sample(opts);
        if (app.got_subcommand(solve)) return cmd_solve(opts, noise_path);
        if (app.got_subcommand(verify)) return cmd_verify(opts, which);
        if (app.got_subcommand(report)) return cmd_report(in_path);
    } catch (const ConfigError& e) {
        std::cerr << e.what() << "\n";
        return kParseError;
    } catch (const std::invalid_argument& e) {
        std::cerr << e.what() << "\n";
        return kInvalidParams;
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return kParseError;
    }
    return kParseError;
}

} // namespace hb
