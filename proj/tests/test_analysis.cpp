#include <doctest.h>

#include <cmath>
#include <numbers>

#include "hb/analysis.hpp"
#include "hb/kernels.hpp"
#include "hb/stats.hpp"

using namespace hb;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
const HermiteParams kP1{1, {0.7, 0.7}, 1, 0.1};

std::vector<double> sine_profile(int n_x, double L, double amp) {
    std::vector<double> u(n_x);
    for (int j = 0; j < n_x; ++j) u[j] = amp * std::sin(kTwoPi * j * (L / n_x) / L);
    return u;
}

} // namespace

TEST_CASE("empirical_moments: deterministic ensemble is exact with zero SE") {
    GridSpec g{1.0, 2, 1.0, 2, 1};
    FieldSample v{g, std::vector<double>(g.sheet_extent()), {0, 0}, FieldKind::Sheet};
    for (std::size_t i = 0; i < v.values.size(); ++i) v.values[i] = -1.5 + 0.25 * i;
    const std::vector<FieldSample> ens(50, v);
    const auto stats = empirical_moments(ens, {2, 4});
    for (std::size_t pt = 0; pt < v.values.size(); ++pt) {
        CHECK(stats.estimates[0][pt] == doctest::Approx(v.values[pt] * v.values[pt]));
        CHECK(stats.std_errors[0][pt] == doctest::Approx(0.0));
        CHECK(stats.estimates[1][pt] ==
              doctest::Approx(std::pow(v.values[pt], 4.0)).epsilon(1e-12));
    }
}

TEST_CASE("empirical_moments: Gaussian sheet second and fourth moments") {
    GridSpec g{1.0, 1, 1.0, 1, 1};
    const auto ens = sheet_ensemble(kP1, g, {}, 10000, {1201, 0}, 2);
    const auto stats = empirical_moments(ens, {2, 4});
    const std::size_t corner = g.sheet_extent() - 1;
    CHECK(stats.estimates[0][corner] == doctest::Approx(1.0).epsilon(0.05));
    CHECK(stats.estimates[1][corner] == doctest::Approx(3.0).epsilon(0.2 / 3.0));
}

TEST_CASE("moment_growth_check behaviour") {
    GridSpec base{0.25, 16, kTwoPi, 16, 1};
    SolverConfig cfg;
    cfg.scheme = SolverConfig::Scheme::Step;
    const auto u0 = sine_profile(base.n_x, base.L, 0.5);

    std::vector<std::pair<double, EnsembleStats>> horizons;
    std::vector<std::pair<double, EnsembleStats>> det_horizons;
    for (double T : {0.25, 0.5, 1.0}) {
        GridSpec g = base;
        g.t_max = T;
        g.n_t = static_cast<int>(16 * T / 0.25);
        cfg.domain = g;
        const auto noisy = solution_ensemble(kP1, SigmaSpec::constant(0.1), u0, cfg, {}, 200,
                                             {1301, 0}, 2);
        horizons.emplace_back(T, empirical_moments(noisy, {2, 4}));
        const auto det =
            solution_ensemble(kP1, SigmaSpec::zero(), u0, cfg, {}, 2, {1302, 0}, 1);
        det_horizons.emplace_back(T, empirical_moments(det, {2, 4}));
    }

    const auto rep = moment_growth_check(horizons, 2);
    CHECK(std::isfinite(rep.fitted_rate));
    CHECK_FALSE(rep.super_exponential_flag);
    const auto rep4 = moment_growth_check(horizons, 4);
    CHECK_FALSE(rep4.super_exponential_flag);

    // sigma = 0: deterministic decay, sup-moments non-increasing and stable.
    const auto det_rep = moment_growth_check(det_horizons, 2);
    CHECK_FALSE(det_rep.super_exponential_flag);
    CHECK(det_rep.fitted_rate <= 0.0);

    CHECK_THROWS_AS(
        moment_growth_check({{0.25, horizons[0].second}, {0.5, horizons[1].second}}, 2),
        std::invalid_argument);
}

TEST_CASE("estimate_holder recovers the fbm time exponent") {
    GridSpec g{1.0, 16, 1.0, 2, 1};
    const std::vector<int> lags{1, 2, 3, 4, 6, 8};
    for (double H0 : {0.7, 0.6}) {
        HermiteParams p{1, {H0, 0.7}, 1, 0.1};
        const auto ens = sheet_ensemble(p, g, {}, 10000, {1401, 0}, 2);
        for (int mp : {2, 4}) {
            const auto fit = estimate_holder(ens, HolderFit::Direction::Time, mp, lags);
            CAPTURE(H0);
            CAPTURE(mp);
            CHECK_FALSE(fit.degenerate);
            CHECK(std::abs(fit.exponent - H0) <= 0.05);
            CHECK(fit.r2 > 0.99);
        }
    }
}

TEST_CASE("estimate_holder on smooth and constant fields") {
    GridSpec g{1.0, 8, kTwoPi, 64, 1};
    // Smooth deterministic solution field: regression saturates near 1.
    SolverConfig cfg;
    cfg.domain = g;
    cfg.scheme = SolverConfig::Scheme::Step;
    const auto u0 = sine_profile(g.n_x, g.L, 0.5);
    const auto ens = solution_ensemble(kP1, SigmaSpec::zero(), u0, cfg, {}, 2, {1501, 0}, 1);
    const auto fit =
        estimate_holder(ens, HolderFit::Direction::Space, 2, std::vector<int>{1, 2, 3, 4});
    CHECK_FALSE(fit.degenerate);
    CHECK(fit.exponent >= 0.95);

    // Constant field: all increments vanish.
    FieldSample flat{g, std::vector<double>(g.solution_extent(), 2.0), {0, 0},
                     FieldKind::Solution};
    const std::vector<FieldSample> flat_ens(10, flat);
    const auto degenerate =
        estimate_holder(flat_ens, HolderFit::Direction::Space, 2, std::vector<int>{1, 2, 3, 4});
    CHECK(degenerate.degenerate);
}

TEST_CASE("holder_bound_check is one-sided") {
    HermiteParams p{1, {0.7, 0.7}, 1, 0.1};
    HolderFit fit;
    fit.direction = HolderFit::Direction::Time;
    fit.exponent = 0.45;
    fit.exponent_se = 0.01;
    CHECK(holder_bound_check(fit, p).pass); // bound min(0.2, 0.5) = 0.2

    fit.exponent = 0.05;
    CHECK_FALSE(holder_bound_check(fit, p).pass);

    fit.exponent = 0.99; // smooth deterministic fields exceed any bound
    fit.exponent_se = 0.0;
    CHECK(holder_bound_check(fit, p).pass);
}

TEST_CASE("sheet_scaling_test: identity, correct exponents, negative control") {
    GridSpec g{1.0, 2, 1.0, 2, 1};

    const std::vector<double> unit{1.0, 1.0};
    const auto same = sheet_scaling_test(kP1, g, unit, 1500, {1601, 0});
    CHECK(same.pass);

    const std::vector<double> lam{4.0, 1.0};
    const auto good = sheet_scaling_test(kP1, g, lam, 4000, {1602, 0});
    CHECK(good.pass);

    std::vector<double> wrong{kP1.H[0] - 0.2, kP1.H[1]};
    const auto bad = sheet_scaling_test(kP1, g, lam, 4000, {1603, 0}, wrong);
    CHECK_FALSE(bad.pass);
}

TEST_CASE("solution_scaling_probe reports without asserting") {
    GridSpec g{0.25, 8, kTwoPi, 16, 1};
    SolverConfig cfg;
    cfg.domain = g;
    cfg.scheme = SolverConfig::Scheme::Step;
    const std::vector<double> zero_u0(g.n_x, 0.0);

    // sigma = 0 and u0 = 0: both ensembles are identically zero.
    const auto trivial = solution_scaling_probe(kP1, SigmaSpec::zero(), {0.3, 1.0, 0.7}, 2.0,
                                                zero_u0, cfg, 50, {1701, 0});
    CHECK_FALSE(trivial.asserted);
    CHECK(trivial.pass);
    CHECK(trivial.min_p_value == doctest::Approx(1.0));

    // lambda = 1: identical configurations, independent draws.
    const auto ident = solution_scaling_probe(kP1, SigmaSpec::constant(0.1),
                                              {kP1.H[0] - 1.0, 1.0, 1.0}, 1.0, zero_u0, cfg,
                                              400, {1702, 0});
    CHECK(ident.pass);
}
