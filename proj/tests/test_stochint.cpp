#include <doctest.h>

#include <array>
#include <cmath>

#include "hb/kernels.hpp"
#include "hb/noise.hpp"
#include "hb/stats.hpp"
#include "hb/stochint.hpp"
#include "support.hpp"

using namespace hb;

TEST_CASE("h_inner_product closed-form values") {
    const std::array<double, 2> H{0.75, 0.75};
    {
        GridSpec g{1.0, 2, 1.0, 2, 1};
        const StepFunction box = StepFunction::box_indicator(g, 1.0, 1.0);
        CHECK(h_inner_product(box, box, H).value == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(h_inner_product(StepFunction::zero(g), box, H).value == 0.0);
    }
    {
        // [0,1]x[0,1] against [1,2]x[0,1] in time: (2^{1.5} - 2)/2.
        GridSpec g{2.0, 2, 1.0, 1, 1};
        StepFunction phi = StepFunction::zero(g), psi = StepFunction::zero(g);
        phi.coefficients[0] = 1.0;
        psi.coefficients[1] = 1.0;
        CHECK(h_inner_product(phi, psi, H).value ==
              doctest::Approx((std::pow(2.0, 1.5) - 2.0) / 2.0).epsilon(1e-12));
    }
}

TEST_CASE("h_inner_product is symmetric, bilinear and Cauchy-Schwarz") {
    GridSpec g{1.0, 3, 1.0, 4, 1};
    const std::array<double, 2> H{0.62, 0.81};
    GaussianStream gs({0xC5, 0});
    for (int rep = 0; rep < 20; ++rep) {
        StepFunction a = StepFunction::zero(g), b = StepFunction::zero(g),
                     c = StepFunction::zero(g);
        for (double& v : a.coefficients) v = gs.next();
        for (double& v : b.coefficients) v = gs.next();
        for (double& v : c.coefficients) v = gs.next();

        const double ab = h_inner_product(a, b, H).value;
        CHECK(h_inner_product(b, a, H).value == doctest::Approx(ab).epsilon(1e-12));

        // Bilinearity: <a + 2c, b> = <a,b> + 2<c,b>.
        StepFunction a2c = a;
        for (std::size_t i = 0; i < a2c.coefficients.size(); ++i)
            a2c.coefficients[i] += 2.0 * c.coefficients[i];
        const double lhs = h_inner_product(a2c, b, H).value;
        const double rhs = ab + 2.0 * h_inner_product(c, b, H).value;
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));

        const double aa = h_inner_product(a, a, H).value;
        const double bb = h_inner_product(b, b, H).value;
        CHECK(aa >= 0.0);
        CHECK(ab * ab <= aa * bb * (1.0 + 1e-12));
    }
}

TEST_CASE("integrate_step: linearity anchor and telescoping") {
    GridSpec g{1.0, 3, 1.0, 3, 1};
    HermiteParams p{1, {0.7, 0.7}, 1, 0.5};
    FbmSheetSampler sampler(p, g);
    const FieldSample sheet = sampler.sample({31, 7});

    CHECK(integrate_step(StepFunction::zero(g), sheet) == 0.0);

    const StepFunction full = StepFunction::box_indicator(g, 1.0, 1.0);
    CHECK(integrate_step(full, sheet) == doctest::Approx(sheet.sheet_at(3, 3)).epsilon(1e-12));

    GridSpec other{1.0, 2, 1.0, 3, 1};
    CHECK_THROWS_AS(integrate_step(StepFunction::zero(other), sheet), std::invalid_argument);
}

TEST_CASE("integrate_step second moment matches the H-norm (q=1)") {
    GridSpec g{1.0, 2, 1.0, 2, 1};
    HermiteParams p{1, {0.7, 0.7}, 1, 0.5};
    FbmSheetSampler sampler(p, g);
    const StepFunction box = StepFunction::box_indicator(g, 1.0, 1.0);
    const double hnorm = h_inner_product(box, box, p.H).value;

    const int n = 10000;
    std::vector<double> sq(n);
    for (int i = 0; i < n; ++i) {
        const double v = integrate_step(box, sampler.sample({81, static_cast<std::uint64_t>(i)}));
        sq[i] = v * v;
    }
    const auto m = jackknife_mean(sq);
    CHECK(std::abs(m.value - hnorm) <= 3.0 * m.se);
}

TEST_CASE("isometry_report battery for q in {1,2}") {
    GridSpec g{1.0, 4, 1.0, 4, 1};
    const auto battery = testsupport::step_function_battery(g);

    HermiteParams p1{1, {0.7, 0.7}, 1, 0.5};
    for (std::size_t b = 0; b < battery.size(); ++b) {
        const auto rep = isometry_report(battery[b], p1, 4000, {900 + b, 0});
        CAPTURE(b);
        CHECK(std::abs(rep.z_score) < 3.0);
    }

    HermiteParams p2{2, {0.8, 0.8}, 1, 0.5};
    TruncationSpec tr;
    tr.s_refine = 4;
    for (std::size_t b = 0; b < battery.size(); ++b) {
        const auto rep = isometry_report(battery[b], p2, 4000, {950 + b, 0}, tr);
        CAPTURE(b);
        CHECK(std::abs(rep.z_score) < 3.0);
    }

    // phi = 0: both sides vanish and z is defined as 0.
    const auto z = isometry_report(StepFunction::zero(g), p1, 100, {77, 0});
    CHECK(z.empirical_second_moment == 0.0);
    CHECK(z.h_norm == 0.0);
    CHECK(z.z_score == 0.0);
}

TEST_CASE("capital_I: small-t limit, monotonicity, refinement stability") {
    HermiteParams p{1, {0.7, 0.7}, 1, 0.5};
    const auto tiny = capital_I(1e-4, p);
    CHECK(tiny.value >= 0.0);
    CHECK(tiny.value <= 1e-3);
    CHECK_FALSE(tiny.divergence_flag);

    const auto a = capital_I(0.5, p);
    const auto b = capital_I(1.0, p);
    CHECK(a.value < b.value);

    CHECK(b.refinement_converged);
    CHECK(b.last_rel_change < 0.02);
}

TEST_CASE("capital_I refinement-converges iff the parameter gate passes") {
    // Probe family straddling condition (d) at q = 1, d = 3, where the gate
    // coincides with the true convergence boundary of I.
    HermiteParams ok{1, {0.9, 0.8, 0.8, 0.8}, 3, 0.5};
    CHECK(validate_params(ok).valid);
    const auto good = capital_I(1.0, ok);
    CHECK_FALSE(good.divergence_flag);
    CHECK(good.refinement_converged);

    HermiteParams bad{1, {0.55, 0.55, 0.55, 0.55}, 3, 0.5};
    CHECK_FALSE(validate_params(bad).valid);
    const auto div = capital_I(1.0, bad);
    CHECK(div.divergence_flag);
    CHECK_FALSE(div.refinement_converged);
    CHECK(std::isfinite(div.value)); // truncated quadrature value is still reported
}
