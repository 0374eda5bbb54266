#include <doctest.h>

#include <array>
#include <cmath>
#include <vector>

#include "hb/kernels.hpp"
#include "hb/noise.hpp"
#include "hb/stats.hpp"

using namespace hb;

namespace {

const HermiteParams kP1{1, {0.7, 0.7}, 1, 0.5};
const HermiteParams kP2{2, {0.8, 0.8}, 1, 0.5};

template <typename Sampler>
std::vector<double> ensemble_at(const Sampler& s, int k, int j, int n, std::uint64_t master) {
    std::vector<double> out;
    out.reserve(n);
    for (int i = 0; i < n; ++i) {
        const FieldSample f = s.sample({master, static_cast<std::uint64_t>(i)});
        out.push_back(f.sheet_at(k, j));
    }
    return out;
}

} // namespace

TEST_CASE("hermite_poly values") {
    CHECK(hermite_poly(1, 3.5) == doctest::Approx(3.5));
    CHECK(hermite_poly(2, 2.0) == doctest::Approx(3.0));
    CHECK(hermite_poly(3, 2.0) == doctest::Approx(2.0));
    CHECK(hermite_poly(0, 1.7) == doctest::Approx(1.0));
}

TEST_CASE("white noise determinism, cell variance and independence") {
    GridSpec g{0.2, 2, 0.2, 2, 1}; // four cells of volume 0.01
    const FieldSample a = sample_white_noise(g, {5, 11});
    const FieldSample b = sample_white_noise(g, {5, 11});
    CHECK(a.values == b.values);
    CHECK(sample_white_noise(g, {5, 12}).values != a.values);

    const int n = 10000;
    std::vector<double> cell0(n), cell3(n);
    for (int i = 0; i < n; ++i) {
        const FieldSample w = sample_white_noise(g, {77, static_cast<std::uint64_t>(i)});
        cell0[i] = w.cell_at(0, 0);
        cell3[i] = w.cell_at(1, 1);
    }
    const auto m = jackknife_mean(cell0);
    CHECK(std::abs(m.value) <= 3.0 * m.se);
    CHECK(variance(cell0) == doctest::Approx(0.01).epsilon(0.05));

    // Disjoint cells: empirical correlation within 3 standard errors of zero.
    std::vector<double> prod(n);
    for (int i = 0; i < n; ++i) prod[i] = cell0[i] * cell3[i];
    const auto c = jackknife_mean(prod);
    CHECK(std::abs(c.value) <= 3.0 * c.se);
}

TEST_CASE("exact fbm sheet: axes, normalization, covariance oracle") {
    GridSpec g{1.0, 2, 1.0, 2, 1};
    FbmSheetSampler sampler(kP1, g);

    const FieldSample f = sampler.sample({3, 0});
    for (int k = 0; k <= g.n_t; ++k) CHECK(f.sheet_at(k, 0) == 0.0);
    for (int j = 0; j <= g.n_x; ++j) CHECK(f.sheet_at(0, j) == 0.0);

    const int n = 10000;
    std::vector<double> corner(n), mid(n);
    for (int i = 0; i < n; ++i) {
        const FieldSample s = sampler.sample({101, static_cast<std::uint64_t>(i)});
        corner[i] = s.sheet_at(2, 2);
        mid[i] = s.sheet_at(1, 1);
    }
    CHECK(variance(corner) == doctest::Approx(1.0).epsilon(0.05));

    const std::array<double, 2> a{0.5, 0.5}, b{1.0, 1.0};
    const double expect = sheet_covariance(a, b, kP1.H);
    std::vector<double> prod(n);
    for (int i = 0; i < n; ++i) prod[i] = mid[i] * corner[i];
    const auto cov = jackknife_mean(prod);
    CHECK(std::abs(cov.value - expect) <= 3.0 * cov.se);
}

TEST_CASE("exact fbm sheet scaling law in distribution") {
    // Z on (lam0*t_max, L), matched lattice indices, against lam0^{H0} Z.
    GridSpec base{1.0, 2, 1.0, 2, 1};
    GridSpec scaled{4.0, 2, 1.0, 2, 1};
    FbmSheetSampler sb(kP1, base), ss(kP1, scaled);
    const int n = 3000;
    const double factor = std::pow(4.0, kP1.H[0]);
    std::vector<double> va(n), vb(n);
    for (int i = 0; i < n; ++i) {
        va[i] = ss.sample({21, static_cast<std::uint64_t>(i)}).sheet_at(2, 2);
        vb[i] = factor * sb.sample({22, static_cast<std::uint64_t>(i)}).sheet_at(2, 2);
    }
    CHECK(ks_two_sample(va, vb).p_value > 0.01);
    // Wrong exponent must be detected.
    for (double& v : vb) v *= std::pow(4.0, 0.2);
    CHECK(ks_two_sample(va, vb).p_value < 0.002);
}

TEST_CASE("kernel sampler q=1: determinism, calibration, covariance, oracle law") {
    GridSpec g{1.0, 2, 1.0, 2, 1};
    TruncationSpec tr;
    tr.s_refine = 8;
    HermiteKernelSampler sampler(kP1, g, tr);

    const FieldSample f1 = sampler.sample({9, 4});
    const FieldSample f2 = sampler.sample({9, 4});
    CHECK(f1.values == f2.values);
    for (int j = 0; j <= g.n_x; ++j) CHECK(f1.sheet_at(0, j) == 0.0);

    // Calibration pins the corner variance to the covariance product formula.
    const std::array<int, 2> corner{2, 2};
    CHECK(sampler.discrete_covariance(corner, corner) == doctest::Approx(1.0).epsilon(1e-12));

    // The cell-integrated Gram construction reproduces the closed-form
    // covariance exactly at lattice points.
    for (int ka = 1; ka <= 2; ++ka)
        for (int ja = 1; ja <= 2; ++ja)
            for (int kb = 1; kb <= 2; ++kb)
                for (int jb = 1; jb <= 2; ++jb) {
                    const std::array<int, 2> a{ka, ja}, b{kb, jb};
                    const std::array<double, 2> pa{0.5 * ka, 0.5 * ja}, pb{0.5 * kb, 0.5 * jb};
                    const double exact = sheet_covariance(pa, pb, kP1.H);
                    const double disc = sampler.discrete_covariance(a, b);
                    CHECK(disc == doctest::Approx(exact).epsilon(1e-10));
                }

    // Marginal law at (1,1) against the exact Gaussian oracle.
    FbmSheetSampler oracle(kP1, g);
    const auto va = ensemble_at(sampler, 2, 2, 2000, 301);
    const auto vb = ensemble_at(oracle, 2, 2, 2000, 302);
    CHECK(ks_two_sample(va, vb).p_value > 0.01);
}

TEST_CASE("kernel sampler: ensemble centering at every lattice point") {
    GridSpec g{1.0, 2, 1.0, 2, 1};
    TruncationSpec tr;
    tr.s_refine = 4;
    HermiteKernelSampler sampler(kP2, g, tr);
    const int n = 10000;
    std::vector<std::vector<double>> vals(g.sheet_extent(), std::vector<double>(n));
    for (int i = 0; i < n; ++i) {
        const FieldSample f = sampler.sample({401, static_cast<std::uint64_t>(i)});
        for (std::size_t p = 0; p < f.values.size(); ++p) vals[p][i] = f.values[p];
    }
    for (int k = 1; k <= g.n_t; ++k)
        for (int j = 1; j <= g.n_x; ++j) {
            const auto m = jackknife_mean(vals[static_cast<std::size_t>(k) * (g.n_x + 1) + j]);
            CHECK(std::abs(m.value) <= 3.0 * m.se);
        }
}

TEST_CASE("kernel sampler calibration equals the closed-form normalization") {
    // The exact cell integration makes the self-calibration constant land on
    //   c(H,q) = [ q! prod_i Beta(1-beta_i, 2beta_i-1)^q / (H_i (2H_i-1)) ]^{-1/2}.
    GridSpec g{1.0, 2, 1.0, 2, 1};
    for (const HermiteParams& p : {kP1, kP2, HermiteParams{3, {0.9, 0.85}, 1, 1.0}}) {
        HermiteKernelSampler sampler(p, g);
        double qf = 1.0;
        for (int r = 2; r <= p.q; ++r) qf *= r;
        double prod = 1.0;
        for (double H : p.H) {
            const double beta = kernel_exponent(H, p.q);
            const double cb = std::exp(std::lgamma(1.0 - beta) + std::lgamma(2.0 * beta - 1.0) -
                                       std::lgamma(beta));
            prod *= std::pow(cb, p.q) / (H * (2.0 * H - 1.0));
        }
        CHECK(sampler.calibration_scale() ==
              doctest::Approx(1.0 / std::sqrt(qf * prod)).epsilon(1e-10));
    }
}

TEST_CASE("kernel sampler q=2: covariance law and sampling consistency") {
    GridSpec g{1.0, 2, 1.0, 2, 1};
    TruncationSpec tr;
    tr.s_refine = 8;
    HermiteKernelSampler sampler(kP2, g, tr);

    // Covariance law holds exactly for the discretized sampler.
    for (int ka = 1; ka <= 2; ++ka)
        for (int ja = 1; ja <= 2; ++ja)
            for (int kb = 1; kb <= 2; ++kb)
                for (int jb = 1; jb <= 2; ++jb) {
                    const std::array<int, 2> a{ka, ja}, b{kb, jb};
                    const std::array<double, 2> pa{0.5 * ka, 0.5 * ja}, pb{0.5 * kb, 0.5 * jb};
                    const double exact = sheet_covariance(pa, pb, kP2.H);
                    const double disc = sampler.discrete_covariance(a, b);
                    CHECK(disc == doctest::Approx(exact).epsilon(1e-10));
                }

    // Monte Carlo covariance agrees with the closed form within the spec's
    // 10% envelope and within 3 standard errors.
    const int n = 4000;
    const auto corner = ensemble_at(sampler, 2, 2, n, 501);
    const auto mid = ensemble_at(sampler, 1, 1, n, 501);
    std::vector<double> prod(n);
    for (int i = 0; i < n; ++i) prod[i] = corner[i] * mid[i];
    const std::array<double, 2> pa{0.5, 0.5}, pb{1.0, 1.0};
    const double exact = sheet_covariance(pa, pb, kP2.H);
    const auto cov = jackknife_mean(prod);
    CHECK(std::abs(cov.value - exact) <= 3.0 * cov.se);
    CHECK(std::abs(cov.value - exact) / exact <= 0.10);

    // Chaos of order 2 is not Gaussian: excess kurtosis detectably nonzero.
    const auto kurt = jackknife_excess_kurtosis(corner);
    CHECK(std::abs(kurt.value) > 3.0 * kurt.se);
}

TEST_CASE("ncl sampler q=1 reduces to the exact fbm law") {
    GridSpec g{1.0, 2, 1.0, 2, 1};
    HermiteNclSampler sampler(kP1, g, 64);

    // With q = 1 the construction is exactly Gaussian fbm on the lattice.
    for (int ka = 1; ka <= 2; ++ka)
        for (int kb = 1; kb <= 2; ++kb) {
            const std::array<int, 2> a{ka, ka}, b{kb, kb};
            const std::array<double, 2> pa{0.5 * ka, 0.5 * ka}, pb{0.5 * kb, 0.5 * kb};
            CHECK(sampler.discrete_covariance(a, b) ==
                  doctest::Approx(sheet_covariance(pa, pb, kP1.H)).epsilon(1e-10));
        }

    FbmSheetSampler oracle(kP1, g);
    const auto va = ensemble_at(sampler, 2, 2, 2000, 601);
    const auto vb = ensemble_at(oracle, 2, 2, 2000, 602);
    CHECK(ks_two_sample(va, vb).p_value > 0.01);
}

TEST_CASE("covariance law over a 5x5 probe of point pairs, exact sampler") {
    GridSpec g{1.0, 4, 1.0, 4, 1};
    FbmSheetSampler sampler(kP1, g);
    const int n = 2000;
    std::vector<FieldSample> ens;
    ens.reserve(n);
    for (int i = 0; i < n; ++i) ens.push_back(sampler.sample({801, static_cast<std::uint64_t>(i)}));

    const std::vector<std::pair<int, int>> pts = {{4, 4}, {2, 2}, {4, 2}, {2, 4}, {1, 3}};
    std::vector<double> prod(n);
    for (const auto& [ka, ja] : pts)
        for (const auto& [kb, jb] : pts) {
            for (int i = 0; i < n; ++i)
                prod[i] = ens[i].sheet_at(ka, ja) * ens[i].sheet_at(kb, jb);
            const auto m = jackknife_mean(prod);
            const std::array<double, 2> pa{ka * g.dt(), ja * g.dx()}, pb{kb * g.dt(), jb * g.dx()};
            const double exact = sheet_covariance(pa, pb, kP1.H);
            CHECK(std::abs(m.value - exact) <= 3.0 * m.se);
        }
}

TEST_CASE("centering of the exact and ncl samplers at every lattice point") {
    GridSpec g{1.0, 2, 1.0, 2, 1};
    const int n = 10000;
    FbmSheetSampler exact(kP1, g);
    HermiteNclSampler ncl(kP2, g, 32);
    std::vector<std::vector<double>> ve(g.sheet_extent(), std::vector<double>(n));
    std::vector<std::vector<double>> vn(g.sheet_extent(), std::vector<double>(n));
    for (int i = 0; i < n; ++i) {
        const auto fe = exact.sample({811, static_cast<std::uint64_t>(i)});
        const auto fn = ncl.sample({812, static_cast<std::uint64_t>(i)});
        for (std::size_t p = 0; p < fe.values.size(); ++p) {
            ve[p][i] = fe.values[p];
            vn[p][i] = fn.values[p];
        }
    }
    for (int k = 1; k <= g.n_t; ++k)
        for (int j = 1; j <= g.n_x; ++j) {
            const std::size_t p = static_cast<std::size_t>(k) * (g.n_x + 1) + j;
            const auto me = jackknife_mean(ve[p]);
            const auto mn = jackknife_mean(vn[p]);
            CHECK(std::abs(me.value) <= 3.0 * me.se);
            CHECK(std::abs(mn.value) <= 3.0 * mn.se);
        }
}

TEST_CASE("samplers support d = 2") {
    GridSpec g{1.0, 2, 1.0, 2, 2};
    HermiteParams p{1, {0.7, 0.6, 0.8}, 2, 0.5};

    // Exact sampler: empirical corner variance against the closed form.
    FbmSheetSampler exact(p, g);
    const int n = 4000;
    std::vector<double> corner(n);
    const std::size_t last = g.sheet_extent() - 1;
    for (int i = 0; i < n; ++i)
        corner[i] = exact.sample({821, static_cast<std::uint64_t>(i)}).values[last];
    CHECK(variance(corner) == doctest::Approx(1.0).epsilon(0.08));

    // Kernel sampler: the discretized covariance is exact in any dimension.
    HermiteParams p2{2, {0.8, 0.7, 0.9}, 2, 0.5};
    TruncationSpec tr;
    tr.s_refine = 4;
    HermiteKernelSampler ker(p2, g, tr);
    const std::array<int, 3> a{1, 2, 1}, b{2, 1, 2};
    const std::array<double, 3> pa{0.5, 1.0, 0.5}, pb{1.0, 0.5, 1.0};
    CHECK(ker.discrete_covariance(a, b) ==
          doctest::Approx(sheet_covariance(pa, pb, p2.H)).epsilon(1e-10));
    const FieldSample f = ker.sample({822, 0});
    CHECK(f.values.size() == g.sheet_extent());
    CHECK(f.values[0] == 0.0);
}

TEST_CASE("sampler feasibility guards") {
    // q-fold machinery above the documented order limit
    CHECK_THROWS_AS(HermiteKernelSampler({4, {0.9, 0.9}, 1, 1.0}, GridSpec{1.0, 2, 1.0, 2, 1}),
                    std::runtime_error);
    // cost budget exceeded
    TruncationSpec tiny;
    tiny.cost_budget = 10.0;
    CHECK_THROWS_AS(HermiteKernelSampler(kP2, GridSpec{1.0, 8, 1.0, 8, 1}, tiny),
                    std::runtime_error);
    // ncl inner-lattice factor below the documented minimum
    CHECK_THROWS_AS(HermiteNclSampler(kP1, GridSpec{1.0, 2, 1.0, 2, 1}, 8),
                    std::invalid_argument);
    // exact sampler feasibility limit
    CHECK_THROWS_AS(FbmSheetSampler(kP1, GridSpec{1.0, 8192, 1.0, 2, 1}), std::runtime_error);
}

TEST_CASE("ncl sampler q=2: normalization and cross-validation against kernel sampler") {
    GridSpec g{1.0, 1, 1.0, 1, 1};
    HermiteParams p{2, {0.7, 0.7}, 1, 0.5};
    HermiteNclSampler ncl(p, g, 256);

    const int n = 4000;
    const auto vn = ensemble_at(ncl, 1, 1, n, 701);
    CHECK(variance(vn) == doctest::Approx(1.0).epsilon(0.1));

    TruncationSpec tr;
    tr.s_refine = 32;
    HermiteKernelSampler ker(p, g, tr);
    const auto vk = ensemble_at(ker, 1, 1, 2000, 702);
    const auto vn2 = std::vector<double>(vn.begin(), vn.begin() + 2000);
    CHECK(ks_two_sample(vk, vn2).p_value > 0.01);
}
