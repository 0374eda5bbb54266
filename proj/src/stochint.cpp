#include "hb/stochint.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "hb/kernels.hpp"
#include "hb/stats.hpp"
#include "hb/tensor.hpp"

namespace hb {

namespace {

// Exact integral of |u - v|^{2H-2} over the cell pair
// [m*w,(m+1)*w] x [n*w,(n+1)*w], including the alpha_H factor H(2H-1):
// w^{2H} * (|d+1|^{2H} - 2|d|^{2H} + |d-1|^{2H}) / 2 with d = m - n.
double weight_cell_pair(int delta, double w, double H) {
    const double k = std::abs(static_cast<double>(delta));
    return std::pow(w, 2 * H) * 0.5 *
           (std::pow(k + 1.0, 2 * H) - 2.0 * std::pow(k, 2 * H) +
            std::pow(std::abs(k - 1.0), 2 * H));
}

Eigen::MatrixXd axis_weight_matrix(int n, double w, double H, bool absolute) {
    Eigen::MatrixXd W(n, n);
    for (int m = 0; m < n; ++m)
        for (int c = 0; c < n; ++c) {
            const double v = weight_cell_pair(m - c, w, H);
            W(m, c) = absolute ? std::abs(v) : v;
        }
    return W;
}

std::vector<int> cell_dims(const GridSpec& g) {
    std::vector<int> dims(g.d + 1, g.n_x);
    dims[0] = g.n_t;
    return dims;
}

double contract_bilinear(const StepFunction& phi, const StepFunction& psi,
                         std::span<const double> H, bool absolute) {
    const GridSpec& g = phi.grid;
    std::vector<int> dims = cell_dims(g);
    std::vector<double> v = psi.coefficients;
    if (absolute)
        for (double& x : v) x = std::abs(x);
    for (int ax = 0; ax <= g.d; ++ax) {
        const int n = dims[ax];
        const double w = ax == 0 ? g.dt() : g.dx();
        v = detail::tensor_mode_contract(v, dims, ax, axis_weight_matrix(n, w, H[ax], absolute));
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i)
        acc += (absolute ? std::abs(phi.coefficients[i]) : phi.coefficients[i]) * v[i];
    return acc;
}

} // namespace

HNormResult h_inner_product(const StepFunction& phi, const StepFunction& psi,
                            std::span<const double> H) {
    require(phi.grid == psi.grid, "h_inner_product: grid mismatch");
    require(H.size() == static_cast<std::size_t>(phi.grid.d + 1),
            "h_inner_product: H must have d+1 entries");
    for (double h : H) require(h > 0.5 && h < 1.0, "h_inner_product: H_i must lie in (1/2,1)");
    require(phi.coefficients.size() == phi.grid.cell_extent() &&
                psi.coefficients.size() == psi.grid.cell_extent(),
            "h_inner_product: coefficient extent mismatch");

    HNormResult r;
    r.value = contract_bilinear(phi, psi, H, false);
    r.quadrature_error_estimate =
        std::numeric_limits<double>::epsilon() * contract_bilinear(phi, psi, H, true);
    return r;
}

double integrate_step(const StepFunction& phi, const FieldSample& sheet) {
    require(phi.grid == sheet.grid, "integrate_step: grid mismatch");
    require(sheet.kind == FieldKind::Sheet, "integrate_step: field is not a sheet");
    const GridSpec& g = phi.grid;
    const std::vector<int> dims = cell_dims(g);
    const int na = g.d + 1;

    // Strides of the sheet lattice (axis size n_i + 1).
    std::vector<std::size_t> stride(na, 1);
    for (int i = na - 2; i >= 0; --i)
        stride[i] = stride[i + 1] * static_cast<std::size_t>(dims[i + 1] + 1);

    double acc = 0.0;
    std::vector<int> idx(na, 0);
    const std::size_t n_cells = phi.coefficients.size();
    for (std::size_t flat = 0; flat < n_cells; ++flat) {
        const double c = phi.coefficients[flat];
        if (c != 0.0) {
            std::size_t rest = flat;
            for (int i = na - 1; i >= 0; --i) {
                idx[i] = static_cast<int>(rest % dims[i]);
                rest /= dims[i];
            }
            // Alternating corner sum of the sheet over this cell.
            double inc = 0.0;
            for (unsigned mask = 0; mask < (1u << na); ++mask) {
                std::size_t pos = 0;
                int ones = 0;
                for (int i = 0; i < na; ++i) {
                    const int corner = idx[i] + ((mask >> i) & 1u);
                    pos += stride[i] * static_cast<std::size_t>(corner);
                    ones += (mask >> i) & 1u;
                }
                const double sign = ((na - ones) % 2 == 0) ? 1.0 : -1.0;
                inc += sign * sheet.values[pos];
            }
            acc += c * inc;
        }
    }
    return acc;
}

IsometryReport isometry_report(const StepFunction& phi, const HermiteParams& params,
                               int n_samples, const SeedSpec& seed, const TruncationSpec& trunc) {
    const ValidationReport rep = validate_params(params);
    require(rep.valid, "isometry_report: validate_params failed");
    require(n_samples >= 2, "isometry_report: need n >= 2");

    IsometryReport out;
    out.n_samples = n_samples;
    out.h_norm = h_inner_product(phi, phi, params.H).value;

    std::vector<double> squares(n_samples);
    if (params.q == 1) {
        FbmSheetSampler sampler(params, phi.grid);
        for (int i = 0; i < n_samples; ++i) {
            const double v = integrate_step(
                phi, sampler.sample({seed.master_seed, seed.stream_index + i}));
            squares[i] = v * v;
        }
    } else {
        HermiteKernelSampler sampler(params, phi.grid, trunc);
        for (int i = 0; i < n_samples; ++i) {
            const double v = integrate_step(
                phi, sampler.sample({seed.master_seed, seed.stream_index + i}));
            squares[i] = v * v;
        }
    }
    const auto m = jackknife_mean(squares);
    out.empirical_second_moment = m.value;
    out.standard_error = m.se;
    if (m.se > 0.0)
        out.z_score = (m.value - out.h_norm) / m.se;
    else
        out.z_score = (m.value == out.h_norm) ? 0.0 : std::numeric_limits<double>::infinity();
    return out;
}

std::vector<StepFunction> isometry_battery(const GridSpec& g) {
    std::vector<StepFunction> battery;
    battery.push_back(StepFunction::box_indicator(g, g.t_max, g.L));
    battery.push_back(StepFunction::box_indicator(g, 0.5 * g.t_max, 0.5 * g.L));

    StepFunction slab = StepFunction::box_indicator(g, g.t_max, 0.25 * g.L);
    for (double& c : slab.coefficients) c *= 2.0;
    battery.push_back(slab);

    StepFunction checker = StepFunction::zero(g);
    for (int m = 0; m < g.n_t; ++m)
        for (int c = 0; c < g.n_x; ++c)
            checker.coefficients[static_cast<std::size_t>(m) * g.n_x + c] =
                ((m + c) % 2 == 0) ? 1.0 : -1.0;
    battery.push_back(checker);

    StepFunction rough = StepFunction::zero(g);
    GaussianStream gs({0xBA77E21ULL, 0});
    for (double& c : rough.coefficients) c = gs.next();
    battery.push_back(rough);
    return battery;
}

namespace {

struct GaussLegendre {
    std::vector<double> node, weight; // on (-1, 1)
};

// Nodes by Newton iteration on the Legendre polynomial; deterministic.
GaussLegendre gauss_legendre(int order) {
    GaussLegendre gl;
    gl.node.resize(order);
    gl.weight.resize(order);
    for (int i = 0; i < order; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (order + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= order; ++k) {
                const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = order * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        gl.node[i] = x;
        gl.weight[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return gl;
}

} // namespace

CapitalIResult capital_I(double t, const HermiteParams& params, const QuadratureSpec& quad) {
    require(t > 0.0, "capital_I: t > 0 required");
    for (double h : params.H) require(h > 0.5 && h < 1.0, "capital_I: H_i must lie in (1/2,1)");
    require(static_cast<int>(params.H.size()) == params.d + 1, "capital_I: H size mismatch");

    CapitalIResult res;
    res.divergence_flag = !validate_params(params).valid;

    const double H0 = params.H[0];
    // Spatial factors: E|N(0, 2 nu (2t-w))|^{2H_i-2} per coordinate.
    double c_space = 1.0;
    double sum_hm1 = 0.0;
    for (int i = 1; i <= params.d; ++i) {
        const double Hi = params.H[i];
        c_space *= std::pow(2.0, Hi - 1.0) * std::tgamma(Hi - 0.5) / std::sqrt(std::numbers::pi);
        sum_hm1 += Hi - 1.0;
    }
    const auto integrand = [&](double w) {
        const double m = std::min(w, 2.0 * t - w);
        return std::pow(m, 2.0 * H0 - 1.0) * c_space *
               std::pow(2.0 * params.nu * (2.0 * t - w), sum_hm1);
    };

    const GaussLegendre gl = gauss_legendre(quad.gauss_order);
    const auto integrate_with = [&](int panels) {
        // Graded edges: cluster toward w = 0 on [0, t] and toward w = 2t on
        // [t, 2t], where the integrand has limited smoothness.
        double acc = 0.0;
        for (int half = 0; half < 2; ++half) {
            for (int j = 0; j < panels; ++j) {
                const double lo_frac = std::pow(static_cast<double>(j) / panels, quad.panel_grading);
                const double hi_frac =
                    std::pow(static_cast<double>(j + 1) / panels, quad.panel_grading);
                double a, b;
                if (half == 0) { // [0, t], edges clustered toward 0
                    a = t * lo_frac;
                    b = t * hi_frac;
                } else { // [t, 2t], edges clustered toward 2t
                    a = 2.0 * t - t * hi_frac;
                    b = 2.0 * t - t * lo_frac;
                }
                const double mid = 0.5 * (a + b), rad = 0.5 * (b - a);
                double s = 0.0;
                for (int k = 0; k < quad.gauss_order; ++k)
                    s += gl.weight[k] * integrand(mid + rad * gl.node[k]);
                acc += s * rad;
            }
        }
        return acc / (2.0 * H0 - 1.0);
    };

    int panels = quad.initial_panels;
    double prev = integrate_with(panels);
    res.value = prev;
    res.panels = panels;
    res.last_rel_change = std::numeric_limits<double>::infinity();
    for (int d = 0; d < quad.max_doublings; ++d) {
        panels *= 2;
        const double cur = integrate_with(panels);
        res.last_rel_change = std::abs(cur - prev) / std::max(std::abs(cur), 1e-300);
        res.value = cur;
        res.panels = panels;
        prev = cur;
        if (res.last_rel_change < quad.rel_tol) {
            res.refinement_converged = true;
            break;
        }
    }
    return res;
}

} // namespace hb
