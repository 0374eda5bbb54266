#include "hb/solver.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <mutex>
#include <numbers>

#include "hb/kernels.hpp"

namespace hb {

namespace {

std::mutex& fftw_plan_mutex() {
    static std::mutex m;
    return m;
}

/// Owns FFTW plans and buffers for one transform size. One instance per
/// solve; plan creation is serialized, execution touches only own buffers.
class Spectral {
  public:
    explicit Spectral(int n, double L) : n_(n), L_(L) {
        real_ = fftw_alloc_real(n_);
        cplx_ = fftw_alloc_complex(n_ / 2 + 1);
        std::lock_guard<std::mutex> lock(fftw_plan_mutex());
        fwd_ = fftw_plan_dft_r2c_1d(n_, real_, cplx_, FFTW_ESTIMATE);
        bwd_ = fftw_plan_dft_c2r_1d(n_, cplx_, real_, FFTW_ESTIMATE);
    }
    ~Spectral() {
        std::lock_guard<std::mutex> lock(fftw_plan_mutex());
        fftw_destroy_plan(fwd_);
        fftw_destroy_plan(bwd_);
        fftw_free(real_);
        fftw_free(cplx_);
    }
    Spectral(const Spectral&) = delete;
    Spectral& operator=(const Spectral&) = delete;

    int n_modes() const { return n_ / 2 + 1; }
    double wavenumber(int k) const { return 2.0 * std::numbers::pi * k / L_; }

    std::vector<std::complex<double>> forward(std::span<const double> u) {
        std::copy(u.begin(), u.end(), real_);
        fftw_execute(fwd_);
        std::vector<std::complex<double>> out(n_modes());
        for (int k = 0; k < n_modes(); ++k) out[k] = {cplx_[k][0], cplx_[k][1]};
        return out;
    }

    std::vector<double> inverse(std::span<const std::complex<double>> m) {
        for (int k = 0; k < n_modes(); ++k) {
            cplx_[k][0] = m[k].real();
            cplx_[k][1] = m[k].imag();
        }
        fftw_execute(bwd_);
        std::vector<double> out(n_);
        const double inv = 1.0 / n_;
        for (int i = 0; i < n_; ++i) out[i] = real_[i] * inv;
        return out;
    }

  private:
    int n_;
    double L_;
    double* real_;
    fftw_complex* cplx_;
    fftw_plan fwd_, bwd_;
};

void dealias_modes(std::vector<std::complex<double>>& m, int n) {
    const int cutoff = n / 3;
    for (std::size_t k = cutoff + 1; k < m.size(); ++k) m[k] = 0.0;
}

std::vector<std::complex<double>> square_half_hat(Spectral& sp, std::span<const double> u,
                                                  bool dealias, int n) {
    std::vector<double> sq(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) sq[i] = 0.5 * u[i] * u[i];
    auto hat = sp.forward(sq);
    if (dealias) dealias_modes(hat, n);
    return hat;
}

struct MildWorkspace {
    Spectral sp;
    GridSpec grid;
    double nu;
    std::vector<double> decay;       // e^{-nu k^2 dt} per mode
    std::vector<std::complex<double>> nl_panel; // -i k (1 - decay)/(nu k^2) per mode
    double dt, dx;

    MildWorkspace(const GridSpec& g, double nu_) : sp(g.n_x, g.L), grid(g), nu(nu_) {
        dt = g.dt();
        dx = g.dx();
        decay.resize(sp.n_modes());
        nl_panel.resize(sp.n_modes());
        for (int k = 0; k < sp.n_modes(); ++k) {
            const double kk = sp.wavenumber(k);
            decay[k] = std::exp(-nu * kk * kk * dt);
            // minus sign: the mild form carries -dxG * (u^2/2)
            nl_panel[k] = (k == 0) ? std::complex<double>(0.0)
                                   : std::complex<double>(0.0, -kk) * (1.0 - decay[k]) /
                                         (nu * kk * kk);
        }
    }
};

/// One causal sweep of the mild form. `eval` receives the time level m and
/// must return the profile to freeze over panel [s_m, s_{m+1}) (the current
/// iterate for Picard, the evolving state for the step scheme).
template <typename Eval>
std::vector<std::vector<double>> mild_sweep(MildWorkspace& ws, const SigmaSpec& sigma,
                                            std::span<const double> u0, const FieldSample& sheet,
                                            bool dealias, Eval&& eval, bool& cfl_warn) {
    const GridSpec& g = ws.grid;
    const int nm = ws.sp.n_modes();
    std::vector<std::vector<double>> out(g.n_t + 1);
    out[0].assign(u0.begin(), u0.end());

    auto heat_hat = ws.sp.forward(u0);
    std::vector<std::complex<double>> acc(nm, 0.0); // nonlinear + stochastic history
    const bool has_noise =
        sigma.kind != SigmaSpec::Kind::Constant || sigma.parameters.at(0) != 0.0;

    for (int k = 0; k < g.n_t; ++k) {
        const std::vector<double>& frozen = eval(k, out);
        if (std::abs(*std::max_element(frozen.begin(), frozen.end(),
                                       [](double a, double b) {
                                           return std::abs(a) < std::abs(b);
                                       })) *
                ws.dt / ws.dx >
            1.0)
            cfl_warn = true;

        // advance history to t_{k+1}
        auto sq_hat = square_half_hat(ws.sp, frozen, dealias, g.n_x);
        for (int m = 0; m < nm; ++m) acc[m] = ws.decay[m] * acc[m] + ws.nl_panel[m] * sq_hat[m];

        if (has_noise) {
            std::vector<double> w(g.n_x);
            const double t_m = k * ws.dt;
            for (int c = 0; c < g.n_x; ++c)
                w[c] = sigma(t_m, c * ws.dx, frozen[c]) * sheet.sheet_increment(k, c) / ws.dx;
            auto w_hat = ws.sp.forward(w);
            for (int m = 0; m < nm; ++m) acc[m] += ws.decay[m] * w_hat[m];
        }

        for (int m = 0; m < nm; ++m) heat_hat[m] *= ws.decay[m];
        std::vector<std::complex<double>> total(nm);
        for (int m = 0; m < nm; ++m) total[m] = heat_hat[m] + acc[m];
        out[k + 1] = ws.sp.inverse(total);
    }
    return out;
}

void check_solver_pre(const HermiteParams& params, const FieldSample& sheet,
                      const SolverConfig& config, std::span<const double> u0) {
    const ValidationReport rep = validate_params(params);
    require(rep.valid, "solver: validate_params failed");
    if (params.d != 1) throw std::invalid_argument("solver: only d = 1 is supported");
    require(config.domain == sheet.grid, "solver: config domain and sheet grid differ");
    require(sheet.kind == FieldKind::Sheet, "solver: noise field must be a sheet");
    require(u0.size() == static_cast<std::size_t>(sheet.grid.n_x),
            "solver: u0 length must equal n_x");
    require(config.picard_tol > 0.0, "solver: picard_tol > 0 required");
    require(config.max_iters >= 1, "solver: max_iters >= 1 required");
}

double sup_distance(const std::vector<std::vector<double>>& a,
                    const std::vector<std::vector<double>>& b) {
    double d = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k)
        for (std::size_t j = 0; j < a[k].size(); ++j)
            d = std::max(d, std::abs(a[k][j] - b[k][j]));
    return d;
}

FieldSample pack_solution(const GridSpec& g, const std::vector<std::vector<double>>& u,
                          const SeedSpec& seed) {
    FieldSample f{g, std::vector<double>(g.solution_extent()), seed, FieldKind::Solution};
    for (int k = 0; k <= g.n_t; ++k)
        for (int j = 0; j < g.n_x; ++j) f.values[static_cast<std::size_t>(k) * g.n_x + j] = u[k][j];
    return f;
}

void warn_domain_truncation(const GridSpec& g, double nu, std::vector<std::string>& warnings) {
    if (g.L < 8.0 * std::sqrt(nu * g.t_max))
        warnings.push_back("L < 8 sqrt(nu t_max): heat-kernel wrap-around may exceed 1e-8");
}

} // namespace

std::vector<double> heat_semigroup_apply(std::span<const double> u, double dt, double nu,
                                         double L) {
    require(dt >= 0.0, "heat_semigroup_apply: dt >= 0 required");
    if (dt == 0.0) return {u.begin(), u.end()};
    Spectral sp(static_cast<int>(u.size()), L);
    auto hat = sp.forward(u);
    for (int k = 0; k < sp.n_modes(); ++k) {
        const double kk = sp.wavenumber(k);
        hat[k] *= std::exp(-nu * kk * kk * dt);
    }
    return sp.inverse(hat);
}

std::vector<double> nonlinear_increment(const std::vector<std::vector<double>>& u_history,
                                        int t_index, double nu, const GridSpec& grid,
                                        bool dealias) {
    if (grid.d != 1)
        throw std::invalid_argument("nonlinear_increment: only d = 1 is supported");
    require(t_index >= 0 && t_index <= grid.n_t, "nonlinear_increment: t_index out of range");
    require(static_cast<int>(u_history.size()) >= t_index,
            "nonlinear_increment: history too short");

    Spectral sp(grid.n_x, grid.L);
    const int nm = sp.n_modes();
    const double dt = grid.dt();
    std::vector<std::complex<double>> acc(nm, 0.0);
    for (int m = 0; m < t_index; ++m) {
        auto sq_hat = square_half_hat(sp, u_history[m], dealias, grid.n_x);
        const double tau_hi = (t_index - m - 1) * dt;
        const double tau_lo = (t_index - m) * dt;
        for (int k = 1; k < nm; ++k) {
            const double kk = sp.wavenumber(k);
            const std::complex<double> panel =
                std::complex<double>(0.0, -kk) *
                (std::exp(-nu * kk * kk * tau_hi) - std::exp(-nu * kk * kk * tau_lo)) /
                (nu * kk * kk);
            acc[k] += panel * sq_hat[k];
        }
    }
    return sp.inverse(acc);
}

std::vector<double> stochastic_increment(const SigmaSpec& sigma,
                                         const std::vector<std::vector<double>>& u_history,
                                         const FieldSample& sheet, int t_index, double nu) {
    const GridSpec& g = sheet.grid;
    if (g.d != 1) throw std::invalid_argument("stochastic_increment: only d = 1 is supported");
    require(sheet.kind == FieldKind::Sheet, "stochastic_increment: field is not a sheet");
    require(t_index >= 0 && t_index <= g.n_t, "stochastic_increment: t_index out of range");
    require(static_cast<int>(u_history.size()) >= t_index,
            "stochastic_increment: history too short");

    Spectral sp(g.n_x, g.L);
    const int nm = sp.n_modes();
    const double dt = g.dt(), dx = g.dx();
    std::vector<std::complex<double>> acc(nm, 0.0);
    for (int m = 0; m < t_index; ++m) {
        std::vector<double> w(g.n_x);
        for (int c = 0; c < g.n_x; ++c)
            w[c] = sigma(m * dt, c * dx, u_history[m][c]) * sheet.sheet_increment(m, c) / dx;
        auto w_hat = sp.forward(w);
        const double tau = (t_index - m) * dt;
        for (int k = 0; k < nm; ++k) {
            const double kk = sp.wavenumber(k);
            acc[k] += std::exp(-nu * kk * kk * tau) * w_hat[k];
        }
    }
    return sp.inverse(acc);
}

FieldSample zero_sheet(const GridSpec& grid) {
    return FieldSample{grid, std::vector<double>(grid.sheet_extent(), 0.0), SeedSpec{},
                       FieldKind::Sheet};
}

SolveResult picard_solve(const HermiteParams& params, const SigmaSpec& sigma,
                         std::span<const double> u0, const FieldSample& sheet,
                         const SolverConfig& config) {
    check_solver_pre(params, sheet, config, u0);
    const GridSpec& g = config.domain;
    SolveResult res;
    warn_domain_truncation(g, params.nu, res.warnings);

    MildWorkspace ws(g, params.nu);
    bool cfl = false;

    // Initial iterate: heat propagation of the initial data (zero frozen
    // profiles make the history terms vanish), or the zero field.
    const std::vector<double> zeros(static_cast<std::size_t>(g.n_x), 0.0);
    std::vector<std::vector<double>> cur;
    if (config.initial_guess == SolverConfig::InitialGuess::HeatFlow) {
        cur = mild_sweep(
            ws, SigmaSpec::zero(), u0, sheet, config.dealias,
            [&](int, const std::vector<std::vector<double>>&) -> const std::vector<double>& {
                return zeros;
            },
            cfl);
        cfl = false;
    } else {
        cur.assign(g.n_t + 1, zeros);
    }

    for (int it = 0; it < config.max_iters; ++it) {
        std::vector<std::vector<double>> next = mild_sweep(
            ws, sigma, u0, sheet, config.dealias,
            [&](int m, const std::vector<std::vector<double>>&) -> const std::vector<double>& {
                return cur[m];
            },
            cfl);
        const double dist = sup_distance(next, cur);
        res.iter_distances.push_back(dist);
        cur = std::move(next);
        res.iterations = it + 1;
        if (dist <= config.picard_tol) {
            res.converged = true;
            break;
        }
    }
    if (cfl) res.warnings.push_back("nonlinear increment exceeded the advective stability bound");
    res.field = pack_solution(g, cur, sheet.seed);
    return res;
}

SolveResult step_solve(const HermiteParams& params, const SigmaSpec& sigma,
                       std::span<const double> u0, const FieldSample& sheet,
                       const SolverConfig& config) {
    check_solver_pre(params, sheet, config, u0);
    const GridSpec& g = config.domain;
    SolveResult res;
    warn_domain_truncation(g, params.nu, res.warnings);

    MildWorkspace ws(g, params.nu);
    bool cfl = false;
    std::vector<std::vector<double>> u = mild_sweep(
        ws, sigma, u0, sheet, config.dealias,
        [&](int m, const std::vector<std::vector<double>>& state) -> const std::vector<double>& {
            return state[m];
        },
        cfl);
    if (cfl) res.warnings.push_back("nonlinear increment exceeded the advective stability bound");
    res.converged = true;
    res.iterations = 1;
    res.field = pack_solution(g, u, sheet.seed);
    return res;
}

std::vector<double> cole_hopf_exact(std::span<const double> u0, double t, double nu, double L,
                                    int n_modes, bool* resolution_warning) {
    require(t >= 0.0, "cole_hopf_exact: t >= 0 required");
    require(n_modes >= 2, "cole_hopf_exact: n_modes >= 2 required");
    const int n_x = static_cast<int>(u0.size());

    double c = 0.0;
    for (double v : u0) c += v;
    c /= n_x;

    // Fine grid for the exponential transform.
    const int n_fine = std::max(4 * n_modes, 2 * n_x);
    Spectral sp_in(n_x, L), sp_fine(n_fine, L);

    // Antiderivative of the mean-free part, evaluated spectrally on the
    // fine grid.
    std::vector<double> v0(u0.begin(), u0.end());
    for (double& v : v0) v -= c;
    auto v_hat = sp_in.forward(v0);
    std::vector<std::complex<double>> psi_hat(sp_fine.n_modes(), 0.0);
    for (int k = 1; k < sp_in.n_modes() && k < sp_fine.n_modes(); ++k) {
        const double kk = sp_in.wavenumber(k);
        // zero-padded spectrum rescaled to the fine grid size
        psi_hat[k] = v_hat[k] / std::complex<double>(0.0, kk) *
                     (static_cast<double>(n_fine) / n_x);
    }
    std::vector<double> psi = sp_fine.inverse(psi_hat);

    std::vector<double> phi0(n_fine);
    for (int i = 0; i < n_fine; ++i) phi0[i] = std::exp(-psi[i] / (2.0 * nu));
    auto phi_hat = sp_fine.forward(phi0);
    for (auto& m : phi_hat) m /= static_cast<double>(n_fine);

    // Spectral-tail check on the transformed data.
    double total = 0.0, tail = 0.0;
    for (int k = 0; k < sp_fine.n_modes(); ++k) {
        const double e = std::norm(phi_hat[k]) * (k == 0 ? 1.0 : 2.0);
        total += e;
        if (k > n_modes) tail += e;
    }
    if (resolution_warning) *resolution_warning = (tail > 1e-10 * total);

    // Evaluate u = c - 2 nu phi_x / phi at the shifted points x - c t.
    std::vector<double> out(n_x);
    const int kmax = std::min(n_modes, sp_fine.n_modes() - 1);
    for (int j = 0; j < n_x; ++j) {
        const double x = j * (L / n_x) - c * t;
        double phi = phi_hat[0].real();
        double phix = 0.0;
        for (int k = 1; k <= kmax; ++k) {
            const double kk = 2.0 * std::numbers::pi * k / L;
            const std::complex<double> mode =
                phi_hat[k] * std::exp(-nu * kk * kk * t) *
                std::exp(std::complex<double>(0.0, kk * x));
            phi += 2.0 * mode.real();
            phix += 2.0 * (std::complex<double>(0.0, kk) * mode).real();
        }
        out[j] = c - 2.0 * nu * phix / phi;
    }
    return out;
}

} // namespace hb
