#include "hb/noise.hpp"

#include <Eigen/Cholesky>
#include <cmath>

#include "hb/kernels.hpp"

namespace hb {

double hermite_poly(int q, double x) {
    require(q >= 0, "hermite_poly: q >= 0");
    if (q == 0) return 1.0;
    double prev = 1.0, cur = x;
    for (int n = 1; n < q; ++n) {
        const double next = x * cur - n * prev;
        prev = cur;
        cur = next;
    }
    return cur;
}

FieldSample sample_white_noise(const GridSpec& grid, const SeedSpec& seed) {
    grid.validate();
    const std::size_t n = grid.cell_extent();
    double vol = grid.dt();
    for (int i = 0; i < grid.d; ++i) vol *= grid.dx();
    const double sd = std::sqrt(vol);
    GaussianStream g(seed);
    FieldSample field{grid, std::vector<double>(n), seed, FieldKind::WhiteNoise};
    for (double& v : field.values) v = sd * g.next();
    return field;
}

namespace {

// Unit-lag autocovariance of fractional Gaussian noise with Hurst index H;
// gamma(0) = 1, so the marginals are standard normal.
double fgn_autocov(int lag, double H) {
    const double k = std::abs(static_cast<double>(lag));
    return 0.5 * (std::pow(k + 1.0, 2 * H) - 2.0 * std::pow(k, 2 * H) +
                  std::pow(std::abs(k - 1.0), 2 * H));
}

Eigen::MatrixXd fgn_cholesky(int n, double H, const char* who) {
    Eigen::MatrixXd cov(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) cov(i, j) = fgn_autocov(i - j, H);
    Eigen::LLT<Eigen::MatrixXd> llt(cov);
    if (llt.info() != Eigen::Success)
        throw std::runtime_error(std::string(who) +
                                 ": increment covariance not positive definite");
    return llt.matrixL();
}

void ensure_finite(const FieldSample& f, const char* who) {
    for (double v : f.values)
        if (!std::isfinite(v)) throw std::runtime_error(std::string(who) + ": non-finite value");
}

void check_validated(const HermiteParams& p, const char* who) {
    const ValidationReport rep = validate_params(p);
    if (!rep.valid) {
        std::string msg = std::string(who) + ": invalid parameters:";
        for (const auto& v : rep.violations) msg += " [" + v + "]";
        throw std::invalid_argument(msg);
    }
}

std::vector<int> axis_targets(const GridSpec& g) {
    std::vector<int> n(g.d + 1, g.n_x);
    n[0] = g.n_t;
    return n;
}

std::vector<double> axis_extents(const GridSpec& g) {
    std::vector<double> e(g.d + 1, g.L);
    e[0] = g.t_max;
    return e;
}

} // namespace

// ---------------------------------------------------------------------------
// Exact Gaussian sampler (q = 1)

FbmSheetSampler::FbmSheetSampler(const HermiteParams& params, const GridSpec& grid)
    : params_(params), grid_(grid) {
    grid_.validate();
    require(params_.q == 1, "FbmSheetSampler: exact sampler requires q = 1");
    check_validated(params_, "FbmSheetSampler");
    require(params_.d == grid_.d, "FbmSheetSampler: params/grid dimension mismatch");

    const auto targets = axis_targets(grid_);
    const auto extents = axis_extents(grid_);
    std::size_t lattice = 1;
    for (int n : targets) {
        if (n > kMaxAxisPoints)
            throw std::runtime_error("FbmSheetSampler: axis size exceeds feasibility limit");
        lattice *= static_cast<std::size_t>(n + 1);
    }
    if (lattice > kMaxLattice)
        throw std::runtime_error("FbmSheetSampler: lattice exceeds feasibility limit");

    for (int i = 0; i <= grid_.d; ++i) {
        Eigen::MatrixXd L = fgn_cholesky(targets[i], params_.H[i], "FbmSheetSampler");
        const double step = extents[i] / targets[i];
        L *= std::pow(step, params_.H[i]);
        chol_.push_back(std::move(L));
    }
}

FieldSample FbmSheetSampler::sample(const SeedSpec& seed) const {
    const auto targets = axis_targets(grid_);
    std::vector<int> dims(targets.begin(), targets.end());
    std::size_t total = 1;
    for (int n : dims) total *= static_cast<std::size_t>(n);

    std::vector<double> v(total);
    GaussianStream g(seed);
    for (double& x : v) x = g.next();

    for (int ax = 0; ax <= grid_.d; ++ax) v = detail::tensor_mode_contract(v, dims, ax, chol_[ax]);
    for (int ax = 0; ax <= grid_.d; ++ax) {
        v = detail::pad_zero_front(v, dims, ax);
        detail::cumsum_axis(v, dims, ax);
    }
    FieldSample out{grid_, std::move(v), seed, FieldKind::Sheet};
    ensure_finite(out, "FbmSheetSampler");
    return out;
}

// ---------------------------------------------------------------------------
// Kernel-definition sampler

HermiteKernelSampler::HermiteKernelSampler(const HermiteParams& params, const GridSpec& grid,
                                           const TruncationSpec& trunc)
    : params_(params), grid_(grid), trunc_(trunc) {
    grid_.validate();
    check_validated(params_, "HermiteKernelSampler");
    require(params_.d == grid_.d, "HermiteKernelSampler: params/grid dimension mismatch");
    if (params_.q > kMaxOrder)
        throw std::runtime_error("HermiteKernelSampler: q > 3 exceeds the cost budget design");
    require(trunc_.s_refine >= 1, "HermiteKernelSampler: s_refine >= 1");

    const auto targets = axis_targets(grid_);
    const auto extents = axis_extents(grid_);
    const int q = params_.q;

    s_vol_ = 1.0;
    for (int i = 0; i <= grid_.d; ++i) {
        Axis ax;
        ax.extent = extents[i];
        ax.target_n = targets[i];
        ax.S = targets[i] * trunc_.s_refine;
        ax.h = ax.extent / ax.S;
        s_vol_ *= ax.h;

        const double beta = kernel_exponent(params_.H[i], q);
        // Exact cell-pair averages of B(s,s')^q, where
        //   B(s,s') = Beta(1-beta, 2beta-1) |s-s'|^{1-2beta}
        // is the y-integral of the kernel pair. With p = (1-2beta)q the
        // average over unit cells at lag delta is the second difference of
        // |x|^{p+2} / ((p+1)(p+2)).
        const double cb = std::exp(std::lgamma(1.0 - beta) + std::lgamma(2.0 * beta - 1.0) -
                                   std::lgamma(beta));
        const double p = (1.0 - 2.0 * beta) * q;
        Eigen::MatrixXd gram(ax.S, ax.S);
        for (int m = 0; m < ax.S; ++m)
            for (int c = 0; c <= m; ++c) {
                const double delta = m - c;
                const double avg_pq =
                    (std::pow(delta + 1.0, p + 2.0) - 2.0 * std::pow(delta, p + 2.0) +
                     std::pow(std::abs(delta - 1.0), p + 2.0)) /
                    ((p + 1.0) * (p + 2.0));
                // q-th root so that the Hadamard q-th power of the Gram
                // integrates B^q exactly.
                const double v = cb * std::pow(ax.h, 1.0 - 2.0 * beta) * std::pow(avg_pq, 1.0 / q);
                gram(m, c) = v;
                gram(c, m) = v;
            }
        ax.diag = gram.diagonal();
        ax.gram_qpow = gram.array().pow(q).matrix();
        Eigen::LLT<Eigen::MatrixXd> llt(gram);
        if (llt.info() == Eigen::Success) {
            ax.factor = llt.matrixL();
        } else {
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram);
            if (es.info() != Eigen::Success)
                throw std::runtime_error("HermiteKernelSampler: Gram factorization failed");
            const double lmax = es.eigenvalues().maxCoeff();
            if (es.eigenvalues().minCoeff() < -1e-9 * lmax)
                throw std::runtime_error(
                    "HermiteKernelSampler: kernel Gram not positive definite (covariance bug)");
            ax.factor = es.eigenvectors() *
                        es.eigenvalues().cwiseMax(trunc_.eigen_floor * lmax).cwiseSqrt().asDiagonal();
        }
        axes_.push_back(std::move(ax));
    }

    // Per-sample contraction cost guard.
    double cost = 0.0;
    {
        double outer = 1.0, rest = 1.0;
        for (const auto& ax : axes_) rest *= static_cast<double>(ax.S);
        for (const auto& ax : axes_) {
            const double M = static_cast<double>(ax.S);
            rest /= M;
            cost += outer * ax.S * M * rest;
            outer *= ax.S;
        }
    }
    if (cost > trunc_.cost_budget)
        throw std::runtime_error(
            "HermiteKernelSampler: sampling cost exceeds the budget; coarsen the grid, lower "
            "s_refine, or raise TruncationSpec::cost_budget");

    // Exact normalization: match the discrete second moment at the far grid
    // corner to the covariance product formula.
    std::vector<int> corner;
    for (const auto& ax : axes_) corner.push_back(ax.target_n);
    const double raw = raw_covariance(corner, corner);
    double target = 1.0;
    for (int i = 0; i <= grid_.d; ++i)
        target *= std::pow(axes_[i].extent, 2.0 * params_.H[i]);
    require(raw > 0.0, "HermiteKernelSampler: degenerate discretization");
    scale_ = std::sqrt(target / raw);
}

double HermiteKernelSampler::raw_covariance(std::span<const int> a, std::span<const int> b) const {
    // E[I_q(v^q) I_q(u^q)] = q! <v,u>^q, and <v_s, v_s'> factors across axes
    // into Gram entries, so the covariance is a product of rectangle sums of
    // the Hadamard q-th power of each per-axis Gram.
    const int na = grid_.d + 1;
    double prod = 1.0;
    for (int i = 0; i < na; ++i) {
        const Axis& ax = axes_[i];
        const int A = a[i] * trunc_.s_refine;
        const int B = b[i] * trunc_.s_refine;
        require(A <= ax.S && B <= ax.S, "raw_covariance: index out of grid");
        prod *= ax.gram_qpow.topLeftCorner(A, B).sum();
    }
    double qfact = 1.0;
    for (int r = 2; r <= params_.q; ++r) qfact *= r;
    return qfact * s_vol_ * s_vol_ * prod;
}

double HermiteKernelSampler::discrete_covariance(std::span<const int> a,
                                                 std::span<const int> b) const {
    return scale_ * scale_ * raw_covariance(a, b);
}

FieldSample HermiteKernelSampler::sample(const SeedSpec& seed) const {
    const int q = params_.q;
    const int na = grid_.d + 1;

    std::vector<int> mdims(na);
    std::size_t total = 1;
    for (int i = 0; i < na; ++i) {
        mdims[i] = axes_[i].S;
        total *= static_cast<std::size_t>(mdims[i]);
    }

    // White noise in the coordinates of the factored Gram, row-major order.
    std::vector<double> w(total);
    {
        GaussianStream g(seed);
        for (double& x : w) x = g.next();
    }

    // <v_s, w> for every s-cell via per-axis contractions with the factor.
    std::vector<int> sdims = mdims;
    std::vector<double> P = w;
    for (int ax = 0; ax < na; ++ax)
        P = detail::tensor_mode_contract(P, sdims, ax, axes_[ax].factor);

    // Rank-one multiple integral per slice: |v|^q He_q(<v,w>/|v|).
    std::size_t s_total = 1;
    for (int dsz : sdims) s_total *= static_cast<std::size_t>(dsz);
    std::vector<double> E(s_total);
    std::vector<int> sidx(na, 0);
    for (std::size_t k = 0; k < s_total; ++k) {
        double var = 1.0;
        {
            std::size_t rest = k;
            for (int i = na - 1; i >= 0; --i) {
                sidx[i] = static_cast<int>(rest % sdims[i]);
                rest /= sdims[i];
            }
            for (int i = 0; i < na; ++i) var *= axes_[i].diag[sidx[i]];
        }
        const double p1 = P[k];
        double iq = p1;
        if (q == 2)
            iq = p1 * p1 - var;
        else if (q == 3)
            iq = p1 * p1 * p1 - 3.0 * var * p1;
        E[k] = s_vol_ * iq;
    }

    // Partial sums over [0, t] and restriction to the target lattice.
    std::vector<int> dims = sdims;
    for (int ax = 0; ax < na; ++ax) {
        E = detail::pad_zero_front(E, dims, ax);
        detail::cumsum_axis(E, dims, ax);
    }
    FieldSample out{grid_, std::vector<double>(grid_.sheet_extent()), seed, FieldKind::Sheet};
    const int rho = trunc_.s_refine;
    std::vector<int> tdims(na);
    for (int i = 0; i < na; ++i) tdims[i] = axes_[i].target_n + 1;
    std::size_t t_total = out.values.size();
    for (std::size_t flat = 0; flat < t_total; ++flat) {
        std::size_t rest = flat, src = 0, stride = 1;
        // row-major decode of the target index, re-encode into the s-grid
        std::vector<int> tidx(na);
        for (int i = na - 1; i >= 0; --i) {
            tidx[i] = static_cast<int>(rest % tdims[i]);
            rest /= tdims[i];
        }
        for (int i = na - 1; i >= 0; --i) {
            src += static_cast<std::size_t>(tidx[i] * rho) * stride;
            stride *= static_cast<std::size_t>(dims[i]);
        }
        out.values[flat] = scale_ * E[src];
    }
    ensure_finite(out, "HermiteKernelSampler");
    return out;
}

FieldSample sample_fbm_sheet_exact(const HermiteParams& params, const GridSpec& grid,
                                   const SeedSpec& seed) {
    return FbmSheetSampler(params, grid).sample(seed);
}

FieldSample sample_hermite_sheet_kernel(const HermiteParams& params, const GridSpec& grid,
                                        const TruncationSpec& trunc, const SeedSpec& seed) {
    return HermiteKernelSampler(params, grid, trunc).sample(seed);
}

FieldSample sample_hermite_sheet_ncl(const HermiteParams& params, const GridSpec& grid, int m,
                                     const SeedSpec& seed) {
    return HermiteNclSampler(params, grid, m).sample(seed);
}

SheetSampler::SheetSampler(const HermiteParams& params, const GridSpec& grid,
                           const SamplerSpec& spec) {
    SamplerSpec::Method method = spec.method;
    if (method == SamplerSpec::Method::Auto)
        method = params.q == 1 ? SamplerSpec::Method::Exact : SamplerSpec::Method::Kernel;
    switch (method) {
    case SamplerSpec::Method::Exact: {
        auto s = std::make_shared<FbmSheetSampler>(params, grid);
        impl_ = s;
        dispatch_ = [](const void* p, const SeedSpec& seed) {
            return static_cast<const FbmSheetSampler*>(p)->sample(seed);
        };
        break;
    }
    case SamplerSpec::Method::Kernel: {
        auto s = std::make_shared<HermiteKernelSampler>(params, grid, spec.trunc);
        impl_ = s;
        dispatch_ = [](const void* p, const SeedSpec& seed) {
            return static_cast<const HermiteKernelSampler*>(p)->sample(seed);
        };
        break;
    }
    case SamplerSpec::Method::Ncl: {
        auto s = std::make_shared<HermiteNclSampler>(params, grid, spec.m);
        impl_ = s;
        dispatch_ = [](const void* p, const SeedSpec& seed) {
            return static_cast<const HermiteNclSampler*>(p)->sample(seed);
        };
        break;
    }
    default:
        throw std::invalid_argument("SheetSampler: unknown method");
    }
}

FieldSample SheetSampler::sample(const SeedSpec& seed) const { return dispatch_(impl_.get(), seed); }

// ---------------------------------------------------------------------------
// Noncentral-limit sampler

HermiteNclSampler::HermiteNclSampler(const HermiteParams& params, const GridSpec& grid, int m)
    : params_(params), grid_(grid), m_(m) {
    grid_.validate();
    check_validated(params_, "HermiteNclSampler");
    require(params_.d == grid_.d, "HermiteNclSampler: params/grid dimension mismatch");
    require(m >= kMinInnerFactor, "HermiteNclSampler: inner-lattice factor m >= 32 required");

    const auto targets = axis_targets(grid_);
    const auto extents = axis_extents(grid_);
    const int q = params_.q;

    for (int i = 0; i <= grid_.d; ++i) {
        const int N = targets[i] * m;
        if (N > kMaxInnerAxis)
            throw std::runtime_error("HermiteNclSampler: inner lattice exceeds feasibility limit");
        inner_n_.push_back(N);
        // Memory mapping: He_q of a Gaussian with Hurst H' has limiting
        // Hurst index H when H' = 1 + (H - 1)/q.
        const double Hp = 1.0 + (params_.H[i] - 1.0) / q;
        std::vector<double> corr(N);
        for (int k = 0; k < N; ++k) corr[k] = fgn_autocov(k, Hp);
        corr_.push_back(std::move(corr));
        chol_.push_back(fgn_cholesky(N, Hp, "HermiteNclSampler"));
    }

    double qfact = 1.0;
    for (int r = 2; r <= q; ++r) qfact *= r;
    double raw = qfact;
    for (int i = 0; i <= grid_.d; ++i) raw *= rect_corr_sum(i, inner_n_[i], inner_n_[i]);
    double target = 1.0;
    for (int i = 0; i <= grid_.d; ++i) target *= std::pow(extents[i], 2.0 * params_.H[i]);
    require(raw > 0.0, "HermiteNclSampler: degenerate normalization");
    scale_ = std::sqrt(target / raw);
}

double HermiteNclSampler::rect_corr_sum(int axis, int A, int B) const {
    const auto& corr = corr_[axis];
    const int q = params_.q;
    double s = 0.0;
    for (int delta = -(B - 1); delta <= A - 1; ++delta) {
        const int lo = std::max(1, 1 + delta);
        const int hi = std::min(A, B + delta);
        if (hi < lo) continue;
        const double rho = corr[std::abs(delta)];
        double rq = rho;
        for (int r = 1; r < q; ++r) rq *= rho;
        s += static_cast<double>(hi - lo + 1) * rq;
    }
    return s;
}

double HermiteNclSampler::discrete_covariance(std::span<const int> a,
                                              std::span<const int> b) const {
    double qfact = 1.0;
    for (int r = 2; r <= params_.q; ++r) qfact *= r;
    double cov = qfact;
    for (int i = 0; i <= grid_.d; ++i) cov *= rect_corr_sum(i, a[i] * m_, b[i] * m_);
    return scale_ * scale_ * cov;
}

FieldSample HermiteNclSampler::sample(const SeedSpec& seed) const {
    const int na = grid_.d + 1;
    std::vector<int> dims(inner_n_.begin(), inner_n_.end());
    std::size_t total = 1;
    for (int n : dims) total *= static_cast<std::size_t>(n);

    std::vector<double> v(total);
    GaussianStream g(seed);
    for (double& x : v) x = g.next();
    for (int ax = 0; ax < na; ++ax) v = detail::tensor_mode_contract(v, dims, ax, chol_[ax]);

    for (double& x : v) x = hermite_poly(params_.q, x);

    for (int ax = 0; ax < na; ++ax) {
        v = detail::pad_zero_front(v, dims, ax);
        detail::cumsum_axis(v, dims, ax);
    }

    FieldSample out{grid_, std::vector<double>(grid_.sheet_extent()), seed, FieldKind::Sheet};
    std::vector<int> tdims(na);
    for (int i = 0; i < na; ++i) tdims[i] = (i == 0 ? grid_.n_t : grid_.n_x) + 1;
    for (std::size_t flat = 0; flat < out.values.size(); ++flat) {
        std::size_t rest = flat, src = 0, stride = 1;
        std::vector<int> tidx(na);
        for (int i = na - 1; i >= 0; --i) {
            tidx[i] = static_cast<int>(rest % tdims[i]);
            rest /= tdims[i];
        }
        for (int i = na - 1; i >= 0; --i) {
            src += static_cast<std::size_t>(tidx[i] * m_) * stride;
            stride *= static_cast<std::size_t>(dims[i]);
        }
        out.values[flat] = scale_ * v[src];
    }
    ensure_finite(out, "HermiteNclSampler");
    return out;
}

} // namespace hb
