#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "hb/rng.hpp"
#include "hb/tensor.hpp"
#include "hb/types.hpp"

namespace hb {

/// Probabilists' Hermite polynomial He_q(x): He_1 = x, He_2 = x^2 - 1, ...
double hermite_poly(int q, double x);

/// Independent centered Gaussian cell increments with variance = cell volume
/// (dt * dx^d), drawn in row-major (t, x_1, ..., x_d) order.
FieldSample sample_white_noise(const GridSpec& grid, const SeedSpec& seed);

/// Discretization controls for the kernel-definition sampler. The white
/// noise integrals over y are carried in closed form (the per-axis kernel
/// Gram is a Beta-function expression), so only the s-resolution remains.
struct TruncationSpec {
    /// s-cells per target lattice cell, per axis.
    int s_refine = 8;
    /// Rough per-sample flop guard for the q-fold sum machinery.
    double cost_budget = 5e8;
    /// Relative eigenvalue floor when factoring the per-axis Gram.
    double eigen_floor = 1e-12;
};

/// Exact Gaussian sampler for the q = 1 sheet (fractional Brownian sheet)
/// via per-axis Cholesky factors of the stationary increment covariance.
/// Feasible up to kMaxAxisPoints lattice cells per axis and kMaxLattice
/// total points.
class FbmSheetSampler {
  public:
    FbmSheetSampler(const HermiteParams& params, const GridSpec& grid);

    FieldSample sample(const SeedSpec& seed) const;

    static constexpr int kMaxAxisPoints = 4096;
    static constexpr std::size_t kMaxLattice = std::size_t(1) << 24;

  private:
    HermiteParams params_;
    GridSpec grid_;
    std::vector<Eigen::MatrixXd> chol_; // per axis, physical scale folded in
};

/// Sampler following the kernel definition of the sheet. The inner integral
/// over [0, t] becomes a sum of rank-one slice kernels on a refined s-grid,
/// and the order-q multiple Wiener-Ito integral of each slice is evaluated
/// exactly through the rank-one identity
///   I_q(v ⊗ ... ⊗ v) = |v|^q He_q(<v, w> / |v|),
/// with w the underlying Gaussian white noise. The y-integrals never meet a
/// lattice: per axis, the Gram of the slice kernels
///   B(s,s') = int (s-y)_+^{-beta} (s'-y)_+^{-beta} dy
///           = Beta(1-beta, 2*beta-1) |s-s'|^{1-2*beta}
/// is integrated over s-cell pairs in closed form (Hadamard q-th root, so
/// products over axes integrate B^q exactly) and factored. As a result the
/// covariance of the sampler equals the cell-integrated continuum covariance
/// at every lattice pair, and the self-calibration constant coincides with
/// the closed-form normalization of the covariance product formula.
class HermiteKernelSampler {
  public:
    HermiteKernelSampler(const HermiteParams& params, const GridSpec& grid,
                         const TruncationSpec& trunc = {});

    FieldSample sample(const SeedSpec& seed) const;

    /// Exact covariance of the calibrated discretized sampler between two
    /// lattice points, given as per-axis indices (time first).
    double discrete_covariance(std::span<const int> a, std::span<const int> b) const;

    double calibration_scale() const { return scale_; }
    const TruncationSpec& trunc() const { return trunc_; }

    static constexpr int kMaxOrder = 3; // per the sampling cost contract

  private:
    struct Axis {
        double extent = 1.0; // domain [0, extent]
        int target_n = 1;    // lattice cells
        int S = 1;           // s-cells
        double h = 1.0;      // s-cell width
        Eigen::MatrixXd factor;   // (S x S), factor * factor^T = Gram
        Eigen::VectorXd diag;     // Gram diagonal
        Eigen::MatrixXd gram_qpow; // elementwise q-th power of the Gram
    };

    double raw_covariance(std::span<const int> a, std::span<const int> b) const;

    HermiteParams params_;
    GridSpec grid_;
    TruncationSpec trunc_;
    std::vector<Axis> axes_;
    double scale_ = 1.0;
    double s_vol_ = 1.0; // prod of s-cell widths
};

/// Sampler selection shared by the analysis layer and the CLI.
struct SamplerSpec {
    enum class Method { Auto, Exact, Kernel, Ncl };
    Method method = Method::Auto; // Auto: exact for q = 1, kernel otherwise
    TruncationSpec trunc{};
    int m = 64; // ncl inner-lattice factor
};

/// One-shot conveniences; ensembles should reuse the sampler classes, which
/// cache the per-axis factorizations and the normalization constant.
FieldSample sample_fbm_sheet_exact(const HermiteParams& params, const GridSpec& grid,
                                   const SeedSpec& seed);
FieldSample sample_hermite_sheet_kernel(const HermiteParams& params, const GridSpec& grid,
                                        const TruncationSpec& trunc, const SeedSpec& seed);
FieldSample sample_hermite_sheet_ncl(const HermiteParams& params, const GridSpec& grid, int m,
                                     const SeedSpec& seed);

class FbmSheetSampler;
class HermiteKernelSampler;
class HermiteNclSampler;

/// Facade dispatching on SamplerSpec::Method; caches the chosen sampler.
class SheetSampler {
  public:
    SheetSampler(const HermiteParams& params, const GridSpec& grid, const SamplerSpec& spec);
    FieldSample sample(const SeedSpec& seed) const;

  private:
    std::shared_ptr<const void> impl_;
    FieldSample (*dispatch_)(const void*, const SeedSpec&) = nullptr;
};

/// Noncentral-limit sampler: a long-memory Gaussian sheet with per-axis
/// Hurst index H'_i = 1 + (H_i - 1)/q is transformed by He_q pointwise and
/// partial sums are taken over the inner lattice (m inner cells per target
/// cell per axis). Normalization is exact via the Hermite-rank covariance
/// identity E[He_q(X) He_q(Y)] = q! * rho^q.
class HermiteNclSampler {
  public:
    HermiteNclSampler(const HermiteParams& params, const GridSpec& grid, int m);

    FieldSample sample(const SeedSpec& seed) const;

    double discrete_covariance(std::span<const int> a, std::span<const int> b) const;
    double calibration_scale() const { return scale_; }

    static constexpr int kMinInnerFactor = 32;
    static constexpr int kMaxInnerAxis = 4096;

  private:
    double rect_corr_sum(int axis, int A, int B) const; // sum of rho_i^q over [1,A]x[1,B]

    HermiteParams params_;
    GridSpec grid_;
    int m_ = 0;
    std::vector<int> inner_n_;
    std::vector<std::vector<double>> corr_; // per-axis unit-variance fGn(H') autocorrelation
    std::vector<Eigen::MatrixXd> chol_;
    double scale_ = 1.0;
};

} // namespace hb
