#pragma once

#include <span>

#include "hb/noise.hpp"
#include "hb/types.hpp"

namespace hb {

struct HNormResult {
    double value = 0.0;
    /// Rounding-level bound; the cell-pair weight integrals are closed form,
    /// so there is no quadrature truncation error.
    double quadrature_error_estimate = 0.0;
};

/// Weighted inner product
///   alpha_H * iint iint phi(s,y) psi(r,z) |s-r|^{2H_0-2} prod |y_i-z_i|^{2H_i-2}
/// with alpha_H = prod_i H_i (2H_i - 1), evaluated exactly per cell pair
/// through the antiderivative of the weight. With this constant the inner
/// product of box indicators reproduces the covariance product formula.
HNormResult h_inner_product(const StepFunction& phi, const StepFunction& psi,
                            std::span<const double> H);

/// Riemann-Stieltjes sum of phi against the rectangular increments of a
/// sampled sheet.
double integrate_step(const StepFunction& phi, const FieldSample& sheet);

struct IsometryReport {
    double empirical_second_moment = 0.0;
    double h_norm = 0.0;
    double z_score = 0.0;
    double standard_error = 0.0;
    int n_samples = 0;
};

/// Compares E[(int phi dZ)^2] over a fresh ensemble with the H-norm of phi.
/// q = 1 uses the exact Gaussian sampler, q >= 2 the kernel sampler.
IsometryReport isometry_report(const StepFunction& phi, const HermiteParams& params,
                               int n_samples, const SeedSpec& seed,
                               const TruncationSpec& trunc = {});

/// Fixed battery of five step functions used by the isometry verification:
/// full-box and half-box indicators, a scaled slab, a checkerboard, and a
/// fixed-seed rough coefficient field.
std::vector<StepFunction> isometry_battery(const GridSpec& grid);

struct QuadratureSpec {
    int initial_panels = 8;
    int max_doublings = 10;
    double rel_tol = 0.02;
    int gauss_order = 8;
    double panel_grading = 3.0; // clustering exponent toward the singular end
};

struct CapitalIResult {
    double value = 0.0;
    bool refinement_converged = false;
    /// Raised when validate_params fails (condition (d)); the value is then
    /// the truncated quadrature only.
    bool divergence_flag = false;
    double last_rel_change = 0.0;
    int panels = 0;
};

/// The well-posedness diagnostic
///   I(t) = iint_{[0,t]^2} int int G_{t-s}(y) G_{t-r}(z)
///          |s-r|^{2H_0-2} prod |y_i-z_i|^{2H_i-2} dy dz ds dr,
/// translation invariant in x. The spatial integrals reduce per coordinate
/// to Gaussian fractional moments, and the |s-r| weight is integrated in
/// closed form along the diagonal direction, leaving a 1-D panel quadrature
/// refined until the relative change drops below rel_tol.
CapitalIResult capital_I(double t, const HermiteParams& params, const QuadratureSpec& quad = {});

} // namespace hb
