#pragma once

#include <span>
#include <vector>

#include "hb/types.hpp"

namespace hb {

/// Checks q >= 1, d >= 1, nu > 0, every H_i in (1/2, 1) strictly and the
/// well-posedness gate 2*H_0 + sum_{i>=1} H_i > d + 1 - 1/q. Invalid inputs
/// produce valid = false with named violations, never a throw.
ValidationReport validate_params(const HermiteParams& p);

/// beta_i = 1/2 + (1 - H_i)/q, the kernel singularity exponent per axis.
double kernel_exponent(double H_i, int q);

/// G_t(x) = (4 pi nu t)^{-d/2} exp(-|x|^2 / (4 nu t)), d = x.size().
double heat_kernel(double t, std::span<const double> x, double nu);
double heat_kernel_1d(double t, double x, double nu);

/// Analytic gradient of heat_kernel with respect to x.
std::vector<double> heat_kernel_gradient(double t, std::span<const double> x, double nu);
double heat_kernel_gradient_1d(double t, double x, double nu);

/// prod_i (t_i^{2H_i} + s_i^{2H_i} - |t_i - s_i|^{2H_i}) / 2 for t, s in
/// R_+^{d+1}. Zero as soon as any coordinate vanishes.
double sheet_covariance(std::span<const double> t, std::span<const double> s,
                        std::span<const double> H);

} // namespace hb
