#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace hb {

double mean(std::span<const double> x);
/// Unbiased sample variance.
double variance(std::span<const double> x);

struct MeanWithSe {
    double value = 0.0;
    double se = 0.0;
};

/// Jackknife standard error of the sample mean (equals sd/sqrt(n)).
MeanWithSe jackknife_mean(std::span<const double> x);

/// Excess kurtosis with jackknife standard error.
MeanWithSe jackknife_excess_kurtosis(std::span<const double> x);

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
    double slope_se = 0.0; // residual-based OLS slope standard error
};

LineFit fit_line(std::span<const double> x, std::span<const double> y);

/// Asymptotic Kolmogorov survival function Q(z) = 2 sum (-1)^{j-1} exp(-2 j^2 z^2).
double kolmogorov_prob(double z);

struct KsResult {
    double statistic = 0.0;
    double p_value = 1.0;
    std::size_t n1 = 0;
    std::size_t n2 = 0;
};

/// Two-sample two-sided KS test; the p-value uses the asymptotic distribution
/// with the small-sample effective-size correction.
KsResult ks_two_sample(std::vector<double> a, std::vector<double> b);

} // namespace hb
