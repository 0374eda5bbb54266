#include "hb/kernels.hpp"

#include <cmath>
#include <numbers>

namespace hb {

namespace {
// Slack on the strict inequality comparisons; inputs are doubles, so the
// sums carry rounding noise of at most a few ulp.
constexpr double kGateSlack = 1e-12;
} // namespace

ValidationReport validate_params(const HermiteParams& p) {
    ValidationReport rep;
    if (p.q < 1) rep.violations.push_back("q < 1");
    if (p.d < 1) rep.violations.push_back("d < 1");
    if (!(p.nu > 0.0)) rep.violations.push_back("nu <= 0");
    if (static_cast<int>(p.H.size()) != p.d + 1)
        rep.violations.push_back("H vector must have d+1 entries");

    for (std::size_t i = 0; i < p.H.size(); ++i) {
        if (!(p.H[i] > 0.5 && p.H[i] < 1.0))
            rep.violations.push_back("H_" + std::to_string(i) + " outside (1/2,1)");
    }

    long double lhs = 0.0L;
    if (!p.H.empty()) {
        lhs = 2.0L * static_cast<long double>(p.H[0]);
        for (std::size_t i = 1; i < p.H.size(); ++i) lhs += static_cast<long double>(p.H[i]);
    }
    const long double rhs =
        static_cast<long double>(p.d) + 1.0L - (p.q >= 1 ? 1.0L / static_cast<long double>(p.q) : 0.0L);
    rep.lhs = static_cast<double>(lhs);
    rep.rhs = static_cast<double>(rhs);
    if (!(lhs > rhs + kGateSlack))
        rep.violations.push_back("2H_0 + sum(H_i) <= d + 1 - 1/q");

    rep.valid = rep.violations.empty();
    return rep;
}

double kernel_exponent(double H_i, int q) {
    if (!(H_i > 0.5 && H_i < 1.0)) throw std::domain_error("kernel_exponent: H_i outside (1/2,1)");
    if (q < 1) throw std::domain_error("kernel_exponent: q < 1");
    return 0.5 + (1.0 - H_i) / q;
}

double heat_kernel(double t, std::span<const double> x, double nu) {
    if (!(t > 0.0)) throw std::domain_error("heat_kernel: t <= 0");
    const int d = static_cast<int>(x.size());
    double r2 = 0.0;
    for (double xi : x) r2 += xi * xi;
    const double a = 4.0 * std::numbers::pi * nu * t;
    return std::pow(a, -0.5 * d) * std::exp(-r2 / (4.0 * nu * t));
}

double heat_kernel_1d(double t, double x, double nu) {
    return heat_kernel(t, std::span<const double>(&x, 1), nu);
}

std::vector<double> heat_kernel_gradient(double t, std::span<const double> x, double nu) {
    const double g = heat_kernel(t, x, nu);
    std::vector<double> grad(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) grad[i] = -x[i] / (2.0 * nu * t) * g;
    return grad;
}

double heat_kernel_gradient_1d(double t, double x, double nu) {
    return heat_kernel_gradient(t, std::span<const double>(&x, 1), nu)[0];
}

double sheet_covariance(std::span<const double> t, std::span<const double> s,
                        std::span<const double> H) {
    require(t.size() == s.size() && t.size() == H.size(), "sheet_covariance: size mismatch");
    double prod = 1.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        const double a = std::pow(t[i], 2.0 * H[i]);
        const double b = std::pow(s[i], 2.0 * H[i]);
        const double c = std::pow(std::abs(t[i] - s[i]), 2.0 * H[i]);
        prod *= 0.5 * (a + b - c);
    }
    return prod;
}

} // namespace hb
