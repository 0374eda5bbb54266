#include "hb/stats.hpp"

#include <algorithm>
#include <cmath>

#include "hb/types.hpp"

namespace hb {

double mean(std::span<const double> x) {
    require(!x.empty(), "mean: empty sample");
    double s = 0.0;
    for (double v : x) s += v;
    return s / static_cast<double>(x.size());
}

double variance(std::span<const double> x) {
    require(x.size() >= 2, "variance: need n >= 2");
    const double m = mean(x);
    double s = 0.0;
    for (double v : x) s += (v - m) * (v - m);
    return s / static_cast<double>(x.size() - 1);
}

MeanWithSe jackknife_mean(std::span<const double> x) {
    const double m = mean(x);
    if (x.size() < 2) return {m, 0.0};
    const auto n = static_cast<double>(x.size());
    // Leave-one-out means of a sample mean collapse to (n*m - x_i)/(n-1);
    // the jackknife variance then equals var/n.
    double s = 0.0;
    for (double v : x) {
        const double loo = (n * m - v) / (n - 1.0);
        s += (loo - m) * (loo - m);
    }
    return {m, std::sqrt((n - 1.0) / n * s)};
}

MeanWithSe jackknife_excess_kurtosis(std::span<const double> x) {
    require(x.size() >= 8, "jackknife_excess_kurtosis: need n >= 8");
    const auto n = static_cast<double>(x.size());
    double s1 = 0, s2 = 0, s3 = 0, s4 = 0;
    for (double v : x) {
        s1 += v;
        s2 += v * v;
        s3 += v * v * v;
        s4 += v * v * v * v;
    }
    auto kurt_from_sums = [](double n_, double s1_, double s2_, double s3_, double s4_) {
        const double m = s1_ / n_;
        const double m2 = s2_ / n_ - m * m;
        const double m4 = (s4_ - 4 * m * s3_ + 6 * m * m * s2_ - 3 * n_ * m * m * m * m) / n_;
        return m4 / (m2 * m2) - 3.0;
    };
    const double full = kurt_from_sums(n, s1, s2, s3, s4);
    double acc = 0.0, acc2 = 0.0;
    for (double v : x) {
        const double loo =
            kurt_from_sums(n - 1, s1 - v, s2 - v * v, s3 - v * v * v, s4 - v * v * v * v);
        acc += loo;
        acc2 += loo * loo;
    }
    const double loo_mean = acc / n;
    const double var_jack = (n - 1.0) / n * (acc2 - n * loo_mean * loo_mean);
    return {full, std::sqrt(std::max(0.0, var_jack))};
}

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
    require(x.size() == y.size() && x.size() >= 2, "fit_line: need matched n >= 2");
    const auto n = static_cast<double>(x.size());
    const double mx = mean(x), my = mean(y);
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    require(sxx > 0, "fit_line: degenerate abscissae");
    LineFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    double ss_res = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double r = y[i] - (f.intercept + f.slope * x[i]);
        ss_res += r * r;
    }
    f.r2 = syy > 0 ? 1.0 - ss_res / syy : 1.0;
    f.slope_se = x.size() > 2 ? std::sqrt(ss_res / (n - 2.0) / sxx) : 0.0;
    return f;
}

double kolmogorov_prob(double z) {
    // Asymptotic series, split per ROOT's KolmogorovProb for fast convergence.
    const double u = std::abs(z);
    if (u < 0.2) return 1.0;
    if (u < 0.755) {
        static const double w = 2.50662827463;
        static const double c1 = -1.2337005501361697;
        static const double c2 = -11.103304951225528;
        static const double c3 = -30.842513753404244;
        const double v = 1.0 / (u * u);
        return 1.0 - w * (std::exp(c1 * v) + std::exp(c2 * v) + std::exp(c3 * v)) / u;
    }
    if (u >= 6.8116) return 0.0;
    const double v = u * u;
    double r[4] = {0, 0, 0, 0};
    const int maxj = std::max(1, static_cast<int>(std::lround(3.0 / u)));
    static const double fj[4] = {-2, -8, -18, -32};
    for (int j = 0; j < maxj; ++j) r[j] = std::exp(fj[j] * v);
    return 2.0 * (r[0] - r[1] + r[2] - r[3]);
}

KsResult ks_two_sample(std::vector<double> a, std::vector<double> b) {
    require(!a.empty() && !b.empty(), "ks_two_sample: empty sample");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    std::size_t ia = 0, ib = 0;
    double fa = 0.0, fb = 0.0, d = 0.0;
    while (ia < a.size() && ib < b.size()) {
        const double xa = a[ia], xb = b[ib];
        if (xa <= xb) {
            const double x = xa;
            while (ia < a.size() && a[ia] == x) ++ia;
            fa = static_cast<double>(ia) / na;
        }
        if (xb <= xa) {
            const double x = xb;
            while (ib < b.size() && b[ib] == x) ++ib;
            fb = static_cast<double>(ib) / nb;
        }
        d = std::max(d, std::abs(fa - fb));
    }
    d = std::max(d, std::abs(1.0 - fb));
    d = std::max(d, std::abs(fa - 1.0));
    const double ne = na * nb / (na + nb);
    const double sq = std::sqrt(ne);
    KsResult r;
    r.statistic = d;
    r.p_value = kolmogorov_prob((sq + 0.12 + 0.11 / sq) * d);
    r.n1 = a.size();
    r.n2 = b.size();
    return r;
}

} // namespace hb
