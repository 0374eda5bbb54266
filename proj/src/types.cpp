#include "hb/types.hpp"

#include <algorithm>
#include <cmath>

namespace hb {

double SigmaSpec::operator()(double /*t*/, double /*x*/, double u) const {
    switch (kind) {
    case Kind::Constant:
        return parameters.at(0);
    case Kind::Affine:
        return parameters.at(0) + parameters.at(1) * u;
    case Kind::TabulatedLipschitz: {
        const std::size_t n = parameters.size() / 2;
        if (n == 0) return 0.0;
        if (u <= parameters[0]) return parameters[1];
        if (u >= parameters[2 * (n - 1)]) return parameters[2 * (n - 1) + 1];
        for (std::size_t i = 0; i + 1 < n; ++i) {
            const double u0 = parameters[2 * i], s0 = parameters[2 * i + 1];
            const double u1 = parameters[2 * i + 2], s1 = parameters[2 * i + 3];
            if (u <= u1) return s0 + (s1 - s0) * (u - u0) / (u1 - u0);
        }
        return parameters[2 * (n - 1) + 1];
    }
    }
    return 0.0;
}

SigmaSpec SigmaSpec::zero() { return constant(0.0); }

SigmaSpec SigmaSpec::constant(double c) {
    SigmaSpec s;
    s.kind = Kind::Constant;
    s.parameters = {c};
    s.lipschitz_bound = 0.0;
    s.growth_bound = std::abs(c);
    return s;
}

SigmaSpec SigmaSpec::affine(double a, double b) {
    SigmaSpec s;
    s.kind = Kind::Affine;
    s.parameters = {a, b};
    s.lipschitz_bound = std::abs(b);
    s.growth_bound = std::max(std::abs(a), std::abs(b));
    return s;
}

SigmaSpec SigmaSpec::tabulated(std::vector<double> knots) {
    require(knots.size() >= 2 && knots.size() % 2 == 0, "tabulated sigma needs (u,s) pairs");
    for (std::size_t i = 2; i < knots.size(); i += 2)
        require(knots[i] > knots[i - 2], "tabulated sigma knots must be strictly increasing in u");
    SigmaSpec s;
    s.kind = Kind::TabulatedLipschitz;
    s.parameters = std::move(knots);
    double lip = 0.0, grow = 0.0;
    const std::size_t n = s.parameters.size() / 2;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double du = s.parameters[2 * i + 2] - s.parameters[2 * i];
        const double ds = s.parameters[2 * i + 3] - s.parameters[2 * i + 1];
        lip = std::max(lip, std::abs(ds / du));
    }
    for (std::size_t i = 0; i < n; ++i) {
        const double u = s.parameters[2 * i], v = s.parameters[2 * i + 1];
        grow = std::max(grow, std::abs(v) / (1.0 + std::abs(u)));
    }
    s.lipschitz_bound = lip;
    s.growth_bound = grow;
    return s;
}

std::vector<std::string> SigmaSpec::check_bounds(const std::vector<double>& u_probe) const {
    std::vector<std::string> violations;
    const SigmaSpec& f = *this;
    for (double u : u_probe) {
        const double su = f(0.0, 0.0, u);
        if (std::abs(su) > growth_bound * (1.0 + std::abs(u)) + 1e-12)
            violations.push_back("growth bound violated at u=" + std::to_string(u));
        for (double v : u_probe) {
            const double sv = f(0.0, 0.0, v);
            if (std::abs(su - sv) > lipschitz_bound * std::abs(u - v) + 1e-12)
                violations.push_back("Lipschitz bound violated at (u,v)=(" + std::to_string(u) +
                                     "," + std::to_string(v) + ")");
        }
    }
    return violations;
}

static std::size_t ipow(std::size_t base, int exp) {
    std::size_t r = 1;
    for (int i = 0; i < exp; ++i) r *= base;
    return r;
}

std::size_t GridSpec::sheet_extent() const {
    return static_cast<std::size_t>(n_t + 1) * ipow(static_cast<std::size_t>(n_x + 1), d);
}

std::size_t GridSpec::cell_extent() const {
    return static_cast<std::size_t>(n_t) * ipow(static_cast<std::size_t>(n_x), d);
}

std::size_t GridSpec::solution_extent() const {
    return static_cast<std::size_t>(n_t + 1) * ipow(static_cast<std::size_t>(n_x), d);
}

void GridSpec::validate() const {
    require(n_t >= 1, "GridSpec: n_t >= 1 required");
    require(n_x >= 1, "GridSpec: n_x >= 1 required");
    require(t_max > 0.0, "GridSpec: t_max > 0 required");
    require(L > 0.0, "GridSpec: L > 0 required");
    require(d >= 1, "GridSpec: d >= 1 required");
}

std::size_t FieldSample::expected_extent() const {
    switch (kind) {
    case FieldKind::Sheet:
        return grid.sheet_extent();
    case FieldKind::WhiteNoise:
        return grid.cell_extent();
    case FieldKind::Solution:
        return grid.solution_extent();
    }
    return 0;
}

StepFunction StepFunction::zero(const GridSpec& g) {
    return StepFunction{g, std::vector<double>(g.cell_extent(), 0.0)};
}

StepFunction StepFunction::box_indicator(const GridSpec& g, double t_hi, double x_hi) {
    require(g.d == 1, "box_indicator: d = 1 only");
    StepFunction f = zero(g);
    for (int m = 0; m < g.n_t; ++m) {
        if ((m + 1) * g.dt() > t_hi + 1e-12) continue;
        for (int c = 0; c < g.n_x; ++c) {
            if ((c + 1) * g.dx() > x_hi + 1e-12) continue;
            f.coefficients[static_cast<std::size_t>(m) * g.n_x + c] = 1.0;
        }
    }
    return f;
}

} // namespace hb
