#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace hb {

/// Model identity card: chaos order q, Hurst vector H = (H_0,...,H_d),
/// spatial dimension d and viscosity nu. H_0 is the temporal index.
struct HermiteParams {
    int q = 1;
    std::vector<double> H;
    int d = 1;
    double nu = 1.0;
};

struct ValidationReport {
    bool valid = false;
    double lhs = 0.0; // 2*H_0 + sum_{i>=1} H_i
    double rhs = 0.0; // d + 1 - 1/q
    std::vector<std::string> violations;
};

/// Noise coefficient sigma(t, x, u). The evaluation only depends on u for the
/// supported kinds; t and x are accepted to keep the mild-form call sites
/// uniform.
struct SigmaSpec {
    enum class Kind { Constant, Affine, TabulatedLipschitz };

    Kind kind = Kind::Constant;
    // Constant: {c}. Affine: {a, b} meaning a + b*u.
    // TabulatedLipschitz: knots (u_0, s_0, u_1, s_1, ...) with u strictly
    // increasing; evaluation is piecewise linear, clamped outside the table.
    std::vector<double> parameters{0.0};
    double lipschitz_bound = 0.0;
    double growth_bound = 0.0;

    double operator()(double t, double x, double u) const;

    static SigmaSpec zero();
    static SigmaSpec constant(double c);
    static SigmaSpec affine(double a, double b);
    static SigmaSpec tabulated(std::vector<double> knots);

    /// Checks the Lipschitz and linear-growth bounds on a battery of test
    /// triples; returns the list of violated constraints (empty when ok).
    std::vector<std::string> check_bounds(const std::vector<double>& u_probe) const;
};

/// Uniform space-time lattice. Lattice points are t_k = k*t_max/n_t
/// (k = 0..n_t) and x_j = j*L/n_x per spatial dimension (j = 0..n_x).
/// The solver treats [0, L) as a periodic torus; sheets live on the closed
/// box including the zero axes.
struct GridSpec {
    double t_max = 1.0;
    int n_t = 1;
    double L = 1.0;
    int n_x = 1;
    int d = 1;

    double dt() const { return t_max / n_t; }
    double dx() const { return L / n_x; }

    /// Point values on the closed lattice: (n_t+1) * (n_x+1)^d.
    std::size_t sheet_extent() const;
    /// Cell increments: n_t * n_x^d.
    std::size_t cell_extent() const;
    /// Periodic solution values: (n_t+1) * n_x^d.
    std::size_t solution_extent() const;

    void validate() const;
    bool operator==(const GridSpec&) const = default;
};

/// (master_seed, stream_index) identify one RNG substream. The mapping to
/// generator state is documented in rng.hpp and is stable across runs.
struct SeedSpec {
    std::uint64_t master_seed = 0;
    std::uint64_t stream_index = 0;
    bool operator==(const SeedSpec&) const = default;
};

enum class FieldKind { Sheet, WhiteNoise, Solution };

/// One realized field on a grid: a noise sheet, a white-noise increment
/// array, or a solution trajectory, plus the seed that produced it.
struct FieldSample {
    GridSpec grid;
    std::vector<double> values;
    SeedSpec seed;
    FieldKind kind = FieldKind::Sheet;

    std::size_t expected_extent() const;

    // Sheet lattice accessors, d = 1 (time index k = 0..n_t, space j = 0..n_x).
    double sheet_at(int k, int j) const {
        return values[static_cast<std::size_t>(k) * (grid.n_x + 1) + j];
    }
    // Rectangular increment of a d=1 sheet over cell (m, c).
    double sheet_increment(int m, int c) const {
        return sheet_at(m + 1, c + 1) - sheet_at(m + 1, c) - sheet_at(m, c + 1) + sheet_at(m, c);
    }
    // White-noise cell accessor, d = 1.
    double cell_at(int m, int c) const {
        return values[static_cast<std::size_t>(m) * grid.n_x + c];
    }
    // Solution accessor, d = 1 (space j = 0..n_x-1, periodic).
    double solution_at(int k, int j) const {
        return values[static_cast<std::size_t>(k) * grid.n_x + j];
    }
};

/// Piecewise-constant integrand on the grid cells (n_t * n_x^d coefficients,
/// row-major in (t, x_1, ..., x_d)).
struct StepFunction {
    GridSpec grid;
    std::vector<double> coefficients;

    static StepFunction zero(const GridSpec& g);
    /// Indicator of the space-time box [0, t_hi] x [0, x_hi] (d = 1).
    static StepFunction box_indicator(const GridSpec& g, double t_hi, double x_hi);
};

inline void require(bool cond, const char* what) {
    if (!cond) throw std::invalid_argument(what);
}

} // namespace hb
