#pragma once

#include <span>
#include <string>
#include <vector>

#include "hb/types.hpp"

namespace hb {

struct SolverConfig {
    double picard_tol = 1e-7;
    int max_iters = 12;
    enum class Scheme { Picard, Step };
    Scheme scheme = Scheme::Picard;
    bool dealias = false;
    GridSpec domain{};
    enum class InitialGuess { HeatFlow, Zero };
    InitialGuess initial_guess = InitialGuess::HeatFlow;
};

struct SolveResult {
    FieldSample field; // kind = Solution, (n_t+1) x n_x values
    std::vector<double> iter_distances;
    bool converged = false;
    int iterations = 0;
    std::vector<std::string> warnings;
};

/// Periodic heat semigroup on [0, L): Fourier mode k decays by
/// exp(-nu (2 pi k / L)^2 dt). dt = 0 returns the profile unchanged.
std::vector<double> heat_semigroup_apply(std::span<const double> u, double dt, double nu,
                                         double L);

/// Signed nonlinear term of the mild form at time level t_index:
///   -int_0^{t_k} dx G_{t_k - s} * (u(s)^2 / 2) ds,
/// u frozen at panel left endpoints, the spectral kernel integrated exactly
/// per panel. The spatial mean of the result is identically zero.
std::vector<double> nonlinear_increment(const std::vector<std::vector<double>>& u_history,
                                        int t_index, double nu, const GridSpec& grid,
                                        bool dealias = false);

/// Stochastic term of the mild form at time level t_index with the
/// predictable (frozen at panel left endpoint) integrand:
///   sum_{m < k} G_{t_k - s_m} * [sigma(s_m, ., u_m) dZ_m] / dx.
std::vector<double> stochastic_increment(const SigmaSpec& sigma,
                                         const std::vector<std::vector<double>>& u_history,
                                         const FieldSample& sheet, int t_index, double nu);

/// All-zero sheet on a grid, for deterministic (sigma = 0) runs.
FieldSample zero_sheet(const GridSpec& grid);

/// Picard iteration on the mild form with a fixed noise realization.
/// Non-convergence is reported through the result, not thrown.
SolveResult picard_solve(const HermiteParams& params, const SigmaSpec& sigma,
                         std::span<const double> u0, const FieldSample& sheet,
                         const SolverConfig& config);

/// Exponential-Euler march on the mild form (causal single sweep).
SolveResult step_solve(const HermiteParams& params, const SigmaSpec& sigma,
                       std::span<const double> u0, const FieldSample& sheet,
                       const SolverConfig& config);

/// Deterministic viscous Burgers reference via the Hopf-Cole transform of
/// the periodic heat solution (sigma = 0 oracle). Constant backgrounds ride
/// along by Galilean shift. Sets *resolution_warning when the spectral tail
/// mass of the transformed initial data exceeds 1e-10.
std::vector<double> cole_hopf_exact(std::span<const double> u0, double t, double nu, double L,
                                    int n_modes, bool* resolution_warning = nullptr);

} // namespace hb
