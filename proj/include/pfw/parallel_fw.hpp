#pragma once

#include "pfw/bregman.hpp"
#include "pfw/core.hpp"
#include "pfw/lmo.hpp"
#include "pfw/problems.hpp"
#include "pfw/smoothing.hpp"
#include "pfw/trace.hpp"

#include <chrono>
#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

namespace pfw {

/// Inputs of one Parallel Frank-Wolfe run. `smoothing.M` is the constant the
/// algorithm uses (theoretical or the M = 1 heuristic); it sets
/// beta = R_K M / alpha and mu = nu = 1 / L.
struct PfwConfig {
    double L = 1.0;
    Point x0;
    SmoothingConfig smoothing;
    std::uint64_t T = 0;
    double R_K = 1.0;

    double beta() const { return R_K * smoothing.M / smoothing.alpha; }
    AlgParams params() const;
    // Requires alpha > 0, x0 in K and beta >= mu.
    void validate(const Lmo& lmo) const;
};

struct PfwState {
    std::uint64_t k = 0;
    double A = 0.0;
    Point d;
    Point x;
    Point y;
    Point grad_x;  // grad f(x)
    Point g;       // averaged oracle direction of the last step
    double best_gap = std::numeric_limits<double>::infinity();

    // A_0 = 0, d_0 = 0, x = x0, y_0 = grad f(x0).
    static PfwState initial(const PfwConfig& cfg, const Problem& problem);
};

/// One iteration. The m oracle calls run under the smoothing module's
/// deterministic-reduction contract. Throws InvariantViolation if the new
/// primal iterate leaves K.
PfwState pfw_step(const PfwState& state, const PfwConfig& cfg, const Problem& problem, const Lmo& lmo);

/// x_{k+1} as the convex combination
///   (A_k + beta)/(A_{k+1} + beta) x_k + (1 - (A_k + beta)/(A_{k+1} + beta)) (-g_k).
Point pfw_recursion_x(const Point& x_k, const Point& g_k, double A_k, double A_next, double beta);

struct GapReport {
    double primal = 0.0;
    double dual = 0.0;
    double gap = 0.0;
    double best_gap = 0.0;
};

inline constexpr double kWeakDualityTol = 1e-8;

/// primal f(x), dual -s(-y) - f*(y). Throws InvariantViolation when the gap
/// is below -kWeakDualityTol.
GapReport evaluate_gap(const Point& x, const Point& y, double best_gap, const Problem& problem, const Lmo& lmo);
// Updates state.best_gap.
GapReport evaluate_gap(PfwState& state, const Problem& problem, const Lmo& lmo);

/// Constants of the expected primal-dual gap bound. `M` is always the
/// theoretical constant, whatever the algorithm used.
struct BoundInputs {
    double L = 1.0;
    double R_K = 1.0;
    double M = 1.0;
    double alpha = 1.0;
    std::size_t m = 1;
    double rho = 1.0;
    double s1_0 = 0.0;
    double f_gap0 = 0.0;
};

/// exp(-k sqrt(alpha) / (4 sqrt(L R_K M))) (R_K M / alpha) f_gap0
///   + (2 R_K^2 rho / m) sqrt(alpha L / (R_K M)) + alpha s1_0
double theorem2_bound(std::uint64_t k, const BoundInputs& b);

/// min{ eps / (3 s1_0), M eps^2 m^2 / (36 L R_K^3 rho^2) }
double alpha_for_epsilon(double eps, double L, double R_K, double M, std::size_t m, double rho, double s1_0);

/// ceil((4 sqrt(L R_K M) / sqrt(alpha)) log(3 R_K M f_gap0 / (eps alpha))), at least 1.
std::uint64_t iterations_for_epsilon(double eps, double alpha, double L, double R_K, double M, double f_gap0);

struct RunContext {
    std::uint64_t iteration_offset = 0;
    double best_gap = std::numeric_limits<double>::infinity();
    bool log_initial = true;
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
};

struct PfwRun {
    std::vector<RunRecord> trace;
    PfwState final_state;
    std::uint64_t lmo_calls = 0;
};

/// Runs T iterations, logging the gap at iteration 0 (if requested), at scheduled
/// iterations and at the last one. Rows carry the global iteration
/// `ctx.iteration_offset + k`.
PfwRun run_pfw(const PfwConfig& cfg, const Problem& problem, const Lmo& lmo, const LogSchedule& schedule,
               const std::optional<BoundInputs>& bound = std::nullopt, const RunContext& ctx = {});

}  // namespace pfw
