#pragma once

#include "pfw/core.hpp"
#include "pfw/lmo.hpp"
#include "pfw/problems.hpp"
#include "pfw/trace.hpp"

#include <cstdint>
#include <vector>

namespace pfw {

struct FwStep {
    Point x_next;
    Point vertex;   // s_k
    double fw_gap;  // <grad f(x_k), x_k - s_k>
    double step;    // eta_k or gamma*
};

// eta_k = min(1, 2 / (k + 1)), k >= 1.
double fixed_step_size(std::uint64_t k);

FwStep fw_step_fixed(const Point& x, std::uint64_t k, const Problem& problem, const Lmo& lmo);

/// Exact line search for a quadratic f:
///   gamma* = clamp(<grad f(x), x - s> / q(x - s), 0, 1);
/// with q = 0 the step is 1 for a positive directional derivative, else 0.
FwStep fw_step_linesearch(const Point& x, const Problem& problem, const Lmo& lmo);

// Line-search step from the directional derivative and curvature alone.
double linesearch_step(double slope, double curvature);

enum class FwVariant { Fixed, LineSearch };

struct FwRun {
    std::vector<RunRecord> trace;
    // FW gap at each logged row, aligned with `trace`.
    std::vector<double> fw_gaps;
    Point x;
    std::uint64_t lmo_calls = 0;
};

/// Runs T classical FW steps from x0. Logged rows carry the dual gap at
/// y = grad f(x_k); `bound` and `alpha` are NaN and `m` is 0.
FwRun run_fw(FwVariant variant, const Point& x0, std::uint64_t T, const Problem& problem, const Lmo& lmo,
             const LogSchedule& schedule);

struct FStarEstimate {
    double value = 0.0;   // best lower bound max_k (f(x_k) - gap_k)
    double best_f = 0.0;  // best objective seen
    std::uint64_t iterations = 0;
};

/// Lower estimate of min_K f from FW-LS, run for at most `max_iterations`,
/// until best_f - value <= rel_tol max(1, |best_f|), or until the step
/// collapses below `step_tol`.
FStarEstimate estimate_f_star(const Problem& problem, const Lmo& lmo, std::uint64_t max_iterations = 1000000,
                              double rel_tol = 1e-5, double step_tol = 1e-14);

}  // namespace pfw
