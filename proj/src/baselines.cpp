#include "pfw/baselines.hpp"

#include "pfw/parallel_fw.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

namespace pfw {

namespace {

struct Direction {
    Point grad;
    Point vertex;
    Point h;  // x - s
    double slope;
};

Direction fw_direction(const Point& x, const Problem& problem, const Lmo& lmo) {
    Direction dir;
    dir.grad = problem.grad_f(x);
    dir.vertex = lmo.argmax_linear(-dir.grad).x_star;
    dir.h = x - dir.vertex;
    dir.slope = pairing(dir.grad, dir.h);
    return dir;
}

}  // namespace

double fixed_step_size(std::uint64_t k) {
    if (k < 1) {
        throw ConfigError("fixed-step FW is indexed from k = 1");
    }
    return std::min(1.0, 2.0 / (static_cast<double>(k) + 1.0));
}

FwStep fw_step_fixed(const Point& x, std::uint64_t k, const Problem& problem, const Lmo& lmo) {
    const double eta = fixed_step_size(k);
    Direction dir = fw_direction(x, problem, lmo);
    return {lerp(x, dir.vertex, eta), std::move(dir.vertex), dir.slope, eta};
}

double linesearch_step(double slope, double curvature) {
    if (curvature <= 0.0) {
        return slope > 0.0 ? 1.0 : 0.0;
    }
    return std::clamp(slope / curvature, 0.0, 1.0);
}

FwStep fw_step_linesearch(const Point& x, const Problem& problem, const Lmo& lmo) {
    Direction dir = fw_direction(x, problem, lmo);
    const double gamma = linesearch_step(dir.slope, problem.curvature(dir.h));
    return {lerp(x, dir.vertex, gamma), std::move(dir.vertex), dir.slope, gamma};
}

FwRun run_fw(FwVariant variant, const Point& x0, std::uint64_t T, const Problem& problem, const Lmo& lmo,
             const LogSchedule& schedule) {
    if (!lmo.contains(x0)) {
        throw ConfigError("FW: starting point is not in " + lmo.name());
    }
    const auto start = std::chrono::steady_clock::now();
    const double nan = std::numeric_limits<double>::quiet_NaN();
    FwRun run;
    run.x = x0;
    double best = std::numeric_limits<double>::infinity();

    auto log = [&](std::uint64_t k, double fw_gap) {
        const GapReport r = evaluate_gap(run.x, problem.grad_f(run.x), best, problem, lmo);
        best = r.best_gap;
        RunRecord rec;
        rec.iteration = k;
        rec.primal = r.primal;
        rec.dual = r.dual;
        rec.gap = r.gap;
        rec.best_gap = r.best_gap;
        rec.bound = nan;
        rec.alpha = nan;
        rec.m = 0;
        rec.wall_ns =
            std::chrono::duration_cast<std::chrono::nanoseconds>(std::chrono::steady_clock::now() - start).count();
        run.trace.push_back(rec);
        run.fw_gaps.push_back(fw_gap);
        ++run.lmo_calls;
    };

    // FW gap at x_k comes for free from step k+1; the final row pays one LMO call.
    auto gap_at = [&](const Point& x) { return fw_direction(x, problem, lmo).slope; };

    log(0, gap_at(run.x));
    for (std::uint64_t k = 1; k <= T; ++k) {
        FwStep step = variant == FwVariant::Fixed ? fw_step_fixed(run.x, k, problem, lmo)
                                                  : fw_step_linesearch(run.x, problem, lmo);
        ++run.lmo_calls;
        const double violation = lmo.violation(step.x_next);
        if (violation > lmo.membership_tol()) {
            throw InvariantViolation("FW iteration " + std::to_string(k) + ": iterate left " + lmo.name());
        }
        run.x = std::move(step.x_next);
        if (k == T || schedule.should_log(k)) {
            log(k, gap_at(run.x));
        }
    }
    return run;
}

FStarEstimate estimate_f_star(const Problem& problem, const Lmo& lmo, std::uint64_t max_iterations, double rel_tol,
                              double step_tol) {
    FStarEstimate est;
    Point x = lmo.default_start();
    est.value = -std::numeric_limits<double>::infinity();
    est.best_f = std::numeric_limits<double>::infinity();
    for (std::uint64_t k = 0; k < max_iterations; ++k) {
        Direction dir = fw_direction(x, problem, lmo);
        const double fx = problem.f(x);
        est.best_f = std::min(est.best_f, fx);
        est.value = std::max(est.value, fx - dir.slope);
        est.iterations = k;
        if (est.best_f - est.value <= rel_tol * std::max(1.0, std::abs(est.best_f))) {
            break;
        }
        const double gamma = linesearch_step(dir.slope, problem.curvature(dir.h));
        if (gamma < step_tol) {
            break;
        }
        x = lerp(x, dir.vertex, gamma);
    }
    return est;
}

}  // namespace pfw
