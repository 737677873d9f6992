#include "pfw/restart.hpp"

#include "pfw/rng.hpp"

#include <chrono>
#include <cmath>
#include <string>

namespace pfw {

void RestartConfig::validate() const {
    if (!(c > 0.0 && c < 1.0)) {
        throw ConfigError("restart: decrease factor c must lie in (0, 1)");
    }
    if (outer_rounds < 1) {
        throw ConfigError("restart: outer_rounds must be at least 1");
    }
    if (!(initial_alpha > 0.0 && initial_alpha <= 1.0)) {
        throw ConfigError("restart: initial alpha must lie in (0, 1]");
    }
    if (target_gap < 0.0) {
        throw ConfigError("restart: target gap must be nonnegative");
    }
}

RoundSchedule schedule(double alpha, double L, WorkerMode mode) {
    if (!(alpha > 0.0 && alpha <= 1.0) || !(L > 0.0)) {
        throw ConfigError("schedule: need alpha in (0, 1] and L > 0");
    }
    RoundSchedule s;
    const double t = std::ceil(std::sqrt(L / alpha) * std::log(1.0 / alpha));
    s.T = t < 1.0 ? 1 : static_cast<std::uint64_t>(t);
    if (mode == WorkerMode::InvSqrtAlpha) {
        const double m = std::ceil(1.0 / std::sqrt(alpha));
        s.m = m < 1.0 ? 1 : static_cast<std::size_t>(m);
    }
    return s;
}

RestartRun run_restarted(const RestartConfig& cfg, const PfwConfig& base, const Problem& problem, const Lmo& lmo,
                         const LogSchedule& log, const std::optional<BoundInputs>& bound) {
    cfg.validate();
    RestartRun out;
    out.x = base.x0;

    RunContext ctx;
    ctx.start = std::chrono::steady_clock::now();
    double alpha = cfg.initial_alpha;

    for (std::uint64_t round = 0; round < cfg.outer_rounds; ++round) {
        if (cfg.max_iterations > 0 && ctx.iteration_offset >= cfg.max_iterations) {
            break;
        }
        const RoundSchedule plan = schedule(alpha, base.L, cfg.m_mode);

        PfwConfig pc = base;
        pc.x0 = out.x;
        pc.smoothing.alpha = alpha;
        pc.smoothing.m = plan.m;
        pc.smoothing.seed_root = derive_seed(base.smoothing.seed_root, kRoundStream, round);
        pc.T = plan.T;
        if (cfg.max_iterations > 0) {
            pc.T = std::min(pc.T, cfg.max_iterations - ctx.iteration_offset);
        }

        std::optional<BoundInputs> b;
        if (bound) {
            b = *bound;
            b->alpha = alpha;
            b->m = plan.m;
        }

        PfwRun run;
        try {
            run = run_pfw(pc, problem, lmo, log, b, ctx);
        } catch (const Error&) {
            rethrow_with_context("restart round " + std::to_string(round) + " (alpha " + format_real(alpha) + ")");
        }

        RoundInfo info;
        info.alpha = alpha;
        info.plan = plan;
        info.first_iteration = ctx.iteration_offset;
        info.best_gap = run.final_state.best_gap;
        out.rounds.push_back(info);

        out.trace.insert(out.trace.end(), run.trace.begin(), run.trace.end());
        out.lmo_calls += run.lmo_calls;
        out.x = run.final_state.x;

        ctx.iteration_offset += pc.T;
        ctx.best_gap = run.final_state.best_gap;
        ctx.log_initial = false;
        if (cfg.target_gap > 0.0 && ctx.best_gap <= cfg.target_gap) {
            break;
        }
        alpha *= cfg.c;
    }
    return out;
}

}  // namespace pfw
