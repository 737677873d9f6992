#include "pfw/parallel_fw.hpp"

#include <cmath>
#include <sstream>

namespace pfw {

AlgParams PfwConfig::params() const {
    return AlgParams::make(beta(), 1.0 / L, 1.0 / L);
}

void PfwConfig::validate(const Lmo& lmo) const {
    smoothing.validate();
    if (!(L > 0.0) || !std::isfinite(L)) {
        throw ConfigError("PFW: smoothness constant L must be positive");
    }
    if (!(R_K > 0.0)) {
        throw ConfigError("PFW: R_K must be positive");
    }
    if (!(x0.shape() == lmo.shape())) {
        throw ConfigError("PFW: x0 has shape " + x0.shape().to_string() + ", expected " + lmo.shape().to_string());
    }
    if (!lmo.contains(x0)) {
        throw ConfigError("PFW: starting point is not in " + lmo.name());
    }
    if (beta() < 1.0 / L) {
        std::ostringstream os;
        os << "PFW: need R_K M / alpha >= 1 / L (got " << beta() << " < " << 1.0 / L << "); decrease alpha";
        throw ConfigError(os.str());
    }
}

PfwState PfwState::initial(const PfwConfig& cfg, const Problem& problem) {
    PfwState s;
    s.x = cfg.x0;
    s.d = Point(cfg.x0.shape());
    s.g = Point(cfg.x0.shape());
    s.grad_x = problem.grad_f(cfg.x0);
    s.y = s.grad_x;
    return s;
}

Point pfw_recursion_x(const Point& x_k, const Point& g_k, double A_k, double A_next, double beta) {
    const double keep = (A_k + beta) / (A_next + beta);
    return Point(x_k.shape(), keep * x_k.data() - (1.0 - keep) * g_k.data());
}

PfwState pfw_step(const PfwState& state, const PfwConfig& cfg, const Problem& problem, const Lmo& lmo) {
    const AlgParams p = cfg.params();
    const double beta = p.beta;

    PfwState next;
    next.k = state.k + 1;
    next.best_gap = state.best_gap;
    next.A = next_A(state.A, p);
    const double tau = 1.0 - state.A / next.A;

    const Point v = lerp(state.y, state.grad_x, tau);
    try {
        next.g = smoothed_support_grad(v, cfg.smoothing, lmo, state.k);
    } catch (const Error&) {
        rethrow_with_context("PFW iteration " + std::to_string(state.k));
    }
    next.d = Point(state.d.shape(), state.d.data() + (next.A - state.A) * next.g.data());
    const double denom = next.A + beta;
    next.x = Point(cfg.x0.shape(), (beta / denom) * cfg.x0.data() - next.d.data() / denom);
    next.x.require_finite("PFW x");

    const double violation = lmo.violation(next.x);
    if (violation > lmo.membership_tol()) {
        std::ostringstream os;
        os << "PFW iteration " << state.k << ": primal iterate left " << lmo.name() << " (violation " << violation
           << ")";
        throw InvariantViolation(os.str());
    }

    next.grad_x = problem.grad_f(next.x);
    next.y = lerp(state.y, next.grad_x, tau);
    return next;
}

GapReport evaluate_gap(const Point& x, const Point& y, double best_gap, const Problem& problem, const Lmo& lmo) {
    GapReport r;
    r.primal = problem.f(x);
    const double support = lmo.argmax_atom(-y).value;
    r.dual = -support - problem.conjugate(y);
    r.gap = r.primal - r.dual;
    if (r.gap < -kWeakDualityTol) {
        std::ostringstream os;
        os.precision(17);
        os << "weak duality violated: primal " << r.primal << " < dual " << r.dual;
        throw InvariantViolation(os.str());
    }
    r.best_gap = std::min(best_gap, r.gap);
    return r;
}

GapReport evaluate_gap(PfwState& state, const Problem& problem, const Lmo& lmo) {
    GapReport r = evaluate_gap(state.x, state.y, state.best_gap, problem, lmo);
    state.best_gap = r.best_gap;
    return r;
}

double theorem2_bound(std::uint64_t k, const BoundInputs& b) {
    const double rm = b.R_K * b.M;
    const double decay = std::exp(-static_cast<double>(k) * std::sqrt(b.alpha) / (4.0 * std::sqrt(b.L * rm)));
    const double variance = 2.0 * b.R_K * b.R_K * b.rho / static_cast<double>(b.m) * std::sqrt(b.alpha * b.L / rm);
    return decay * (rm / b.alpha) * b.f_gap0 + variance + b.alpha * b.s1_0;
}

double alpha_for_epsilon(double eps, double L, double R_K, double M, std::size_t m, double rho, double s1_0) {
    const double mm = static_cast<double>(m);
    const double smoothing_branch = eps / (3.0 * s1_0);
    const double variance_branch = M * eps * eps * mm * mm / (36.0 * L * R_K * R_K * R_K * rho * rho);
    return std::min(smoothing_branch, variance_branch);
}

std::uint64_t iterations_for_epsilon(double eps, double alpha, double L, double R_K, double M, double f_gap0) {
    const double arg = 3.0 * R_K * M * f_gap0 / (eps * alpha);
    if (arg <= 1.0) {
        return 1;
    }
    const double k = 4.0 * std::sqrt(L * R_K * M) / std::sqrt(alpha) * std::log(arg);
    return std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::ceil(k)));
}

PfwRun run_pfw(const PfwConfig& cfg, const Problem& problem, const Lmo& lmo, const LogSchedule& schedule,
               const std::optional<BoundInputs>& bound, const RunContext& ctx) {
    cfg.validate(lmo);
    PfwRun run;
    PfwState state = PfwState::initial(cfg, problem);
    state.best_gap = ctx.best_gap;

    auto log = [&](const PfwState& s) {
        PfwState& mut = const_cast<PfwState&>(s);
        const GapReport r = evaluate_gap(mut, problem, lmo);
        ++run.lmo_calls;
        RunRecord rec;
        rec.iteration = ctx.iteration_offset + s.k;
        rec.primal = r.primal;
        rec.dual = r.dual;
        rec.gap = r.gap;
        rec.best_gap = r.best_gap;
        rec.bound = bound ? theorem2_bound(s.k, *bound) : std::numeric_limits<double>::quiet_NaN();
        rec.alpha = cfg.smoothing.alpha;
        rec.m = cfg.smoothing.m;
        rec.wall_ns = std::chrono::duration_cast<std::chrono::nanoseconds>(std::chrono::steady_clock::now() - ctx.start)
                          .count();
        run.trace.push_back(rec);
    };

    if (ctx.log_initial) {
        log(state);
    }
    for (std::uint64_t k = 0; k < cfg.T; ++k) {
        state = pfw_step(state, cfg, problem, lmo);
        run.lmo_calls += cfg.smoothing.m;
        if (state.k == cfg.T || schedule.should_log(ctx.iteration_offset + state.k)) {
            log(state);
        }
    }
    run.final_state = std::move(state);
    return run;
}

}  // namespace pfw
