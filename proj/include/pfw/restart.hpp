#pragma once

#include "pfw/parallel_fw.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace pfw {

enum class WorkerMode { One, InvSqrtAlpha };

struct RestartConfig {
    double c = 0.5;
    WorkerMode m_mode = WorkerMode::InvSqrtAlpha;
    std::uint64_t outer_rounds = 14;
    double initial_alpha = 1.0;
    // Total PFW iterations across rounds; 0 means unlimited. The last round
    // is truncated to fit.
    std::uint64_t max_iterations = 0;
    // Stop once best_gap falls to this value; 0 disables.
    double target_gap = 0.0;

    void validate() const;
};

struct RoundSchedule {
    std::uint64_t T = 1;
    std::size_t m = 1;
};

/// T = max(1, ceil(sqrt(L/alpha) log(1/alpha))); m = 1 or max(1, ceil(1/sqrt(alpha))).
RoundSchedule schedule(double alpha, double L, WorkerMode mode);

struct RoundInfo {
    double alpha = 0.0;
    RoundSchedule plan;
    std::uint64_t first_iteration = 0;
    double best_gap = 0.0;
};

struct RestartRun {
    std::vector<RunRecord> trace;
    Point x;
    std::uint64_t lmo_calls = 0;
    std::vector<RoundInfo> rounds;
};

/// Restarted PFW. Each round runs PFW afresh (A and d reset) from the
/// previous round's final x, then shrinks alpha by c. `base` supplies L,
/// x0, R_K and the smoothing template; its alpha, m and T are overwritten
/// per round, and round i samples from derive_seed(seed_root, kRoundStream, i).
/// `bound` is evaluated per round when given (its alpha and m follow the round).
RestartRun run_restarted(const RestartConfig& cfg, const PfwConfig& base, const Problem& problem, const Lmo& lmo,
                         const LogSchedule& log, const std::optional<BoundInputs>& bound = std::nullopt);

inline constexpr std::uint64_t kRoundStream = 0xffff'0000'0000'0010ULL;

}  // namespace pfw
