#pragma once

#include "pfw/baselines.hpp"
#include "pfw/lmo.hpp"
#include "pfw/parallel_fw.hpp"
#include "pfw/problems.hpp"
#include "pfw/restart.hpp"
#include "pfw/smoothing.hpp"
#include "pfw/trace.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

namespace pfw {

inline constexpr const char* kVersion = "0.3.1";

// Exit codes of the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitInvariant = 3;

enum class ProblemKind { SimplexLS, TraceMC };
enum class MMode { Theory, One };
enum class Algorithm { Pfw, Rpfw, Fw, FwLs };

std::string to_string(ProblemKind kind);
std::string to_string(MMode mode);
std::string to_string(Algorithm algo);
std::string to_string(WorkerMode mode);

struct ProblemSpec {
    ProblemKind kind = ProblemKind::SimplexLS;
    std::size_t n = 200;
    std::size_t d = 50;
    std::size_t p = 10;
    std::size_t q = 8;
    std::uint64_t seed = 1;
};

/// A generated problem with its feasible set and the constants the bounds need.
struct Instance {
    ProblemSpec spec;
    std::unique_ptr<Problem> problem;
    Lmo lmo;
    Perturbation perturbation;
    double R_K = 1.0;
    double M = 1.0;  // theoretical: sqrt of the flattened dimension
    double rho = 1.0;
};

Instance make_instance(const ProblemSpec& spec);

struct InstanceConstants {
    double L = 0.0;
    Estimate s1_0;
    FStarEstimate f_star;
};

inline constexpr std::size_t kS1Samples = 100000;

// s1(0) by Monte Carlo and f* by FW-LS. Seeds derive from the problem seed.
InstanceConstants estimate_constants(const Instance& inst, std::size_t s1_samples = kS1Samples,
                                     std::uint64_t f_star_iterations = 1000000);

struct RunOptions {
    Algorithm algo = Algorithm::Pfw;
    ProblemSpec problem;
    double alpha = 0.01;
    std::size_t m = 1;
    MMode m_mode = MMode::Theory;
    WorkerMode workers = WorkerMode::InvSqrtAlpha;  // R-PFW only
    std::uint64_t rounds = 14;                      // R-PFW only
    std::uint64_t iters = 10000;
    int threads = 1;
    std::uint64_t gap_every = 0;  // 0: dense then log-spaced
    bool with_bound = true;       // PFW only
};

struct RunOutput {
    std::vector<RunRecord> trace;
    ExperimentMeta meta;
};

/// Runs one algorithm on one seeded instance. `constants` may be passed to
/// skip re-estimation.
RunOutput run_experiment(const RunOptions& opts, const Instance& inst, const InstanceConstants& constants);
RunOutput run_experiment(const RunOptions& opts);

// Root of the sampling streams for a given instance seed.
std::uint64_t sampling_root(std::uint64_t seed);

/// Column-wise mean over seeds. Traces must share their iteration column.
std::vector<RunRecord> mean_trace(const std::vector<std::vector<RunRecord>>& traces);

struct FigureOptions {
    std::filesystem::path out;
    std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};
    std::uint64_t iters = 0;  // 0: per-figure default
    int threads = 1;
    std::uint64_t gap_every = 0;
    std::size_t n = 200;
    std::size_t d = 50;
    std::size_t p = 10;
    std::size_t q = 8;
};

/// PFW against the expected-gap bound on simplex least squares for
/// alpha in {1e-2, 1e-3} and m in {1, ceil(1/sqrt(alpha))}. Writes
/// out/figure1/a<alpha>_m<m>/seed<s>.csv and mean.csv per set.
std::vector<std::filesystem::path> figure1(const FigureOptions& opts);

/// FW, FW-LS and R-PFW with one and ceil(1/sqrt(alpha)) workers on both
/// problems and both M modes. Writes out/figure2/<problem>_<mode>/<algo>/...
std::vector<std::filesystem::path> figure2(const FigureOptions& opts);

/// Command-line entry point; `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Default output directory: $PFW_OUT_DIR, else "out".
std::filesystem::path default_out_dir();

}  // namespace pfw
