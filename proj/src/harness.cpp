#include "pfw/harness.hpp"

#include "pfw/rng.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;

namespace pfw {

namespace {

constexpr std::uint64_t kSamplingStream = 0x73616d706c65ULL;
constexpr std::uint64_t kConstantsStream = 0x636f6e7374ULL;

std::string alpha_tag(double alpha) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", alpha);
    return buf;
}

std::size_t inv_sqrt_workers(double alpha) {
    return static_cast<std::size_t>(std::max(1.0, std::ceil(1.0 / std::sqrt(alpha))));
}

std::string join(const std::vector<std::uint64_t>& xs) {
    std::string s;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        s += (i ? "," : "") + std::to_string(xs[i]);
    }
    return s;
}

void describe_problem(ExperimentMeta& meta, const Instance& inst, const InstanceConstants& c) {
    meta.set("problem", to_string(inst.spec.kind));
    if (inst.spec.kind == ProblemKind::SimplexLS) {
        meta.set("n", std::uint64_t{inst.spec.n});
        meta.set("d", std::uint64_t{inst.spec.d});
    } else {
        meta.set("p", std::uint64_t{inst.spec.p});
        meta.set("q", std::uint64_t{inst.spec.q});
    }
    meta.set("seed", inst.spec.seed);
    meta.set("generator", "mt19937_64 standard normal, row-major, first matrix then second");
    meta.set("perturbation", to_string(inst.perturbation));
    meta.set("L", c.L);
    meta.set("R_K", inst.R_K);
    meta.set("M", inst.M);
    meta.set("rho", inst.rho);
    meta.set("s1_0", c.s1_0.mean);
    meta.set("s1_0_stderr", c.s1_0.std_error);
    meta.set("f_star", c.f_star.value);
    meta.set("f_star_method", "max_k f(x_k) - gap_k along FW-LS");
    meta.set("f_star_iterations", c.f_star.iterations);
}

LogSchedule make_schedule(std::uint64_t gap_every) {
    LogSchedule s;
    s.every = gap_every;
    return s;
}

// Files written so far; removed unless `commit` is called.
class OutputGuard {
public:
    void add(const fs::path& csv) {
        files_.push_back(csv);
        files_.push_back(meta_path_for(csv));
    }
    void commit() { files_.clear(); }
    ~OutputGuard() {
        std::error_code ec;
        for (const auto& f : files_) {
            fs::remove(f, ec);
        }
    }
    std::vector<fs::path> csvs() const {
        std::vector<fs::path> out;
        for (std::size_t i = 0; i < files_.size(); i += 2) {
            out.push_back(files_[i]);
        }
        return out;
    }

private:
    std::vector<fs::path> files_;
};

fs::path write_run(OutputGuard& guard, const fs::path& path, const std::vector<RunRecord>& trace,
                   const ExperimentMeta& meta) {
    fs::create_directories(path.parent_path());
    guard.add(path);
    write_trace(path, trace, meta);
    return path;
}

struct SeedSet {
    std::vector<std::vector<RunRecord>> traces;
    ExperimentMeta meta;
};

void write_set(OutputGuard& guard, const fs::path& dir, const std::vector<std::uint64_t>& seeds, SeedSet& set) {
    for (std::size_t i = 0; i < seeds.size(); ++i) {
        write_run(guard, dir / ("seed" + std::to_string(seeds[i]) + ".csv"), set.traces[i], set.meta);
    }
    ExperimentMeta mean_meta = set.meta;
    mean_meta.set("seed", "mean");
    mean_meta.set("seeds", join(seeds));
    write_run(guard, dir / "mean.csv", mean_trace(set.traces), mean_meta);
}

Instance instance_for(const FigureOptions& opts, ProblemKind kind, std::uint64_t seed) {
    ProblemSpec spec;
    spec.kind = kind;
    spec.n = opts.n;
    spec.d = opts.d;
    spec.p = opts.p;
    spec.q = opts.q;
    spec.seed = seed;
    return make_instance(spec);
}

}  // namespace

std::string to_string(ProblemKind kind) {
    return kind == ProblemKind::SimplexLS ? "simplex-ls" : "trace-mc";
}

std::string to_string(MMode mode) {
    return mode == MMode::Theory ? "theory" : "one";
}

std::string to_string(Algorithm algo) {
    switch (algo) {
        case Algorithm::Pfw: return "pfw";
        case Algorithm::Rpfw: return "rpfw";
        case Algorithm::Fw: return "fw";
        case Algorithm::FwLs: return "fw-ls";
    }
    return "?";
}

std::string to_string(WorkerMode mode) {
    return mode == WorkerMode::One ? "one" : "inv-sqrt-alpha";
}

Instance make_instance(const ProblemSpec& spec) {
    if (spec.kind == ProblemKind::SimplexLS) {
        if (spec.n < 1 || spec.d < 1) {
            throw ConfigError("simplex-ls needs n, d >= 1");
        }
        auto problem = std::make_unique<SimplexLS>(make_simplex_ls(spec.n, spec.d, spec.seed));
        Lmo lmo = Lmo::simplex(spec.d);
        const double M = m_constant(Perturbation::Gumbel01, lmo.shape());
        const double rho = rho_constant(NormKind::l2(), spec.d).value;
        return Instance{spec, std::move(problem), std::move(lmo), Perturbation::Gumbel01, 1.0, M, rho};
    }
    if (spec.p < 1 || spec.q < 1) {
        throw ConfigError("trace-mc needs p, q >= 1");
    }
    auto problem = std::make_unique<TraceMC>(make_trace_mc(spec.p, spec.q, spec.seed));
    Lmo lmo = Lmo::trace_ball(spec.p, spec.q);
    const double M = m_constant(Perturbation::StdNormal, lmo.shape());
    const double rho = rho_constant(NormKind::frobenius(), spec.p * spec.q).value;
    return Instance{spec, std::move(problem), std::move(lmo), Perturbation::StdNormal, 1.0, M, rho};
}

InstanceConstants estimate_constants(const Instance& inst, std::size_t s1_samples, std::uint64_t f_star_iterations) {
    InstanceConstants c;
    c.L = inst.problem->L();
    c.s1_0 = s1_at_zero(inst.perturbation, inst.lmo, s1_samples, derive_seed(inst.spec.seed, kConstantsStream, 0));
    c.f_star = estimate_f_star(*inst.problem, inst.lmo, f_star_iterations);
    return c;
}

std::uint64_t sampling_root(std::uint64_t seed) {
    return derive_seed(seed, kSamplingStream, 0);
}

RunOutput run_experiment(const RunOptions& opts) {
    const Instance inst = make_instance(opts.problem);
    return run_experiment(opts, inst, estimate_constants(inst));
}

RunOutput run_experiment(const RunOptions& opts, const Instance& inst, const InstanceConstants& constants) {
    if (opts.iters < 1) {
        throw ConfigError("--iters must be at least 1");
    }
    if (opts.threads < 1) {
        throw ConfigError("--threads must be at least 1");
    }
    RunOutput out;
    ExperimentMeta& meta = out.meta;
    meta.set("algorithm", to_string(opts.algo));
    describe_problem(meta, inst, constants);
    meta.set("iterations", opts.iters);
    meta.set("gap_every", opts.gap_every);
    meta.set("version", kVersion);

    const LogSchedule log = make_schedule(opts.gap_every);
    const Point x0 = inst.lmo.default_start();
    const double f_gap0 = std::max(0.0, inst.problem->f(x0) - constants.f_star.value);
    meta.set("f_gap0", f_gap0);

    if (opts.algo == Algorithm::Fw || opts.algo == Algorithm::FwLs) {
        const auto variant = opts.algo == Algorithm::Fw ? FwVariant::Fixed : FwVariant::LineSearch;
        FwRun run = run_fw(variant, x0, opts.iters, *inst.problem, inst.lmo, log);
        meta.set("lmo_calls", run.lmo_calls);
        out.trace = std::move(run.trace);
        return out;
    }

    PfwConfig cfg;
    cfg.L = constants.L;
    cfg.x0 = x0;
    cfg.R_K = inst.R_K;
    cfg.T = opts.iters;
    cfg.smoothing.alpha = opts.alpha;
    cfg.smoothing.kind = inst.perturbation;
    cfg.smoothing.m = opts.m;
    cfg.smoothing.M = opts.m_mode == MMode::Theory ? inst.M : 1.0;
    cfg.smoothing.seed_root = sampling_root(inst.spec.seed);
    cfg.smoothing.threads = opts.threads;
    meta.set("M_mode", to_string(opts.m_mode));
    meta.set("M_used", cfg.smoothing.M);
    meta.set("threads", opts.threads);
    meta.set("sampling_root", cfg.smoothing.seed_root);

    BoundInputs b;
    b.L = constants.L;
    b.R_K = inst.R_K;
    b.M = inst.M;
    b.alpha = opts.alpha;
    b.m = opts.m;
    b.rho = inst.rho;
    b.s1_0 = constants.s1_0.mean;
    b.f_gap0 = f_gap0;

    if (opts.algo == Algorithm::Pfw) {
        meta.set("alpha", opts.alpha);
        meta.set("m", std::uint64_t{opts.m});
        meta.set("beta", cfg.beta());
        std::optional<BoundInputs> bound;
        if (opts.with_bound) {
            bound = b;
        }
        PfwRun run = run_pfw(cfg, *inst.problem, inst.lmo, log, bound);
        meta.set("lmo_calls", run.lmo_calls);
        out.trace = std::move(run.trace);
        return out;
    }

    RestartConfig rc;
    rc.m_mode = opts.workers;
    rc.outer_rounds = opts.rounds;
    rc.max_iterations = opts.iters;
    cfg.smoothing.alpha = rc.initial_alpha;
    meta.set("workers", to_string(opts.workers));
    meta.set("c", rc.c);
    meta.set("outer_rounds", opts.rounds);
    RestartRun run = run_restarted(rc, cfg, *inst.problem, inst.lmo, log);
    meta.set("lmo_calls", run.lmo_calls);
    meta.set("rounds_run", std::uint64_t{run.rounds.size()});
    std::string alphas, workers;
    for (std::size_t i = 0; i < run.rounds.size(); ++i) {
        alphas += (i ? "," : "") + format_real(run.rounds[i].alpha);
        workers += (i ? "," : "") + std::to_string(run.rounds[i].plan.T) + "x" + std::to_string(run.rounds[i].plan.m);
    }
    meta.set("round_alphas", alphas);
    meta.set("round_T_x_m", workers);
    out.trace = std::move(run.trace);
    return out;
}

std::vector<RunRecord> mean_trace(const std::vector<std::vector<RunRecord>>& traces) {
    if (traces.empty()) {
        return {};
    }
    const std::size_t rows = traces.front().size();
    for (const auto& t : traces) {
        if (t.size() != rows) {
            throw InvariantViolation("mean_trace: traces differ in length");
        }
    }
    const double n = static_cast<double>(traces.size());
    std::vector<RunRecord> mean(rows);
    for (std::size_t r = 0; r < rows; ++r) {
        RunRecord& acc = mean[r];
        acc = traces.front()[r];
        acc.primal = acc.dual = acc.gap = acc.best_gap = acc.bound = 0.0;
        double wall = 0.0;
        for (const auto& t : traces) {
            const RunRecord& x = t[r];
            if (x.iteration != acc.iteration) {
                throw InvariantViolation("mean_trace: iteration columns differ");
            }
            acc.primal += x.primal / n;
            acc.dual += x.dual / n;
            acc.gap += x.gap / n;
            acc.best_gap += x.best_gap / n;
            acc.bound += x.bound / n;
            wall += static_cast<double>(x.wall_ns) / n;
        }
        acc.wall_ns = static_cast<std::int64_t>(wall);
    }
    return mean;
}

std::vector<fs::path> figure1(const FigureOptions& opts) {
    if (opts.seeds.empty()) {
        throw ConfigError("figure1 needs at least one seed");
    }
    const std::uint64_t iters = opts.iters ? opts.iters : 100000;
    const std::vector<double> alphas{1e-2, 1e-3};

    std::vector<Instance> instances;
    std::vector<InstanceConstants> constants;
    for (auto seed : opts.seeds) {
        instances.push_back(instance_for(opts, ProblemKind::SimplexLS, seed));
        constants.push_back(estimate_constants(instances.back()));
    }

    OutputGuard guard;
    for (double alpha : alphas) {
        for (std::size_t m : {std::size_t{1}, inv_sqrt_workers(alpha)}) {
            SeedSet set;
            for (std::size_t i = 0; i < opts.seeds.size(); ++i) {
                RunOptions ro;
                ro.algo = Algorithm::Pfw;
                ro.problem = instances[i].spec;
                ro.alpha = alpha;
                ro.m = m;
                ro.iters = iters;
                ro.threads = opts.threads;
                ro.gap_every = opts.gap_every;
                RunOutput r = run_experiment(ro, instances[i], constants[i]);
                set.traces.push_back(std::move(r.trace));
                set.meta = std::move(r.meta);
            }
            const fs::path dir = opts.out / "figure1" / ("a" + alpha_tag(alpha) + "_m" + std::to_string(m));
            write_set(guard, dir, opts.seeds, set);
        }
    }
    auto written = guard.csvs();
    guard.commit();
    return written;
}

std::vector<fs::path> figure2(const FigureOptions& opts) {
    if (opts.seeds.empty()) {
        throw ConfigError("figure2 needs at least one seed");
    }
    OutputGuard guard;
    for (ProblemKind kind : {ProblemKind::SimplexLS, ProblemKind::TraceMC}) {
        const std::uint64_t iters = opts.iters ? opts.iters : (kind == ProblemKind::SimplexLS ? 100000 : 10000);
        std::vector<Instance> instances;
        std::vector<InstanceConstants> constants;
        for (auto seed : opts.seeds) {
            instances.push_back(instance_for(opts, kind, seed));
            constants.push_back(estimate_constants(instances.back()));
        }

        auto run_set = [&](const RunOptions& base) {
            SeedSet set;
            for (std::size_t i = 0; i < opts.seeds.size(); ++i) {
                RunOptions ro = base;
                ro.problem = instances[i].spec;
                ro.iters = iters;
                ro.threads = opts.threads;
                ro.gap_every = opts.gap_every;
                RunOutput r = run_experiment(ro, instances[i], constants[i]);
                set.traces.push_back(std::move(r.trace));
                set.meta = std::move(r.meta);
            }
            return set;
        };

        RunOptions fw;
        fw.algo = Algorithm::Fw;
        SeedSet fw_set = run_set(fw);
        fw.algo = Algorithm::FwLs;
        SeedSet fwls_set = run_set(fw);

        for (MMode mode : {MMode::Theory, MMode::One}) {
            const fs::path panel = opts.out / "figure2" / (to_string(kind) + "_" + to_string(mode));
            write_set(guard, panel / "fw", opts.seeds, fw_set);
            write_set(guard, panel / "fw-ls", opts.seeds, fwls_set);
            for (WorkerMode workers : {WorkerMode::One, WorkerMode::InvSqrtAlpha}) {
                RunOptions ro;
                ro.algo = Algorithm::Rpfw;
                ro.m_mode = mode;
                ro.workers = workers;
                ro.rounds = 64;
                SeedSet set = run_set(ro);
                write_set(guard, panel / (workers == WorkerMode::One ? "rpfw-m1" : "rpfw-msqrt"), opts.seeds, set);
            }
        }
    }
    auto written = guard.csvs();
    guard.commit();
    return written;
}

fs::path default_out_dir() {
    if (const char* env = std::getenv("PFW_OUT_DIR"); env && *env) {
        return env;
    }
    return "out";
}

namespace {

struct CliProblem {
    std::string problem = "simplex-ls";
    std::size_t n = 200, d = 50, p = 10, q = 8;

    void add(CLI::App* app) {
        app->add_option("--problem", problem, "Problem instance")
            ->check(CLI::IsMember({"simplex-ls", "trace-mc"}));
        app->add_option("--n", n, "Rows of A (simplex-ls)")->check(CLI::PositiveNumber);
        app->add_option("--d", d, "Dimension (simplex-ls)")->check(CLI::PositiveNumber);
        app->add_option("--p", p, "Rows of X (trace-mc)")->check(CLI::PositiveNumber);
        app->add_option("--q", q, "Columns of X (trace-mc)")->check(CLI::PositiveNumber);
    }
    ProblemSpec spec(std::uint64_t seed) const {
        ProblemSpec s;
        s.kind = problem == "simplex-ls" ? ProblemKind::SimplexLS : ProblemKind::TraceMC;
        s.n = n;
        s.d = d;
        s.p = p;
        s.q = q;
        s.seed = seed;
        return s;
    }
};

std::string run_file_name(const RunOptions& o) {
    std::string name = to_string(o.algo);
    if (o.algo == Algorithm::Rpfw) {
        name += o.workers == WorkerMode::One ? "-m1" : "-msqrt";
    }
    name += "_" + to_string(o.problem.kind);
    if (o.algo == Algorithm::Pfw) {
        name += "_a" + alpha_tag(o.alpha) + "_m" + std::to_string(o.m);
    }
    if (o.algo == Algorithm::Pfw || o.algo == Algorithm::Rpfw) {
        name += "_" + to_string(o.m_mode);
    }
    return name + "_seed" + std::to_string(o.problem.seed) + ".csv";
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Parallel Frank-Wolfe experiments", "pfw"};
    app.require_subcommand(1);

    // run
    CLI::App* run = app.add_subcommand("run", "Run one algorithm on one instance");
    CliProblem run_problem;
    run_problem.add(run);
    std::string algo = "pfw", m_mode = "theory", workers = "inv-sqrt-alpha";
    RunOptions ro;
    std::uint64_t seed = 1;
    std::string out_dir = default_out_dir().string();
    run->add_option("--algo", algo, "Algorithm")->check(CLI::IsMember({"pfw", "rpfw", "fw", "fw-ls"}));
    run->add_option("--alpha", ro.alpha, "Smoothing parameter (pfw)")->check(CLI::PositiveNumber);
    run->add_option("--m", ro.m, "Parallel oracle calls per iteration (pfw)")->check(CLI::PositiveNumber);
    run->add_option("--M-mode", m_mode, "M constant used by the algorithm")->check(CLI::IsMember({"theory", "one"}));
    run->add_option("--m-mode", workers, "R-PFW worker schedule")->check(CLI::IsMember({"one", "inv-sqrt-alpha"}));
    run->add_option("--rounds", ro.rounds, "R-PFW outer rounds")->check(CLI::PositiveNumber);
    run->add_option("--iters", ro.iters, "Iterations")->check(CLI::PositiveNumber);
    run->add_option("--seed", seed, "Instance and sampling seed");
    run->add_option("--out", out_dir, "Output directory");
    run->add_option("--gap-every", ro.gap_every, "Gap evaluation stride (0: dense, then log-spaced)");
    run->add_option("--threads", ro.threads, "Worker threads")->check(CLI::PositiveNumber);

    // figure1 / figure2
    FigureOptions fo;
    std::string fig_out = default_out_dir().string();
    auto add_figure = [&](const std::string& name, const std::string& desc) {
        CLI::App* sub = app.add_subcommand(name, desc);
        sub->add_option("--seeds", fo.seeds, "Comma-separated seeds")->delimiter(',');
        sub->add_option("--iters", fo.iters, "Iterations (0: default)");
        sub->add_option("--out", fig_out, "Output directory");
        sub->add_option("--gap-every", fo.gap_every, "Gap evaluation stride");
        sub->add_option("--threads", fo.threads, "Worker threads")->check(CLI::PositiveNumber);
        sub->add_option("--n", fo.n)->check(CLI::PositiveNumber);
        sub->add_option("--d", fo.d)->check(CLI::PositiveNumber);
        sub->add_option("--p", fo.p)->check(CLI::PositiveNumber);
        sub->add_option("--q", fo.q)->check(CLI::PositiveNumber);
        return sub;
    };
    CLI::App* fig1 = add_figure("figure1", "PFW against the expected-gap bound");
    CLI::App* fig2 = add_figure("figure2", "FW, FW-LS and restarted PFW on both problems");

    // estimate
    CLI::App* est = app.add_subcommand("estimate", "Print s1(0), L and f* for an instance");
    CliProblem est_problem;
    est_problem.add(est);
    std::uint64_t est_seed = 1;
    std::size_t samples = kS1Samples;
    est->add_option("--seed", est_seed, "Instance seed");
    est->add_option("--samples", samples, "Monte-Carlo samples for s1(0)")->check(CLI::Range(10000, 100000000));

    std::vector<const char*> argv{"pfw"};
    for (const auto& a : args) {
        argv.push_back(a.c_str());
    }

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kExitConfig;
    }

    try {
        if (*run) {
            ro.algo = algo == "pfw" ? Algorithm::Pfw
                      : algo == "rpfw" ? Algorithm::Rpfw
                      : algo == "fw" ? Algorithm::Fw
                                     : Algorithm::FwLs;
            ro.m_mode = m_mode == "theory" ? MMode::Theory : MMode::One;
            ro.workers = workers == "one" ? WorkerMode::One : WorkerMode::InvSqrtAlpha;
            ro.problem = run_problem.spec(seed);
            RunOutput r = run_experiment(ro);
            OutputGuard guard;
            const fs::path path = write_run(guard, fs::path(out_dir) / run_file_name(ro), r.trace, r.meta);
            guard.commit();
            out << path.string() << "\n";
        } else if (*fig1 || *fig2) {
            fo.out = fig_out;
            const auto files = *fig1 ? figure1(fo) : figure2(fo);
            for (const auto& f : files) {
                out << f.string() << "\n";
            }
        } else if (*est) {
            const Instance inst = make_instance(est_problem.spec(est_seed));
            const InstanceConstants c = estimate_constants(inst, samples);
            out << "problem=" << to_string(inst.spec.kind) << "\n";
            out << "seed=" << est_seed << "\n";
            out << "dimension=" << inst.lmo.shape().to_string() << "\n";
            out << "perturbation=" << to_string(inst.perturbation) << "\n";
            out << "s1_0=" << format_real(c.s1_0.mean) << "\n";
            out << "s1_0_stderr=" << format_real(c.s1_0.std_error) << "\n";
            out << "L=" << format_real(c.L) << "\n";
            out << "M=" << format_real(inst.M) << "\n";
            out << "R_K=" << format_real(inst.R_K) << "\n";
            out << "rho=" << format_real(inst.rho) << "\n";
            out << "f_star=" << format_real(c.f_star.value) << "\n";
            out << "f_star_iterations=" << c.f_star.iterations << "\n";
        }
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const InvariantViolation& e) {
        err << "invariant violated: " << e.what() << "\n";
        return kExitInvariant;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitError;
    }
    return kExitOk;
}

}  // namespace pfw
