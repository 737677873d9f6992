#include "pfw/harness.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <sstream>

using namespace pfw;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("pfw_harness_" + name);
    fs::remove_all(dir);
    return dir;
}

struct CliResult {
    int code;
    std::string out;
    std::string err;
};

CliResult cli(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

std::string first_line(const std::string& s) {
    return s.substr(0, s.find('\n'));
}

void strip_wall_time(std::vector<RunRecord>& rows) {
    for (auto& r : rows) r.wall_ns = 0;
}

}  // namespace

TEST_CASE("instances") {
    ProblemSpec spec;
    spec.d = 12;
    spec.n = 30;
    const Instance simplex = make_instance(spec);
    CHECK(simplex.perturbation == Perturbation::Gumbel01);
    CHECK(simplex.M == doctest::Approx(std::sqrt(12.0)));
    CHECK(simplex.R_K == 1.0);
    CHECK(simplex.rho == 1.0);

    spec.kind = ProblemKind::TraceMC;
    spec.p = 5;
    spec.q = 4;
    const Instance trace = make_instance(spec);
    CHECK(trace.perturbation == Perturbation::StdNormal);
    CHECK(trace.M == doctest::Approx(std::sqrt(20.0)));
    CHECK(trace.lmo.shape() == Shape::matrix(5, 4));
    CHECK(sampling_root(1) != sampling_root(2));
}

TEST_CASE("run_experiment records the constants") {
    RunOptions o;
    o.problem.n = 30;
    o.problem.d = 8;
    o.iters = 300;
    o.alpha = 0.05;
    o.m = 3;
    const RunOutput r = run_experiment(o);
    for (const char* key : {"problem", "seed", "L", "R_K", "M", "rho", "s1_0", "f_star", "alpha", "m", "beta",
                            "M_mode", "M_used", "threads", "sampling_root", "version", "lmo_calls"}) {
        CHECK_MESSAGE(r.meta.find(key) != nullptr, key);
    }
    CHECK(r.trace.back().iteration == 300);
    for (const auto& row : r.trace) {
        CHECK(std::isfinite(row.bound));
        CHECK(row.alpha == 0.05);
        CHECK(row.m == 3);
    }

    o.m_mode = MMode::One;
    CHECK(std::stod(*run_experiment(o).meta.find("M_used")) == 1.0);
}

TEST_CASE("mean trace") {
    std::vector<RunRecord> a(2), b(2);
    a[0] = {0, 1.0, 0.0, 1.0, 1.0, 4.0, 0.1, 2, 10};
    a[1] = {5, 0.5, 0.0, 0.5, 0.5, 2.0, 0.1, 2, 20};
    b[0] = {0, 3.0, 1.0, 2.0, 2.0, 4.0, 0.1, 2, 30};
    b[1] = {5, 1.5, 1.0, 0.5, 0.5, 2.0, 0.1, 2, 40};
    const auto mean = mean_trace({a, b});
    CHECK(mean[0].primal == 2.0);
    CHECK(mean[0].gap == 1.5);
    CHECK(mean[1].best_gap == 0.5);
    CHECK(mean[1].wall_ns == 30);
    CHECK(mean[1].iteration == 5);
    b[1].iteration = 6;
    CHECK_THROWS_AS(mean_trace({a, b}), InvariantViolation);
    b.pop_back();
    CHECK_THROWS_AS(mean_trace({a, b}), InvariantViolation);
    CHECK(mean_trace({}).empty());
}

TEST_CASE("cli exit codes") {
    CHECK(cli({}).code == kExitConfig);
    CHECK(cli({"run", "--bogus"}).code == kExitConfig);
    CHECK(cli({"run", "--problem", "lasso"}).code == kExitConfig);
    CHECK(cli({"run", "--alpha", "-1"}).code == kExitConfig);
    CHECK(cli({"--help"}).code == kExitOk);

    const fs::path dir = scratch("codes");
    const CliResult big = cli({"run", "--n", "20", "--d", "5", "--alpha", "1e9", "--iters", "5", "--out", dir.string()});
    CHECK(big.code == kExitConfig);
    CHECK(big.err.find("decrease alpha") != std::string::npos);
    CHECK((!fs::exists(dir) || fs::is_empty(dir)));
    fs::remove_all(dir);
}

TEST_CASE("cli run writes a trace and its metadata") {
    const fs::path dir = scratch("run");
    const CliResult r = cli({"run", "--n", "30", "--d", "8", "--alpha", "0.01", "--m", "4", "--iters", "200",
                             "--seed", "3", "--out", dir.string()});
    REQUIRE(r.code == kExitOk);
    const fs::path csv = first_line(r.out);
    CHECK(csv.filename() == "pfw_simplex-ls_a0.01_m4_theory_seed3.csv");
    const auto rows = read_trace(csv);
    CHECK(rows.front().iteration == 0);
    CHECK(rows.back().iteration == 200);
    const ExperimentMeta meta = read_meta(meta_path_for(csv));
    CHECK(*meta.find("seed") == "3");
    CHECK(*meta.find("algorithm") == "pfw");

    for (const char* algo : {"fw", "fw-ls", "rpfw"}) {
        const CliResult b = cli({"run", "--problem", "trace-mc", "--p", "5", "--q", "4", "--algo", algo, "--iters",
                                 "100", "--out", dir.string()});
        CHECK_MESSAGE(b.code == kExitOk, algo << ": " << b.err);
        if (b.code == kExitOk) {
            CHECK(read_trace(first_line(b.out)).back().iteration == 100);
        }
    }
    fs::remove_all(dir);
}

TEST_CASE("cli output is identical across thread counts") {
    const fs::path one = scratch("threads1"), eight = scratch("threads8");
    for (const char* problem : {"simplex-ls", "trace-mc"}) {
        const std::vector<std::string> base{"run",   "--problem", problem, "--n",      "30",  "--d",
                                            "8",     "--p",       "5",     "--q",      "4",   "--alpha",
                                            "0.01",  "--m",       "9",     "--iters",  "150", "--seed",
                                            "2"};
        auto a_args = base, b_args = base;
        a_args.insert(a_args.end(), {"--threads", "1", "--out", one.string()});
        b_args.insert(b_args.end(), {"--threads", "8", "--out", eight.string()});
        const CliResult a = cli(a_args), b = cli(b_args);
        REQUIRE(a.code == kExitOk);
        REQUIRE(b.code == kExitOk);
        auto ta = read_trace(first_line(a.out));
        auto tb = read_trace(first_line(b.out));
        strip_wall_time(ta);
        strip_wall_time(tb);
        CHECK(ta == tb);
    }
    fs::remove_all(one);
    fs::remove_all(eight);
}

TEST_CASE("cli estimate") {
    const CliResult r = cli({"estimate", "--n", "30", "--d", "8", "--seed", "4", "--samples", "20000"});
    REQUIRE(r.code == kExitOk);
    for (const char* key : {"s1_0=", "L=", "f_star=", "M=", "rho="}) {
        CHECK(r.out.find(std::string("\n") + key) != std::string::npos);
    }
    CHECK(cli({"estimate", "--samples", "10"}).code == kExitConfig);
}

TEST_CASE("figure commands lay out their files") {
    const fs::path dir = scratch("figures");
    const CliResult f1 = cli({"figure1", "--seeds", "1,2", "--iters", "100", "--d", "8", "--n", "30", "--out",
                              dir.string()});
    REQUIRE(f1.code == kExitOk);
    for (const char* set : {"a0.01_m1", "a0.01_m10", "a0.001_m1", "a0.001_m32"}) {
        CHECK_MESSAGE(fs::exists(dir / "figure1" / set / "seed1.csv"), set);
        CHECK_MESSAGE(fs::exists(dir / "figure1" / set / "seed2.csv"), set);
        CHECK_MESSAGE(fs::exists(dir / "figure1" / set / "mean.csv"), set);
    }

    const CliResult f2 = cli({"figure2", "--seeds", "1", "--iters", "60", "--d", "8", "--n", "30", "--p", "5", "--q",
                              "4", "--out", dir.string()});
    REQUIRE(f2.code == kExitOk);
    for (const char* panel : {"simplex-ls_theory", "simplex-ls_one", "trace-mc_theory", "trace-mc_one"}) {
        for (const char* algo : {"fw", "fw-ls", "rpfw-m1", "rpfw-msqrt"}) {
            CHECK_MESSAGE(fs::exists(dir / "figure2" / panel / algo / "mean.csv"), panel << "/" << algo);
        }
    }
    fs::remove_all(dir);
}
