#include "pfw/smoothing.hpp"

#include "pfw/rng.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

namespace pfw {

namespace {

// out += scale * Delta, drawing Delta from a fresh stream.
void add_perturbation(Perturbation kind, std::uint64_t seed, double scale, Eigen::VectorXd& out) {
    CounterRng rng(seed);
    if (kind == Perturbation::Gumbel01) {
        for (Eigen::Index i = 0; i < out.size(); ++i) {
            out[i] += scale * gumbel_from_uniform(rng.uniform_open());
        }
        return;
    }
    std::normal_distribution<double> normal;
    for (Eigen::Index i = 0; i < out.size(); ++i) {
        out[i] += scale * normal(rng);
    }
}

// Direction c = sign * y + alpha * Delta for one sample.
Point perturbed_direction(const Point& y, double sign, const SmoothingConfig& cfg, std::uint64_t seed) {
    Point c(y.shape(), sign * y.data());
    if (cfg.alpha != 0.0) {
        add_perturbation(cfg.kind, seed, cfg.alpha, c.data());
    }
    return c;
}

Estimate mean_and_stderr(const std::vector<double>& values) {
    const double n = static_cast<double>(values.size());
    double mean = 0.0;
    for (double v : values) {
        mean += v;
    }
    mean /= n;
    double ss = 0.0;
    for (double v : values) {
        ss += (v - mean) * (v - mean);
    }
    const double var = values.size() > 1 ? ss / (n - 1.0) : 0.0;
    return {mean, std::sqrt(var / n)};
}

}  // namespace

std::string to_string(Perturbation kind) {
    return kind == Perturbation::Gumbel01 ? "gumbel" : "normal";
}

Perturbation perturbation_from_string(const std::string& name) {
    if (name == "gumbel") return Perturbation::Gumbel01;
    if (name == "normal") return Perturbation::StdNormal;
    throw ConfigError("unknown perturbation '" + name + "'");
}

void SmoothingConfig::validate(bool allow_degenerate) const {
    if (!(alpha > 0.0) && !(allow_degenerate && alpha == 0.0)) {
        throw ConfigError("smoothing parameter alpha must be positive");
    }
    if (m < 1) {
        throw ConfigError("sample count m must be at least 1");
    }
    if (!(M > 0.0)) {
        throw ConfigError("M constant must be positive");
    }
    if (threads < 1) {
        throw ConfigError("threads must be at least 1");
    }
}

double gumbel_from_uniform(double u) {
    return -std::log(-std::log(u));
}

Point sample_perturbation(Perturbation kind, Shape shape, std::uint64_t seed) {
    Point out(shape);
    add_perturbation(kind, seed, 1.0, out.data());
    return out;
}

double m_constant(Perturbation, Shape shape) {
    return std::sqrt(static_cast<double>(shape.size()));
}

Point smoothed_support_grad(const Point& y, const SmoothingConfig& cfg, const Lmo& lmo, std::uint64_t iter_index) {
    cfg.validate(true);
    const auto m = static_cast<std::ptrdiff_t>(cfg.m);
    std::vector<Lmo::Atom> atoms(cfg.m);

#pragma omp parallel for num_threads(cfg.threads) schedule(static) if (cfg.threads > 1 && m > 1)
    for (std::ptrdiff_t i = 0; i < m; ++i) {
        const auto seed = derive_seed(cfg.seed_root, iter_index, static_cast<std::uint64_t>(i));
        atoms[static_cast<std::size_t>(i)] = lmo.argmax_atom(perturbed_direction(y, -1.0, cfg, seed));
    }

    // Fixed-order reduction.
    Point g(y.shape());
    const double w = -1.0 / static_cast<double>(cfg.m);
    for (const auto& atom : atoms) {
        lmo.add_atom(atom, w, g);
    }
    return g;
}

Estimate smoothed_support_value(const Point& y, const SmoothingConfig& cfg, const Lmo& lmo, std::size_t n_samples) {
    cfg.validate(true);
    if (n_samples < 1) {
        throw ConfigError("smoothed_support_value needs at least one sample");
    }
    std::vector<double> values(n_samples);
    const auto n = static_cast<std::ptrdiff_t>(n_samples);
#pragma omp parallel for num_threads(cfg.threads) schedule(static) if (cfg.threads > 1)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        const auto seed = derive_seed(cfg.seed_root, kValueStream, static_cast<std::uint64_t>(i));
        values[static_cast<std::size_t>(i)] = lmo.argmax_atom(perturbed_direction(y, 1.0, cfg, seed)).value;
    }
    return mean_and_stderr(values);
}

Estimate s1_at_zero(Perturbation kind, const Lmo& lmo, std::size_t n_samples, std::uint64_t seed) {
    if (n_samples < 10000) {
        throw ConfigError("s1_at_zero needs at least 1e4 samples");
    }
    std::vector<double> values(n_samples);
    for (std::size_t i = 0; i < n_samples; ++i) {
        const Point delta = sample_perturbation(kind, lmo.shape(), derive_seed(seed, kS1Stream, i));
        values[i] = lmo.argmax_atom(delta).value;
    }
    return mean_and_stderr(values);
}

}  // namespace pfw
