#pragma once

#include "pfw/core.hpp"
#include "pfw/lmo.hpp"

#include <cstddef>
#include <cstdint>
#include <string>

namespace pfw {

enum class Perturbation { Gumbel01, StdNormal };

std::string to_string(Perturbation kind);
Perturbation perturbation_from_string(const std::string& name);

struct SmoothingConfig {
    double alpha = 1.0;
    Perturbation kind = Perturbation::Gumbel01;
    std::size_t m = 1;
    double M = 1.0;
    std::uint64_t seed_root = 0;
    // Worker threads for the m oracle calls. Affects wall time only.
    int threads = 1;

    // alpha == 0 is admitted only when `allow_degenerate` is set.
    void validate(bool allow_degenerate = false) const;
};

struct Estimate {
    double mean = 0.0;
    double std_error = 0.0;
};

// Seed streams. Gradient samples use the iteration index as the stream.
inline constexpr std::uint64_t kValueStream = 0xffff'0000'0000'0001ULL;
inline constexpr std::uint64_t kS1Stream = 0xffff'0000'0000'0002ULL;

double gumbel_from_uniform(double u);

Point sample_perturbation(Perturbation kind, Shape shape, std::uint64_t seed);

/// M with M^2 = E||grad eta(Z)||^2. Both families give sqrt(d) for d
/// flattened coordinates.
double m_constant(Perturbation kind, Shape shape);

/// Averaged stochastic gradient of G(y) = s_alpha(-y):
///   g = -(1/m) sum_i argmax_{u in K} <u, -y + alpha Delta_i>.
/// Sample i draws Delta_i from derive_seed(seed_root, iter_index, i); the
/// average is accumulated in sample-index order after all samples finish.
Point smoothed_support_grad(const Point& y, const SmoothingConfig& cfg, const Lmo& lmo, std::uint64_t iter_index);

/// Monte-Carlo estimate of s_alpha(y) = E[s(y + alpha Delta)].
Estimate smoothed_support_value(const Point& y, const SmoothingConfig& cfg, const Lmo& lmo, std::size_t n_samples);

/// Monte-Carlo estimate of s_1(0) = E[sup_{x in K} <x, Delta>].
Estimate s1_at_zero(Perturbation kind, const Lmo& lmo, std::size_t n_samples, std::uint64_t seed);

}  // namespace pfw
