#pragma once

#include "pfw/core.hpp"

#include <cstddef>
#include <cstdint>

namespace pfw {

/// Smoothness of G (beta), strong convexity of H (mu) and of the
/// distance-generating function w (nu).
struct AlgParams {
    double beta = 1.0;
    double mu = 1.0;
    double nu = 1.0;

    // Throws ConfigError unless all three are positive and finite.
    static AlgParams make(double beta, double mu, double nu);

    double rho() const;
    // 1 + sqrt(mu) / (2 (sqrt(beta) + sqrt(mu))): guaranteed growth of A_k.
    double growth_factor() const;
};

/// A_{k+1} as the positive root of
///   (beta + rho) A^2 - (A_k (mu + 2 beta + rho) + beta nu) A + beta A_k^2 = 0,
/// with rho = sqrt(mu beta).
double next_A(double A_k, const AlgParams& p);

// Left-hand side of the quadratic above; zero at A = next_A(A_k, p).
double next_A_residual(double A_k, double A_next, const AlgParams& p);

struct IterateState {
    std::size_t k = 0;
    double A = 0.0;
    double tau = 1.0;  // tau_{k-1}; meaningless before the first step
    Point y;
    Point z;
    Point v;
    Point d;

    // A_0 = 0, d_0 = 0, y_0 = z_0.
    static IterateState initial(const Point& z0);
};

class StochGradOracle {
public:
    virtual ~StochGradOracle() = default;
    // Stochastic gradient of G at v for iteration k.
    virtual Point eval(const Point& v, std::uint64_t k) = 0;
    // Declared bound on E||g - grad G(v)||_*^2.
    virtual double variance_bound() const = 0;
};

class BregmanProxOracle {
public:
    virtual ~BregmanProxOracle() = default;
    // argmin_y <d, y> + A H(y) + beta w(y)
    virtual Point solve(const Point& d, double A, double beta) const = 0;
    // Stationarity tolerance of `solve`; zero for closed-form solvers.
    virtual double tolerance() const { return 0.0; }
};

/// One iteration of the accelerated stochastic Bregman method.
IterateState step(const IterateState& state, const AlgParams& p, StochGradOracle& grad,
                  const BregmanProxOracle& prox);

/// exp(-k sqrt(mu) / (2 (sqrt(beta) + sqrt(mu)))) beta D_w + sigma^2 / (2 sqrt(mu beta))
double theorem1_bound(std::size_t k, const AlgParams& p, double D_w, double sigma2);

}  // namespace pfw
