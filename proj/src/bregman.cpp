#include "pfw/bregman.hpp"

#include <cmath>
#include <sstream>

namespace pfw {

AlgParams AlgParams::make(double beta, double mu, double nu) {
    auto positive = [](double x) { return std::isfinite(x) && x > 0.0; };
    if (!positive(beta) || !positive(mu) || !positive(nu)) {
        std::ostringstream os;
        os << "AlgParams: beta, mu, nu must be positive and finite (got " << beta << ", " << mu << ", " << nu
           << ")";
        throw ConfigError(os.str());
    }
    return {beta, mu, nu};
}

double AlgParams::rho() const {
    return std::sqrt(mu * beta);
}

double AlgParams::growth_factor() const {
    return 1.0 + std::sqrt(mu) / (2.0 * (std::sqrt(beta) + std::sqrt(mu)));
}

double next_A(double A_k, const AlgParams& p) {
    if (!(A_k >= 0.0)) {
        throw std::invalid_argument("next_A: A_k must be nonnegative");
    }
    const double beta = p.beta;
    const double mu = p.mu;
    const double nu = p.nu;
    const double rho = p.rho();
    const double bn = beta * nu;
    const double disc = (bn + mu * A_k) * (bn + mu * A_k) + 4.0 * A_k * beta * beta * nu +
                        5.0 * A_k * A_k * mu * beta + 2.0 * A_k * rho * (bn + A_k * mu);
    const double next = (A_k * (mu + 2.0 * beta + rho) + bn + std::sqrt(disc)) / (2.0 * (beta + rho));
    if (!std::isfinite(next)) {
        std::ostringstream os;
        os << "next_A: non-finite coefficient from A_k=" << A_k << " (beta=" << beta << ", mu=" << mu
           << ", nu=" << nu << ")";
        throw NumericalError(os.str());
    }
    return next;
}

double next_A_residual(double A_k, double A_next, const AlgParams& p) {
    const double rho = p.rho();
    return (p.beta + rho) * A_next * A_next - (A_k * (p.mu + 2.0 * p.beta + rho) + p.beta * p.nu) * A_next +
           p.beta * A_k * A_k;
}

IterateState IterateState::initial(const Point& z0) {
    IterateState s;
    s.y = z0;
    s.z = z0;
    s.v = z0;
    s.d = Point(z0.shape());
    return s;
}

IterateState step(const IterateState& state, const AlgParams& p, StochGradOracle& grad,
                  const BregmanProxOracle& prox) {
    IterateState next;
    next.k = state.k + 1;
    next.A = next_A(state.A, p);
    const double tau = 1.0 - state.A / next.A;
    next.tau = tau;
    next.v = lerp(state.y, state.z, tau);

    try {
        const Point g = grad.eval(next.v, state.k);
        next.d = state.d + (next.A - state.A) * g;
        next.z = prox.solve(next.d, next.A, p.beta);
    } catch (const Error&) {
        rethrow_with_context("iteration " + std::to_string(state.k));
    }
    next.y = lerp(state.y, next.z, tau);

    next.y.require_finite("bregman::step y");
    next.z.require_finite("bregman::step z");
    return next;
}

double theorem1_bound(std::size_t k, const AlgParams& p, double D_w, double sigma2) {
    const double rate = std::sqrt(p.mu) / (2.0 * (std::sqrt(p.beta) + std::sqrt(p.mu)));
    return std::exp(-static_cast<double>(k) * rate) * p.beta * D_w + sigma2 / (2.0 * p.rho());
}

}  // namespace pfw
