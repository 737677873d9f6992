#pragma once

#include "pfw/bregman.hpp"

#include <cstdint>

namespace pfw {

/// Strongly convex quadratic composite problem with known minimizer:
///   G(y) = 1/2 ||B y - c||^2        (beta = lambda_max(B^T B))
///   H(y) = mu/2 ||y - h||^2
///   w(y) = 1/2 ||y - z0||^2         (nu = 1, minimized at z0)
/// B is (2 dim x dim) with N(0, 1/(2 dim)) entries; c, h, z0 are N(0, 1).
class QuadraticFixture {
public:
    QuadraticFixture(std::size_t dim, std::uint64_t seed, double mu = 0.1, double sigma2 = 0.0);

    class NoisyGradient final : public StochGradOracle {
    public:
        NoisyGradient(const QuadraticFixture& fx, std::uint64_t seed) : fx_(fx), seed_(seed) {}
        // grad G(v) plus isotropic Gaussian noise with E||noise||^2 = sigma2.
        Point eval(const Point& v, std::uint64_t k) override;
        double variance_bound() const override { return fx_.sigma2(); }

    private:
        const QuadraticFixture& fx_;
        std::uint64_t seed_;
    };

    class ClosedFormProx final : public BregmanProxOracle {
    public:
        explicit ClosedFormProx(const QuadraticFixture& fx) : fx_(fx) {}
        // Stationarity d + A mu (y - h) + beta (y - z0) = 0.
        Point solve(const Point& d, double A, double beta) const override;

    private:
        const QuadraticFixture& fx_;
    };

    double G(const Point& y) const;
    Point grad_G(const Point& y) const;
    double H(const Point& y) const;
    double w(const Point& y) const;
    double F(const Point& y) const { return G(y) + H(y); }

    const AlgParams& params() const { return params_; }
    double sigma2() const { return sigma2_; }
    const Point& z0() const { return z0_; }
    const Point& h() const { return h_; }
    const Point& y_star() const { return y_star_; }
    double F_star() const { return F_star_; }
    // w(y*) - w(z0); a Bregman divergence since z0 minimizes w.
    double D_w() const { return w(y_star_) - w(z0_); }

    NoisyGradient gradient_oracle(std::uint64_t seed) const { return NoisyGradient(*this, seed); }
    ClosedFormProx prox_oracle() const { return ClosedFormProx(*this); }

private:
    Eigen::MatrixXd b_;
    Eigen::VectorXd c_;
    Point h_;
    Point z0_;
    Point y_star_;
    double F_star_ = 0.0;
    double sigma2_ = 0.0;
    AlgParams params_;
};

}  // namespace pfw
