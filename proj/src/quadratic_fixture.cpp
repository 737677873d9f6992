#include "pfw/quadratic_fixture.hpp"

#include "pfw/rng.hpp"

#include <cmath>
#include <random>

namespace pfw {

namespace {

constexpr std::uint64_t kNoiseStream = 0x6e6f697365ULL;

Eigen::VectorXd gaussian(std::mt19937_64& gen, Eigen::Index n, double scale) {
    std::normal_distribution<double> normal(0.0, scale);
    Eigen::VectorXd out(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        out[i] = normal(gen);
    }
    return out;
}

}  // namespace

QuadraticFixture::QuadraticFixture(std::size_t dim, std::uint64_t seed, double mu, double sigma2)
    : sigma2_(sigma2) {
    if (dim < 1 || dim > 100) {
        throw ConfigError("QuadraticFixture: dim must be in [1, 100]");
    }
    if (!(sigma2 >= 0.0)) {
        throw ConfigError("QuadraticFixture: sigma2 must be nonnegative");
    }
    const auto d = static_cast<Eigen::Index>(dim);
    const Eigen::Index rows = 2 * d;
    std::mt19937_64 gen(seed);
    const Eigen::VectorXd entries = gaussian(gen, rows * d, 1.0 / std::sqrt(static_cast<double>(rows)));
    b_ = Eigen::Map<const Eigen::MatrixXd>(entries.data(), rows, d);
    c_ = gaussian(gen, rows, 1.0);
    const Shape shape = Shape::vector(dim);
    h_ = Point(shape, gaussian(gen, d, 1.0));
    z0_ = Point(shape, gaussian(gen, d, 1.0));

    const RowMajorMatrix rb = b_;
    const SpectralPair top = spectral_top(rb, 1e-13, 200000);
    params_ = AlgParams::make(top.sigma * top.sigma, mu, 1.0);

    const Eigen::MatrixXd hess = b_.transpose() * b_ + mu * Eigen::MatrixXd::Identity(d, d);
    const Eigen::VectorXd rhs = b_.transpose() * c_ + mu * h_.data();
    y_star_ = Point(shape, hess.ldlt().solve(rhs));
    F_star_ = F(y_star_);
}

double QuadraticFixture::G(const Point& y) const {
    return 0.5 * (b_ * y.data() - c_).squaredNorm();
}

Point QuadraticFixture::grad_G(const Point& y) const {
    return Point(y.shape(), b_.transpose() * (b_ * y.data() - c_));
}

double QuadraticFixture::H(const Point& y) const {
    return 0.5 * params_.mu * (y - h_).data().squaredNorm();
}

double QuadraticFixture::w(const Point& y) const {
    return 0.5 * (y - z0_).data().squaredNorm();
}

Point QuadraticFixture::NoisyGradient::eval(const Point& v, std::uint64_t k) {
    Point g = fx_.grad_G(v);
    if (fx_.sigma2() > 0.0) {
        CounterRng rng(derive_seed(seed_, kNoiseStream, k));
        std::normal_distribution<double> normal(0.0, std::sqrt(fx_.sigma2() / static_cast<double>(v.size())));
        for (std::size_t i = 0; i < g.size(); ++i) {
            g[i] += normal(rng);
        }
    }
    return g;
}

Point QuadraticFixture::ClosedFormProx::solve(const Point& d, double A, double beta) const {
    const double mu = fx_.params().mu;
    const double nu = fx_.params().nu;
    const double denom = A * mu + beta * nu;
    return Point(d.shape(), (A * mu * fx_.h().data() + beta * nu * fx_.z0().data() - d.data()) / denom);
}

}  // namespace pfw
