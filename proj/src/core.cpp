#include "pfw/core.hpp"

#include "pfw/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

namespace pfw {

void rethrow_with_context(const std::string& context) {
    try {
        throw;
    } catch (const InvariantViolation& e) {
        throw InvariantViolation(context + ": " + e.what());
    } catch (const ConfigError& e) {
        throw ConfigError(context + ": " + e.what());
    } catch (const DomainError& e) {
        throw DomainError(context + ": " + e.what());
    } catch (const NumericalError& e) {
        throw NumericalError(context + ": " + e.what());
    } catch (const Error& e) {
        throw Error(context + ": " + e.what());
    }
}

std::string Shape::to_string() const {
    std::ostringstream os;
    if (is_matrix) {
        os << rows << "x" << cols;
    } else {
        os << rows;
    }
    return os.str();
}

Point::Point(Shape shape) : shape_(shape), data_(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(shape.size()))) {}

Point::Point(Shape shape, Eigen::VectorXd data) : shape_(shape), data_(std::move(data)) {
    if (static_cast<std::size_t>(data_.size()) != shape_.size()) {
        throw std::invalid_argument("Point: data length " + std::to_string(data_.size()) +
                                    " does not match shape " + shape_.to_string());
    }
}

Point Point::vector(std::initializer_list<double> values) {
    Eigen::VectorXd data(static_cast<Eigen::Index>(values.size()));
    Eigen::Index i = 0;
    for (double v : values) {
        data[i++] = v;
    }
    return Point(Shape::vector(values.size()), std::move(data));
}

Point Point::from_matrix(const Eigen::Ref<const RowMajorMatrix>& m) {
    Point out(Shape::matrix(static_cast<std::size_t>(m.rows()), static_cast<std::size_t>(m.cols())));
    out.as_matrix() = m;
    return out;
}

Point Point::unit(Shape shape, std::size_t index) {
    Point out(shape);
    out[index] = 1.0;
    return out;
}

Eigen::Map<const RowMajorMatrix> Point::as_matrix() const {
    return {data_.data(), static_cast<Eigen::Index>(shape_.rows), static_cast<Eigen::Index>(shape_.cols)};
}

Eigen::Map<RowMajorMatrix> Point::as_matrix() {
    return {data_.data(), static_cast<Eigen::Index>(shape_.rows), static_cast<Eigen::Index>(shape_.cols)};
}

void Point::require_finite(std::string_view what) const {
    if (!all_finite()) {
        throw NumericalError(std::string(what) + ": non-finite coordinate");
    }
}

Point& Point::operator+=(const Point& other) {
    require_same_shape(*this, other, "Point::operator+=");
    data_ += other.data_;
    return *this;
}

Point& Point::operator-=(const Point& other) {
    require_same_shape(*this, other, "Point::operator-=");
    data_ -= other.data_;
    return *this;
}

Point& Point::operator*=(double s) {
    data_ *= s;
    return *this;
}

bool Point::operator==(const Point& other) const {
    return shape_ == other.shape_ && data_ == other.data_;
}

Point lerp(const Point& a, const Point& b, double t) {
    require_same_shape(a, b, "lerp");
    return Point(a.shape(), (1.0 - t) * a.data() + t * b.data());
}

void require_same_shape(const Point& a, const Point& b, std::string_view what) {
    if (!(a.shape() == b.shape())) {
        throw std::invalid_argument(std::string(what) + ": shape mismatch " + a.shape().to_string() +
                                    " vs " + b.shape().to_string());
    }
}

NormKind NormKind::lp(double p) {
    if (!(p >= 1.0)) {
        throw std::invalid_argument("Lp norm requires p >= 1");
    }
    if (std::isinf(p)) {
        return linf();
    }
    return {Tag::Lp, p};
}

std::string NormKind::to_string() const {
    switch (tag) {
    case Tag::L2: return "L2";
    case Tag::Lp: {
        std::ostringstream os;
        os << "L" << p;
        return os.str();
    }
    case Tag::LInf: return "LInf";
    case Tag::Frobenius: return "Frobenius";
    case Tag::Trace: return "Trace";
    case Tag::Spectral: return "Spectral";
    }
    return "?";
}

NormKind dual(const NormKind& kind) {
    switch (kind.tag) {
    case NormKind::Tag::L2: return NormKind::l2();
    case NormKind::Tag::Lp:
        if (kind.p == 1.0) {
            return NormKind::linf();
        }
        return NormKind::lp(kind.p / (kind.p - 1.0));
    case NormKind::Tag::LInf: return NormKind::lp(1.0);
    case NormKind::Tag::Frobenius: return NormKind::frobenius();
    case NormKind::Tag::Trace: return NormKind::spectral();
    case NormKind::Tag::Spectral: return NormKind::trace();
    }
    throw std::invalid_argument("dual: unknown norm kind");
}

double norm(const Point& x, const NormKind& kind) {
    const auto& v = x.data();
    switch (kind.tag) {
    case NormKind::Tag::L2:
    case NormKind::Tag::Frobenius:
        return v.norm();
    case NormKind::Tag::Lp:
        if (kind.p == 1.0) {
            return v.lpNorm<1>();
        }
        if (v.size() == 0) {
            return 0.0;
        } else {
            // Scale by the max entry so large p does not overflow.
            const double scale = v.lpNorm<Eigen::Infinity>();
            if (scale == 0.0) {
                return 0.0;
            }
            return scale * std::pow((v.array().abs() / scale).pow(kind.p).sum(), 1.0 / kind.p);
        }
    case NormKind::Tag::LInf:
        return v.size() == 0 ? 0.0 : v.lpNorm<Eigen::Infinity>();
    case NormKind::Tag::Trace:
    case NormKind::Tag::Spectral: {
        if (!x.shape().is_matrix) {
            throw std::invalid_argument(kind.to_string() + " norm requires a matrix-shaped point");
        }
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(Eigen::MatrixXd(x.as_matrix()));
        const auto& s = svd.singularValues();
        if (s.size() == 0) {
            return 0.0;
        }
        return kind.tag == NormKind::Tag::Trace ? s.sum() : s[0];
    }
    }
    throw std::invalid_argument("norm: unknown kind");
}

double pairing(const Point& a, const Point& b) {
    require_same_shape(a, b, "pairing");
    return a.data().dot(b.data());
}

RhoConstant rho_constant(const NormKind& norm, std::size_t d, LInfRho linf) {
    if (d == 0) {
        throw std::invalid_argument("rho_constant: dimension must be positive");
    }
    const double dd = static_cast<double>(d);
    double value = 0.0;
    switch (norm.tag) {
    case NormKind::Tag::L2:
    case NormKind::Tag::Frobenius:
        value = 1.0;
        break;
    case NormKind::Tag::Lp:
        value = norm.p < 2.0 ? std::pow(dd, 2.0 / norm.p - 1.0) : norm.p - 1.0;
        break;
    case NormKind::Tag::LInf: {
        const double base = std::log(dd) + 1.0;
        value = linf == LInfRho::Appendix ? 2.0 * base : std::numbers::e * std::numbers::e * base;
        break;
    }
    default:
        throw std::invalid_argument("rho_constant: unsupported norm " + norm.to_string());
    }
    return {value, d, norm};
}

SpectralPair spectral_top(const Eigen::Ref<const RowMajorMatrix>& a, double tol, int max_iterations) {
    const Eigen::Index rows = a.rows();
    const Eigen::Index cols = a.cols();
    SpectralPair out;
    out.u = Eigen::VectorXd::Zero(rows);
    out.v = Eigen::VectorXd::Zero(cols);
    if (rows == 0 || cols == 0 || a.cwiseAbs().maxCoeff() == 0.0) {
        if (rows > 0) out.u[0] = 1.0;
        if (cols > 0) out.v[0] = 1.0;
        out.zero = true;
        return out;
    }

    // Iterate on the smaller Gram matrix.
    const bool right = cols <= rows;
    const Eigen::MatrixXd gram = right ? Eigen::MatrixXd(a.transpose() * a) : Eigen::MatrixXd(a * a.transpose());
    const Eigen::Index n = gram.rows();

    CounterRng rng(derive_seed(0x70f1ULL, static_cast<std::uint64_t>(rows), static_cast<std::uint64_t>(cols)));
    std::normal_distribution<double> normal;
    Eigen::VectorXd x(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        x[i] = normal(rng);
    }
    x.normalize();

    double lambda = 0.0;
    Eigen::VectorXd w(n);
    int it = 0;
    out.converged = false;
    for (; it < max_iterations; ++it) {
        w.noalias() = gram * x;
        lambda = x.dot(w);
        const double residual = (w - lambda * x).norm();
        if (residual <= tol * lambda) {
            out.converged = true;
            break;
        }
        const double wn = w.norm();
        if (wn == 0.0) {
            // Start vector in the null space; perturb deterministically.
            x = Eigen::VectorXd::Ones(n) / std::sqrt(static_cast<double>(n));
            continue;
        }
        x = w / wn;
    }
    out.iterations = it;
    if (!out.converged) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram);
        x = eig.eigenvectors().col(n - 1);
        out.converged = eig.info() == Eigen::Success;
        out.dense_fallback = true;
    }

    if (right) {
        out.v = x;
        out.u = a * x;
        out.sigma = out.u.norm();
        out.u /= out.sigma;
    } else {
        out.u = x;
        out.v = a.transpose() * x;
        out.sigma = out.v.norm();
        out.v /= out.sigma;
    }
    return out;
}

SpectralPair spectral_top(const Point& a, double tol, int max_iterations) {
    if (!a.shape().is_matrix) {
        throw std::invalid_argument("spectral_top requires a matrix-shaped point");
    }
    return spectral_top(a.as_matrix(), tol, max_iterations);
}

}  // namespace pfw
