#include "pfw/lmo.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pfw {

Lmo::Lmo(Kind kind, Shape shape, double membership_tol)
    : kind_(kind), shape_(shape), membership_tol_(membership_tol) {}

Lmo Lmo::simplex(std::size_t d, double membership_tol) {
    if (d == 0) {
        throw ConfigError("simplex dimension must be positive");
    }
    return Lmo(Kind::Simplex, Shape::vector(d), membership_tol);
}

Lmo Lmo::trace_ball(std::size_t p, std::size_t q, double membership_tol) {
    if (p == 0 || q == 0) {
        throw ConfigError("trace ball dimensions must be positive");
    }
    return Lmo(Kind::TraceBall, Shape::matrix(p, q), membership_tol);
}

std::string Lmo::name() const {
    return kind_ == Kind::Simplex ? "simplex(" + shape_.to_string() + ")" : "trace_ball(" + shape_.to_string() + ")";
}

void Lmo::check_shape(const Point& c) const {
    if (!(c.shape() == shape_)) {
        throw std::invalid_argument("LMO " + name() + ": direction has shape " + c.shape().to_string());
    }
}

Lmo::Atom Lmo::argmax_atom(const Point& c) const {
    check_shape(c);
    Atom atom;
    if (kind_ == Kind::Simplex) {
        const auto& data = c.data();
        Eigen::Index best = 0;
        for (Eigen::Index i = 1; i < data.size(); ++i) {
            if (data[i] > data[best]) {
                best = i;
            }
        }
        atom.vertex = static_cast<std::size_t>(best);
        atom.value = data[best];
        return atom;
    }
    SpectralPair top = spectral_top(c.as_matrix(), spectral_tol_, spectral_max_iterations_);
    if (top.zero) {
        // Canonical point of the ball: the origin.
        atom.u = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(shape_.rows));
        atom.v = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(shape_.cols));
        atom.value = 0.0;
        return atom;
    }
    atom.value = top.sigma;
    atom.u = std::move(top.u);
    atom.v = std::move(top.v);
    return atom;
}

void Lmo::add_atom(const Atom& atom, double weight, Point& out) const {
    check_shape(out);
    if (kind_ == Kind::Simplex) {
        out[atom.vertex] += weight;
        return;
    }
    out.as_matrix().noalias() += weight * atom.u * atom.v.transpose();
}

Point Lmo::materialize(const Atom& atom) const {
    Point out(shape_);
    add_atom(atom, 1.0, out);
    return out;
}

LmoResult Lmo::argmax_linear(const Point& c) const {
    Atom atom = argmax_atom(c);
    return {materialize(atom), atom.value};
}

double Lmo::violation(const Point& x) const {
    check_shape(x);
    if (kind_ == Kind::Simplex) {
        const double neg = -x.data().minCoeff();
        const double sum = std::abs(x.data().sum() - 1.0);
        return std::max(neg, sum);
    }
    return norm(x, NormKind::trace()) - 1.0;
}

bool Lmo::contains(const Point& x) const {
    return violation(x) <= membership_tol_;
}

Point Lmo::default_start() const {
    if (kind_ == Kind::Simplex) {
        Point out(shape_);
        out.data().setConstant(1.0 / static_cast<double>(shape_.rows));
        return out;
    }
    return Point(shape_);
}

}  // namespace pfw
