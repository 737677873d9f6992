#pragma once

#include "pfw/core.hpp"

#include <cstddef>
#include <string>

namespace pfw {

struct LmoResult {
    Point x_star;
    double value = 0.0;
};

/// Linear maximization oracle over a compact convex set K.
///
/// Two sets are supported: the probability simplex in R^d and the unit
/// trace-norm ball in R^{p x q}. Oracles are immutable and may be queried
/// concurrently.
class Lmo {
public:
    enum class Kind { Simplex, TraceBall };

    /// Maximizer in compact form. A simplex vertex is its index; a trace-ball
    /// extreme point is the rank-one matrix u v^T.
    struct Atom {
        std::size_t vertex = 0;
        Eigen::VectorXd u;
        Eigen::VectorXd v;
        double value = 0.0;
    };

    static Lmo simplex(std::size_t d, double membership_tol = 1e-9);
    static Lmo trace_ball(std::size_t p, std::size_t q, double membership_tol = 1e-8);

    Kind kind() const { return kind_; }
    const Shape& shape() const { return shape_; }
    // R_K: the largest dual norm of a point of K. Both supported sets have R_K = 1.
    double radius() const { return radius_; }
    double membership_tol() const { return membership_tol_; }
    std::string name() const;

    // argmax_{x in K} <x, c>. Simplex ties go to the smallest index.
    LmoResult argmax_linear(const Point& c) const;
    Atom argmax_atom(const Point& c) const;
    // out += weight * atom
    void add_atom(const Atom& atom, double weight, Point& out) const;
    Point materialize(const Atom& atom) const;

    bool contains(const Point& x) const;
    // Signed violation of membership: <= 0 inside K.
    double violation(const Point& x) const;

    // Barycenter for the simplex, the origin for the trace ball.
    Point default_start() const;

private:
    Lmo(Kind kind, Shape shape, double membership_tol);
    void check_shape(const Point& c) const;

    Kind kind_;
    Shape shape_;
    double radius_ = 1.0;
    double membership_tol_;
    double spectral_tol_ = 1e-11;
    int spectral_max_iterations_ = 100;
};

}  // namespace pfw
