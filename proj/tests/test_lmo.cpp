#include "pfw/lmo.hpp"

#include <doctest.h>

#include <random>

using namespace pfw;

namespace {

Point random_point(std::mt19937_64& gen, Shape shape) {
    std::normal_distribution<double> normal;
    Point p(shape);
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = normal(gen);
    return p;
}

}  // namespace

TEST_CASE("simplex argmax picks the largest coordinate") {
    const Lmo lmo = Lmo::simplex(3);
    const LmoResult r = lmo.argmax_linear(Point::vector({3.0, 1.0, 2.0}));
    CHECK(r.value == 3.0);
    CHECK(r.x_star == Point::vector({1.0, 0.0, 0.0}));
}

TEST_CASE("simplex ties go to the smallest index") {
    const Lmo lmo = Lmo::simplex(4);
    CHECK(lmo.argmax_atom(Point::vector({0.0, 2.0, 2.0, 1.0})).vertex == 1);
    CHECK(lmo.argmax_atom(Point(Shape::vector(4))).vertex == 0);
}

TEST_CASE("simplex argmax equals vertex enumeration") {
    std::mt19937_64 gen(11);
    for (std::size_t d = 1; d <= 10; ++d) {
        const Lmo lmo = Lmo::simplex(d);
        for (int rep = 0; rep < 200; ++rep) {
            const Point c = random_point(gen, Shape::vector(d));
            double best = -1e300;
            for (std::size_t i = 0; i < d; ++i) best = std::max(best, pairing(Point::unit(c.shape(), i), c));
            const LmoResult r = lmo.argmax_linear(c);
            CHECK(r.value == best);
            CHECK(pairing(r.x_star, c) == best);
            CHECK(lmo.contains(r.x_star));
        }
    }
}

TEST_CASE("trace ball argmax on a diagonal input") {
    const Lmo lmo = Lmo::trace_ball(2, 2);
    RowMajorMatrix c(2, 2);
    c << 2, 0, 0, 1;
    const LmoResult r = lmo.argmax_linear(Point::from_matrix(c));
    CHECK(r.value == doctest::Approx(2.0));
    CHECK(std::abs(r.x_star.as_matrix()(0, 0)) == doctest::Approx(1.0));
    CHECK(r.x_star.as_matrix()(0, 0) == doctest::Approx(1.0));
    CHECK(std::abs(r.x_star.as_matrix()(1, 1)) < 1e-12);
}

TEST_CASE("trace ball value equals the top singular value") {
    std::mt19937_64 gen(12);
    for (std::size_t p = 1; p <= 8; ++p) {
        for (std::size_t q = 1; q <= 8; ++q) {
            const Lmo lmo = Lmo::trace_ball(p, q);
            for (int rep = 0; rep < 4; ++rep) {
                const Point c = random_point(gen, Shape::matrix(p, q));
                Eigen::JacobiSVD<Eigen::MatrixXd> svd(Eigen::MatrixXd(c.as_matrix()));
                const double s1 = svd.singularValues()[0];
                const LmoResult r = lmo.argmax_linear(c);
                CHECK(std::abs(r.value - s1) <= 1e-8 * std::max(1.0, s1));
                CHECK(pairing(r.x_star, c) == doctest::Approx(r.value).epsilon(1e-10));
                CHECK(lmo.contains(r.x_star));
            }
        }
    }
}

TEST_CASE("zero direction returns the canonical point") {
    const Lmo simplex = Lmo::simplex(3);
    const LmoResult rs = simplex.argmax_linear(Point(Shape::vector(3)));
    CHECK(rs.value == 0.0);
    CHECK(rs.x_star == Point::unit(Shape::vector(3), 0));

    const Lmo ball = Lmo::trace_ball(3, 2);
    const LmoResult rb = ball.argmax_linear(Point(Shape::matrix(3, 2)));
    CHECK(rb.value == 0.0);
    CHECK(rb.x_star == Point(Shape::matrix(3, 2)));
}

TEST_CASE("argmax value is positively homogeneous") {
    std::mt19937_64 gen(13);
    const Lmo simplex = Lmo::simplex(6);
    const Lmo ball = Lmo::trace_ball(4, 3);
    for (int rep = 0; rep < 20; ++rep) {
        const Point c = random_point(gen, simplex.shape());
        CHECK(simplex.argmax_linear(3.5 * c).value == doctest::Approx(3.5 * simplex.argmax_linear(c).value));
        const Point m = random_point(gen, ball.shape());
        CHECK(ball.argmax_linear(0.25 * m).value == doctest::Approx(0.25 * ball.argmax_linear(m).value));
    }
}

TEST_CASE("membership") {
    const Lmo simplex = Lmo::simplex(2);
    CHECK(simplex.contains(Point::vector({0.5, 0.5})));
    CHECK_FALSE(simplex.contains(Point::vector({1.1, -0.1})));
    CHECK_FALSE(simplex.contains(Point::vector({0.5, 0.6})));
    CHECK(simplex.violation(Point::vector({1.1, -0.1})) == doctest::Approx(0.1));

    const Lmo ball = Lmo::trace_ball(2, 2);
    RowMajorMatrix half = 0.5 * RowMajorMatrix::Identity(2, 2);
    CHECK(ball.contains(Point::from_matrix(half)));
    CHECK(ball.violation(Point::from_matrix(half)) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK_FALSE(ball.contains(Point::from_matrix(0.6 * RowMajorMatrix::Identity(2, 2))));
}

TEST_CASE("default starting points are feasible") {
    const Lmo simplex = Lmo::simplex(5);
    CHECK(simplex.contains(simplex.default_start()));
    CHECK(simplex.default_start()[4] == doctest::Approx(0.2));
    const Lmo ball = Lmo::trace_ball(3, 4);
    CHECK(ball.contains(ball.default_start()));
    CHECK(ball.radius() == 1.0);
    CHECK(simplex.radius() == 1.0);
}

TEST_CASE("atoms accumulate like their dense form") {
    std::mt19937_64 gen(14);
    const Lmo ball = Lmo::trace_ball(3, 2);
    const Point c = random_point(gen, ball.shape());
    const Lmo::Atom atom = ball.argmax_atom(c);
    Point acc(ball.shape());
    ball.add_atom(atom, -0.5, acc);
    CHECK((acc + 0.5 * ball.materialize(atom)).data().norm() < 1e-15);
    CHECK(ball.materialize(atom) == ball.argmax_linear(c).x_star);
}

TEST_CASE("shape mismatch is rejected") {
    const Lmo simplex = Lmo::simplex(3);
    CHECK_THROWS(simplex.argmax_linear(Point(Shape::vector(4))));
}
