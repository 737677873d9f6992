#include "pfw/lmo.hpp"
#include "pfw/problems.hpp"

#include <doctest.h>

#include <filesystem>
#include <random>

using namespace pfw;

namespace {

Point random_point(std::mt19937_64& gen, Shape shape, double scale = 1.0) {
    std::normal_distribution<double> normal(0.0, scale);
    Point p(shape);
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = normal(gen);
    return p;
}

void check_gradient_by_differences(const Problem& prob, std::mt19937_64& gen) {
    for (int rep = 0; rep < 5; ++rep) {
        const Point x = random_point(gen, prob.shape());
        const Point g = prob.grad_f(x);
        Point fd(prob.shape());
        const double h = 1e-5;
        for (std::size_t i = 0; i < x.size(); ++i) {
            Point xp = x, xm = x;
            xp[i] += h;
            xm[i] -= h;
            fd[i] = (prob.f(xp) - prob.f(xm)) / (2.0 * h);
        }
        CHECK((fd - g).data().norm() <= 1e-5 * std::max(1.0, g.data().norm()));
    }
}

void check_fenchel_young(const Problem& prob, std::mt19937_64& gen) {
    for (int rep = 0; rep < 20; ++rep) {
        const Point x = random_point(gen, prob.shape());
        const Point y = prob.grad_f(x);
        CHECK(prob.f(x) + prob.conjugate(y) == doctest::Approx(pairing(y, x)).epsilon(1e-8).scale(1.0));
    }
}

void check_taylor(const Problem& prob, std::mt19937_64& gen) {
    for (int rep = 0; rep < 20; ++rep) {
        const Point x = random_point(gen, prob.shape());
        const Point h = random_point(gen, prob.shape(), 0.3);
        const double remainder = prob.f(x + h) - prob.f(x) - pairing(prob.grad_f(x), h);
        CHECK(std::abs(remainder - 0.5 * prob.curvature(h)) <= 1e-10 * std::max(1.0, std::abs(remainder)));
    }
}

void check_lipschitz(const Problem& prob, std::mt19937_64& gen) {
    int violations = 0;
    for (int rep = 0; rep < 1000; ++rep) {
        const Point x = random_point(gen, prob.shape());
        const Point z = random_point(gen, prob.shape());
        const double lhs = (prob.grad_f(x) - prob.grad_f(z)).data().norm();
        violations += lhs > prob.L() * (x - z).data().norm() * (1.0 + 1e-12);
    }
    CHECK(violations == 0);
}

}  // namespace

TEST_CASE("least squares on the simplex") {
    std::mt19937_64 gen(21);
    const SimplexLS prob = make_simplex_ls(30, 8, 5);
    CHECK(prob.id() == "simplex-ls");
    CHECK(prob.shape() == Shape::vector(8));
    CHECK(prob.f(Point(prob.shape())) == doctest::Approx(0.5 * prob.b().squaredNorm()));
    check_gradient_by_differences(prob, gen);
    check_fenchel_young(prob, gen);
    check_taylor(prob, gen);
    check_lipschitz(prob, gen);

    // Conjugate at -A^T b, the gradient at the origin.
    const Point y(prob.shape(), -prob.A().transpose() * prob.b());
    CHECK(prob.conjugate(y) == doctest::Approx(-0.5 * prob.b().squaredNorm()));

    // Normal equations at the unconstrained minimizer.
    const Eigen::VectorXd x_ls = prob.A().colPivHouseholderQr().solve(prob.b());
    CHECK(prob.grad_f(Point(prob.shape(), x_ls)).data().norm() < 1e-9);
}

TEST_CASE("least squares with the identity") {
    const SimplexLS prob(Eigen::MatrixXd::Identity(4, 4), Eigen::VectorXd::Zero(4));
    CHECK(prob.L() == doctest::Approx(1.0));
    const Point y = Point::vector({1.0, -2.0, 0.5, 3.0});
    CHECK(prob.conjugate(y) == doctest::Approx(0.5 * y.data().squaredNorm()));
}

TEST_CASE("smoothness constant is the top Hessian eigenvalue") {
    const SimplexLS prob = make_simplex_ls(200, 50, 1);
    const Eigen::MatrixXd gram = prob.A().transpose() * prob.A();
    const double lmax = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(gram).eigenvalues().maxCoeff();
    CHECK(prob.L() == doctest::Approx(lmax).epsilon(1e-8));
}

TEST_CASE("conjugate outside its domain") {
    // A is 3 x 5, so range(A^T) is a proper subspace of R^5.
    const SimplexLS prob = make_simplex_ls(3, 5, 2);
    std::mt19937_64 gen(22);
    const Point inside = prob.grad_f(random_point(gen, prob.shape()));
    CHECK_NOTHROW(prob.conjugate(inside));
    Point outside = Point::unit(prob.shape(), 0);
    CHECK_THROWS_WITH_AS(prob.conjugate(outside), doctest::Contains("residual"), DomainError);
}

TEST_CASE("matrix completion on the trace ball") {
    std::mt19937_64 gen(23);
    const TraceMC prob = make_trace_mc(6, 4, 9);
    CHECK(prob.id() == "trace-mc");
    CHECK(prob.shape() == Shape::matrix(6, 4));
    CHECK(prob.f(Point(prob.shape())) == doctest::Approx(0.5 * prob.D().squaredNorm()));
    check_gradient_by_differences(prob, gen);
    check_fenchel_young(prob, gen);
    check_taylor(prob, gen);
    check_lipschitz(prob, gen);
}

TEST_CASE("matrix completion with the identity") {
    Eigen::MatrixXd d(2, 3);
    d << 1, 2, 3, 4, 5, 6;
    const TraceMC prob(Eigen::MatrixXd::Identity(2, 2), d);
    RowMajorMatrix y(2, 3);
    y << 0.5, -1, 0, 2, 0, 1;
    const double expected = 0.5 * (y + d).squaredNorm() - 0.5 * d.squaredNorm();
    CHECK(prob.conjugate(Point::from_matrix(y)) == doctest::Approx(expected));
    CHECK(prob.L() == doctest::Approx(1.0));
}

TEST_CASE("matrix completion requires a square C") {
    CHECK_THROWS(TraceMC(Eigen::MatrixXd::Identity(3, 2), Eigen::MatrixXd::Zero(3, 2)));
}

TEST_CASE("instances are reproducible from their seed") {
    CHECK(make_simplex_ls(20, 5, 3).A() == make_simplex_ls(20, 5, 3).A());
    CHECK_FALSE(make_simplex_ls(20, 5, 3).b() == make_simplex_ls(20, 5, 4).b());
    CHECK(make_trace_mc(4, 3, 3).D() == make_trace_mc(4, 3, 3).D());
}

TEST_CASE("matrix csv round trip") {
    const auto dir = std::filesystem::temp_directory_path() / "pfw_matrix_csv";
    std::filesystem::create_directories(dir);
    const SimplexLS prob = make_simplex_ls(7, 3, 1);
    const auto path = dir / "a.csv";
    write_matrix_csv(path, prob.A());
    CHECK(read_matrix_csv(path) == prob.A());
    std::filesystem::remove_all(dir);
}
