#pragma once

#include "pfw/core.hpp"

#include <cstdint>
#include <filesystem>
#include <string>

namespace pfw {

/// Convex quadratic objective f over a compact set, with everything the
/// primal-dual machinery needs: value, gradient, conjugate, exact
/// curvature along a direction, and the smoothness constant L.
class Problem {
public:
    virtual ~Problem() = default;

    virtual std::string id() const = 0;
    virtual Shape shape() const = 0;

    virtual double f(const Point& x) const = 0;
    virtual Point grad_f(const Point& x) const = 0;
    // f*(y); throws DomainError outside the effective domain.
    virtual double conjugate(const Point& y) const = 0;
    // h -> ||A h||^2, so that f(x + h) = f(x) + <grad f(x), h> + curvature(h) / 2.
    virtual double curvature(const Point& h) const = 0;
    // Largest eigenvalue of the Hessian.
    virtual double L() const = 0;
};

namespace detail {

// Pseudo-inverse of a symmetric PSD Gram matrix restricted to its range.
class GramPinv {
public:
    GramPinv() = default;
    explicit GramPinv(const Eigen::MatrixXd& gram);

    // Returns w^T Q^+ w summed over the columns of w, plus the norm of the
    // component of w outside range(Q).
    std::pair<double, double> quad_form(const Eigen::Ref<const Eigen::MatrixXd>& w) const;
    double lambda_max() const { return lambda_max_; }

private:
    Eigen::MatrixXd basis_;      // eigenvectors with eigenvalue above threshold
    Eigen::VectorXd inv_values_; // matching reciprocal eigenvalues
    Eigen::MatrixXd null_basis_;
    double lambda_max_ = 0.0;
};

}  // namespace detail

/// f(x) = 1/2 ||A x - b||^2 over the simplex in R^d.
class SimplexLS final : public Problem {
public:
    SimplexLS(Eigen::MatrixXd a, Eigen::VectorXd b);

    std::string id() const override { return "simplex-ls"; }
    Shape shape() const override { return Shape::vector(static_cast<std::size_t>(a_.cols())); }

    double f(const Point& x) const override;
    Point grad_f(const Point& x) const override;
    double conjugate(const Point& y) const override;
    double curvature(const Point& h) const override;
    double L() const override { return L_; }

    const Eigen::MatrixXd& A() const { return a_; }
    const Eigen::VectorXd& b() const { return b_; }

private:
    Eigen::MatrixXd a_;
    Eigen::VectorXd b_;
    Eigen::MatrixXd gram_;  // A^T A
    Eigen::VectorXd atb_;   // A^T b
    detail::GramPinv pinv_;
    double L_ = 0.0;
};

/// f(X) = 1/2 ||C X - D||_F^2 over the unit trace-norm ball in R^{p x q}.
class TraceMC final : public Problem {
public:
    TraceMC(Eigen::MatrixXd c, Eigen::MatrixXd d);

    std::string id() const override { return "trace-mc"; }
    Shape shape() const override {
        return Shape::matrix(static_cast<std::size_t>(c_.cols()), static_cast<std::size_t>(d_.cols()));
    }

    double f(const Point& x) const override;
    Point grad_f(const Point& x) const override;
    double conjugate(const Point& y) const override;
    double curvature(const Point& h) const override;
    double L() const override { return L_; }

    const Eigen::MatrixXd& C() const { return c_; }
    const Eigen::MatrixXd& D() const { return d_; }

private:
    Eigen::MatrixXd c_;
    Eigen::MatrixXd d_;
    Eigen::MatrixXd gram_;  // C^T C
    Eigen::MatrixXd ctd_;   // C^T D
    detail::GramPinv pinv_;
    double L_ = 0.0;
};

// Range-membership tolerance for conjugate evaluation, relative to max(1, ||w||).
inline constexpr double kConjugateRangeTol = 1e-6;

/// A (n x d) and b (n) with i.i.d. standard normal entries drawn from `seed`.
SimplexLS make_simplex_ls(std::size_t n, std::size_t d, std::uint64_t seed);
/// C (p x p) and D (p x q) with i.i.d. standard normal entries drawn from `seed`.
TraceMC make_trace_mc(std::size_t p, std::size_t q, std::uint64_t seed);

// Matrix CSV: header "rows,cols", then one comma-separated row per line.
void write_matrix_csv(const std::filesystem::path& path, const Eigen::MatrixXd& m);
Eigen::MatrixXd read_matrix_csv(const std::filesystem::path& path);

}  // namespace pfw
