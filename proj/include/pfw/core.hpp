#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <string_view>

namespace pfw {

// Error hierarchy shared by every module. The CLI maps ConfigError to exit
// code 2 and InvariantViolation to exit code 3.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

class InvariantViolation : public Error {
public:
    using Error::Error;
};

class NumericalError : public Error {
public:
    using Error::Error;
};

// Raised when a conjugate is queried outside its effective domain.
class DomainError : public Error {
public:
    using Error::Error;
};

// Call from inside a catch block: rethrows the active pfw exception as the
// same type with `context` prepended to its message.
[[noreturn]] void rethrow_with_context(const std::string& context);

using RowMajorMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct Shape {
    std::size_t rows = 0;
    std::size_t cols = 1;
    bool is_matrix = false;

    static Shape vector(std::size_t d) { return {d, 1, false}; }
    static Shape matrix(std::size_t p, std::size_t q) { return {p, q, true}; }

    std::size_t size() const { return rows * cols; }
    std::string to_string() const;

    bool operator==(const Shape&) const = default;
};

/// Flat coordinate container used for both primal and dual elements.
/// Matrices are stored row-major.
class Point {
public:
    Point() = default;
    explicit Point(Shape shape);
    Point(Shape shape, Eigen::VectorXd data);

    static Point vector(std::initializer_list<double> values);
    static Point from_matrix(const Eigen::Ref<const RowMajorMatrix>& m);
    static Point unit(Shape shape, std::size_t index);

    const Shape& shape() const { return shape_; }
    std::size_t size() const { return static_cast<std::size_t>(data_.size()); }

    Eigen::VectorXd& data() { return data_; }
    const Eigen::VectorXd& data() const { return data_; }

    double operator[](std::size_t i) const { return data_[static_cast<Eigen::Index>(i)]; }
    double& operator[](std::size_t i) { return data_[static_cast<Eigen::Index>(i)]; }

    Eigen::Map<const RowMajorMatrix> as_matrix() const;
    Eigen::Map<RowMajorMatrix> as_matrix();

    bool all_finite() const { return data_.allFinite(); }
    // Throws NumericalError naming `what` when a coordinate is NaN or Inf.
    void require_finite(std::string_view what) const;

    Point& operator+=(const Point& other);
    Point& operator-=(const Point& other);
    Point& operator*=(double s);

    friend Point operator+(Point a, const Point& b) { return a += b; }
    friend Point operator-(Point a, const Point& b) { return a -= b; }
    friend Point operator*(double s, Point a) { return a *= s; }
    friend Point operator-(Point a) { return a *= -1.0; }

    bool operator==(const Point& other) const;

private:
    Shape shape_{};
    Eigen::VectorXd data_;
};

// (1 - t) a + t b
Point lerp(const Point& a, const Point& b, double t);

void require_same_shape(const Point& a, const Point& b, std::string_view what);

struct NormKind {
    enum class Tag { L2, Lp, LInf, Frobenius, Trace, Spectral };

    Tag tag = Tag::L2;
    double p = 2.0;

    static NormKind l2() { return {Tag::L2, 2.0}; }
    static NormKind lp(double p);
    static NormKind linf() { return {Tag::LInf, 0.0}; }
    static NormKind frobenius() { return {Tag::Frobenius, 2.0}; }
    static NormKind trace() { return {Tag::Trace, 1.0}; }
    static NormKind spectral() { return {Tag::Spectral, 0.0}; }

    std::string to_string() const;
};

NormKind dual(const NormKind& kind);

double norm(const Point& x, const NormKind& kind);
double pairing(const Point& a, const Point& b);

enum class LInfRho { Appendix, Remark };

struct RhoConstant {
    double value = 1.0;
    std::size_t dimension = 1;
    NormKind norm;
};

/// Variance constant of the averaged LMO gradient estimator for a given
/// dual norm. The sup-norm entry defaults to 2(log d + 1); the looser
/// e^2(log d + 1) is available through `LInfRho::Remark`.
RhoConstant rho_constant(const NormKind& norm, std::size_t d, LInfRho linf = LInfRho::Appendix);

struct SpectralPair {
    double sigma = 0.0;
    Eigen::VectorXd u;  // left, length rows
    Eigen::VectorXd v;  // right, length cols
    bool zero = false;
    bool converged = true;
    bool dense_fallback = false;
    int iterations = 0;
};

/// Top singular triple by power iteration on the smaller Gram matrix.
/// Stops once the Gram residual falls below tol times the eigenvalue
/// estimate. If that has not happened after max_iterations (a clustered top
/// spectrum), the Gram matrix is handed to a dense symmetric eigensolver.
SpectralPair spectral_top(const Eigen::Ref<const RowMajorMatrix>& a, double tol = 1e-10,
                          int max_iterations = 500);
SpectralPair spectral_top(const Point& a, double tol = 1e-10, int max_iterations = 500);

}  // namespace pfw
