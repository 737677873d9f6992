#include "pfw/problems.hpp"

#include <Eigen/Eigenvalues>

#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace pfw {

namespace detail {

GramPinv::GramPinv(const Eigen::MatrixXd& gram) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram);
    if (eig.info() != Eigen::Success) {
        throw NumericalError("eigendecomposition of Gram matrix failed");
    }
    const auto& values = eig.eigenvalues();
    const auto& vectors = eig.eigenvectors();
    lambda_max_ = values.size() > 0 ? values.maxCoeff() : 0.0;
    const double threshold = lambda_max_ * 1e-12;

    std::vector<Eigen::Index> kept;
    std::vector<Eigen::Index> dropped;
    for (Eigen::Index i = 0; i < values.size(); ++i) {
        (values[i] > threshold ? kept : dropped).push_back(i);
    }
    basis_.resize(gram.rows(), static_cast<Eigen::Index>(kept.size()));
    inv_values_.resize(static_cast<Eigen::Index>(kept.size()));
    for (std::size_t j = 0; j < kept.size(); ++j) {
        basis_.col(static_cast<Eigen::Index>(j)) = vectors.col(kept[j]);
        inv_values_[static_cast<Eigen::Index>(j)] = 1.0 / values[kept[j]];
    }
    null_basis_.resize(gram.rows(), static_cast<Eigen::Index>(dropped.size()));
    for (std::size_t j = 0; j < dropped.size(); ++j) {
        null_basis_.col(static_cast<Eigen::Index>(j)) = vectors.col(dropped[j]);
    }
}

std::pair<double, double> GramPinv::quad_form(const Eigen::Ref<const Eigen::MatrixXd>& w) const {
    const Eigen::MatrixXd coeffs = basis_.transpose() * w;
    const double value = (coeffs.array().square().colwise() * inv_values_.array()).sum();
    const double outside = null_basis_.cols() > 0 ? (null_basis_.transpose() * w).norm() : 0.0;
    return {value, outside};
}

}  // namespace detail

namespace {

double top_gram_eigenvalue(const Eigen::MatrixXd& m) {
    const RowMajorMatrix rm = m;
    const SpectralPair top = spectral_top(rm, 1e-13, 200000);
    return top.sigma * top.sigma;
}

// L I - Hessian must be PSD up to the power-iteration accuracy.
void check_smoothness(double L, double lambda_max) {
    if (lambda_max > L * (1.0 + 1e-9) + 1e-300) {
        throw InvariantViolation("smoothness constant " + std::to_string(L) +
                                 " below Hessian eigenvalue " + std::to_string(lambda_max));
    }
}

Eigen::MatrixXd gaussian_matrix(std::mt19937_64& gen, Eigen::Index rows, Eigen::Index cols) {
    std::normal_distribution<double> normal;
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        for (Eigen::Index j = 0; j < cols; ++j) {
            m(i, j) = normal(gen);
        }
    }
    return m;
}

void require_shape(const Point& x, const Shape& shape, const char* what) {
    if (!(x.shape() == shape)) {
        throw std::invalid_argument(std::string(what) + ": expected shape " + shape.to_string() + ", got " +
                                    x.shape().to_string());
    }
}

}  // namespace

SimplexLS::SimplexLS(Eigen::MatrixXd a, Eigen::VectorXd b) : a_(std::move(a)), b_(std::move(b)) {
    if (a_.rows() < 1 || a_.cols() < 1 || b_.size() != a_.rows()) {
        throw ConfigError("SimplexLS: need n, d >= 1 and b of length n");
    }
    gram_ = a_.transpose() * a_;
    atb_ = a_.transpose() * b_;
    pinv_ = detail::GramPinv(gram_);
    L_ = top_gram_eigenvalue(a_);
    check_smoothness(L_, pinv_.lambda_max());
}

double SimplexLS::f(const Point& x) const {
    require_shape(x, shape(), "SimplexLS::f");
    return 0.5 * (a_ * x.data() - b_).squaredNorm();
}

Point SimplexLS::grad_f(const Point& x) const {
    require_shape(x, shape(), "SimplexLS::grad_f");
    return Point(shape(), gram_ * x.data() - atb_);
}

double SimplexLS::conjugate(const Point& y) const {
    require_shape(y, shape(), "SimplexLS::conjugate");
    const Eigen::VectorXd w = y.data() + atb_;
    const auto [quad, outside] = pinv_.quad_form(w);
    if (outside > kConjugateRangeTol * std::max(1.0, w.norm())) {
        throw DomainError("SimplexLS::conjugate: y outside range(A^T), residual " + std::to_string(outside));
    }
    return 0.5 * quad - 0.5 * b_.squaredNorm();
}

double SimplexLS::curvature(const Point& h) const {
    require_shape(h, shape(), "SimplexLS::curvature");
    return (a_ * h.data()).squaredNorm();
}

TraceMC::TraceMC(Eigen::MatrixXd c, Eigen::MatrixXd d) : c_(std::move(c)), d_(std::move(d)) {
    if (c_.rows() < 1 || c_.rows() != c_.cols() || d_.rows() != c_.rows() || d_.cols() < 1) {
        throw ConfigError("TraceMC: need square C (p x p) and D (p x q) with p, q >= 1");
    }
    gram_ = c_.transpose() * c_;
    ctd_ = c_.transpose() * d_;
    pinv_ = detail::GramPinv(gram_);
    L_ = top_gram_eigenvalue(c_);
    check_smoothness(L_, pinv_.lambda_max());
}

double TraceMC::f(const Point& x) const {
    require_shape(x, shape(), "TraceMC::f");
    return 0.5 * (c_ * x.as_matrix() - d_).squaredNorm();
}

Point TraceMC::grad_f(const Point& x) const {
    require_shape(x, shape(), "TraceMC::grad_f");
    Point g(shape());
    g.as_matrix() = gram_ * x.as_matrix() - ctd_;
    return g;
}

double TraceMC::conjugate(const Point& y) const {
    require_shape(y, shape(), "TraceMC::conjugate");
    const Eigen::MatrixXd w = y.as_matrix() + ctd_;
    const auto [quad, outside] = pinv_.quad_form(w);
    if (outside > kConjugateRangeTol * std::max(1.0, w.norm())) {
        throw DomainError("TraceMC::conjugate: Y outside range(C^T), residual " + std::to_string(outside));
    }
    return 0.5 * quad - 0.5 * d_.squaredNorm();
}

double TraceMC::curvature(const Point& h) const {
    require_shape(h, shape(), "TraceMC::curvature");
    return (c_ * h.as_matrix()).squaredNorm();
}

SimplexLS make_simplex_ls(std::size_t n, std::size_t d, std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    Eigen::MatrixXd a = gaussian_matrix(gen, static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
    Eigen::VectorXd b = gaussian_matrix(gen, static_cast<Eigen::Index>(n), 1).col(0);
    return SimplexLS(std::move(a), std::move(b));
}

TraceMC make_trace_mc(std::size_t p, std::size_t q, std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    Eigen::MatrixXd c = gaussian_matrix(gen, static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(p));
    Eigen::MatrixXd d = gaussian_matrix(gen, static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(q));
    return TraceMC(std::move(c), std::move(d));
}

void write_matrix_csv(const std::filesystem::path& path, const Eigen::MatrixXd& m) {
    std::ofstream out(path);
    if (!out) {
        throw Error("cannot open " + path.string() + " for writing");
    }
    out << m.rows() << "," << m.cols() << "\n";
    char buf[32];
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            std::snprintf(buf, sizeof buf, "%.17g", m(i, j));
            out << (j ? "," : "") << buf;
        }
        out << "\n";
    }
    if (!out) {
        throw Error("write failed for " + path.string());
    }
}

Eigen::MatrixXd read_matrix_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error("cannot open " + path.string());
    }
    std::string line;
    long rows = 0;
    long cols = 0;
    char comma = 0;
    if (!std::getline(in, line)) {
        throw Error(path.string() + ": missing header");
    }
    std::istringstream header(line);
    if (!(header >> rows >> comma >> cols) || comma != ',' || rows < 0 || cols < 0) {
        throw Error(path.string() + ": malformed header '" + line + "'");
    }
    Eigen::MatrixXd m(rows, cols);
    for (long i = 0; i < rows; ++i) {
        if (!std::getline(in, line)) {
            throw Error(path.string() + ": expected " + std::to_string(rows) + " rows");
        }
        std::istringstream row(line);
        std::string cell;
        for (long j = 0; j < cols; ++j) {
            if (!std::getline(row, cell, ',')) {
                throw Error(path.string() + ": row " + std::to_string(i) + " is short");
            }
            m(i, j) = std::stod(cell);
        }
    }
    return m;
}

}  // namespace pfw
