#ifndef NCVIS_CORE_HPP
#define NCVIS_CORE_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ncvis {

/// Error raised by any stage of the pipeline. The message is prefixed with the
/// name of the module that raised it, e.g. "io: row 2: expected 2 columns".
class Error : public std::runtime_error {
public:
    Error(std::string module, const std::string& message);

    const std::string& module() const noexcept { return module_; }

private:
    std::string module_;
};

using index_t = std::uint32_t;

/// Dense row-major matrix of doubles.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);
    Matrix(std::size_t rows, std::size_t cols, std::vector<double> values);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::size_t size() const noexcept { return values_.size(); }

    std::span<double> row(std::size_t i) noexcept {
        return {values_.data() + i * cols_, cols_};
    }
    std::span<const double> row(std::size_t i) const noexcept {
        return {values_.data() + i * cols_, cols_};
    }

    double& operator()(std::size_t i, std::size_t j) noexcept { return values_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const noexcept { return values_[i * cols_ + j]; }

    double* data() noexcept { return values_.data(); }
    const double* data() const noexcept { return values_.data(); }
    const std::vector<double>& values() const noexcept { return values_; }

    bool all_finite() const noexcept;

    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> values_;
};

/// The input vectors: N >= 2 rows of M >= 1 finite features. Immutable once
/// constructed.
class DataMatrix {
public:
    explicit DataMatrix(Matrix values);

    std::size_t rows() const noexcept { return values_.rows(); }
    std::size_t cols() const noexcept { return values_.cols(); }
    std::span<const double> row(std::size_t i) const noexcept { return values_.row(i); }
    const Matrix& matrix() const noexcept { return values_; }

private:
    Matrix values_;
};

/// Model parameters: one m-dimensional coordinate per point plus the learned
/// log-normalizer Q, so that q_ij = exp(-Q) / (1 + a * |z_i - z_j|^(2b)).
struct EmbeddingState {
    Matrix coords;
    double Q = 0.0;
};

enum class Metric { euclidean, cosine };

std::string_view to_string(Metric metric) noexcept;
Metric parse_metric(std::string_view name);

unsigned default_thread_count() noexcept;

struct Hyperparams {
    std::size_t k = 15;
    std::size_t dim = 2;
    std::size_t nu = 5;
    double a = 1.0;
    double b = 1.0;
    std::size_t n_epochs = 50;
    // 0 selects the number of points.
    std::size_t n_samples_per_epoch = 0;
    double lr0 = 1.0;
    std::uint64_t seed = 42;
    std::size_t n_threads = default_thread_count();
    Metric metric = Metric::euclidean;
    double grad_clip = 4.0;

    std::size_t samples_per_epoch(std::size_t n_points) const noexcept {
        return n_samples_per_epoch == 0 ? n_points : n_samples_per_epoch;
    }
};

/// Throws Error("hyperparams", ...) naming the first offending field.
void validate_hyperparams(const Hyperparams& h, std::size_t n_points);

} // namespace ncvis

#endif
