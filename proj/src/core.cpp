#include "ncvis/core.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

namespace ncvis {

Error::Error(std::string module, const std::string& message)
    : std::runtime_error(module + ": " + message), module_(std::move(module)) {}

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), values_(rows * cols, fill) {}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> values)
    : rows_(rows), cols_(cols), values_(std::move(values)) {
    if (values_.size() != rows * cols) {
        throw Error("core", "matrix of shape " + std::to_string(rows) + "x" + std::to_string(cols) +
                                " given " + std::to_string(values_.size()) + " values");
    }
}

bool Matrix::all_finite() const noexcept {
    return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

DataMatrix::DataMatrix(Matrix values) : values_(std::move(values)) {
    if (values_.rows() < 2) {
        throw Error("core", "data needs at least 2 rows, got " + std::to_string(values_.rows()));
    }
    if (values_.cols() < 1) {
        throw Error("core", "data needs at least 1 column");
    }
    for (std::size_t i = 0; i < values_.rows(); ++i) {
        auto r = values_.row(i);
        for (std::size_t j = 0; j < r.size(); ++j) {
            if (!std::isfinite(r[j])) {
                throw Error("core", "non-finite value at row " + std::to_string(i + 1) + " col " +
                                        std::to_string(j + 1));
            }
        }
    }
}

std::string_view to_string(Metric metric) noexcept {
    switch (metric) {
    case Metric::euclidean:
        return "euclidean";
    case Metric::cosine:
        return "cosine";
    }
    return "unknown";
}

Metric parse_metric(std::string_view name) {
    if (name == "euclidean") {
        return Metric::euclidean;
    }
    if (name == "cosine") {
        return Metric::cosine;
    }
    throw Error("core", "unknown metric '" + std::string(name) + "'");
}

unsigned default_thread_count() noexcept {
    return std::max(1u, std::thread::hardware_concurrency());
}

void validate_hyperparams(const Hyperparams& h, std::size_t n_points) {
    auto fail = [](const std::string& msg) { throw Error("hyperparams", msg); };
    auto positive = [](double v) { return std::isfinite(v) && v > 0; };

    if (n_points < 2) {
        fail("N must be ≥ 2");
    }
    if (h.k < 1) {
        fail("k must be ≥ 1");
    }
    if (h.k >= n_points) {
        fail("k must be < N (k=" + std::to_string(h.k) + ", N=" + std::to_string(n_points) + ")");
    }
    if (h.dim < 1) {
        fail("dim must be ≥ 1");
    }
    if (h.nu < 1) {
        fail("nu must be ≥ 1");
    }
    if (!positive(h.a)) {
        fail("a must be > 0");
    }
    if (!positive(h.b)) {
        fail("b must be > 0");
    }
    if (!positive(h.lr0)) {
        fail("lr0 must be > 0");
    }
    if (!positive(h.grad_clip)) {
        fail("grad_clip must be > 0");
    }
    if (h.n_threads < 1) {
        fail("n_threads must be ≥ 1");
    }
}

} // namespace ncvis
