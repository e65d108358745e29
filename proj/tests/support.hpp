#ifndef NCVIS_TESTS_SUPPORT_HPP
#define NCVIS_TESTS_SUPPORT_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "ncvis/core.hpp"
#include "ncvis/graph.hpp"
#include "ncvis/random.hpp"

namespace ncvis::testing {

inline DataMatrix gaussian_data(std::size_t n, std::size_t dim, std::uint64_t seed) {
    Rng rng(seed, 99);
    Matrix values(n, dim);
    for (std::size_t i = 0; i < values.size(); ++i) {
        values.data()[i] = rng.normal();
    }
    return DataMatrix(std::move(values));
}

/// Two isotropic Gaussian blobs of `per_blob` points each, centers `gap` apart
/// along the first axis. Labels are 0 for the first half, 1 for the second.
inline DataMatrix two_blobs(std::size_t per_blob, std::size_t dim, double gap, std::uint64_t seed) {
    Rng rng(seed, 7);
    Matrix values(2 * per_blob, dim);
    for (std::size_t i = 0; i < 2 * per_blob; ++i) {
        for (std::size_t j = 0; j < dim; ++j) {
            values(i, j) = rng.normal();
        }
        if (i >= per_blob) {
            values(i, 0) += gap;
        }
    }
    return DataMatrix(std::move(values));
}

inline DataMatrix line_points(std::vector<double> xs) {
    const std::size_t n = xs.size();
    return DataMatrix(Matrix(n, 1, std::move(xs)));
}

/// Mean pairwise embedding distance within and across the two halves.
struct BlobSeparation {
    double intra;
    double inter;
};

inline BlobSeparation blob_separation(const Matrix& z, std::size_t per_blob) {
    double intra = 0, inter = 0;
    std::size_t n_intra = 0, n_inter = 0;
    for (std::size_t i = 0; i < z.rows(); ++i) {
        for (std::size_t j = i + 1; j < z.rows(); ++j) {
            double d2 = 0;
            for (std::size_t c = 0; c < z.cols(); ++c) {
                d2 += (z(i, c) - z(j, c)) * (z(i, c) - z(j, c));
            }
            const bool same = (i < per_blob) == (j < per_blob);
            (same ? intra : inter) += std::sqrt(d2);
            ++(same ? n_intra : n_inter);
        }
    }
    return {intra / n_intra, inter / n_inter};
}

/// Fraction of each point's `k` nearest embedding neighbors sharing its label,
/// averaged over points. Brute force.
inline double knn_label_agreement(const Matrix& z, const std::vector<std::string>& labels,
                                  std::size_t k) {
    const std::size_t n = z.rows();
    double total = 0;
    std::vector<std::pair<double, std::size_t>> row;
    for (std::size_t i = 0; i < n; ++i) {
        row.clear();
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) {
                continue;
            }
            double d2 = 0;
            for (std::size_t c = 0; c < z.cols(); ++c) {
                d2 += (z(i, c) - z(j, c)) * (z(i, c) - z(j, c));
            }
            row.emplace_back(d2, j);
        }
        std::partial_sort(row.begin(), row.begin() + k, row.end());
        std::size_t same = 0;
        for (std::size_t r = 0; r < k; ++r) {
            same += labels[row[r].second] == labels[i];
        }
        total += static_cast<double>(same) / static_cast<double>(k);
    }
    return total / static_cast<double>(n);
}

/// Independent extended-precision evaluation of the normalized likelihood,
/// used as the finite-difference oracle for its gradient.
inline long double reference_likelihood(const Matrix& z, const NeighborGraph& g, double a, double b) {
    auto q_hat = [&](std::size_t i, std::size_t j) {
        long double d2 = 0;
        for (std::size_t c = 0; c < z.cols(); ++c) {
            const long double diff = static_cast<long double>(z(i, c)) - z(j, c);
            d2 += diff * diff;
        }
        return 1.0L / (1.0L + a * std::pow(d2, static_cast<long double>(b)));
    };
    long double partition = 0;
    for (std::size_t i = 0; i < z.rows(); ++i) {
        for (std::size_t j = 0; j < z.rows(); ++j) {
            if (i != j) {
                partition += q_hat(i, j);
            }
        }
    }
    long double total = 0;
    for (std::size_t e = 0; e < g.n_edges(); ++e) {
        total += std::log(q_hat(g.edge(e).source, g.edge(e).target) / partition);
    }
    return total / static_cast<long double>(g.n_edges());
}

/// Central difference of reference_likelihood in coordinate idx.
inline double reference_likelihood_slope(const Matrix& z, const NeighborGraph& g, double a, double b,
                                         std::size_t idx, double h) {
    Matrix plus = z, minus = z;
    plus.data()[idx] += h;
    minus.data()[idx] -= h;
    return static_cast<double>((reference_likelihood(plus, g, a, b) - reference_likelihood(minus, g, a, b)) /
                               (static_cast<long double>(plus.data()[idx]) - minus.data()[idx]));
}

inline std::filesystem::path data_dir() { return NCVIS_TEST_DATA_DIR; }

/// Fresh scratch directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / ("ncvis_test_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

} // namespace ncvis::testing

#endif
