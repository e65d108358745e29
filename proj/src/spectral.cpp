#include "ncvis/spectral.hpp"

#include <cmath>
#include <numeric>
#include <vector>

#include "ncvis/random.hpp"

namespace ncvis {

namespace {

using Column = std::vector<double>;

double weighted_dot(const Column& x, const Column& y, const std::vector<double>& degree) {
    double acc = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        acc += degree[i] * x[i] * y[i];
    }
    return acc;
}

void subtract(Column& x, const Column& basis, double coef) {
    for (std::size_t i = 0; i < x.size(); ++i) {
        x[i] -= coef * basis[i];
    }
}

// Modified Gram-Schmidt in the D inner product against the constant vector and
// the given basis columns. Returns the D-norm after orthogonalization.
double orthogonalize(Column& x, std::span<const Column> basis, const Column& constant,
                     const std::vector<double>& degree) {
    // Two passes keep the result orthogonal to working precision.
    for (int pass = 0; pass < 2; ++pass) {
        subtract(x, constant, weighted_dot(x, constant, degree));
        for (const auto& b : basis) {
            subtract(x, b, weighted_dot(x, b, degree));
        }
    }
    return std::sqrt(weighted_dot(x, x, degree));
}

Column gaussian_column(std::size_t n, Rng& rng) {
    Column x(n);
    for (auto& v : x) {
        v = rng.normal();
    }
    return x;
}

void center_and_scale(Matrix& out, std::size_t col) {
    const std::size_t n = out.rows();
    double mean = 0;
    for (std::size_t i = 0; i < n; ++i) {
        mean += out(i, col);
    }
    mean /= static_cast<double>(n);
    double var = 0;
    for (std::size_t i = 0; i < n; ++i) {
        out(i, col) -= mean;
        var += out(i, col) * out(i, col);
    }
    const double sd = std::sqrt(var / static_cast<double>(n));
    const double factor = sd > 0 ? init_scale / sd : 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        out(i, col) *= factor;
    }
}

} // namespace

Matrix power_iteration_basis(const NeighborGraph& graph, std::size_t m, std::size_t n_iter,
                             std::uint64_t seed) {
    const std::size_t n = graph.n_points();
    if (m < 1) {
        throw Error("init", "output dimension must be ≥ 1");
    }

    std::vector<double> degree(n);
    for (std::size_t i = 0; i < n; ++i) {
        degree[i] = static_cast<double>(graph.degree(i));
        if (degree[i] == 0) {
            throw Error("init", "point " + std::to_string(i) + " has no edges");
        }
    }
    const double volume = std::accumulate(degree.begin(), degree.end(), 0.0);
    const Column constant(n, 1.0 / std::sqrt(volume));

    Rng rng(seed, 0x1717);
    std::vector<Column> basis;
    std::vector<bool> exhausted(m, false);
    auto fresh_column = [&](std::size_t c) {
        for (int attempt = 0; attempt < 4; ++attempt) {
            Column x = gaussian_column(n, rng);
            const double before = std::sqrt(weighted_dot(x, x, degree));
            const double norm = orthogonalize(x, std::span(basis.data(), c), constant, degree);
            if (norm > 1e-8 * before) {
                for (auto& v : x) {
                    v /= norm;
                }
                return x;
            }
        }
        exhausted[c] = true;
        return gaussian_column(n, rng);
    };
    for (std::size_t c = 0; c < m; ++c) {
        basis.push_back(fresh_column(c));
    }

    Column product(n);
    for (std::size_t iter = 0; iter < n_iter; ++iter) {
        for (std::size_t c = 0; c < m; ++c) {
            if (exhausted[c]) {
                continue;
            }
            const Column& x = basis[c];
            for (std::size_t i = 0; i < n; ++i) {
                double acc = 0;
                for (index_t j : graph.neighbors(i)) {
                    acc += x[j];
                }
                product[i] = 0.5 * (x[i] + acc / degree[i]);
            }
            const double before = std::sqrt(weighted_dot(product, product, degree));
            const double norm = orthogonalize(product, std::span(basis.data(), c), constant, degree);
            if (norm <= 1e-12 * before || norm == 0) {
                basis[c] = fresh_column(c);
                continue;
            }
            for (std::size_t i = 0; i < n; ++i) {
                basis[c][i] = product[i] / norm;
            }
        }
    }

    Matrix out(n, m);
    for (std::size_t c = 0; c < m; ++c) {
        for (std::size_t i = 0; i < n; ++i) {
            out(i, c) = basis[c][i];
        }
    }
    return out;
}

Matrix power_iteration_init(const NeighborGraph& graph, std::size_t m, std::size_t n_iter,
                            std::uint64_t seed) {
    Matrix out = power_iteration_basis(graph, m, n_iter, seed);
    for (std::size_t c = 0; c < m; ++c) {
        center_and_scale(out, c);
    }
    return out;
}

Matrix random_init(std::size_t n_points, std::size_t m, std::uint64_t seed) {
    if (m < 1 || n_points < 1) {
        throw Error("init", "random init needs at least one point and one dimension");
    }
    Rng rng(seed, 0x7261);
    Matrix out(n_points, m);
    for (std::size_t i = 0; i < n_points; ++i) {
        for (std::size_t c = 0; c < m; ++c) {
            out(i, c) = rng.normal();
        }
    }
    for (std::size_t c = 0; c < m; ++c) {
        center_and_scale(out, c);
    }
    return out;
}

} // namespace ncvis
