#include "ncvis/mle.hpp"

#include <cmath>
#include <string>

#include "ncvis/distance.hpp"
#include "ncvis/nce.hpp"
#include "ncvis/spectral.hpp"

namespace ncvis {

namespace {

void check_shape(const Matrix& coords, const NeighborGraph& graph) {
    if (coords.rows() != graph.n_points()) {
        throw Error("mle", "embedding has " + std::to_string(coords.rows()) + " rows, graph has " +
                               std::to_string(graph.n_points()) + " points");
    }
}

double log_denominator(const Matrix& coords, std::size_t i, std::size_t j, double a, double b) {
    const double d2 = detail::l2sq(coords.row(i).data(), coords.row(j).data(), coords.cols());
    return detail::pair_kernel(d2, a, b).log_denominator;
}

double log_partition(const Matrix& coords, double a, double b) {
    // Unordered pairs counted twice.
    double z = 0;
    for (std::size_t i = 0; i < coords.rows(); ++i) {
        for (std::size_t j = i + 1; j < coords.rows(); ++j) {
            z += 2.0 * std::exp(-log_denominator(coords, i, j, a, b));
        }
    }
    return std::log(z);
}

} // namespace

double normalized_likelihood(const EmbeddingState& state, const NeighborGraph& graph, double a,
                             double b) {
    check_shape(state.coords, graph);
    const double log_z = log_partition(state.coords, a, b);
    const double pd = graph.edge_prob();
    double total = 0;
    for (std::size_t e = 0; e < graph.n_edges(); ++e) {
        const auto [i, j] = graph.edge(e);
        total += pd * (-log_denominator(state.coords, i, j, a, b) - log_z);
    }
    return total;
}

Matrix mle_gradient(const Matrix& coords, const NeighborGraph& graph, double a, double b) {
    check_shape(coords, graph);
    const std::size_t n = coords.rows();
    const std::size_t m = coords.cols();
    Matrix grad(n, m);

    // d log q_hat_ij / d z_i = -coef_ij (z_i - z_j) and the negative of that
    // for z_j, so each ordered pair (i, j) with weight c adds -c * coef * diff
    // to z_i and +c * coef * diff to z_j.
    auto accumulate = [&](std::size_t i, std::size_t j, double weight, double coef) {
        for (std::size_t l = 0; l < m; ++l) {
            const double v = weight * coef * (coords(i, l) - coords(j, l));
            grad(i, l) -= v;
            grad(j, l) += v;
        }
    };

    const double pd = graph.edge_prob();
    for (std::size_t e = 0; e < graph.n_edges(); ++e) {
        const auto [i, j] = graph.edge(e);
        const double d2 = detail::l2sq(coords.row(i).data(), coords.row(j).data(), m);
        accumulate(i, j, pd, detail::pair_kernel(d2, a, b).coef);
    }

    const double z = std::exp(log_partition(coords, a, b));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double d2 = detail::l2sq(coords.row(i).data(), coords.row(j).data(), m);
            const auto kernel = detail::pair_kernel(d2, a, b);
            // Both orderings of the pair contribute the same amount.
            accumulate(i, j, -2.0 * std::exp(-kernel.log_denominator) / z, kernel.coef);
        }
    }
    return grad;
}

EmbeddingState mle_gradient_ascent(const NeighborGraph& graph, Matrix init, double a, double b,
                                   std::size_t n_steps, double step) {
    check_shape(init, graph);
    EmbeddingState state{std::move(init), 0.0};
    for (std::size_t s = 0; s < n_steps; ++s) {
        const Matrix grad = mle_gradient(state.coords, graph, a, b);
        for (std::size_t idx = 0; idx < grad.size(); ++idx) {
            state.coords.data()[idx] += step * grad.data()[idx];
        }
    }
    state.Q = log_partition(state.coords, a, b);
    return state;
}

EmbeddingState mle_gradient_ascent(const NeighborGraph& graph, std::size_t m, double a, double b,
                                   std::size_t n_steps, double step, std::uint64_t seed) {
    return mle_gradient_ascent(graph, random_init(graph.n_points(), m, seed), a, b, n_steps, step);
}

double model_mass(const EmbeddingState& state, double a, double b) {
    return std::exp(log_partition(state.coords, a, b) - state.Q);
}

} // namespace ncvis
