#ifndef NCVIS_MLE_HPP
#define NCVIS_MLE_HPP

#include <cstddef>
#include <cstdint>

#include "ncvis/core.hpp"
#include "ncvis/graph.hpp"

namespace ncvis {

// Explicitly normalized maximum likelihood for the same kernel model. Costs
// O(N^2) per evaluation; meant as a reference for small graphs.

/// sum over edges of p_d * log(q_hat_ij / Z), Z = sum_{i != j} q_hat_ij.
/// Does not depend on state.Q.
double normalized_likelihood(const EmbeddingState& state, const NeighborGraph& graph, double a,
                             double b);

/// Gradient of normalized_likelihood with respect to every coordinate.
Matrix mle_gradient(const Matrix& coords, const NeighborGraph& graph, double a, double b);

/// Full-batch ascent coords += step * gradient for n_steps steps starting at
/// `init`. The returned Q is log Z, so exp(-Q) * q_hat is the normalized
/// model.
EmbeddingState mle_gradient_ascent(const NeighborGraph& graph, Matrix init, double a, double b,
                                   std::size_t n_steps, double step);

/// As above from a seeded Gaussian start with standard deviation 1e-4.
EmbeddingState mle_gradient_ascent(const NeighborGraph& graph, std::size_t m, double a, double b,
                                   std::size_t n_steps, double step, std::uint64_t seed);

/// sum_{i != j} exp(-Q) * q_hat_ij: total mass of the unnormalized model.
double model_mass(const EmbeddingState& state, double a, double b);

} // namespace ncvis

#endif
