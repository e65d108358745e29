#ifndef NCVIS_SPECTRAL_HPP
#define NCVIS_SPECTRAL_HPP

#include <cstddef>
#include <cstdint>

#include "ncvis/core.hpp"
#include "ncvis/graph.hpp"

namespace ncvis {

inline constexpr double init_scale = 1e-4;

/// Block power iteration on the lazy random-walk operator (I + D^-1 A) / 2 of
/// the graph. Columns are kept orthonormal in the degree-weighted inner
/// product <x, y>_D = sum_i d_i x_i y_i and orthogonal to the constant vector,
/// so they converge to the leading nontrivial eigenvectors of D^-1 A.
/// Columns whose direction is exhausted are redrawn at random.
Matrix power_iteration_basis(const NeighborGraph& graph, std::size_t m, std::size_t n_iter,
                             std::uint64_t seed);

/// power_iteration_basis, each column centered and rescaled to standard
/// deviation init_scale.
Matrix power_iteration_init(const NeighborGraph& graph, std::size_t m, std::size_t n_iter = 100,
                            std::uint64_t seed = 42);

/// Centered Gaussian coordinates with per-column standard deviation init_scale.
Matrix random_init(std::size_t n_points, std::size_t m, std::uint64_t seed = 42);

} // namespace ncvis

#endif
