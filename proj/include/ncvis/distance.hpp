#ifndef NCVIS_DISTANCE_HPP
#define NCVIS_DISTANCE_HPP

#include <cstddef>
#include <span>

#include "ncvis/core.hpp"

namespace ncvis {

/// Squared Euclidean distance. Throws on length mismatch.
double euclidean_sq(std::span<const double> u, std::span<const double> v);

/// 1 - cos(u, v), clamped to [0, 2]. A zero-norm vector is at distance 1 from
/// everything. Throws on length mismatch.
double cosine_dist(std::span<const double> u, std::span<const double> v);

double distance(Metric metric, std::span<const double> u, std::span<const double> v);

namespace detail {

inline double l2sq(const double* u, const double* v, std::size_t n) noexcept {
    double acc0 = 0, acc1 = 0;
    std::size_t i = 0;
    for (; i + 1 < n; i += 2) {
        const double d0 = u[i] - v[i];
        const double d1 = u[i + 1] - v[i + 1];
        acc0 += d0 * d0;
        acc1 += d1 * d1;
    }
    if (i < n) {
        const double d = u[i] - v[i];
        acc0 += d * d;
    }
    return acc0 + acc1;
}

inline double dot(const double* u, const double* v, std::size_t n) noexcept {
    double acc0 = 0, acc1 = 0;
    std::size_t i = 0;
    for (; i + 1 < n; i += 2) {
        acc0 += u[i] * v[i];
        acc1 += u[i + 1] * v[i + 1];
    }
    if (i < n) {
        acc0 += u[i] * v[i];
    }
    return acc0 + acc1;
}

} // namespace detail

} // namespace ncvis

#endif
