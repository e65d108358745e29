#include "ncvis/distance.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace ncvis {

namespace {

void check_lengths(std::span<const double> u, std::span<const double> v) {
    if (u.size() != v.size()) {
        throw Error("distance", "length mismatch (" + std::to_string(u.size()) + " vs " +
                                    std::to_string(v.size()) + ")");
    }
}

} // namespace

double euclidean_sq(std::span<const double> u, std::span<const double> v) {
    check_lengths(u, v);
    return detail::l2sq(u.data(), v.data(), u.size());
}

double cosine_dist(std::span<const double> u, std::span<const double> v) {
    check_lengths(u, v);
    const double uu = detail::dot(u.data(), u.data(), u.size());
    const double vv = detail::dot(v.data(), v.data(), v.size());
    if (uu == 0 || vv == 0) {
        return 1.0;
    }
    const double cos = detail::dot(u.data(), v.data(), u.size()) / (std::sqrt(uu) * std::sqrt(vv));
    return std::clamp(1.0 - cos, 0.0, 2.0);
}

double distance(Metric metric, std::span<const double> u, std::span<const double> v) {
    return metric == Metric::cosine ? cosine_dist(u, v) : euclidean_sq(u, v);
}

} // namespace ncvis
