#ifndef NCVIS_NCE_HPP
#define NCVIS_NCE_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "ncvis/core.hpp"
#include "ncvis/graph.hpp"

namespace ncvis {

/// Kernel distances are clamped to this before the d^(2b - 2) factor.
inline constexpr double min_kernel_distance = 1e-12;

/// q_ij = exp(-Q) / (1 + a * d^(2b)), d = |zi - zj|.
double model_prob(std::span<const double> zi, std::span<const double> zj, double Q, double a,
                  double b);

/// log(pm / (pm + nu * pn)).
double positive_term(double pm, double pn, std::size_t nu);

/// log(nu * pn / (pm + nu * pn)).
double noise_term(double pm, double pn, std::size_t nu);

/// One sample's contribution to the gradient of the NCE objective.
struct SampleGrad {
    std::vector<double> d_zi;
    std::vector<double> d_zj;
    double d_Q = 0;
    double objective_term = 0;
};

SampleGrad positive_grad(std::span<const double> zi, std::span<const double> zj, double Q, double a,
                         double b, double pn, std::size_t nu);

SampleGrad noise_grad(std::span<const double> zi, std::span<const double> zj, double Q, double a,
                      double b, double pn, std::size_t nu);

/// Exact NCE objective: E_{P_d}[positive_term] + nu * E_{P_n}[noise_term],
/// summed over every ordered pair. O(N^2).
double full_objective(const EmbeddingState& state, const NeighborGraph& graph, const Hyperparams& h);

namespace detail {

inline double softplus(double x) noexcept {
    return x > 0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

inline double sigmoid(double x) noexcept {
    if (x >= 0) {
        return 1.0 / (1.0 + std::exp(-x));
    }
    const double e = std::exp(x);
    return e / (1.0 + e);
}

struct PairKernel {
    double dist2;
    // log(1 + a * d^(2b)), i.e. -log q_hat.
    double log_denominator;
    // d log(q_hat) / d zi = -coef * (zi - zj).
    double coef;
};

inline PairKernel pair_kernel(double dist2, double a, double b) noexcept {
    if (b == 1.0) {
        const double ad = a * dist2;
        return {dist2, std::log1p(ad), 2.0 * a / (1.0 + ad)};
    }
    const double d2b = std::pow(dist2, b);
    const double clamped = std::max(dist2, min_kernel_distance * min_kernel_distance);
    const double d2b_minus_2 = std::pow(clamped, b - 1.0);
    return {dist2, std::log1p(a * d2b), 2.0 * a * b * d2b_minus_2 / (1.0 + a * d2b)};
}

// Scalar weights shared by the per-sample gradients. With lm = log pm and
// ln = log(nu * pn), a data sample contributes sigmoid(ln - lm) * grad log pm
// and a noise sample contributes -sigmoid(lm - ln) * grad log pm.
inline double positive_weight(double log_pm, double log_nu_pn) noexcept {
    return sigmoid(log_nu_pn - log_pm);
}
inline double noise_weight(double log_pm, double log_nu_pn) noexcept {
    return -sigmoid(log_pm - log_nu_pn);
}
inline double positive_term_log(double log_pm, double log_nu_pn) noexcept {
    return -softplus(log_nu_pn - log_pm);
}
inline double noise_term_log(double log_pm, double log_nu_pn) noexcept {
    return -softplus(log_pm - log_nu_pn);
}

} // namespace detail

} // namespace ncvis

#endif
