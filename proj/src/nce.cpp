#include "ncvis/nce.hpp"

#include <limits>
#include <string>

#include "ncvis/distance.hpp"

namespace ncvis {

namespace {

void check_pair(std::span<const double> zi, std::span<const double> zj) {
    if (zi.size() != zj.size()) {
        throw Error("nce", "coordinate length mismatch");
    }
}

double log_or_neg_inf(double x) {
    return x > 0 ? std::log(x) : -std::numeric_limits<double>::infinity();
}

SampleGrad pair_grad(std::span<const double> zi, std::span<const double> zj, double Q, double a,
                     double b, double pn, std::size_t nu, bool is_data) {
    check_pair(zi, zj);
    const auto kernel = detail::pair_kernel(detail::l2sq(zi.data(), zj.data(), zi.size()), a, b);
    const double log_pm = -kernel.log_denominator - Q;
    const double log_nu_pn = std::log(static_cast<double>(nu)) + log_or_neg_inf(pn);

    const double w = is_data ? detail::positive_weight(log_pm, log_nu_pn)
                             : detail::noise_weight(log_pm, log_nu_pn);
    SampleGrad g;
    g.d_zi.resize(zi.size());
    g.d_zj.resize(zi.size());
    for (std::size_t l = 0; l < zi.size(); ++l) {
        const double v = -w * kernel.coef * (zi[l] - zj[l]);
        g.d_zi[l] = v;
        g.d_zj[l] = -v;
    }
    g.d_Q = -w;
    g.objective_term = is_data ? detail::positive_term_log(log_pm, log_nu_pn)
                               : detail::noise_term_log(log_pm, log_nu_pn);
    return g;
}

} // namespace

double model_prob(std::span<const double> zi, std::span<const double> zj, double Q, double a,
                  double b) {
    check_pair(zi, zj);
    const auto kernel = detail::pair_kernel(detail::l2sq(zi.data(), zj.data(), zi.size()), a, b);
    return std::exp(-kernel.log_denominator - Q);
}

double positive_term(double pm, double pn, std::size_t nu) {
    return detail::positive_term_log(std::log(pm),
                                     std::log(static_cast<double>(nu)) + log_or_neg_inf(pn));
}

double noise_term(double pm, double pn, std::size_t nu) {
    return detail::noise_term_log(std::log(pm),
                                  std::log(static_cast<double>(nu)) + log_or_neg_inf(pn));
}

SampleGrad positive_grad(std::span<const double> zi, std::span<const double> zj, double Q, double a,
                         double b, double pn, std::size_t nu) {
    return pair_grad(zi, zj, Q, a, b, pn, nu, true);
}

SampleGrad noise_grad(std::span<const double> zi, std::span<const double> zj, double Q, double a,
                      double b, double pn, std::size_t nu) {
    return pair_grad(zi, zj, Q, a, b, pn, nu, false);
}

double full_objective(const EmbeddingState& state, const NeighborGraph& graph, const Hyperparams& h) {
    const std::size_t n = graph.n_points();
    if (state.coords.rows() != n) {
        throw Error("nce", "embedding has " + std::to_string(state.coords.rows()) +
                               " rows, graph has " + std::to_string(n) + " points");
    }
    const double log_nu = std::log(static_cast<double>(h.nu));
    const std::size_t m = state.coords.cols();

    auto log_pm = [&](std::size_t i, std::size_t j) {
        const double d2 = detail::l2sq(state.coords.row(i).data(), state.coords.row(j).data(), m);
        return -detail::pair_kernel(d2, h.a, h.b).log_denominator - state.Q;
    };

    double data_part = 0;
    const double pd = graph.edge_prob();
    for (std::size_t e = 0; e < graph.n_edges(); ++e) {
        const auto [i, j] = graph.edge(e);
        const double log_nu_pn = log_nu + log_or_neg_inf(noise_prob(graph, i, j));
        data_part += pd * detail::positive_term_log(log_pm(i, j), log_nu_pn);
    }

    double noise_part = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double pn = graph.row_sums()[i] / static_cast<double>(n - 1);
        const double log_nu_pn = log_nu + log_or_neg_inf(pn);
        if (pn == 0) {
            continue;
        }
        for (std::size_t j = 0; j < n; ++j) {
            if (j != i) {
                noise_part += pn * detail::noise_term_log(log_pm(i, j), log_nu_pn);
            }
        }
    }
    return data_part + static_cast<double>(h.nu) * noise_part;
}

} // namespace ncvis
