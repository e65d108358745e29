#include "ncvis/graph.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace ncvis {

AliasTable::AliasTable(std::vector<Slot> slots) : slots_(std::move(slots)) {
    if (slots_.empty()) {
        throw Error("alias", "empty table");
    }
    for (const auto& s : slots_) {
        if (s.alias >= slots_.size() || !(s.prob >= 0 && s.prob <= 1)) {
            throw Error("alias", "malformed slot");
        }
    }
}

double AliasTable::reconstructed_probability(std::size_t e) const {
    double mass = slots_[e].prob;
    for (std::size_t other = 0; other < slots_.size(); ++other) {
        if (other != e && slots_[other].alias == e) {
            mass += 1.0 - slots_[other].prob;
        }
    }
    return mass / static_cast<double>(slots_.size());
}

AliasTable build_alias(std::span<const double> probs) {
    if (probs.empty()) {
        throw Error("alias", "empty distribution");
    }
    long double total = 0;
    for (std::size_t e = 0; e < probs.size(); ++e) {
        if (!(probs[e] >= 0) || !std::isfinite(probs[e])) {
            throw Error("alias", "entry " + std::to_string(e) + " is negative or non-finite");
        }
        total += probs[e];
    }
    if (std::abs(static_cast<double>(total) - 1.0) > 1e-9) {
        throw Error("alias", "probabilities sum to " + std::to_string(static_cast<double>(total)) +
                                 ", not 1");
    }

    const std::size_t n = probs.size();
    std::vector<double> scaled(n);
    std::vector<index_t> alias(n);
    std::vector<index_t> small, large;
    for (std::size_t e = 0; e < n; ++e) {
        scaled[e] = probs[e] * static_cast<double>(n);
        alias[e] = static_cast<index_t>(e);
        (scaled[e] < 1.0 ? small : large).push_back(static_cast<index_t>(e));
    }

    while (!small.empty() && !large.empty()) {
        const index_t s = small.back();
        small.pop_back();
        const index_t l = large.back();
        alias[s] = l;
        scaled[l] -= 1.0 - scaled[s];
        if (scaled[l] < 1.0) {
            large.pop_back();
            small.push_back(l);
        }
    }
    // Whatever is left is 1 up to rounding.
    for (index_t e : large) {
        scaled[e] = 1.0;
    }
    for (index_t e : small) {
        scaled[e] = 1.0;
    }
    std::vector<AliasTable::Slot> slots(n);
    for (std::size_t e = 0; e < n; ++e) {
        slots[e] = {scaled[e], alias[e]};
    }
    return AliasTable(std::move(slots));
}

NeighborGraph::NeighborGraph(std::size_t n_points, std::vector<Edge> edges) : n_points_(n_points) {
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    if (edges.empty()) {
        throw Error("graph", "empty edge set");
    }

    offsets_.assign(n_points + 1, 0);
    targets_.reserve(edges.size());
    for (const auto& e : edges) {
        if (e.source >= n_points || e.target >= n_points || e.source == e.target) {
            throw Error("graph", "invalid edge (" + std::to_string(e.source) + ", " +
                                     std::to_string(e.target) + ")");
        }
        ++offsets_[e.source + 1];
        targets_.push_back(e.target);
    }
    for (std::size_t i = 0; i < n_points; ++i) {
        offsets_[i + 1] += offsets_[i];
    }
    edges_ = std::move(edges);

    row_sums_.resize(n_points);
    const double p = edge_prob();
    for (std::size_t i = 0; i < n_points; ++i) {
        row_sums_[i] = static_cast<double>(degree(i)) * p;
    }
}

bool NeighborGraph::has_edge(index_t i, index_t j) const {
    const auto row = neighbors(i);
    return std::binary_search(row.begin(), row.end(), j);
}

NeighborGraph build_graph(const KnnResult& knn) {
    const std::size_t n = knn.n_points();
    std::vector<Edge> edges;
    edges.reserve(2 * n * knn.k());
    for (std::size_t i = 0; i < n; ++i) {
        const auto source = static_cast<index_t>(i);
        for (index_t j : knn.neighbors(i)) {
            if (j == source || j >= n) {
                throw Error("graph", "kNN row " + std::to_string(i) + " contains invalid index " +
                                         std::to_string(j));
            }
            edges.push_back({source, j});
            edges.push_back({j, source});
        }
    }
    return NeighborGraph(n, std::move(edges));
}

double noise_prob(const NeighborGraph& graph, index_t i, index_t j) {
    if (i == j) {
        throw Error("graph", "noise probability undefined for i == j");
    }
    if (i >= graph.n_points() || j >= graph.n_points()) {
        throw Error("graph", "point index out of range");
    }
    return graph.row_sums()[i] / static_cast<double>(graph.n_points() - 1);
}

EdgeSampler::EdgeSampler(const NeighborGraph& graph) : graph_(&graph) {
    if (graph.n_points() < 2) {
        throw Error("graph", "sampler needs at least 2 points");
    }
    const std::vector<double> probs(graph.n_edges(), graph.edge_prob());
    data_alias_ = build_alias(probs);
    source_alias_ = build_alias(graph.row_sums());
}

} // namespace ncvis
