#ifndef NCVIS_GRAPH_HPP
#define NCVIS_GRAPH_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "ncvis/core.hpp"
#include "ncvis/knn.hpp"
#include "ncvis/random.hpp"

namespace ncvis {

struct Edge {
    index_t source;
    index_t target;

    friend bool operator==(const Edge&, const Edge&) = default;
    friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Walker/Vose alias table: exact O(1) draws from a discrete distribution.
class AliasTable {
public:
    struct Slot {
        double prob;
        index_t alias;
    };

    AliasTable() = default;
    explicit AliasTable(std::vector<Slot> slots);

    std::size_t size() const noexcept { return slots_.size(); }
    double prob(std::size_t e) const noexcept { return slots_[e].prob; }
    index_t alias(std::size_t e) const noexcept { return slots_[e].alias; }

    std::size_t sample(Rng& rng) const {
        const Slot& slot = slots_[rng.below(slots_.size())];
        if (slot.prob >= 1.0) {
            return static_cast<std::size_t>(&slot - slots_.data());
        }
        return rng.uniform() < slot.prob ? static_cast<std::size_t>(&slot - slots_.data())
                                         : slot.alias;
    }

    /// Probability that sample() returns entry e, recovered from the table.
    double reconstructed_probability(std::size_t e) const;

private:
    std::vector<Slot> slots_;
};

/// Requires nonnegative entries summing to 1 within 1e-9.
AliasTable build_alias(std::span<const double> probs);

/// Symmetrized kNN relation as ordered edges, grouped by source (CSR), with
/// the uniform data-edge probability and per-point row sums of p_d.
class NeighborGraph {
public:
    NeighborGraph() = default;
    NeighborGraph(std::size_t n_points, std::vector<Edge> edges);

    std::size_t n_points() const noexcept { return n_points_; }
    std::size_t n_edges() const noexcept { return targets_.size(); }

    Edge edge(std::size_t e) const noexcept { return edges_[e]; }
    std::span<const index_t> neighbors(std::size_t i) const noexcept {
        return {targets_.data() + offsets_[i], offsets_[i + 1] - offsets_[i]};
    }
    std::size_t degree(std::size_t i) const noexcept { return offsets_[i + 1] - offsets_[i]; }
    bool has_edge(index_t i, index_t j) const;

    /// p_d(i, j) for any present edge.
    double edge_prob() const noexcept { return 1.0 / static_cast<double>(n_edges()); }
    std::span<const double> row_sums() const noexcept { return row_sums_; }

private:
    std::size_t n_points_ = 0;
    std::vector<std::size_t> offsets_;
    std::vector<Edge> edges_;
    std::vector<index_t> targets_;
    std::vector<double> row_sums_;
};

/// Edge (i, j) is present iff j is among i's neighbors or i among j's.
NeighborGraph build_graph(const KnnResult& knn);

/// p_n(i, j) = row_sum[i] / (N - 1); throws when i == j.
double noise_prob(const NeighborGraph& graph, index_t i, index_t j);

/// Samples data edges from p_d and noise edges from p_n. Holds a reference
/// to the graph, which must outlive it.
///
/// The source of a noise edge is distributed as the source of a data edge,
/// i.e. P(i) = row_sum[i]; it is drawn from a per-point table with exactly
/// that distribution, which touches less memory than drawing a whole edge.
class EdgeSampler {
public:
    explicit EdgeSampler(const NeighborGraph& graph);

    const NeighborGraph& graph() const noexcept { return *graph_; }
    const AliasTable& data_alias() const noexcept { return data_alias_; }
    const AliasTable& source_alias() const noexcept { return source_alias_; }
    std::size_t n_points() const noexcept { return graph_->n_points(); }

    Edge sample_data_edge(Rng& rng) const { return graph_->edge(data_alias_.sample(rng)); }

    /// Source from a data edge, target uniform over the other N - 1 points.
    /// Pairs that happen to be true edges are kept.
    Edge sample_noise_edge(Rng& rng) const {
        const auto source = static_cast<index_t>(source_alias_.sample(rng));
        auto target = static_cast<index_t>(rng.below(graph_->n_points() - 1));
        if (target >= source) {
            ++target;
        }
        return {source, target};
    }

private:
    const NeighborGraph* graph_;
    AliasTable data_alias_;
    AliasTable source_alias_;
};

inline Edge sample_data_edge(const EdgeSampler& sampler, Rng& rng) {
    return sampler.sample_data_edge(rng);
}

inline Edge sample_noise_edge(const EdgeSampler& sampler, Rng& rng) {
    return sampler.sample_noise_edge(rng);
}

} // namespace ncvis

#endif
