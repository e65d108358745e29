#ifndef NCVIS_KNN_HPP
#define NCVIS_KNN_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "ncvis/core.hpp"

namespace ncvis {

/// k nearest neighbors of every point, self excluded, each row sorted by
/// (distance, index).
class KnnResult {
public:
    KnnResult() = default;
    KnnResult(std::size_t n_points, std::size_t k);

    std::size_t n_points() const noexcept { return n_points_; }
    std::size_t k() const noexcept { return k_; }

    std::span<index_t> neighbors(std::size_t i) noexcept { return {neighbors_.data() + i * k_, k_}; }
    std::span<const index_t> neighbors(std::size_t i) const noexcept {
        return {neighbors_.data() + i * k_, k_};
    }
    std::span<double> distances(std::size_t i) noexcept { return {distances_.data() + i * k_, k_}; }
    std::span<const double> distances(std::size_t i) const noexcept {
        return {distances_.data() + i * k_, k_};
    }

private:
    std::size_t n_points_ = 0;
    std::size_t k_ = 0;
    std::vector<index_t> neighbors_;
    std::vector<double> distances_;
};

struct HnswParams {
    std::size_t max_connections = 16;
    std::size_t ef_construction = 200;
    // 0 selects max(2k, 100) at query time.
    std::size_t ef_search = 0;

    std::size_t effective_ef_search(std::size_t k) const noexcept;
};

/// Hierarchical navigable small world index. Points are inserted in index
/// order with levels drawn from a seeded geometric distribution, so the
/// structure is a pure function of (data, metric, params, seed).
class HnswIndex {
public:
    using Candidate = std::pair<double, index_t>;

    std::size_t size() const noexcept { return levels_.size(); }
    std::size_t dim() const noexcept { return dim_; }
    Metric metric() const noexcept { return metric_; }
    const HnswParams& params() const noexcept { return params_; }
    index_t entry_point() const noexcept { return entry_point_; }
    int max_level() const noexcept { return max_level_; }
    int level(index_t i) const noexcept { return levels_[i]; }

    /// Adjacency list of point i at the given level (empty above its level).
    std::span<const index_t> neighbors(index_t i, int level) const noexcept;

    /// Up to ef nearest indexed points to the query, sorted by (distance, index).
    std::vector<Candidate> search(std::span<const double> query, std::size_t ef) const;

    /// Distance between a raw query vector and an indexed point.
    double distance_to(std::span<const double> query, index_t i) const noexcept;

private:
    friend HnswIndex build_hnsw(const DataMatrix&, Metric, const HnswParams&, std::uint64_t);

    double point_distance(index_t i, index_t j) const noexcept;
    double distance_prepared(const double* query, index_t i) const noexcept;
    const double* point(index_t i) const noexcept { return points_.data() + std::size_t(i) * dim_; }
    std::size_t capacity(int level) const noexcept;
    void insert(index_t q, std::vector<std::uint32_t>& visited, std::uint32_t& stamp);
    std::vector<Candidate> search_layer(const double* query, std::span<const index_t> entries,
                                        std::size_t ef, int level, std::vector<std::uint32_t>& visited,
                                        std::uint32_t& stamp) const;
    std::vector<index_t> select_neighbors(std::vector<Candidate> candidates, std::size_t limit) const;
    void set_neighbors(index_t i, int level, std::span<const index_t> list);

    std::size_t dim_ = 0;
    Metric metric_ = Metric::euclidean;
    HnswParams params_;
    std::vector<double> points_;
    std::vector<int> levels_;
    index_t entry_point_ = 0;
    int max_level_ = -1;

    // Level 0: fixed-capacity slots of 2 * max_connections per point.
    std::vector<index_t> base_links_;
    std::vector<std::uint32_t> base_counts_;
    // Levels >= 1: upper_links_[i][level - 1].
    std::vector<std::vector<std::vector<index_t>>> upper_links_;
};

HnswIndex build_hnsw(const DataMatrix& data, Metric metric, const HnswParams& params = {},
                     std::uint64_t seed = 42);

/// Approximate kNN of every indexed point. The index must have been built
/// from `data`. Rows are independent, so queries run on n_threads workers
/// without changing the result.
KnnResult query_knn(const HnswIndex& index, const DataMatrix& data, std::size_t k,
                    std::size_t n_threads = 1);

/// Brute-force kNN; ties broken by lower index.
KnnResult exact_knn(const DataMatrix& data, std::size_t k, Metric metric, std::size_t n_threads = 1);

/// Mean fraction of the exact neighbor sets recovered by the approximate ones.
double knn_recall(const KnnResult& approx, const KnnResult& exact);

} // namespace ncvis

#endif
