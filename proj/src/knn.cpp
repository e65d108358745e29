#include "ncvis/knn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <string>
#include <unordered_set>

#include "ncvis/distance.hpp"
#include "ncvis/random.hpp"
#include "parallel.hpp"

namespace ncvis {

namespace {

using Candidate = HnswIndex::Candidate;
using MinHeap = std::priority_queue<Candidate, std::vector<Candidate>, std::greater<>>;
using MaxHeap = std::priority_queue<Candidate, std::vector<Candidate>, std::less<>>;

void check_k(std::size_t k, std::size_t n) {
    if (k < 1) {
        throw Error("knn", "k must be ≥ 1");
    }
    if (k >= n) {
        throw Error("knn", "k must be < N (k=" + std::to_string(k) + ", N=" + std::to_string(n) + ")");
    }
}

struct VisitedScratch {
    std::vector<std::uint32_t> marks;
    std::uint32_t stamp = 0;

    void prepare(std::size_t n) {
        if (marks.size() < n) {
            marks.assign(n, 0);
            stamp = 0;
        }
    }
};

thread_local VisitedScratch search_scratch;

} // namespace

KnnResult::KnnResult(std::size_t n_points, std::size_t k)
    : n_points_(n_points), k_(k), neighbors_(n_points * k), distances_(n_points * k) {}

std::size_t HnswParams::effective_ef_search(std::size_t k) const noexcept {
    return ef_search != 0 ? ef_search : std::max<std::size_t>(2 * k, 100);
}

std::size_t HnswIndex::capacity(int level) const noexcept {
    return level == 0 ? 2 * params_.max_connections : params_.max_connections;
}

std::span<const index_t> HnswIndex::neighbors(index_t i, int level) const noexcept {
    if (level > levels_[i]) {
        return {};
    }
    if (level == 0) {
        return {base_links_.data() + std::size_t(i) * capacity(0), base_counts_[i]};
    }
    return upper_links_[i][level - 1];
}

inline double HnswIndex::distance_prepared(const double* query, index_t i) const noexcept {
    if (metric_ == Metric::cosine) {
        return std::clamp(1.0 - detail::dot(query, point(i), dim_), 0.0, 2.0);
    }
    return detail::l2sq(query, point(i), dim_);
}

double HnswIndex::point_distance(index_t i, index_t j) const noexcept {
    return distance_prepared(point(i), j);
}

double HnswIndex::distance_to(std::span<const double> query, index_t i) const noexcept {
    if (metric_ == Metric::cosine) {
        const double norm = std::sqrt(detail::dot(query.data(), query.data(), dim_));
        if (norm == 0) {
            return 1.0;
        }
        return std::clamp(1.0 - detail::dot(query.data(), point(i), dim_) / norm, 0.0, 2.0);
    }
    return detail::l2sq(query.data(), point(i), dim_);
}

void HnswIndex::set_neighbors(index_t i, int level, std::span<const index_t> list) {
    if (level == 0) {
        std::copy(list.begin(), list.end(), base_links_.begin() + std::size_t(i) * capacity(0));
        base_counts_[i] = static_cast<std::uint32_t>(list.size());
    } else {
        upper_links_[i][level - 1].assign(list.begin(), list.end());
    }
}

std::vector<Candidate> HnswIndex::search_layer(const double* query, std::span<const index_t> entries,
                                               std::size_t ef, int level,
                                               std::vector<std::uint32_t>& visited,
                                               std::uint32_t& stamp) const {
    if (++stamp == 0) {
        std::fill(visited.begin(), visited.end(), 0);
        stamp = 1;
    }

    MinHeap candidates;
    MaxHeap results;
    for (index_t e : entries) {
        if (visited[e] == stamp) {
            continue;
        }
        visited[e] = stamp;
        const Candidate c{distance_prepared(query, e), e};
        candidates.push(c);
        results.push(c);
        if (results.size() > ef) {
            results.pop();
        }
    }

    while (!candidates.empty()) {
        const Candidate current = candidates.top();
        if (results.size() >= ef && current > results.top()) {
            break;
        }
        candidates.pop();
        for (index_t nb : neighbors(current.second, level)) {
            if (visited[nb] == stamp) {
                continue;
            }
            visited[nb] = stamp;
            const Candidate c{distance_prepared(query, nb), nb};
            if (results.size() < ef || c < results.top()) {
                candidates.push(c);
                results.push(c);
                if (results.size() > ef) {
                    results.pop();
                }
            }
        }
    }

    std::vector<Candidate> out(results.size());
    for (auto it = out.rbegin(); it != out.rend(); ++it) {
        *it = results.top();
        results.pop();
    }
    return out;
}

// Keeps a candidate only if it is closer to the base point than to every
// neighbor already kept, which spreads links across directions.
std::vector<index_t> HnswIndex::select_neighbors(std::vector<Candidate> candidates,
                                                 std::size_t limit) const {
    std::sort(candidates.begin(), candidates.end());
    std::vector<index_t> selected;
    selected.reserve(std::min(limit, candidates.size()));
    if (candidates.size() <= limit) {
        for (const auto& c : candidates) {
            selected.push_back(c.second);
        }
        return selected;
    }
    for (const auto& c : candidates) {
        if (selected.size() >= limit) {
            break;
        }
        bool keep = true;
        for (index_t s : selected) {
            if (point_distance(c.second, s) < c.first) {
                keep = false;
                break;
            }
        }
        if (keep) {
            selected.push_back(c.second);
        }
    }
    return selected;
}

void HnswIndex::insert(index_t q, std::vector<std::uint32_t>& visited, std::uint32_t& stamp) {
    const int level = levels_[q];
    if (max_level_ < 0) {
        entry_point_ = q;
        max_level_ = level;
        return;
    }

    const double* query = point(q);
    index_t current = entry_point_;
    double current_dist = distance_prepared(query, current);
    for (int lc = max_level_; lc > level; --lc) {
        bool changed = true;
        while (changed) {
            changed = false;
            for (index_t nb : neighbors(current, lc)) {
                const double d = distance_prepared(query, nb);
                if (d < current_dist || (d == current_dist && nb < current)) {
                    current = nb;
                    current_dist = d;
                    changed = true;
                }
            }
        }
    }

    std::vector<index_t> entries{current};
    for (int lc = std::min(level, max_level_); lc >= 0; --lc) {
        auto found = search_layer(query, entries, params_.ef_construction, lc, visited, stamp);
        const auto chosen = select_neighbors(found, params_.max_connections);
        set_neighbors(q, lc, chosen);

        const std::size_t cap = capacity(lc);
        for (index_t nb : chosen) {
            auto existing = neighbors(nb, lc);
            if (existing.size() < cap) {
                std::vector<index_t> grown(existing.begin(), existing.end());
                grown.push_back(q);
                set_neighbors(nb, lc, grown);
                continue;
            }
            std::vector<Candidate> pool;
            pool.reserve(existing.size() + 1);
            for (index_t e : existing) {
                pool.emplace_back(point_distance(nb, e), e);
            }
            pool.emplace_back(point_distance(nb, q), q);
            set_neighbors(nb, lc, select_neighbors(std::move(pool), cap));
        }

        entries.clear();
        for (const auto& c : found) {
            entries.push_back(c.second);
        }
    }

    if (level > max_level_) {
        entry_point_ = q;
        max_level_ = level;
    }
}

std::vector<Candidate> HnswIndex::search(std::span<const double> query, std::size_t ef) const {
    if (query.size() != dim_) {
        throw Error("knn", "query has " + std::to_string(query.size()) + " features, index has " +
                               std::to_string(dim_));
    }
    if (size() == 0) {
        return {};
    }

    std::vector<double> prepared(query.begin(), query.end());
    if (metric_ == Metric::cosine) {
        const double norm = std::sqrt(detail::dot(prepared.data(), prepared.data(), dim_));
        if (norm > 0) {
            for (auto& v : prepared) {
                v /= norm;
            }
        }
    }

    index_t current = entry_point_;
    double current_dist = distance_prepared(prepared.data(), current);
    for (int lc = max_level_; lc > 0; --lc) {
        bool changed = true;
        while (changed) {
            changed = false;
            for (index_t nb : neighbors(current, lc)) {
                const double d = distance_prepared(prepared.data(), nb);
                if (d < current_dist || (d == current_dist && nb < current)) {
                    current = nb;
                    current_dist = d;
                    changed = true;
                }
            }
        }
    }

    auto& scratch = search_scratch;
    scratch.prepare(size());
    const index_t entry[] = {current};
    return search_layer(prepared.data(), entry, std::max<std::size_t>(ef, 1), 0, scratch.marks,
                        scratch.stamp);
}

HnswIndex build_hnsw(const DataMatrix& data, Metric metric, const HnswParams& params,
                     std::uint64_t seed) {
    if (params.max_connections < 2) {
        throw Error("knn", "max_connections must be ≥ 2");
    }
    if (params.ef_construction < 1) {
        throw Error("knn", "ef_construction must be ≥ 1");
    }

    HnswIndex index;
    const std::size_t n = data.rows();
    index.dim_ = data.cols();
    index.metric_ = metric;
    index.params_ = params;
    index.points_ = data.matrix().values();
    if (metric == Metric::cosine) {
        for (std::size_t i = 0; i < n; ++i) {
            double* row = index.points_.data() + i * index.dim_;
            const double norm = std::sqrt(detail::dot(row, row, index.dim_));
            if (norm > 0) {
                for (std::size_t j = 0; j < index.dim_; ++j) {
                    row[j] /= norm;
                }
            }
        }
    }

    Rng rng(seed, 0x6b6e6e);
    const double level_scale = 1.0 / std::log(static_cast<double>(params.max_connections));
    index.levels_.resize(n);
    index.upper_links_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double u = 1.0 - rng.uniform();
        const int level = static_cast<int>(std::floor(-std::log(u) * level_scale));
        index.levels_[i] = level;
        index.upper_links_[i].resize(level);
    }
    index.base_links_.assign(n * index.capacity(0), 0);
    index.base_counts_.assign(n, 0);

    std::vector<std::uint32_t> visited(n, 0);
    std::uint32_t stamp = 0;
    for (std::size_t i = 0; i < n; ++i) {
        index.insert(static_cast<index_t>(i), visited, stamp);
    }
    return index;
}

namespace {

// Fills one result row from candidates sorted by (distance, index), skipping
// the query point itself. Returns false if there were too few candidates.
bool fill_row(std::span<const Candidate> found, index_t self, std::span<index_t> nbrs,
              std::span<double> dists) {
    std::size_t filled = 0;
    for (const auto& c : found) {
        if (c.second == self) {
            continue;
        }
        nbrs[filled] = c.second;
        dists[filled] = c.first;
        if (++filled == nbrs.size()) {
            return true;
        }
    }
    return false;
}

std::vector<Candidate> scan_row(const DataMatrix& data, std::size_t i, Metric metric) {
    std::vector<Candidate> all;
    all.reserve(data.rows() - 1);
    const auto query = data.row(i);
    for (std::size_t j = 0; j < data.rows(); ++j) {
        if (j != i) {
            all.emplace_back(distance(metric, query, data.row(j)), static_cast<index_t>(j));
        }
    }
    return all;
}

} // namespace

KnnResult query_knn(const HnswIndex& index, const DataMatrix& data, std::size_t k,
                    std::size_t n_threads) {
    const std::size_t n = data.rows();
    check_k(k, n);
    if (index.size() != n || index.dim() != data.cols()) {
        throw Error("knn", "index was not built from this data");
    }

    KnnResult result(n, k);
    const std::size_t ef = std::max(index.params().effective_ef_search(k), k + 1);
    detail::parallel_chunks(n, n_threads, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            const auto self = static_cast<index_t>(i);
            const auto found = index.search(data.row(i), ef);
            if (fill_row(found, self, result.neighbors(i), result.distances(i))) {
                continue;
            }
            // The layer search came back short; scan this row exactly.
            auto all = scan_row(data, i, index.metric());
            std::partial_sort(all.begin(), all.begin() + k, all.end());
            fill_row(all, self, result.neighbors(i), result.distances(i));
        }
    });
    return result;
}

KnnResult exact_knn(const DataMatrix& data, std::size_t k, Metric metric, std::size_t n_threads) {
    const std::size_t n = data.rows();
    check_k(k, n);

    KnnResult result(n, k);
    detail::parallel_chunks(
        n, n_threads,
        [&](std::size_t begin, std::size_t end) {
            for (std::size_t i = begin; i < end; ++i) {
                auto all = scan_row(data, i, metric);
                std::partial_sort(all.begin(), all.begin() + k, all.end());
                fill_row(all, static_cast<index_t>(i), result.neighbors(i), result.distances(i));
            }
        },
        64);
    return result;
}

double knn_recall(const KnnResult& approx, const KnnResult& exact) {
    if (approx.n_points() != exact.n_points() || approx.k() != exact.k()) {
        throw Error("knn", "recall needs results of identical shape");
    }
    if (exact.n_points() == 0) {
        return 1.0;
    }
    std::size_t hits = 0;
    for (std::size_t i = 0; i < exact.n_points(); ++i) {
        const auto truth = exact.neighbors(i);
        std::unordered_set<index_t> expected(truth.begin(), truth.end());
        for (index_t j : approx.neighbors(i)) {
            hits += expected.count(j);
        }
    }
    return static_cast<double>(hits) / static_cast<double>(exact.n_points() * exact.k());
}

} // namespace ncvis
