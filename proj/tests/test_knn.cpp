#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <vector>

#include "ncvis/distance.hpp"
#include "ncvis/knn.hpp"
#include "support.hpp"

using namespace ncvis;
using ncvis::testing::gaussian_data;
using ncvis::testing::line_points;

namespace {

std::vector<index_t> row(const KnnResult& r, std::size_t i) {
    auto n = r.neighbors(i);
    return {n.begin(), n.end()};
}

void expect_well_formed(const KnnResult& r) {
    for (std::size_t i = 0; i < r.n_points(); ++i) {
        const auto n = r.neighbors(i);
        const auto d = r.distances(i);
        for (std::size_t c = 0; c < r.k(); ++c) {
            EXPECT_NE(n[c], i);
            EXPECT_LT(n[c], r.n_points());
            EXPECT_GE(d[c], 0.0);
            if (c > 0) {
                EXPECT_LE(d[c - 1], d[c]);
            }
        }
    }
}

} // namespace

TEST(Hnsw, LevelZeroDegreeBounded) {
    const auto data = gaussian_data(1000, 8, 1);
    const auto index = build_hnsw(data, Metric::euclidean);
    EXPECT_EQ(index.size(), 1000u);
    for (index_t i = 0; i < 1000; ++i) {
        const auto links = index.neighbors(i, 0);
        EXPECT_LE(links.size(), 2 * index.params().max_connections);
        EXPECT_GE(links.size(), 1u);
        for (index_t j : links) {
            EXPECT_LT(j, 1000u);
            EXPECT_NE(j, i);
        }
        for (int level = 1; level <= index.level(i); ++level) {
            EXPECT_LE(index.neighbors(i, level).size(), index.params().max_connections);
            for (index_t j : index.neighbors(i, level)) {
                EXPECT_GE(index.level(j), level);
            }
        }
        EXPECT_TRUE(index.neighbors(i, index.level(i) + 1).empty());
    }
    EXPECT_EQ(index.level(index.entry_point()), index.max_level());
}

TEST(Hnsw, TwoPointsLinkEachOther) {
    const auto data = line_points({0.0, 5.0});
    const auto index = build_hnsw(data, Metric::euclidean);
    ASSERT_EQ(index.neighbors(0, 0).size(), 1u);
    ASSERT_EQ(index.neighbors(1, 0).size(), 1u);
    EXPECT_EQ(index.neighbors(0, 0)[0], 1u);
    EXPECT_EQ(index.neighbors(1, 0)[0], 0u);
}

TEST(Hnsw, DeterministicInSeed) {
    const auto data = gaussian_data(600, 5, 2);
    const auto a = build_hnsw(data, Metric::euclidean, {}, 9);
    const auto b = build_hnsw(data, Metric::euclidean, {}, 9);
    ASSERT_EQ(a.max_level(), b.max_level());
    EXPECT_EQ(a.entry_point(), b.entry_point());
    for (index_t i = 0; i < 600; ++i) {
        ASSERT_EQ(a.level(i), b.level(i));
        for (int level = 0; level <= a.level(i); ++level) {
            const auto la = a.neighbors(i, level), lb = b.neighbors(i, level);
            EXPECT_TRUE(std::equal(la.begin(), la.end(), lb.begin(), lb.end()));
        }
    }
}

TEST(QueryKnn, CollinearPoints) {
    const auto data = line_points({0.0, 1.0, 3.0});
    const auto result = query_knn(build_hnsw(data, Metric::euclidean), data, 1);
    EXPECT_EQ(result.neighbors(0)[0], 1u);
    EXPECT_EQ(result.neighbors(1)[0], 0u);
    EXPECT_EQ(result.neighbors(2)[0], 1u);
    EXPECT_DOUBLE_EQ(result.distances(2)[0], 4.0);
}

TEST(QueryKnn, DuplicatesFindEachOther) {
    DataMatrix data(Matrix(3, 2, std::vector<double>{1, 2, 1, 2, 10, 10}));
    for (auto metric : {Metric::euclidean, Metric::cosine}) {
        const auto result = query_knn(build_hnsw(data, metric), data, 1);
        EXPECT_EQ(result.neighbors(0)[0], 1u);
        EXPECT_EQ(result.neighbors(1)[0], 0u);
        EXPECT_NEAR(result.distances(0)[0], 0.0, 1e-12);
    }
}

TEST(QueryKnn, RejectsKAtLeastN) {
    const auto data = gaussian_data(10, 2, 3);
    const auto index = build_hnsw(data, Metric::euclidean);
    EXPECT_THROW(query_knn(index, data, 10), Error);
    EXPECT_THROW(query_knn(index, data, 0), Error);
    EXPECT_NO_THROW(query_knn(index, data, 9));
}

TEST(QueryKnn, RecallOnGaussians) {
    const auto data = gaussian_data(3000, 8, 4);
    const auto approx = query_knn(build_hnsw(data, Metric::euclidean), data, 15);
    const auto exact = exact_knn(data, 15, Metric::euclidean);
    expect_well_formed(approx);
    EXPECT_GE(knn_recall(approx, exact), 0.95);
}

TEST(QueryKnn, CosineRecall) {
    const auto data = gaussian_data(2000, 10, 5);
    const auto approx = query_knn(build_hnsw(data, Metric::cosine), data, 10);
    const auto exact = exact_knn(data, 10, Metric::cosine);
    expect_well_formed(approx);
    EXPECT_GE(knn_recall(approx, exact), 0.95);
}

TEST(QueryKnn, SmallSetsAreExact) {
    // With k close to N the search must still return N - 1 distinct points.
    for (std::size_t n : {2, 3, 5, 17, 40}) {
        const auto data = gaussian_data(n, 3, 10 + n);
        const auto approx = query_knn(build_hnsw(data, Metric::euclidean), data, n - 1);
        expect_well_formed(approx);
        EXPECT_DOUBLE_EQ(knn_recall(approx, exact_knn(data, n - 1, Metric::euclidean)), 1.0);
    }
}

TEST(QueryKnn, ThreadCountDoesNotChangeResult) {
    const auto data = gaussian_data(1500, 6, 6);
    const auto index = build_hnsw(data, Metric::euclidean);
    const auto one = query_knn(index, data, 15, 1);
    for (std::size_t t : {2, 4, 8}) {
        const auto many = query_knn(index, data, 15, t);
        for (std::size_t i = 0; i < 1500; ++i) {
            ASSERT_EQ(row(one, i), row(many, i));
        }
    }
}

TEST(ExactKnn, LineExample) {
    const auto data = line_points({0.0, 1.0, 3.0});
    const auto result = exact_knn(data, 2, Metric::euclidean);
    EXPECT_EQ(row(result, 0), (std::vector<index_t>{1, 2}));
    EXPECT_EQ(row(result, 1), (std::vector<index_t>{0, 2}));
    EXPECT_EQ(row(result, 2), (std::vector<index_t>{1, 0}));
}

TEST(ExactKnn, TiesGoToLowerIndex) {
    const auto data = line_points({1.0, 0.0, -1.0});
    EXPECT_EQ(exact_knn(data, 1, Metric::euclidean).neighbors(1)[0], 0u);
    const auto reversed = line_points({-1.0, 0.0, 1.0});
    EXPECT_EQ(exact_knn(reversed, 1, Metric::euclidean).neighbors(1)[0], 0u);
}

TEST(ExactKnn, ArgminOfDistanceRow) {
    const auto data = gaussian_data(80, 4, 7);
    const auto result = exact_knn(data, 1, Metric::euclidean);
    for (std::size_t i = 0; i < 80; ++i) {
        std::size_t best = i == 0 ? 1 : 0;
        for (std::size_t j = 0; j < 80; ++j) {
            if (j != i && euclidean_sq(data.row(i), data.row(j)) < euclidean_sq(data.row(i), data.row(best))) {
                best = j;
            }
        }
        EXPECT_EQ(result.neighbors(i)[0], best);
    }
}

TEST(ExactKnn, RejectsKAtLeastN) {
    const auto data = gaussian_data(5, 2, 8);
    EXPECT_THROW(exact_knn(data, 5, Metric::euclidean), Error);
}

TEST(ExactKnn, PermutationEquivariant) {
    Rng rng(11);
    for (int trial = 0; trial < 10; ++trial) {
        const std::size_t n = 20 + rng.below(60);
        const auto data = gaussian_data(n, 3, 200 + trial);
        std::vector<index_t> perm(n);
        std::iota(perm.begin(), perm.end(), 0);
        for (std::size_t i = n - 1; i > 0; --i) {
            std::swap(perm[i], perm[rng.below(i + 1)]);
        }
        Matrix permuted(n, 3);
        for (std::size_t i = 0; i < n; ++i) {
            std::copy_n(data.row(perm[i]).begin(), 3, permuted.row(i).begin());
        }
        const auto metric = trial % 2 ? Metric::cosine : Metric::euclidean;
        const auto original = exact_knn(data, 5, metric);
        const auto moved = exact_knn(DataMatrix(std::move(permuted)), 5, metric);
        // Continuous data has no ties, so the sets map onto each other exactly.
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t c = 0; c < 5; ++c) {
                EXPECT_EQ(perm[moved.neighbors(i)[c]], original.neighbors(perm[i])[c]);
            }
        }
    }
}

TEST(ExactKnn, ThreadCountDoesNotChangeResult) {
    const auto data = gaussian_data(700, 5, 12);
    const auto one = exact_knn(data, 7, Metric::euclidean, 1);
    const auto four = exact_knn(data, 7, Metric::euclidean, 4);
    for (std::size_t i = 0; i < 700; ++i) {
        EXPECT_EQ(row(one, i), row(four, i));
    }
}

TEST(KnnResult, RowsAreWellFormedOnRandomInputs) {
    Rng rng(13);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n = 2 + rng.below(150);
        const std::size_t k = 1 + rng.below(std::min<std::size_t>(n - 1, 20));
        const auto data = gaussian_data(n, 1 + rng.below(6), 300 + trial);
        const auto metric = trial % 3 == 0 ? Metric::cosine : Metric::euclidean;
        expect_well_formed(query_knn(build_hnsw(data, metric, {}, trial), data, k));
        expect_well_formed(exact_knn(data, k, metric));
    }
}
