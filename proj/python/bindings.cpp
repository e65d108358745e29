#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>

#include "ncvis/graph.hpp"
#include "ncvis/io.hpp"
#include "ncvis/knn.hpp"
#include "ncvis/mle.hpp"
#include "ncvis/nce.hpp"
#include "ncvis/pipeline.hpp"

namespace py = pybind11;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;
using IndexArray = py::array_t<std::int64_t, py::array::c_style | py::array::forcecast>;

ncvis::Matrix to_matrix(const Array& a) {
    if (a.ndim() != 2) {
        throw ncvis::Error("python", "expected a 2-D array, got " + std::to_string(a.ndim()) + " dimensions");
    }
    const auto rows = static_cast<std::size_t>(a.shape(0));
    const auto cols = static_cast<std::size_t>(a.shape(1));
    return ncvis::Matrix(rows, cols, std::vector<double>(a.data(), a.data() + rows * cols));
}

Array to_array(const ncvis::Matrix& m) {
    Array out({m.rows(), m.cols()});
    std::copy(m.values().begin(), m.values().end(), out.mutable_data());
    return out;
}

std::pair<IndexArray, Array> knn_arrays(const ncvis::KnnResult& r) {
    IndexArray neighbors({r.n_points(), r.k()});
    Array distances({r.n_points(), r.k()});
    for (std::size_t i = 0; i < r.n_points(); ++i) {
        for (std::size_t c = 0; c < r.k(); ++c) {
            neighbors.mutable_at(i, c) = r.neighbors(i)[c];
            distances.mutable_at(i, c) = r.distances(i)[c];
        }
    }
    return {neighbors, distances};
}

ncvis::NeighborGraph graph_from(const IndexArray& neighbors) {
    if (neighbors.ndim() != 2) {
        throw ncvis::Error("python", "neighbors must be a 2-D array");
    }
    const auto n = static_cast<std::size_t>(neighbors.shape(0));
    const auto k = static_cast<std::size_t>(neighbors.shape(1));
    ncvis::KnnResult knn(n, k);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t c = 0; c < k; ++c) {
            const auto j = neighbors.at(i, c);
            if (j < 0 || static_cast<std::size_t>(j) >= n) {
                throw ncvis::Error("python", "neighbor index " + std::to_string(j) + " out of range");
            }
            knn.neighbors(i)[c] = static_cast<ncvis::index_t>(j);
        }
    }
    return ncvis::build_graph(knn);
}

py::tuple embed(const Array& data, std::size_t k, std::size_t dim, std::size_t nu, double a, double b,
                std::size_t epochs, std::size_t samples, double lr, const std::string& metric,
                std::optional<std::size_t> threads, std::uint64_t seed, const std::string& init) {
    const ncvis::DataMatrix matrix(to_matrix(data));
    ncvis::EmbedOptions options;
    auto& h = options.hyper;
    h.k = k;
    h.dim = dim;
    h.nu = nu;
    h.a = a;
    h.b = b;
    h.n_epochs = epochs;
    h.n_samples_per_epoch = samples;
    h.lr0 = lr;
    h.metric = ncvis::parse_metric(metric);
    h.n_threads = threads.value_or(h.n_threads);
    h.seed = seed;
    if (init != "spectral" && init != "random") {
        throw ncvis::Error("python", "init must be 'spectral' or 'random', got '" + init + "'");
    }
    options.init = init == "random" ? ncvis::InitMethod::random : ncvis::InitMethod::spectral;

    ncvis::EmbedResult result;
    {
        py::gil_scoped_release release;
        result = ncvis::embed(matrix, options);
    }
    py::dict info;
    info["Q"] = result.state.Q;
    info["epochs"] = result.report.epochs_run;
    info["samples"] = result.report.samples_processed;
    info["objective_trace"] = result.report.objective_trace;
    info["time_knn"] = result.times.knn;
    info["time_graph"] = result.times.graph;
    info["time_init"] = result.times.init;
    info["time_train"] = result.times.train;
    return py::make_tuple(to_array(result.state.coords), info);
}

} // namespace

PYBIND11_MODULE(_ncvis, m) {
    m.doc() = "Noise contrastive visualization";
    py::register_exception<ncvis::Error>(m, "NcvisError", PyExc_ValueError);

    m.def("embed", &embed, py::arg("data"), py::arg("k") = 15, py::arg("dim") = 2, py::arg("nu") = 5,
          py::arg("a") = 1.0, py::arg("b") = 1.0, py::arg("epochs") = 50, py::arg("samples") = 0,
          py::arg("lr") = 1.0, py::arg("metric") = "euclidean", py::arg("threads") = py::none(),
          py::arg("seed") = 42, py::arg("init") = "spectral",
          "Embed the rows of data; returns (coords, info). samples=0 means one pass of N samples per epoch.");

    m.def(
        "knn",
        [](const Array& data, std::size_t k, const std::string& metric, std::size_t threads, std::uint64_t seed) {
            const ncvis::DataMatrix matrix(to_matrix(data));
            const auto kind = ncvis::parse_metric(metric);
            ncvis::KnnResult result;
            {
                py::gil_scoped_release release;
                result = ncvis::query_knn(ncvis::build_hnsw(matrix, kind, {}, seed), matrix, k, threads);
            }
            return knn_arrays(result);
        },
        py::arg("data"), py::arg("k") = 15, py::arg("metric") = "euclidean", py::arg("threads") = 1,
        py::arg("seed") = 42, "Approximate k nearest neighbors (HNSW); returns (neighbors, distances).");

    m.def(
        "exact_knn",
        [](const Array& data, std::size_t k, const std::string& metric, std::size_t threads) {
            return knn_arrays(ncvis::exact_knn(ncvis::DataMatrix(to_matrix(data)), k, ncvis::parse_metric(metric),
                                               threads));
        },
        py::arg("data"), py::arg("k") = 15, py::arg("metric") = "euclidean", py::arg("threads") = 1,
        "Brute-force k nearest neighbors; returns (neighbors, distances).");

    m.def(
        "neighbor_graph",
        [](const IndexArray& neighbors) {
            const auto g = graph_from(neighbors);
            IndexArray edges({g.n_edges(), std::size_t{2}});
            for (std::size_t e = 0; e < g.n_edges(); ++e) {
                edges.mutable_at(e, 0) = g.edge(e).source;
                edges.mutable_at(e, 1) = g.edge(e).target;
            }
            py::array_t<double> row_sums(g.n_points());
            std::copy(g.row_sums().begin(), g.row_sums().end(), row_sums.mutable_data());
            return py::make_tuple(edges, g.edge_prob(), row_sums);
        },
        py::arg("neighbors"), "Symmetrized kNN graph; returns (edges, edge_prob, row_sums).");

    m.def(
        "model_prob",
        [](const std::vector<double>& zi, const std::vector<double>& zj, double Q, double a, double b) {
            return ncvis::model_prob(zi, zj, Q, a, b);
        },
        py::arg("zi"), py::arg("zj"), py::arg("Q") = 0.0, py::arg("a") = 1.0, py::arg("b") = 1.0);
    m.def("positive_term", &ncvis::positive_term, py::arg("pm"), py::arg("pn"), py::arg("nu"));
    m.def("noise_term", &ncvis::noise_term, py::arg("pm"), py::arg("pn"), py::arg("nu"));

    m.def(
        "normalized_likelihood",
        [](const Array& coords, const IndexArray& neighbors, double a, double b) {
            return ncvis::normalized_likelihood({to_matrix(coords), 0.0}, graph_from(neighbors), a, b);
        },
        py::arg("coords"), py::arg("neighbors"), py::arg("a") = 1.0, py::arg("b") = 1.0,
        "Explicitly normalized log-likelihood of the kNN edges under the embedding.");

    m.def(
        "read_csv", [](const std::string& path) { return to_array(ncvis::read_csv(path).matrix()); },
        py::arg("path"));
    m.def(
        "read_bin", [](const std::string& path) { return to_array(ncvis::read_bin(path).matrix()); },
        py::arg("path"));
    m.def(
        "write_bin", [](const Array& data, const std::string& path) { ncvis::write_bin(to_matrix(data), path); },
        py::arg("data"), py::arg("path"));
    m.def(
        "write_embedding",
        [](const Array& coords, const std::string& path) { ncvis::write_embedding({to_matrix(coords), 0.0}, path); },
        py::arg("coords"), py::arg("path"));
    m.def(
        "write_svg",
        [](const Array& coords, const std::string& path, std::optional<std::vector<std::string>> labels) {
            ncvis::write_svg_scatter({to_matrix(coords), 0.0}, labels ? &*labels : nullptr, path);
        },
        py::arg("coords"), py::arg("path"), py::arg("labels") = py::none());
}
