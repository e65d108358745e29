#include "ncvis/pipeline.hpp"

#include <chrono>

#include "ncvis/graph.hpp"
#include "ncvis/spectral.hpp"

namespace ncvis {

namespace {

class Stopwatch {
public:
    double lap() {
        const auto now = std::chrono::steady_clock::now();
        const double seconds = std::chrono::duration<double>(now - last_).count();
        last_ = now;
        return seconds;
    }

private:
    std::chrono::steady_clock::time_point last_ = std::chrono::steady_clock::now();
};

} // namespace

EmbedResult embed(const DataMatrix& data, const EmbedOptions& options,
                  const ProgressCallback& progress) {
    const Hyperparams& h = options.hyper;
    validate_hyperparams(h, data.rows());

    EmbedResult result;
    Stopwatch clock;

    const HnswIndex index = build_hnsw(data, h.metric, options.hnsw, h.seed);
    const KnnResult knn = query_knn(index, data, h.k, h.n_threads);
    result.times.knn = clock.lap();

    const NeighborGraph graph = build_graph(knn);
    const EdgeSampler sampler(graph);
    result.times.graph = clock.lap();

    result.state.coords = options.init == InitMethod::spectral
                              ? power_iteration_init(graph, h.dim, options.power_iterations, h.seed)
                              : random_init(data.rows(), h.dim, h.seed);
    result.state.Q = 0.0;
    result.times.init = clock.lap();

    result.report = train(result.state, sampler, graph, h, progress);
    result.times.train = clock.lap();
    return result;
}

} // namespace ncvis
