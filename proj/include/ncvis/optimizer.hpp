#ifndef NCVIS_OPTIMIZER_HPP
#define NCVIS_OPTIMIZER_HPP

#include <algorithm>
#include <cstddef>
#include <functional>
#include <vector>

#include "ncvis/core.hpp"
#include "ncvis/graph.hpp"

namespace ncvis {

struct TrainReport {
    std::size_t epochs_run = 0;
    std::size_t samples_processed = 0;
    double final_Q = 0;
    double wall_time = 0;
    // Mean sampled J_T per data sample, one entry per epoch.
    std::vector<double> objective_trace;
};

/// Called on the training thread after every epoch with
/// (epoch, learning rate used, objective estimate).
using ProgressCallback = std::function<void(std::size_t, double, double)>;

/// lr0 * (1 - epoch / n_epochs); requires epoch < n_epochs.
double lr_schedule(std::size_t epoch, std::size_t n_epochs, double lr0);

inline double clip(double g, double c) noexcept { return std::min(std::max(g, -c), c); }

/// Stochastic NCE gradient ascent on (coords, Q). Each step draws one data
/// edge and nu noise edges, evaluates all 1 + nu per-pair gradients at the
/// current parameters, clips every coordinate to [-grad_clip, grad_clip] and
/// adds lr * gradient.
///
/// With h.n_threads > 1 the per-epoch sample budget is split between workers
/// that update the shared parameters without locking; results are then not
/// bitwise reproducible. With one thread the run is deterministic in h.seed.
///
/// Throws Error("optimizer", ...) if any parameter is non-finite at an epoch
/// boundary.
TrainReport train(EmbeddingState& state, const EdgeSampler& sampler, const NeighborGraph& graph,
                  const Hyperparams& h, const ProgressCallback& progress = {});

} // namespace ncvis

#endif
