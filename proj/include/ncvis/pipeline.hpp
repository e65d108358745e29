#ifndef NCVIS_PIPELINE_HPP
#define NCVIS_PIPELINE_HPP

#include <cstddef>

#include "ncvis/core.hpp"
#include "ncvis/knn.hpp"
#include "ncvis/optimizer.hpp"

namespace ncvis {

enum class InitMethod { spectral, random };

struct EmbedOptions {
    Hyperparams hyper;
    InitMethod init = InitMethod::spectral;
    std::size_t power_iterations = 100;
    HnswParams hnsw;
};

/// Wall-clock seconds spent in each stage.
struct StageTimes {
    double knn = 0;
    double graph = 0;
    double init = 0;
    double train = 0;

    double total() const noexcept { return knn + graph + init + train; }
};

struct EmbedResult {
    EmbeddingState state;
    TrainReport report;
    StageTimes times;
};

/// kNN index -> neighbor graph -> initialization -> NCE training.
EmbedResult embed(const DataMatrix& data, const EmbedOptions& options,
                  const ProgressCallback& progress = {});

} // namespace ncvis

#endif
