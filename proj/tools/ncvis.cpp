// ncvis command-line front end.
//
//   ncvis embed --input data.csv --output out.tsv [--plot out.svg --labels labels.txt]
//   ncvis oracle --input data.csv --output mle.tsv     (hidden; reference likelihood)

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "ncvis/graph.hpp"
#include "ncvis/io.hpp"
#include "ncvis/knn.hpp"
#include "ncvis/mle.hpp"
#include "ncvis/pipeline.hpp"
#include "ncvis/spectral.hpp"

namespace {

struct InputOptions {
    std::string input;
    std::string format = "csv";
};

ncvis::DataMatrix load(const InputOptions& in) {
    return in.format == "bin" ? ncvis::read_bin(in.input) : ncvis::read_csv(in.input);
}

void add_input_flags(CLI::App* app, InputOptions& in) {
    app->add_option("--input", in.input, "Input matrix, one row per point")->required();
    app->add_option("--format", in.format, "Input format")
        ->check(CLI::IsMember({"csv", "bin"}))
        ->capture_default_str();
}

struct EmbedArgs {
    InputOptions in;
    std::string output;
    std::string plot;
    std::string labels;
    std::string metric = "euclidean";
    std::string init = "spectral";
    std::size_t samples = 0;
    ncvis::Hyperparams hyper;
};

int run_embed(EmbedArgs& args) {
    const ncvis::DataMatrix data = load(args.in);
    ncvis::EmbedOptions options;
    options.hyper = args.hyper;
    options.hyper.metric = ncvis::parse_metric(args.metric);
    options.hyper.n_samples_per_epoch = args.samples;
    options.init = args.init == "random" ? ncvis::InitMethod::random : ncvis::InitMethod::spectral;

    std::optional<std::vector<std::string>> labels;
    if (!args.labels.empty()) {
        labels = ncvis::read_labels(args.labels);
        if (labels->size() != data.rows()) {
            throw ncvis::Error("io", args.labels + ": " + std::to_string(labels->size()) +
                                         " labels for " + std::to_string(data.rows()) + " points");
        }
    }

    const auto result = ncvis::embed(data, options);
    ncvis::write_embedding(result.state, args.output);
    if (!args.plot.empty()) {
        ncvis::write_svg_scatter(result.state, labels ? &*labels : nullptr, args.plot);
    }

    const auto& t = result.times;
    std::printf("points\t%zu\n", data.rows());
    std::printf("features\t%zu\n", data.cols());
    std::printf("epochs\t%zu\n", result.report.epochs_run);
    std::printf("samples\t%zu\n", result.report.samples_processed);
    std::printf("threads\t%zu\n", options.hyper.n_threads);
    std::printf("final_Q\t%.6f\n", result.report.final_Q);
    if (!result.report.objective_trace.empty()) {
        std::printf("objective\t%.6f\n", result.report.objective_trace.back());
    }
    std::printf("time_knn\t%.3f\n", t.knn);
    std::printf("time_graph\t%.3f\n", t.graph);
    std::printf("time_init\t%.3f\n", t.init);
    std::printf("time_train\t%.3f\n", t.train);
    std::printf("time_total\t%.3f\n", t.total());
    return 0;
}

struct OracleArgs {
    InputOptions in;
    std::string output;
    std::string evaluate;
    std::string metric = "euclidean";
    std::string init = "spectral";
    std::size_t k = 15;
    std::size_t dim = 2;
    double a = 1.0;
    double b = 1.0;
    std::size_t steps = 2000;
    double step = 1.0;
    std::uint64_t seed = 42;
};

int run_oracle(const OracleArgs& args) {
    const ncvis::DataMatrix data = load(args.in);
    ncvis::Hyperparams h;
    h.k = args.k;
    h.dim = args.dim;
    h.a = args.a;
    h.b = args.b;
    validate_hyperparams(h, data.rows());

    const auto knn = ncvis::exact_knn(data, args.k, ncvis::parse_metric(args.metric));
    const auto graph = ncvis::build_graph(knn);
    ncvis::Matrix start = args.init == "random"
                              ? ncvis::random_init(data.rows(), args.dim, args.seed)
                              : ncvis::power_iteration_init(graph, args.dim, 100, args.seed);
    const auto state =
        ncvis::mle_gradient_ascent(graph, std::move(start), args.a, args.b, args.steps, args.step);

    std::printf("normalized_likelihood\t%.10f\n",
                ncvis::normalized_likelihood(state, graph, args.a, args.b));
    if (!args.output.empty()) {
        ncvis::write_embedding(state, args.output);
    }
    if (!args.evaluate.empty()) {
        ncvis::EmbeddingState other{ncvis::read_table(args.evaluate, '\t'), 0.0};
        std::printf("evaluated_likelihood\t%.10f\n",
                    ncvis::normalized_likelihood(other, graph, args.a, args.b));
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Noise contrastive visualization of high-dimensional vectors"};
    app.require_subcommand(1);

    EmbedArgs embed;
    auto* cmd = app.add_subcommand("embed", "Embed a dataset and write the coordinates");
    add_input_flags(cmd, embed.in);
    auto& h = embed.hyper;
    cmd->add_option("--output", embed.output, "Output TSV of embedding coordinates")->required();
    cmd->add_option("--plot", embed.plot, "Optional SVG scatter plot (2-D only)");
    cmd->add_option("--labels", embed.labels, "Optional label per row, used to color the plot");
    cmd->add_option("--dim", h.dim, "Embedding dimension")->capture_default_str();
    cmd->add_option("--k", h.k, "Nearest neighbors per point")->capture_default_str();
    cmd->add_option("--epochs", h.n_epochs, "Optimization epochs")->capture_default_str();
    cmd->add_option("--samples", embed.samples, "Data samples per epoch (default: N)");
    cmd->add_option("--nu", h.nu, "Noise samples per data sample")->capture_default_str();
    cmd->add_option("--a", h.a, "Kernel scale a")->capture_default_str();
    cmd->add_option("--b", h.b, "Kernel exponent b")->capture_default_str();
    cmd->add_option("--lr", h.lr0, "Initial learning rate")->capture_default_str();
    cmd->add_option("--metric", embed.metric, "Input distance")
        ->check(CLI::IsMember({"euclidean", "cosine"}))
        ->capture_default_str();
    cmd->add_option("--threads", h.n_threads, "Worker threads")->capture_default_str();
    cmd->add_option("--seed", h.seed, "Random seed")->capture_default_str();
    cmd->add_option("--init", embed.init, "Initialization")
        ->check(CLI::IsMember({"spectral", "random"}))
        ->capture_default_str();

    OracleArgs oracle;
    auto* ocmd = app.add_subcommand("oracle", "Normalized maximum-likelihood reference embedding");
    ocmd->group("");
    add_input_flags(ocmd, oracle.in);
    ocmd->add_option("--output", oracle.output, "Output TSV of the reference embedding");
    ocmd->add_option("--evaluate", oracle.evaluate, "Embedding TSV whose likelihood to report");
    ocmd->add_option("--metric", oracle.metric)->check(CLI::IsMember({"euclidean", "cosine"}));
    ocmd->add_option("--init", oracle.init)->check(CLI::IsMember({"spectral", "random"}));
    ocmd->add_option("--k", oracle.k)->capture_default_str();
    ocmd->add_option("--dim", oracle.dim)->capture_default_str();
    ocmd->add_option("--a", oracle.a)->capture_default_str();
    ocmd->add_option("--b", oracle.b)->capture_default_str();
    ocmd->add_option("--steps", oracle.steps, "Full-batch ascent steps")->capture_default_str();
    ocmd->add_option("--step", oracle.step, "Ascent step size")->capture_default_str();
    ocmd->add_option("--seed", oracle.seed)->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    try {
        if (cmd->parsed()) {
            return run_embed(embed);
        }
        return run_oracle(oracle);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
