#include "ncvis/optimizer.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <string>
#include <thread>

#include "ncvis/nce.hpp"
#include "ncvis/random.hpp"

namespace ncvis {

namespace {

// Workers share the parameters without locks. Relaxed atomic loads and stores
// make concurrent access well defined; read-modify-write sequences can still
// interleave and drop an update, which the algorithm tolerates.
inline double load(double& x) noexcept {
    return std::atomic_ref<double>(x).load(std::memory_order_relaxed);
}
inline void store(double& x, double v) noexcept {
    std::atomic_ref<double>(x).store(v, std::memory_order_relaxed);
}

struct Shared {
    double* coords;
    double* Q;
    std::size_t dim;
    std::size_t nu;
    double a;
    double b;
    double grad_clip;
    const EdgeSampler* sampler;
    const std::vector<double>* nu_pn;
};

class Worker {
public:
    Worker(const Shared& shared, Rng rng)
        : s_(shared), rng_(std::move(rng)), pairs_(shared.nu + 1), scales_(shared.nu + 1),
          diffs_((shared.nu + 1) * shared.dim) {}

    // Runs `count` ascent steps at learning rate lr; returns the summed
    // sampled objective.
    double run(std::size_t count, double lr) {
        double objective = 0;
        for (std::size_t step = 0; step < count; ++step) {
            objective += this->step(lr);
        }
        return objective;
    }

private:
    // Gradient of one pair at the current parameters, saved for the update.
    // Works with the odds ratio r = nu * pn / pm, so the per-pair weights are
    // r / (1 + r) for data and -1 / (1 + r) for noise without any exp or log;
    // falls back to the log-domain forms when exp(Q) leaves double range.
    double evaluate(std::size_t slot, Edge pair, double Q, double exp_Q, bool is_data, double& d_Q) {
        const std::size_t m = s_.dim;
        double* zi = s_.coords + std::size_t(pair.source) * m;
        double* zj = s_.coords + std::size_t(pair.target) * m;
        double* diff = diffs_.data() + slot * m;
        double dist2 = 0;
        for (std::size_t l = 0; l < m; ++l) {
            diff[l] = load(zi[l]) - load(zj[l]);
            dist2 += diff[l] * diff[l];
        }

        double coef = 0;
        double denominator = 0;
        if (s_.b == 1.0) {
            denominator = 1.0 + s_.a * dist2;
            coef = 2.0 * s_.a / denominator;
        } else {
            const auto kernel = detail::pair_kernel(dist2, s_.a, s_.b);
            denominator = std::exp(kernel.log_denominator);
            coef = kernel.coef;
        }

        double w = 0;
        double term = 0;
        const double r = (*s_.nu_pn)[pair.source] * denominator * exp_Q;
        if (std::isfinite(r) && r > 0) {
            if (is_data) {
                w = r / (1.0 + r);
                term = -std::log1p(r);
            } else {
                w = -1.0 / (1.0 + r);
                term = -std::log1p(1.0 / r);
            }
        } else {
            const double log_pm = -std::log(denominator) - Q;
            const double log_nu_pn = std::log((*s_.nu_pn)[pair.source]);
            w = is_data ? detail::positive_weight(log_pm, log_nu_pn)
                        : detail::noise_weight(log_pm, log_nu_pn);
            term = is_data ? detail::positive_term_log(log_pm, log_nu_pn)
                           : detail::noise_term_log(log_pm, log_nu_pn);
        }
        pairs_[slot] = pair;
        scales_[slot] = -w * coef;
        d_Q += clip(-w, s_.grad_clip);
        return term;
    }

    double step(double lr) {
        const std::size_t m = s_.dim;
        const double Q = load(*s_.Q);
        const double exp_Q = std::exp(Q);
        double d_Q = 0;
        double objective = evaluate(0, s_.sampler->sample_data_edge(rng_), Q, exp_Q, true, d_Q);
        for (std::size_t t = 1; t <= s_.nu; ++t) {
            objective += evaluate(t, s_.sampler->sample_noise_edge(rng_), Q, exp_Q, false, d_Q);
        }

        for (std::size_t slot = 0; slot <= s_.nu; ++slot) {
            double* zi = s_.coords + std::size_t(pairs_[slot].source) * m;
            double* zj = s_.coords + std::size_t(pairs_[slot].target) * m;
            const double* diff = diffs_.data() + slot * m;
            for (std::size_t l = 0; l < m; ++l) {
                const double g = lr * clip(scales_[slot] * diff[l], s_.grad_clip);
                store(zi[l], load(zi[l]) + g);
                store(zj[l], load(zj[l]) - g);
            }
        }
        store(*s_.Q, load(*s_.Q) + lr * d_Q);
        return objective;
    }

    Shared s_;
    Rng rng_;
    std::vector<Edge> pairs_;
    std::vector<double> scales_;
    std::vector<double> diffs_;
};

} // namespace

double lr_schedule(std::size_t epoch, std::size_t n_epochs, double lr0) {
    if (epoch >= n_epochs) {
        throw Error("optimizer", "epoch " + std::to_string(epoch) + " outside schedule of " +
                                     std::to_string(n_epochs) + " epochs");
    }
    return lr0 * (1.0 - static_cast<double>(epoch) / static_cast<double>(n_epochs));
}

TrainReport train(EmbeddingState& state, const EdgeSampler& sampler, const NeighborGraph& graph,
                  const Hyperparams& h, const ProgressCallback& progress) {
    const auto start = std::chrono::steady_clock::now();
    const std::size_t n = graph.n_points();
    validate_hyperparams(h, n);
    if (&sampler.graph() != &graph) {
        throw Error("optimizer", "sampler was built for a different graph");
    }
    if (state.coords.rows() != n || state.coords.cols() != h.dim) {
        throw Error("optimizer", "embedding is " + std::to_string(state.coords.rows()) + "x" +
                                     std::to_string(state.coords.cols()) + ", expected " +
                                     std::to_string(n) + "x" + std::to_string(h.dim));
    }
    if (!state.coords.all_finite() || !std::isfinite(state.Q)) {
        throw Error("optimizer", "initial embedding is not finite");
    }

    std::vector<double> nu_pn(n);
    for (std::size_t i = 0; i < n; ++i) {
        nu_pn[i] = static_cast<double>(h.nu) * graph.row_sums()[i] / static_cast<double>(n - 1);
    }

    const Shared shared{state.coords.data(), &state.Q, h.dim,        h.nu,       h.a,
                        h.b,                 h.grad_clip, &sampler, &nu_pn};
    const std::size_t samples = h.samples_per_epoch(n);
    const std::size_t n_workers = std::max<std::size_t>(1, std::min(h.n_threads, samples));
    std::vector<Worker> workers;
    workers.reserve(n_workers);
    for (std::size_t t = 0; t < n_workers; ++t) {
        workers.emplace_back(shared, Rng(h.seed, 0x5eed0000 + t));
    }

    TrainReport report;
    std::vector<double> partial(n_workers);
    for (std::size_t epoch = 0; epoch < h.n_epochs; ++epoch) {
        const double lr = lr_schedule(epoch, h.n_epochs, h.lr0);
        auto share = [&](std::size_t t) {
            return samples / n_workers + (t < samples % n_workers ? 1 : 0);
        };

        if (n_workers == 1) {
            partial[0] = workers[0].run(samples, lr);
        } else {
            std::vector<std::jthread> pool;
            pool.reserve(n_workers);
            for (std::size_t t = 0; t < n_workers; ++t) {
                pool.emplace_back([&, t] { partial[t] = workers[t].run(share(t), lr); });
            }
        }

        if (!state.coords.all_finite() || !std::isfinite(state.Q)) {
            throw Error("optimizer", "non-finite parameter after epoch " + std::to_string(epoch) +
                                         " (lr=" + std::to_string(lr) + ")");
        }

        double objective = 0;
        for (double p : partial) {
            objective += p;
        }
        objective /= static_cast<double>(samples);
        report.objective_trace.push_back(objective);
        report.epochs_run = epoch + 1;
        report.samples_processed += samples;
        if (progress) {
            progress(epoch, lr, objective);
        }
    }

    report.final_Q = state.Q;
    report.wall_time =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

} // namespace ncvis
