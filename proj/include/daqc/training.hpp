// Copyright 2026 The daqcsim Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
/**
 * @file
 * Supervised training of the hybrid model: Adam with decoupled weight
 * decay, cosine-annealed learning rate, early stopping on validation
 * AUC, and per-epoch gradient-norm tracking.
 *
 * Per-sample gradients within a batch are computed independently (in
 * parallel when `threads` allows) and reduced in sample order, so the
 * result does not depend on the thread count.
 */
#pragma once

#include "daqc/gradients.hpp"
#include "daqc/metrics.hpp"
#include "daqc/model.hpp"
#include "daqc/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <span>
#include <vector>

namespace daqc {

struct TrainConfig {
    double learning_rate = 0.005;
    double weight_decay = 1e-4;
    std::size_t epochs = 250;
    std::size_t batch_size = 64;
    std::size_t early_stop_patience = 20;
    std::uint64_t init_seed = 0;
    std::size_t threads = 0; ///< 0 = all hardware threads.

    void validate() const {
        if (learning_rate < 0.0 || weight_decay < 0.0) {
            throw config_error("learning_rate and weight_decay must be >= 0");
        }
        if (epochs == 0 || batch_size == 0) {
            throw config_error("epochs and batch_size must be positive");
        }
        if (early_stop_patience == 0 || early_stop_patience > epochs) {
            throw config_error("early_stop_patience must be in [1, epochs]");
        }
    }
};

struct EpochStats {
    std::size_t epoch = 0;
    double train_loss = 0.0;
    double val_loss = 0.0;
    double val_auc = 0.0;
    /// L2 norm of the batch-mean circuit-parameter gradient, averaged
    /// over the epoch's optimizer steps.
    double grad_l2 = 0.0;
};

struct TrainResult {
    ModelParams params; ///< Parameters of the best validation-AUC epoch.
    std::vector<EpochStats> trace;
    std::size_t best_epoch = 0;
    double best_val_auc = 0.0;
};

/// Cosine annealing from lr0 to 0 across `total` epochs.
inline double cosine_lr(double lr0, std::size_t epoch, std::size_t total) {
    if (total <= 1) {
        return lr0;
    }
    const double t = static_cast<double>(epoch) /
                     static_cast<double>(total);
    return 0.5 * lr0 * (1.0 + std::cos(std::numbers::pi * t));
}

namespace detail {

/// AdamW over one flat parameter vector (PyTorch-style decoupled decay:
/// p <- p - lr * (mhat / (sqrt(vhat) + eps) + wd * p)).
struct AdamState {
    std::vector<double> m;
    std::vector<double> v;
    std::size_t step = 0;
    static constexpr double beta1 = 0.9;
    static constexpr double beta2 = 0.999;
    static constexpr double eps = 1e-8;

    explicit AdamState(std::size_t dim) : m(dim, 0.0), v(dim, 0.0) {}

    void update(std::vector<double> &params, std::span<const double> grad,
                double lr, double weight_decay) {
        ++step;
        const double bc1 =
            1.0 - std::pow(beta1, static_cast<double>(step));
        const double bc2 =
            1.0 - std::pow(beta2, static_cast<double>(step));
        for (std::size_t i = 0; i < params.size(); ++i) {
            m[i] = beta1 * m[i] + (1.0 - beta1) * grad[i];
            v[i] = beta2 * v[i] + (1.0 - beta2) * grad[i] * grad[i];
            const double mhat = m[i] / bc1;
            const double vhat = v[i] / bc2;
            params[i] -=
                lr * (mhat / (std::sqrt(vhat) + eps) + weight_decay * params[i]);
        }
    }
};

} // namespace detail

/// Per-sample softmax scores for a split, row-major n_samples x C.
inline std::vector<double> predict_scores(const CircuitSpec &spec,
                                          const ModelParams &params,
                                          std::span<const EncodedSample> split,
                                          std::size_t threads = 0) {
    params.check_shapes(spec);
    const std::size_t c = params.n_classes();
    std::vector<double> scores(split.size() * c);
    parallel_for(split.size(), threads, [&](std::size_t s) {
        const auto m = run_circuit(spec, split[s], params.theta);
        const auto p = softmax(readout_logits(params, m));
        std::copy(p.begin(), p.end(), scores.begin() + s * c);
    });
    return scores;
}

/// MetricsReport over a split.
inline MetricsReport evaluate(const CircuitSpec &spec,
                              const ModelParams &params,
                              std::span<const EncodedSample> split,
                              std::size_t threads = 0) {
    if (split.empty()) {
        throw data_error("cannot evaluate an empty split");
    }
    const auto scores = predict_scores(spec, params, split, threads);
    std::vector<int> labels(split.size());
    for (std::size_t s = 0; s < split.size(); ++s) {
        labels[s] = split[s].label;
    }
    return evaluate_scores(scores, labels, params.n_classes());
}

namespace detail {

struct ValStats {
    double loss = 0.0;
    double auc = 0.0;
};

inline ValStats validation_stats(const CircuitSpec &spec,
                                 const ModelParams &params,
                                 std::span<const EncodedSample> val,
                                 std::size_t threads) {
    const std::size_t c = params.n_classes();
    std::vector<double> losses(val.size());
    std::vector<double> scores(val.size() * c);
    parallel_for(val.size(), threads, [&](std::size_t s) {
        const auto m = run_circuit(spec, val[s], params.theta);
        const auto logits = readout_logits(params, m);
        losses[s] = cross_entropy(logits, val[s].label);
        const auto p = softmax(logits);
        std::copy(p.begin(), p.end(), scores.begin() + s * c);
    });
    ValStats stats;
    for (double l : losses) {
        stats.loss += l;
    }
    stats.loss /= static_cast<double>(val.size());
    std::vector<int> labels(val.size());
    for (std::size_t s = 0; s < val.size(); ++s) {
        labels[s] = val[s].label;
    }
    stats.auc = evaluate_scores(scores, labels, c).auc;
    return stats;
}

} // namespace detail

/**
 * @brief Trains the model and returns the best-validation-AUC parameters
 * with the per-epoch trace.
 *
 * Stops early after `early_stop_patience` epochs without a validation
 * AUC improvement. Deterministic in (spec, splits, config): batch
 * shuffling, initialization, and reduction order are all seeded and
 * thread-count independent.
 */
inline TrainResult train(const CircuitSpec &spec,
                         std::span<const EncodedSample> train_split,
                         std::span<const EncodedSample> val_split,
                         std::size_t n_classes, const TrainConfig &config) {
    config.validate();
    if (train_split.empty() || val_split.empty()) {
        throw data_error("training requires non-empty train and val splits");
    }
    for (const auto &sample : train_split) {
        if (sample.label < 0 ||
            static_cast<std::size_t>(sample.label) >= n_classes) {
            throw data_error("train label outside [0, C)");
        }
    }

    ModelParams params = init_params(spec, n_classes, config.init_seed);
    const std::size_t dim_theta = params.theta.size();
    const std::size_t dim_w = params.readout_w.size();
    const std::size_t dim_b = params.readout_b.size();

    detail::AdamState adam(dim_theta + dim_w + dim_b);
    std::vector<double> flat_grad(dim_theta + dim_w + dim_b);

    TrainResult result;
    result.params = params;
    result.best_val_auc = -1.0;

    std::vector<std::size_t> order(train_split.size());
    std::iota(order.begin(), order.end(), std::size_t{0});

    std::size_t epochs_since_best = 0;
    std::vector<SampleGradient> batch_grads(config.batch_size);

    for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
        const double lr = cosine_lr(config.learning_rate, epoch, config.epochs);
        Rng shuffle_rng(mix_seed(config.init_seed, 0x5u) + epoch);
        seeded_shuffle(order, shuffle_rng);

        double loss_acc = 0.0;
        double grad_norm_acc = 0.0;
        std::size_t n_steps = 0;

        for (std::size_t start = 0; start < order.size();
             start += config.batch_size) {
            const std::size_t b =
                std::min(config.batch_size, order.size() - start);
            parallel_for(b, config.threads, [&](std::size_t i) {
                const EncodedSample &sample = train_split[order[start + i]];
                batch_grads[i] = grad_adjoint(spec, sample.angles, params,
                                              sample.label);
            });

            // Reduce in sample order for thread-count independence.
            std::fill(flat_grad.begin(), flat_grad.end(), 0.0);
            double batch_loss = 0.0;
            for (std::size_t i = 0; i < b; ++i) {
                const SampleGradient &g = batch_grads[i];
                batch_loss += g.loss;
                for (std::size_t j = 0; j < dim_theta; ++j) {
                    flat_grad[j] += g.grad_theta[j];
                }
                for (std::size_t j = 0; j < dim_w; ++j) {
                    flat_grad[dim_theta + j] += g.grad_w[j];
                }
                for (std::size_t j = 0; j < dim_b; ++j) {
                    flat_grad[dim_theta + dim_w + j] += g.grad_b[j];
                }
            }
            const double inv_b = 1.0 / static_cast<double>(b);
            for (double &g : flat_grad) {
                g *= inv_b;
            }
            batch_loss *= inv_b;

            double theta_norm_sq = 0.0;
            for (std::size_t j = 0; j < dim_theta; ++j) {
                theta_norm_sq += flat_grad[j] * flat_grad[j];
            }
            grad_norm_acc += std::sqrt(theta_norm_sq);
            loss_acc += batch_loss;
            ++n_steps;

            // One flat AdamW step over (theta | W | b).
            std::vector<double> flat_params;
            flat_params.reserve(flat_grad.size());
            flat_params.insert(flat_params.end(), params.theta.begin(),
                               params.theta.end());
            flat_params.insert(flat_params.end(), params.readout_w.begin(),
                               params.readout_w.end());
            flat_params.insert(flat_params.end(), params.readout_b.begin(),
                               params.readout_b.end());
            adam.update(flat_params, flat_grad, lr, config.weight_decay);
            std::copy(flat_params.begin(), flat_params.begin() + dim_theta,
                      params.theta.begin());
            std::copy(flat_params.begin() + dim_theta,
                      flat_params.begin() + dim_theta + dim_w,
                      params.readout_w.begin());
            std::copy(flat_params.begin() + dim_theta + dim_w,
                      flat_params.end(), params.readout_b.begin());
        }

        const auto val = detail::validation_stats(spec, params, val_split,
                                                  config.threads);
        EpochStats stats;
        stats.epoch = epoch;
        stats.train_loss = loss_acc / static_cast<double>(n_steps);
        stats.val_loss = val.loss;
        stats.val_auc = val.auc;
        stats.grad_l2 = grad_norm_acc / static_cast<double>(n_steps);
        result.trace.push_back(stats);

        if (val.auc > result.best_val_auc) {
            result.best_val_auc = val.auc;
            result.best_epoch = epoch;
            result.params = params;
            epochs_since_best = 0;
        } else {
            ++epochs_since_best;
            if (epochs_since_best >= config.early_stop_patience) {
                break;
            }
        }
    }
    return result;
}

} // namespace daqc
