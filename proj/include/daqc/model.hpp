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
 * The hybrid model: circuit parameters plus a linear readout
 * logits = W m + b over the per-qubit Z expectations m, trained with a
 * softmax cross-entropy loss.
 */
#pragma once

#include "daqc/circuit.hpp"
#include "daqc/common.hpp"

#include <cmath>
#include <span>
#include <vector>

namespace daqc {

/// Trainable state: circuit angles theta (2nT), readout W (C x n,
/// row-major) and bias b (C).
struct ModelParams {
    std::vector<double> theta;
    std::vector<double> readout_w;
    std::vector<double> readout_b;

    [[nodiscard]] std::size_t n_classes() const { return readout_b.size(); }
    [[nodiscard]] std::size_t total_trainables() const {
        return theta.size() + readout_w.size() + readout_b.size();
    }

    void check_shapes(const CircuitSpec &spec) const {
        const std::size_t c = n_classes();
        if (theta.size() != spec.parameter_count() ||
            readout_w.size() != c * spec.n_qubits() || c == 0) {
            throw std::invalid_argument("model parameter shapes inconsistent "
                                        "with circuit and class count");
        }
        for (double v : theta) {
            if (!std::isfinite(v)) {
                throw std::invalid_argument("non-finite circuit parameter");
            }
        }
        for (double v : readout_w) {
            if (!std::isfinite(v)) {
                throw std::invalid_argument("non-finite readout weight");
            }
        }
    }
};

/**
 * @brief Seeded initialization: theta ~ U(0, 2pi); W, b ~ U(-s, s) with
 * s = 1/sqrt(n_qubits).
 *
 * Draw order: theta by parameter slot, then W row-major, then b.
 */
inline ModelParams init_params(const CircuitSpec &spec, std::size_t n_classes,
                               std::uint64_t seed) {
    if (n_classes < 2) {
        throw config_error("need at least 2 classes");
    }
    Rng rng(seed);
    ModelParams params;
    params.theta.resize(spec.parameter_count());
    for (double &t : params.theta) {
        t = uniform_real(rng, 0.0, 2.0 * std::numbers::pi);
    }
    const double bound = 1.0 / std::sqrt(static_cast<double>(spec.n_qubits()));
    params.readout_w.resize(n_classes * spec.n_qubits());
    for (double &w : params.readout_w) {
        w = uniform_real(rng, -bound, bound);
    }
    params.readout_b.resize(n_classes);
    for (double &b : params.readout_b) {
        b = uniform_real(rng, -bound, bound);
    }
    return params;
}

/// logits = W m + b.
inline std::vector<double> readout_logits(const ModelParams &params,
                                          std::span<const double> m) {
    const std::size_t c = params.n_classes();
    const std::size_t n = m.size();
    std::vector<double> logits(c);
    for (std::size_t row = 0; row < c; ++row) {
        double acc = params.readout_b[row];
        for (std::size_t i = 0; i < n; ++i) {
            acc += params.readout_w[row * n + i] * m[i];
        }
        logits[row] = acc;
    }
    return logits;
}

struct ForwardResult {
    std::vector<double> logits;
    std::vector<double> expectations;
};

/// Full forward pass: circuit expectations then linear readout.
inline ForwardResult forward(const CircuitSpec &spec,
                             const EncodedSample &sample,
                             const ModelParams &params) {
    params.check_shapes(spec);
    ForwardResult result;
    result.expectations = run_circuit(spec, sample, params.theta);
    result.logits = readout_logits(params, result.expectations);
    return result;
}

/// Softmax with the usual max-shift for stability.
inline std::vector<double> softmax(std::span<const double> logits) {
    std::vector<double> p(logits.size());
    const double hi = *std::max_element(logits.begin(), logits.end());
    double z = 0.0;
    for (std::size_t i = 0; i < logits.size(); ++i) {
        p[i] = std::exp(logits[i] - hi);
        z += p[i];
    }
    for (double &v : p) {
        v /= z;
    }
    return p;
}

/// -log softmax(logits)[label].
inline double cross_entropy(std::span<const double> logits, int label) {
    if (label < 0 || static_cast<std::size_t>(label) >= logits.size()) {
        throw data_error("label " + std::to_string(label) +
                         " outside [0, " + std::to_string(logits.size()) +
                         ")");
    }
    const double hi = *std::max_element(logits.begin(), logits.end());
    double z = 0.0;
    for (double l : logits) {
        z += std::exp(l - hi);
    }
    return std::log(z) - (logits[label] - hi);
}

/// Mean cross-entropy over a batch of logit rows.
inline double cross_entropy_batch(std::span<const double> logits,
                                  std::span<const int> labels,
                                  std::size_t n_classes) {
    if (labels.empty() || logits.size() != labels.size() * n_classes) {
        throw std::invalid_argument("batch shape mismatch");
    }
    double acc = 0.0;
    for (std::size_t s = 0; s < labels.size(); ++s) {
        acc += cross_entropy(logits.subspan(s * n_classes, n_classes),
                             labels[s]);
    }
    return acc / static_cast<double>(labels.size());
}

} // namespace daqc
