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
 * Circuit-shape configuration for the domain-aware quantum circuit (DAQC).
 */
#pragma once

#include "daqc/common.hpp"
#include "daqc/state_vector.hpp"

#include <cstdint>
#include <string>

namespace daqc {

/**
 * @brief Geometry and schedule of a DAQC instance.
 *
 * An image is pooled to `pooled_rows x pooled_cols`, scanned in zigzag
 * order inside non-overlapping `window_rows x window_cols` windows, and
 * encoded over `n_qubits` wires in T = ceil(pooled_rows*pooled_cols /
 * n_qubits) interleaved cycles. Each cycle carries one embedding column,
 * a ring of ECR gates every `entangle_period` cycles (cycles 0,
 * entangle_period, 2*entangle_period, ... in 0-based counting), and two
 * trainable rotation columns. Rotation axes are sampled i.i.d. uniform
 * over {x, y, z} from `axis_seed`.
 */
struct DaqcConfig {
    std::size_t n_qubits = 16;
    std::size_t pooled_rows = 16;
    std::size_t pooled_cols = 16;
    std::size_t window_rows = 4;
    std::size_t window_cols = 4;
    std::size_t entangle_period = 4;
    std::uint64_t axis_seed = 0;

    /// Trainable rotation columns per cycle; fixed by the architecture.
    static constexpr std::size_t trainable_layers_per_cycle = 2;

    [[nodiscard]] std::size_t feature_count() const {
        return pooled_rows * pooled_cols;
    }

    /// Number of interleaved cycles T = ceil(N*M / n).
    [[nodiscard]] std::size_t cycle_count() const {
        return (feature_count() + n_qubits - 1) / n_qubits;
    }

    /// Trainable circuit angles: 2 n T.
    [[nodiscard]] std::size_t parameter_count() const {
        return trainable_layers_per_cycle * n_qubits * cycle_count();
    }

    /// Scheduled ECR ring layers: ceil(T / entangle_period). A period
    /// longer than the cycle count disables entanglement entirely.
    [[nodiscard]] std::size_t entangling_layer_count() const {
        if (entangle_period > cycle_count()) {
            return 0;
        }
        return (cycle_count() + entangle_period - 1) / entangle_period;
    }

    void validate() const {
        if (n_qubits < 1 || n_qubits > StateVector::max_qubits) {
            throw config_error("n_qubits must be in [1, " +
                               std::to_string(StateVector::max_qubits) + "]");
        }
        if (pooled_rows == 0 || pooled_cols == 0) {
            throw config_error("pooled grid dimensions must be positive");
        }
        if (window_rows == 0 || window_cols == 0) {
            throw config_error("window dimensions must be positive");
        }
        if (pooled_rows % window_rows != 0) {
            throw config_error("pooled_rows must be divisible by window_rows");
        }
        if (pooled_cols % window_cols != 0) {
            throw config_error("pooled_cols must be divisible by window_cols");
        }
        if (entangle_period == 0) {
            throw config_error("entangle_period must be at least 1");
        }
        if (n_qubits < 2 && entangle_period <= cycle_count()) {
            throw config_error(
                "ring entanglement requires at least 2 qubits");
        }
    }
};

} // namespace daqc
