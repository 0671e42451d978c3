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
 * Materialization of the DAQC gate program.
 *
 * Cycle t (0-based) emits, in order:
 *   1. one embedding rotation per qubit, feature index k = t*n + q,
 *      omitted when k >= N*M (partial final cycle),
 *   2. a ring of ECR gates over edges (0,1), (1,2), ..., (n-1,0) when
 *      t % entangle_period == 0,
 *   3. two trainable rotation columns, parameter slot
 *      (t*2 + column)*n + q.
 *
 * Axis tables are drawn from std::mt19937_64 seeded with axis_seed; the
 * stream is one draw (value % 3 -> x, y, z) per slot, embedding axes
 * first in (cycle, qubit) order, then trainable axes in (cycle, column,
 * qubit) order. Draws are made for every slot of the rectangular tables,
 * including embedding slots the partial final cycle omits.
 */
#pragma once

#include "daqc/config.hpp"
#include "daqc/encoding.hpp"
#include "daqc/state_vector.hpp"

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace daqc {

enum class GateKind : std::uint8_t { RX, RY, RZ, ECR };
enum class AngleKind : std::uint8_t { Feature, Parameter, Fixed };

inline GateKind rotation_kind(Axis axis) {
    switch (axis) {
    case Axis::X:
        return GateKind::RX;
    case Axis::Y:
        return GateKind::RY;
    default:
        return GateKind::RZ;
    }
}

inline Axis rotation_axis(GateKind kind) {
    switch (kind) {
    case GateKind::RX:
        return Axis::X;
    case GateKind::RY:
        return Axis::Y;
    case GateKind::RZ:
        return Axis::Z;
    default:
        throw std::invalid_argument("ECR has no rotation axis");
    }
}

/// One gate of the program. Rotations carry exactly one angle source;
/// ECR is a fixed gate acting on (target, partner).
struct GateOp {
    GateKind kind = GateKind::RX;
    std::uint32_t target = 0;
    std::uint32_t partner = 0;
    AngleKind angle_kind = AngleKind::Fixed;
    std::uint32_t angle_index = 0;
    double fixed_angle = 0.0;

    static GateOp rotation(Axis axis, std::size_t target, AngleKind source,
                           std::size_t index) {
        GateOp op;
        op.kind = rotation_kind(axis);
        op.target = static_cast<std::uint32_t>(target);
        op.angle_kind = source;
        op.angle_index = static_cast<std::uint32_t>(index);
        return op;
    }

    static GateOp fixed_rotation(Axis axis, std::size_t target, double angle) {
        GateOp op;
        op.kind = rotation_kind(axis);
        op.target = static_cast<std::uint32_t>(target);
        op.angle_kind = AngleKind::Fixed;
        op.fixed_angle = angle;
        return op;
    }

    static GateOp ecr(std::size_t first, std::size_t second) {
        GateOp op;
        op.kind = GateKind::ECR;
        op.target = static_cast<std::uint32_t>(first);
        op.partner = static_cast<std::uint32_t>(second);
        return op;
    }
};

/**
 * @brief The fully materialized gate program plus its axis tables.
 *
 * Immutable after build_circuit and freely shareable across threads.
 * (config, axis_seed) determines the spec byte-for-byte.
 */
struct CircuitSpec {
    DaqcConfig config;
    std::size_t n_cycles = 0;
    std::size_t n_features = 0;
    /// Embedding axes, flattened [cycle][qubit].
    std::vector<Axis> embed_axes;
    /// Trainable axes, flattened [cycle][column][qubit].
    std::vector<Axis> train_axes;
    std::vector<GateOp> ops;

    std::size_t n_feature_gates = 0;
    std::size_t n_param_gates = 0;
    std::size_t n_ecr_gates = 0;

    [[nodiscard]] std::size_t n_qubits() const { return config.n_qubits; }
    [[nodiscard]] std::size_t parameter_count() const {
        return config.parameter_count();
    }

    [[nodiscard]] Axis embed_axis(std::size_t cycle, std::size_t qubit) const {
        return embed_axes[cycle * config.n_qubits + qubit];
    }
    [[nodiscard]] Axis train_axis(std::size_t cycle, std::size_t column,
                                  std::size_t qubit) const {
        return train_axes[(cycle * DaqcConfig::trainable_layers_per_cycle +
                           column) *
                              config.n_qubits +
                          qubit];
    }

    /// Bijection from (cycle, column, qubit) onto [0, 2nT).
    [[nodiscard]] std::size_t param_slot(std::size_t cycle, std::size_t column,
                                         std::size_t qubit) const {
        return (cycle * DaqcConfig::trainable_layers_per_cycle + column) *
                   config.n_qubits +
               qubit;
    }

    [[nodiscard]] bool has_ecr_layer(std::size_t cycle) const {
        if (config.entangle_period > n_cycles) {
            return false;
        }
        return cycle % config.entangle_period == 0;
    }
};

/// Builds the gate program for `config`. Deterministic in
/// (config, axis_seed).
inline CircuitSpec build_circuit(const DaqcConfig &config) {
    config.validate();

    CircuitSpec spec;
    spec.config = config;
    spec.n_cycles = config.cycle_count();
    spec.n_features = config.feature_count();

    const std::size_t n = config.n_qubits;
    const std::size_t t_total = spec.n_cycles;
    constexpr std::size_t cols = DaqcConfig::trainable_layers_per_cycle;

    Rng rng(config.axis_seed);
    auto draw_axis = [&rng] { return static_cast<Axis>(rng() % 3); };

    spec.embed_axes.resize(t_total * n);
    for (auto &a : spec.embed_axes) {
        a = draw_axis();
    }
    spec.train_axes.resize(t_total * cols * n);
    for (auto &a : spec.train_axes) {
        a = draw_axis();
    }

    spec.ops.reserve(t_total * n * (1 + cols) +
                     config.entangling_layer_count() * n);
    for (std::size_t t = 0; t < t_total; ++t) {
        for (std::size_t q = 0; q < n; ++q) {
            const std::size_t k = t * n + q;
            if (k >= spec.n_features) {
                continue;
            }
            spec.ops.push_back(GateOp::rotation(spec.embed_axis(t, q), q,
                                                AngleKind::Feature, k));
            ++spec.n_feature_gates;
        }
        if (spec.has_ecr_layer(t)) {
            for (std::size_t e = 0; e < n; ++e) {
                spec.ops.push_back(GateOp::ecr(e, (e + 1) % n));
                ++spec.n_ecr_gates;
            }
        }
        for (std::size_t col = 0; col < cols; ++col) {
            for (std::size_t q = 0; q < n; ++q) {
                spec.ops.push_back(GateOp::rotation(
                    spec.train_axis(t, col, q), q, AngleKind::Parameter,
                    spec.param_slot(t, col, q)));
                ++spec.n_param_gates;
            }
        }
    }
    return spec;
}

/// Resolves a gate's angle against the bound feature/parameter vectors.
inline double resolve_angle(const GateOp &op, std::span<const double> features,
                            std::span<const double> theta) {
    switch (op.angle_kind) {
    case AngleKind::Feature:
        return features[op.angle_index];
    case AngleKind::Parameter:
        return theta[op.angle_index];
    default:
        return op.fixed_angle;
    }
}

inline void apply_gate(StateVector &state, const GateOp &op,
                       std::span<const double> features,
                       std::span<const double> theta) {
    if (op.kind == GateKind::ECR) {
        state.apply_ecr(op.target, op.partner);
    } else {
        state.apply_rotation(rotation_axis(op.kind), op.target,
                             resolve_angle(op, features, theta));
    }
}

inline void check_bindings(const CircuitSpec &spec,
                           std::span<const double> features,
                           std::span<const double> theta) {
    if (features.size() != spec.n_features) {
        throw std::invalid_argument(
            "feature vector has length " + std::to_string(features.size()) +
            ", circuit expects " + std::to_string(spec.n_features));
    }
    if (theta.size() != spec.parameter_count()) {
        throw std::invalid_argument(
            "parameter vector has length " + std::to_string(theta.size()) +
            ", circuit expects " + std::to_string(spec.parameter_count()));
    }
}

/// U(features, theta)|0...0>.
inline StateVector simulate(const CircuitSpec &spec,
                            std::span<const double> features,
                            std::span<const double> theta) {
    check_bindings(spec, features, theta);
    StateVector state(spec.n_qubits());
    for (const GateOp &op : spec.ops) {
        apply_gate(state, op, features, theta);
    }
    return state;
}

/// The model's measurement vector m = (<Z_0>, ..., <Z_{n-1}>).
inline std::vector<double> run_circuit(const CircuitSpec &spec,
                                       std::span<const double> features,
                                       std::span<const double> theta) {
    const StateVector state = simulate(spec, features, theta);
    std::vector<double> expectations(spec.n_qubits());
    for (std::size_t q = 0; q < spec.n_qubits(); ++q) {
        expectations[q] = state.expect_z(q);
    }
    return expectations;
}

inline std::vector<double> run_circuit(const CircuitSpec &spec,
                                       const EncodedSample &sample,
                                       std::span<const double> theta) {
    return run_circuit(spec, sample.angles, theta);
}

} // namespace daqc
