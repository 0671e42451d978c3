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
 * Circuit gradients.
 *
 * Two routes are provided:
 *  - parameter-shift: dC/dtheta_j = (C(theta_j + pi/2) - C(theta_j -
 *    pi/2)) / 2, exact for Pauli-rotation parameters and Pauli
 *    observables; used by the trainability diagnostics,
 *  - adjoint reverse sweep: exact loss gradients with one forward and
 *    one backward statevector pass per sample; used for training.
 *
 * For a rotation gate G = exp(-i theta P / 2) inside U = A G B, the
 * derivative of <H> contributes Im(<lambda|P|phi>) with phi the state
 * after G and lambda = (gates after G)^dagger H U|0>. The loss gradient
 * reduces to that form with the diagonal observable H = sum_i w_i Z_i,
 * where w_i = dLoss/d<Z_i> comes from the readout chain rule.
 */
#pragma once

#include "daqc/circuit.hpp"
#include "daqc/model.hpp"

#include <bit>
#include <span>
#include <stdexcept>
#include <vector>

namespace daqc {

/// Product of Pauli-Z over `wires` (single wire = local observable,
/// all wires = global parity observable, empty = identity).
struct ZObservable {
    std::vector<std::size_t> wires;

    [[nodiscard]] double measure(const StateVector &state) const {
        return state.expect_z_product(wires);
    }
};

/// Cost C(theta) = <Z-product> of the circuit state.
inline double observable_cost(const CircuitSpec &spec,
                              std::span<const double> features,
                              std::span<const double> theta,
                              const ZObservable &observable) {
    return observable.measure(simulate(spec, features, theta));
}

/**
 * @brief Parameter-shift gradient of a Z-product cost with respect to
 * every trainable circuit angle. Two simulations per parameter.
 */
inline std::vector<double>
grad_parameter_shift(const CircuitSpec &spec, std::span<const double> features,
                     std::span<const double> theta,
                     const ZObservable &observable) {
    check_bindings(spec, features, theta);
    std::vector<double> shifted(theta.begin(), theta.end());
    std::vector<double> grad(theta.size());
    constexpr double shift = std::numbers::pi / 2.0;
    for (std::size_t j = 0; j < theta.size(); ++j) {
        shifted[j] = theta[j] + shift;
        const double plus = observable_cost(spec, features, shifted, observable);
        shifted[j] = theta[j] - shift;
        const double minus =
            observable_cost(spec, features, shifted, observable);
        shifted[j] = theta[j];
        grad[j] = 0.5 * (plus - minus);
    }
    return grad;
}

/// Per-sample loss, measurement vector, and exact gradients for
/// (theta, W, b).
struct SampleGradient {
    double loss = 0.0;
    std::vector<double> expectations;
    std::vector<double> grad_theta;
    std::vector<double> grad_w;
    std::vector<double> grad_b;
};

/**
 * @brief Adjoint-mode gradient of the cross-entropy loss of one sample.
 *
 * One forward pass, then a reverse sweep undoing gates on both the state
 * and the observable-applied state; rotation generators are folded into
 * fused Pauli brackets, so no generator state is materialized.
 */
inline SampleGradient grad_adjoint(const CircuitSpec &spec,
                                   std::span<const double> features,
                                   const ModelParams &params, int label) {
    params.check_shapes(spec);
    const std::size_t n = spec.n_qubits();
    const std::size_t n_classes = params.n_classes();

    SampleGradient out;
    out.grad_theta.assign(spec.parameter_count(), 0.0);
    out.grad_w.assign(params.readout_w.size(), 0.0);
    out.grad_b.assign(n_classes, 0.0);

    // Forward.
    StateVector psi = simulate(spec, features, params.theta);
    out.expectations.resize(n);
    for (std::size_t q = 0; q < n; ++q) {
        out.expectations[q] = psi.expect_z(q);
    }
    const std::vector<double> logits =
        readout_logits(params, out.expectations);
    out.loss = cross_entropy(logits, label);
    const std::vector<double> probs = softmax(logits);

    // Readout chain rule; w_i = dLoss/d<Z_i>.
    std::vector<double> w(n, 0.0);
    for (std::size_t c = 0; c < n_classes; ++c) {
        const double g =
            probs[c] - (static_cast<int>(c) == label ? 1.0 : 0.0);
        out.grad_b[c] = g;
        for (std::size_t i = 0; i < n; ++i) {
            out.grad_w[c * n + i] = g * out.expectations[i];
            w[i] += g * params.readout_w[c * n + i];
        }
    }

    // lambda = H |psi> with diagonal H = sum_i w_i Z_i.
    StateVector lambda = psi;
    {
        auto amps = lambda.amplitudes();
        for (std::size_t b = 0; b < amps.size(); ++b) {
            double h = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                h += ((b >> i) & 1U) ? -w[i] : w[i];
            }
            amps[b] *= h;
        }
    }

    // Reverse sweep.
    for (std::size_t idx = spec.ops.size(); idx-- > 0;) {
        const GateOp &op = spec.ops[idx];
        if (op.kind == GateKind::ECR) {
            psi.apply_ecr(op.target, op.partner);
            lambda.apply_ecr(op.target, op.partner);
            continue;
        }
        const Axis axis = rotation_axis(op.kind);
        if (op.angle_kind == AngleKind::Parameter) {
            out.grad_theta[op.angle_index] =
                pauli_bracket(lambda, axis, op.target, psi).imag();
        }
        const double angle = resolve_angle(op, features, params.theta);
        psi.apply_rotation(axis, op.target, -angle);
        lambda.apply_rotation(axis, op.target, -angle);
    }
    return out;
}

} // namespace daqc
