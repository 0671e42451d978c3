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
//
// Shared test fixtures: random states and randomized gate streams.
#pragma once

#include "daqc/common.hpp"
#include "daqc/state_vector.hpp"

#include <cmath>
#include <numbers>
#include <vector>

namespace daqc::test {

inline double gauss(Rng &rng) {
    // Box-Muller; the tiny clamp keeps log() finite.
    double u1 = std::max(uniform_unit(rng), 1e-300);
    double u2 = uniform_unit(rng);
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
}

/// Haar-random pure state via normalized complex Gaussian amplitudes.
inline StateVector random_state(std::size_t n_qubits, Rng &rng) {
    StateVector psi(n_qubits);
    double norm_sq = 0.0;
    for (auto &a : psi.amplitudes()) {
        a = cxd{gauss(rng), gauss(rng)};
        norm_sq += std::norm(a);
    }
    const double inv = 1.0 / std::sqrt(norm_sq);
    for (auto &a : psi.amplitudes()) {
        a *= inv;
    }
    return psi;
}

inline Axis random_axis(Rng &rng) {
    return static_cast<Axis>(uniform_index(rng, 3));
}

} // namespace daqc::test
