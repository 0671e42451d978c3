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
 * Dense double-precision statevector with the gate set used by the DAQC
 * ansatz: single-qubit Pauli rotations, the fixed two-qubit ECR gate,
 * Pauli-Z expectations, inner products, and single-qubit reduced density
 * matrices.
 *
 * Conventions, used everywhere in this library:
 *  - qubit 0 is the least-significant bit of the amplitude index
 *    (little-endian),
 *  - rotations use the half-angle convention R_a(theta) =
 *    exp(-i * theta * P_a / 2).
 */
#pragma once

#include "daqc/common.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

namespace daqc {

using cxd = std::complex<double>;

enum class Axis : std::uint8_t { X, Y, Z };

inline char axis_name(Axis a) {
    switch (a) {
    case Axis::X:
        return 'x';
    case Axis::Y:
        return 'y';
    default:
        return 'z';
    }
}

inline Axis axis_from_name(char c) {
    switch (c) {
    case 'x':
        return Axis::X;
    case 'y':
        return Axis::Y;
    case 'z':
        return Axis::Z;
    default:
        throw config_error(std::string("unknown rotation axis '") + c + "'");
    }
}

/// The fixed echoed-cross-resonance unitary, row-major in basis order
/// (|00>, |01>, |10>, |11>) with the gate's first wire as the low bit:
///
///   (1/sqrt(2)) * [[0, 1, 0,  i],
///                  [1, 0, -i, 0],
///                  [0, i, 0,  1],
///                  [-i, 0, 1, 0]]
///
/// ECR is Hermitian and unitary, hence self-inverse.
inline std::array<std::array<cxd, 4>, 4> ecr_matrix() {
    const double r = 1.0 / std::numbers::sqrt2;
    const cxd i{0.0, 1.0};
    return {{{cxd{0}, cxd{r}, cxd{0}, i * r},
             {cxd{r}, cxd{0}, -i * r, cxd{0}},
             {cxd{0}, i * r, cxd{0}, cxd{r}},
             {-i * r, cxd{0}, cxd{r}, cxd{0}}}};
}

/**
 * @brief 2^n complex amplitudes of an n-qubit pure state.
 *
 * Construction yields |0...0>. Gate application mutates in place; the
 * object is exclusively owned during mutation and freely movable between
 * threads. Norm is preserved by every gate up to accumulated rounding
 * (about 1e-15 per gate).
 */
class StateVector {
  public:
    static constexpr std::size_t max_qubits = 24;

    explicit StateVector(std::size_t n_qubits) : n_qubits_(n_qubits) {
        if (n_qubits < 1 || n_qubits > max_qubits) {
            throw capacity_error("qubit count " + std::to_string(n_qubits) +
                                 " outside supported range [1, " +
                                 std::to_string(max_qubits) + "]");
        }
        amps_.assign(std::size_t{1} << n_qubits, cxd{0.0, 0.0});
        amps_[0] = cxd{1.0, 0.0};
    }

    [[nodiscard]] std::size_t n_qubits() const { return n_qubits_; }
    [[nodiscard]] std::size_t size() const { return amps_.size(); }

    [[nodiscard]] std::span<const cxd> amplitudes() const { return amps_; }
    [[nodiscard]] std::span<cxd> amplitudes() { return amps_; }

    [[nodiscard]] const cxd &operator[](std::size_t i) const {
        return amps_[i];
    }
    cxd &operator[](std::size_t i) { return amps_[i]; }

    /// Resets to |0...0> without reallocating.
    void reset_zero() {
        std::fill(amps_.begin(), amps_.end(), cxd{0.0, 0.0});
        amps_[0] = cxd{1.0, 0.0};
    }

    /// Applies R_axis(angle) = exp(-i * angle * P_axis / 2) to `target`.
    void apply_rotation(Axis axis, std::size_t target, double angle) {
        check_target(target);
        if (!std::isfinite(angle)) {
            throw std::invalid_argument("rotation angle must be finite");
        }
        const double c = std::cos(0.5 * angle);
        const double s = std::sin(0.5 * angle);
        const std::size_t step = std::size_t{1} << target;
        const std::size_t n = amps_.size();

        switch (axis) {
        case Axis::X:
            // [[c, -is], [-is, c]]
            for (std::size_t base = 0; base < n; base += 2 * step) {
                for (std::size_t i = base; i < base + step; ++i) {
                    const cxd a0 = amps_[i];
                    const cxd a1 = amps_[i + step];
                    amps_[i] = cxd{c * a0.real() + s * a1.imag(),
                                   c * a0.imag() - s * a1.real()};
                    amps_[i + step] = cxd{c * a1.real() + s * a0.imag(),
                                          c * a1.imag() - s * a0.real()};
                }
            }
            break;
        case Axis::Y:
            // [[c, -s], [s, c]]
            for (std::size_t base = 0; base < n; base += 2 * step) {
                for (std::size_t i = base; i < base + step; ++i) {
                    const cxd a0 = amps_[i];
                    const cxd a1 = amps_[i + step];
                    amps_[i] = cxd{c * a0.real() - s * a1.real(),
                                   c * a0.imag() - s * a1.imag()};
                    amps_[i + step] = cxd{s * a0.real() + c * a1.real(),
                                          s * a0.imag() + c * a1.imag()};
                }
            }
            break;
        case Axis::Z:
            // diag(c - is, c + is)
            for (std::size_t base = 0; base < n; base += 2 * step) {
                for (std::size_t i = base; i < base + step; ++i) {
                    const cxd a0 = amps_[i];
                    const cxd a1 = amps_[i + step];
                    amps_[i] = cxd{c * a0.real() + s * a0.imag(),
                                   c * a0.imag() - s * a0.real()};
                    amps_[i + step] = cxd{c * a1.real() - s * a1.imag(),
                                          c * a1.imag() + s * a1.real()};
                }
            }
            break;
        }
    }

    /// Applies the fixed ECR gate with `first` as its first wire.
    void apply_ecr(std::size_t first, std::size_t second) {
        check_target(first);
        check_target(second);
        if (first == second) {
            throw std::invalid_argument("ECR wires must differ");
        }
        const double r = 1.0 / std::numbers::sqrt2;
        const std::size_t mask_a = std::size_t{1} << first;
        const std::size_t mask_b = std::size_t{1} << second;
        const std::size_t lo = std::min(mask_a, mask_b);
        const std::size_t hi = std::max(mask_a, mask_b);
        const std::size_t quarter = amps_.size() >> 2;

        for (std::size_t k = 0; k < quarter; ++k) {
            // Spread k over the index bits that are not `first`/`second`.
            std::size_t i = ((k & ~(lo - 1)) << 1) | (k & (lo - 1));
            i = ((i & ~(hi - 1)) << 1) | (i & (hi - 1));

            const cxd in0 = amps_[i];
            const cxd in1 = amps_[i | mask_a];
            const cxd in2 = amps_[i | mask_b];
            const cxd in3 = amps_[i | mask_a | mask_b];

            // out = M * in with M the ecr_matrix() above; i*z = (-im, re).
            amps_[i] = cxd{r * (in1.real() - in3.imag()),
                           r * (in1.imag() + in3.real())};
            amps_[i | mask_a] = cxd{r * (in0.real() + in2.imag()),
                                    r * (in0.imag() - in2.real())};
            amps_[i | mask_b] = cxd{r * (in3.real() - in1.imag()),
                                    r * (in3.imag() + in1.real())};
            amps_[i | mask_a | mask_b] = cxd{r * (in2.real() + in0.imag()),
                                             r * (in2.imag() - in0.real())};
        }
    }

    /// Applies the bare Pauli operator P_axis to `target`.
    void apply_pauli(Axis axis, std::size_t target) {
        check_target(target);
        const std::size_t step = std::size_t{1} << target;
        const std::size_t n = amps_.size();
        for (std::size_t base = 0; base < n; base += 2 * step) {
            for (std::size_t i = base; i < base + step; ++i) {
                const cxd a0 = amps_[i];
                const cxd a1 = amps_[i + step];
                switch (axis) {
                case Axis::X:
                    amps_[i] = a1;
                    amps_[i + step] = a0;
                    break;
                case Axis::Y:
                    amps_[i] = cxd{a1.imag(), -a1.real()};
                    amps_[i + step] = cxd{-a0.imag(), a0.real()};
                    break;
                case Axis::Z:
                    amps_[i + step] = -a1;
                    break;
                }
            }
        }
    }

    /// <Z_target>, exact (no shot noise). Always in [-1, 1].
    [[nodiscard]] double expect_z(std::size_t target) const {
        check_target(target);
        const std::size_t step = std::size_t{1} << target;
        const std::size_t n = amps_.size();
        double acc = 0.0;
        for (std::size_t base = 0; base < n; base += 2 * step) {
            for (std::size_t i = base; i < base + step; ++i) {
                acc += std::norm(amps_[i]) - std::norm(amps_[i + step]);
            }
        }
        return acc;
    }

    /// Expectation of the tensor product of Z over `targets`.
    /// An empty set is the identity observable (+1).
    [[nodiscard]] double
    expect_z_product(std::span<const std::size_t> targets) const {
        std::uint64_t mask = 0;
        for (std::size_t t : targets) {
            check_target(t);
            mask |= std::uint64_t{1} << t;
        }
        double acc = 0.0;
        for (std::size_t i = 0; i < amps_.size(); ++i) {
            const double p = std::norm(amps_[i]);
            acc += (std::popcount(i & mask) & 1U) ? -p : p;
        }
        return acc;
    }

    [[nodiscard]] double norm() const {
        double acc = 0.0;
        for (const cxd &a : amps_) {
            acc += std::norm(a);
        }
        return std::sqrt(acc);
    }

    /// Single-qubit reduced density matrix (partial trace over the rest),
    /// row-major 2x2: {rho00, rho01, rho10, rho11}.
    [[nodiscard]] std::array<cxd, 4>
    reduced_density_1q(std::size_t target) const {
        check_target(target);
        const std::size_t step = std::size_t{1} << target;
        const std::size_t n = amps_.size();
        double r00 = 0.0;
        double r11 = 0.0;
        cxd r01{0.0, 0.0};
        for (std::size_t base = 0; base < n; base += 2 * step) {
            for (std::size_t i = base; i < base + step; ++i) {
                const cxd a0 = amps_[i];
                const cxd a1 = amps_[i + step];
                r00 += std::norm(a0);
                r11 += std::norm(a1);
                r01 += a0 * std::conj(a1);
            }
        }
        return {cxd{r00, 0.0}, r01, std::conj(r01), cxd{r11, 0.0}};
    }

  private:
    void check_target(std::size_t target) const {
        if (target >= n_qubits_) {
            throw std::out_of_range("qubit index " + std::to_string(target) +
                                    " out of range for " +
                                    std::to_string(n_qubits_) + " qubits");
        }
    }

    std::size_t n_qubits_;
    std::vector<cxd> amps_;
};

/// <a|b>. Throws on dimension mismatch.
inline cxd inner_product(const StateVector &a, const StateVector &b) {
    if (a.n_qubits() != b.n_qubits()) {
        throw std::invalid_argument("statevector dimensions differ");
    }
    cxd acc{0.0, 0.0};
    for (std::size_t i = 0; i < a.size(); ++i) {
        acc += std::conj(a[i]) * b[i];
    }
    return acc;
}

/// |<a|b>|^2 in [0, 1].
inline double fidelity(const StateVector &a, const StateVector &b) {
    return std::norm(inner_product(a, b));
}

/// <lhs| P_axis(target) |rhs> without materializing P|rhs>.
/// Both states must share dimensions with each other.
inline cxd pauli_bracket(const StateVector &lhs, Axis axis, std::size_t target,
                         const StateVector &rhs) {
    if (lhs.n_qubits() != rhs.n_qubits()) {
        throw std::invalid_argument("statevector dimensions differ");
    }
    const std::size_t step = std::size_t{1} << target;
    const std::size_t n = lhs.size();
    if (step >= n) {
        throw std::out_of_range("qubit index out of range");
    }
    cxd acc{0.0, 0.0};
    for (std::size_t base = 0; base < n; base += 2 * step) {
        for (std::size_t i = base; i < base + step; ++i) {
            const cxd l0 = std::conj(lhs[i]);
            const cxd l1 = std::conj(lhs[i + step]);
            const cxd r0 = rhs[i];
            const cxd r1 = rhs[i + step];
            switch (axis) {
            case Axis::X:
                acc += l0 * r1 + l1 * r0;
                break;
            case Axis::Y:
                // Y|0> = i|1>, Y|1> = -i|0>
                acc += cxd{0.0, 1.0} * (l1 * r0) - cxd{0.0, 1.0} * (l0 * r1);
                break;
            case Axis::Z:
                acc += l0 * r0 - l1 * r1;
                break;
            }
        }
    }
    return acc;
}

} // namespace daqc
