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
 * Error categories and the seeded randomness helpers shared by all modules.
 *
 * Every random draw in the library goes through the helpers below rather
 * than `std::uniform_*_distribution`, whose output sequences are
 * implementation-defined. `std::mt19937_64` itself is fully specified by
 * the standard, so (seed, draw order) determines every result bit-for-bit
 * across platforms and compilers.
 */
#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace daqc {

/// Invalid or inconsistent configuration (CLI exit code 2).
struct config_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Unreadable, malformed, or unusable input data (CLI exit code 3).
struct data_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Request exceeds a resource cap, e.g. too many qubits (CLI exit code 4).
struct capacity_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

using Rng = std::mt19937_64;

/// SplitMix64 step; used to derive independent sub-seeds from one master
/// seed so parallel ensemble members stay reproducible in any order.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Sub-seed for stream `tag` of a master seed. Chain calls for nested tags.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t tag) {
    return splitmix64(seed ^ splitmix64(tag));
}

/// Uniform double in [0, 1) with 53 random bits.
inline double uniform_unit(Rng &rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Uniform double in [lo, hi).
inline double uniform_real(Rng &rng, double lo, double hi) {
    return lo + (hi - lo) * uniform_unit(rng);
}

/// Uniform integer in [0, n). Modulo bias is ~n/2^64, irrelevant here;
/// the point is a portable, documented mapping.
inline std::size_t uniform_index(Rng &rng, std::size_t n) {
    return static_cast<std::size_t>(rng() % n);
}

/// In-place Fisher-Yates shuffle with the portable index helper.
template <typename T>
void seeded_shuffle(std::vector<T> &items, Rng &rng) {
    for (std::size_t i = items.size(); i > 1; --i) {
        std::size_t j = uniform_index(rng, i);
        std::swap(items[i - 1], items[j]);
    }
}

} // namespace daqc
