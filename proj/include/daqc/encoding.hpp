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
 * Image-to-angle encoding: adaptive average pooling, DCT-style zigzag
 * window scan, and affine normalization of intensities to [0, pi].
 */
#pragma once

#include "daqc/config.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace daqc {

/// Row-major grid of real pixel values.
struct Grid {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    Grid() = default;
    Grid(std::size_t r, std::size_t c, double fill = 0.0)
        : rows(r), cols(c), data(r * c, fill) {}

    [[nodiscard]] double &at(std::size_t r, std::size_t c) {
        return data[r * cols + c];
    }
    [[nodiscard]] double at(std::size_t r, std::size_t c) const {
        return data[r * cols + c];
    }
};

/// One image reduced to pooled_rows*pooled_cols angles in [0, pi].
struct EncodedSample {
    std::vector<double> angles;
    int label = -1;
};

/**
 * @brief Adaptive average pooling of an H x W grid to out_rows x out_cols.
 *
 * Output cell (i, j) averages input rows [floor(i*H/N), ceil((i+1)*H/N))
 * and the analogous column window, so windows tile the image exactly and
 * a constant image pools to the same constant.
 */
inline Grid adaptive_avg_pool(const Grid &image, std::size_t out_rows,
                              std::size_t out_cols) {
    const std::size_t h = image.rows;
    const std::size_t w = image.cols;
    if (out_rows == 0 || out_cols == 0 || h < out_rows || w < out_cols) {
        throw std::invalid_argument(
            "adaptive_avg_pool: output grid must be non-degenerate and no "
            "larger than the input");
    }
    for (double v : image.data) {
        if (!std::isfinite(v)) {
            throw std::invalid_argument(
                "adaptive_avg_pool: non-finite pixel value");
        }
    }
    Grid out(out_rows, out_cols);
    for (std::size_t i = 0; i < out_rows; ++i) {
        const std::size_t r0 = (i * h) / out_rows;
        const std::size_t r1 = ((i + 1) * h + out_rows - 1) / out_rows;
        for (std::size_t j = 0; j < out_cols; ++j) {
            const std::size_t c0 = (j * w) / out_cols;
            const std::size_t c1 = ((j + 1) * w + out_cols - 1) / out_cols;
            double acc = 0.0;
            for (std::size_t r = r0; r < r1; ++r) {
                for (std::size_t c = c0; c < c1; ++c) {
                    acc += image.at(r, c);
                }
            }
            out.at(i, j) = acc / static_cast<double>((r1 - r0) * (c1 - c0));
        }
    }
    return out;
}

/**
 * @brief JPEG-style zigzag traversal of a p x q window.
 *
 * Returns the flat row-major indices (r*q + c) in visit order:
 * (0,0), (0,1), (1,0), (2,0), (1,1), (0,2), ... Anti-diagonal s = r + c
 * is walked upward (decreasing r) when s is even and downward when odd.
 */
inline std::vector<std::size_t> zigzag_order(std::size_t p, std::size_t q) {
    if (p == 0 || q == 0) {
        throw std::invalid_argument("zigzag_order: empty window");
    }
    std::vector<std::size_t> order;
    order.reserve(p * q);
    for (std::size_t s = 0; s + 1 < p + q; ++s) {
        const std::size_t r_min = (s >= q) ? s - q + 1 : 0;
        const std::size_t r_max = std::min(s, p - 1);
        if (s % 2 == 0) {
            for (std::size_t r = r_max + 1; r-- > r_min;) {
                order.push_back(r * q + (s - r));
            }
        } else {
            for (std::size_t r = r_min; r <= r_max; ++r) {
                order.push_back(r * q + (s - r));
            }
        }
    }
    return order;
}

/**
 * @brief Full encoding path: pool, zigzag-scan each window, concatenate
 * windows in raster order, then min-max map intensities to [0, pi].
 *
 * Normalization is per sample. A constant image (max == min) maps to
 * all-zero angles, i.e. the identity embedding.
 */
inline EncodedSample encode_sample(const Grid &image, const DaqcConfig &config,
                                   int label = -1) {
    config.validate();
    const Grid pooled =
        adaptive_avg_pool(image, config.pooled_rows, config.pooled_cols);

    const std::size_t p = config.window_rows;
    const std::size_t q = config.window_cols;
    const std::size_t wu = config.pooled_rows / p;
    const std::size_t wv = config.pooled_cols / q;
    const auto zz = zigzag_order(p, q);

    std::vector<double> features;
    features.reserve(config.feature_count());
    for (std::size_t u = 0; u < wu; ++u) {
        for (std::size_t v = 0; v < wv; ++v) {
            for (std::size_t flat : zz) {
                const std::size_t r = u * p + flat / q;
                const std::size_t c = v * q + flat % q;
                features.push_back(pooled.at(r, c));
            }
        }
    }

    const auto [lo_it, hi_it] =
        std::minmax_element(features.begin(), features.end());
    const double lo = *lo_it;
    const double hi = *hi_it;
    EncodedSample sample;
    sample.label = label;
    sample.angles.resize(features.size());
    if (hi > lo) {
        const double scale = std::numbers::pi / (hi - lo);
        for (std::size_t k = 0; k < features.size(); ++k) {
            sample.angles[k] = (features[k] - lo) * scale;
        }
    }
    return sample;
}

} // namespace daqc
