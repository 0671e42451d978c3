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
 * IDX dataset ingestion, class subsetting, and seeded stratified splits.
 *
 * The loader consumes the raw (decompressed) big-endian IDX format:
 * magic 0x00000803 for unsigned-byte image tensors (count x rows x cols)
 * and 0x00000801 for unsigned-byte label vectors.
 */
#pragma once

#include "daqc/common.hpp"
#include "daqc/encoding.hpp"
#include "daqc/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace daqc {

struct Dataset {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<std::vector<std::uint8_t>> images; ///< each rows*cols bytes
    std::vector<int> labels;
    std::string name;

    [[nodiscard]] std::size_t size() const { return images.size(); }
};

namespace detail {

constexpr std::uint32_t idx_image_magic = 0x00000803;
constexpr std::uint32_t idx_label_magic = 0x00000801;

inline std::uint32_t read_be_u32(std::istream &in, const std::string &path) {
    std::uint8_t bytes[4];
    if (!in.read(reinterpret_cast<char *>(bytes), 4)) {
        throw data_error("truncated IDX header in " + path);
    }
    return (std::uint32_t{bytes[0]} << 24) | (std::uint32_t{bytes[1]} << 16) |
           (std::uint32_t{bytes[2]} << 8) | std::uint32_t{bytes[3]};
}

inline void write_be_u32(std::ostream &out, std::uint32_t v) {
    const std::uint8_t bytes[4] = {
        static_cast<std::uint8_t>(v >> 24), static_cast<std::uint8_t>(v >> 16),
        static_cast<std::uint8_t>(v >> 8), static_cast<std::uint8_t>(v)};
    out.write(reinterpret_cast<const char *>(bytes), 4);
}

} // namespace detail

/// Parses an IDX image tensor and its label vector; validates magics
/// and that the two counts agree.
inline Dataset load_idx(const std::string &images_path,
                        const std::string &labels_path) {
    std::ifstream img(images_path, std::ios::binary);
    if (!img) {
        throw data_error("cannot open image file " + images_path);
    }
    const std::uint32_t img_magic = detail::read_be_u32(img, images_path);
    if (img_magic != detail::idx_image_magic) {
        throw data_error("bad IDX image magic in " + images_path +
                         " (expected 0x00000803)");
    }
    const std::uint32_t count = detail::read_be_u32(img, images_path);
    const std::uint32_t rows = detail::read_be_u32(img, images_path);
    const std::uint32_t cols = detail::read_be_u32(img, images_path);
    if (rows == 0 || cols == 0) {
        throw data_error("degenerate image dimensions in " + images_path);
    }

    Dataset dataset;
    dataset.rows = rows;
    dataset.cols = cols;
    dataset.images.resize(count);
    const std::size_t pixels = std::size_t{rows} * cols;
    for (auto &image : dataset.images) {
        image.resize(pixels);
        if (!img.read(reinterpret_cast<char *>(image.data()),
                      static_cast<std::streamsize>(pixels))) {
            throw data_error("truncated image payload in " + images_path);
        }
    }

    std::ifstream lab(labels_path, std::ios::binary);
    if (!lab) {
        throw data_error("cannot open label file " + labels_path);
    }
    const std::uint32_t lab_magic = detail::read_be_u32(lab, labels_path);
    if (lab_magic != detail::idx_label_magic) {
        throw data_error("bad IDX label magic in " + labels_path +
                         " (expected 0x00000801)");
    }
    const std::uint32_t lab_count = detail::read_be_u32(lab, labels_path);
    if (lab_count != count) {
        throw data_error("IDX count mismatch: " + std::to_string(count) +
                         " images vs " + std::to_string(lab_count) +
                         " labels");
    }
    std::vector<std::uint8_t> raw(lab_count);
    if (lab_count > 0 &&
        !lab.read(reinterpret_cast<char *>(raw.data()),
                  static_cast<std::streamsize>(raw.size()))) {
        throw data_error("truncated label payload in " + labels_path);
    }
    dataset.labels.assign(raw.begin(), raw.end());
    return dataset;
}

/// Writes an IDX image tensor; inverse of the image half of load_idx.
inline void write_idx_images(const std::string &path,
                             const std::vector<std::vector<std::uint8_t>> &images,
                             std::size_t rows, std::size_t cols) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw data_error("cannot write " + path);
    }
    detail::write_be_u32(out, detail::idx_image_magic);
    detail::write_be_u32(out, static_cast<std::uint32_t>(images.size()));
    detail::write_be_u32(out, static_cast<std::uint32_t>(rows));
    detail::write_be_u32(out, static_cast<std::uint32_t>(cols));
    for (const auto &image : images) {
        if (image.size() != rows * cols) {
            throw data_error("image size does not match declared dims");
        }
        out.write(reinterpret_cast<const char *>(image.data()),
                  static_cast<std::streamsize>(image.size()));
    }
}

/// Writes an IDX label vector; labels must fit in a byte.
inline void write_idx_labels(const std::string &path,
                             const std::vector<int> &labels) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw data_error("cannot write " + path);
    }
    detail::write_be_u32(out, detail::idx_label_magic);
    detail::write_be_u32(out, static_cast<std::uint32_t>(labels.size()));
    for (int label : labels) {
        if (label < 0 || label > 255) {
            throw data_error("label outside byte range");
        }
        const auto byte = static_cast<std::uint8_t>(label);
        out.write(reinterpret_cast<const char *>(&byte), 1);
    }
}

/// Keep the listed original classes and relabel them by list position.
struct SubsetRule {
    std::vector<int> keep_classes;

    void validate() const {
        if (keep_classes.empty()) {
            throw config_error("subset rule keeps no classes");
        }
        std::set<int> unique(keep_classes.begin(), keep_classes.end());
        if (unique.size() != keep_classes.size()) {
            throw config_error("subset rule repeats a class");
        }
    }

    /// New label for an original one, or -1 when filtered out.
    [[nodiscard]] int relabel(int original) const {
        for (std::size_t i = 0; i < keep_classes.size(); ++i) {
            if (keep_classes[i] == original) {
                return static_cast<int>(i);
            }
        }
        return -1;
    }
};

/// Filters and relabels, preserving the original sample order.
inline Dataset subset(const Dataset &dataset, const SubsetRule &rule) {
    rule.validate();
    Dataset out;
    out.rows = dataset.rows;
    out.cols = dataset.cols;
    out.name = dataset.name;
    for (std::size_t i = 0; i < dataset.size(); ++i) {
        const int relabeled = rule.relabel(dataset.labels[i]);
        if (relabeled < 0) {
            continue;
        }
        out.images.push_back(dataset.images[i]);
        out.labels.push_back(relabeled);
    }
    return out;
}

/**
 * @brief Seeded per-class split into (train, val).
 *
 * Each class contributes round-half-up(val_fraction * n_c) samples to
 * the validation set, chosen by a per-class Fisher-Yates shuffle seeded
 * with mix_seed(seed, class). Both outputs keep ascending original
 * order.
 */
inline std::pair<Dataset, Dataset>
stratified_split(const Dataset &dataset, double val_fraction,
                 std::uint64_t seed) {
    if (!(val_fraction > 0.0 && val_fraction < 1.0)) {
        throw config_error("val_fraction must lie in (0, 1)");
    }
    std::vector<std::vector<std::size_t>> by_class;
    for (std::size_t i = 0; i < dataset.size(); ++i) {
        const int label = dataset.labels[i];
        if (label < 0) {
            throw data_error("negative label in dataset");
        }
        if (static_cast<std::size_t>(label) >= by_class.size()) {
            by_class.resize(label + 1);
        }
        by_class[label].push_back(i);
    }

    std::vector<bool> in_val(dataset.size(), false);
    for (std::size_t cls = 0; cls < by_class.size(); ++cls) {
        auto &members = by_class[cls];
        if (members.empty()) {
            continue;
        }
        if (members.size() < 2) {
            throw data_error("class " + std::to_string(cls) +
                             " has fewer than 2 samples");
        }
        const auto n_val = static_cast<std::size_t>(std::floor(
            val_fraction * static_cast<double>(members.size()) + 0.5));
        Rng rng(mix_seed(seed, cls));
        seeded_shuffle(members, rng);
        for (std::size_t k = 0; k < n_val; ++k) {
            in_val[members[k]] = true;
        }
    }

    Dataset train_out;
    Dataset val_out;
    train_out.rows = val_out.rows = dataset.rows;
    train_out.cols = val_out.cols = dataset.cols;
    train_out.name = dataset.name + "/train";
    val_out.name = dataset.name + "/val";
    for (std::size_t i = 0; i < dataset.size(); ++i) {
        Dataset &dst = in_val[i] ? val_out : train_out;
        dst.images.push_back(dataset.images[i]);
        dst.labels.push_back(dataset.labels[i]);
    }
    return {std::move(train_out), std::move(val_out)};
}

/// Casts one stored image to the real-valued grid the encoder consumes.
inline Grid to_grid(const std::vector<std::uint8_t> &image, std::size_t rows,
                    std::size_t cols) {
    Grid grid(rows, cols);
    for (std::size_t i = 0; i < image.size(); ++i) {
        grid.data[i] = static_cast<double>(image[i]);
    }
    return grid;
}

/// Encodes every sample of a dataset for a given circuit geometry.
inline std::vector<EncodedSample> encode_dataset(const Dataset &dataset,
                                                 const DaqcConfig &config,
                                                 std::size_t threads = 0) {
    std::vector<EncodedSample> encoded(dataset.size());
    parallel_for(dataset.size(), threads, [&](std::size_t i) {
        encoded[i] = encode_sample(to_grid(dataset.images[i], dataset.rows,
                                           dataset.cols),
                                   config, dataset.labels[i]);
    });
    return encoded;
}

} // namespace daqc
