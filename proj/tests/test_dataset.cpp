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

#include "daqc/dataset.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>

using namespace daqc;
using Catch::Approx;

namespace {

struct TempDir {
    std::filesystem::path path;
    TempDir() {
        path = std::filesystem::temp_directory_path() /
               ("daqc_test_" + std::to_string(::getpid()) + "_" +
                std::to_string(counter()++));
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
    [[nodiscard]] std::string file(const std::string &name) const {
        return (path / name).string();
    }
    static int &counter() {
        static int n = 0;
        return n;
    }
};

Dataset synthetic_dataset(std::size_t count, std::size_t n_classes,
                          std::uint64_t seed) {
    Dataset d;
    d.rows = 4;
    d.cols = 3;
    d.name = "synthetic";
    Rng rng(seed);
    for (std::size_t i = 0; i < count; ++i) {
        std::vector<std::uint8_t> img(12);
        for (auto &p : img) {
            p = static_cast<std::uint8_t>(uniform_index(rng, 256));
        }
        // Tag each image with a unique id for partition checks.
        img[0] = static_cast<std::uint8_t>(i & 0xFF);
        img[1] = static_cast<std::uint8_t>((i >> 8) & 0xFF);
        d.images.push_back(std::move(img));
        d.labels.push_back(static_cast<int>(i % n_classes));
    }
    return d;
}

std::size_t image_id(const std::vector<std::uint8_t> &img) {
    return img[0] | (std::size_t{img[1]} << 8);
}

} // namespace

TEST_CASE("IDX write-read round trip", "[dataset]") {
    TempDir tmp;
    Dataset original = synthetic_dataset(5, 3, 71);
    write_idx_images(tmp.file("img.idx"), original.images, original.rows,
                     original.cols);
    write_idx_labels(tmp.file("lab.idx"), original.labels);

    const Dataset loaded = load_idx(tmp.file("img.idx"), tmp.file("lab.idx"));
    REQUIRE(loaded.size() == original.size());
    CHECK(loaded.rows == original.rows);
    CHECK(loaded.cols == original.cols);
    CHECK(loaded.images == original.images);
    CHECK(loaded.labels == original.labels);
}

TEST_CASE("IDX format errors", "[dataset]") {
    TempDir tmp;
    Dataset d = synthetic_dataset(3, 2, 72);
    write_idx_images(tmp.file("img.idx"), d.images, d.rows, d.cols);
    write_idx_labels(tmp.file("lab.idx"), d.labels);

    SECTION("missing file") {
        CHECK_THROWS_AS(load_idx(tmp.file("nope.idx"), tmp.file("lab.idx")),
                        data_error);
    }
    SECTION("image file passed as labels") {
        CHECK_THROWS_AS(load_idx(tmp.file("img.idx"), tmp.file("img.idx")),
                        data_error);
    }
    SECTION("label file passed as images") {
        CHECK_THROWS_AS(load_idx(tmp.file("lab.idx"), tmp.file("lab.idx")),
                        data_error);
    }
    SECTION("truncated payload") {
        std::filesystem::resize_file(tmp.file("img.idx"), 20);
        CHECK_THROWS_AS(load_idx(tmp.file("img.idx"), tmp.file("lab.idx")),
                        data_error);
    }
    SECTION("count mismatch") {
        write_idx_labels(tmp.file("short.idx"), {0, 1});
        CHECK_THROWS_AS(load_idx(tmp.file("img.idx"), tmp.file("short.idx")),
                        data_error);
    }
}

TEST_CASE("class subsetting", "[dataset]") {
    const Dataset d = synthetic_dataset(50, 10, 73);

    SECTION("filter and relabel preserving order") {
        SubsetRule rule{{0, 1, 4, 8}};
        const Dataset s = subset(d, rule);
        CHECK(s.size() == 20); // 5 samples per original class
        std::set<int> seen(s.labels.begin(), s.labels.end());
        CHECK(seen == std::set<int>{0, 1, 2, 3});
        // Order preserved: ids ascend.
        for (std::size_t i = 0; i + 1 < s.size(); ++i) {
            CHECK(image_id(s.images[i]) < image_id(s.images[i + 1]));
        }
        // Spot-check the relabeling: original 4 -> 2, original 8 -> 3.
        for (std::size_t i = 0; i < s.size(); ++i) {
            const int original = d.labels[image_id(s.images[i])];
            CHECK(s.labels[i] == rule.relabel(original));
        }
    }
    SECTION("identity rule keeps everything") {
        SubsetRule rule{{0, 1, 2, 3, 4, 5, 6, 7, 8, 9}};
        const Dataset s = subset(d, rule);
        CHECK(s.images == d.images);
        CHECK(s.labels == d.labels);
    }
    SECTION("rule validation") {
        CHECK_THROWS_AS(subset(d, SubsetRule{{}}), config_error);
        CHECK_THROWS_AS(subset(d, SubsetRule{{1, 1}}), config_error);
    }
}

TEST_CASE("stratified split", "[dataset]") {
    SECTION("balanced 100-sample set gives 40/10 per class") {
        const Dataset d = synthetic_dataset(100, 2, 74);
        const auto [train_set, val_set] = stratified_split(d, 0.2, 99);
        CHECK(train_set.size() == 80);
        CHECK(val_set.size() == 20);
        for (int cls = 0; cls < 2; ++cls) {
            const auto count = [cls](const Dataset &ds) {
                return std::count(ds.labels.begin(), ds.labels.end(), cls);
            };
            CHECK(count(train_set) == 40);
            CHECK(count(val_set) == 10);
        }
    }
    SECTION("split is a deterministic partition") {
        const Dataset d = synthetic_dataset(61, 3, 75);
        const auto [t1, v1] = stratified_split(d, 0.2, 7);
        const auto [t2, v2] = stratified_split(d, 0.2, 7);
        CHECK(t1.images == t2.images);
        CHECK(v1.images == v2.images);

        const auto [t3, v3] = stratified_split(d, 0.2, 8);
        CHECK(t3.images != t1.images);

        std::set<std::size_t> train_ids;
        std::set<std::size_t> val_ids;
        for (const auto &img : t1.images) {
            train_ids.insert(image_id(img));
        }
        for (const auto &img : v1.images) {
            val_ids.insert(image_id(img));
        }
        CHECK(train_ids.size() + val_ids.size() == d.size());
        for (std::size_t id : val_ids) {
            CHECK(train_ids.count(id) == 0);
        }
    }
    SECTION("round-half-up rounding per class") {
        // Classes of size 7, 3, 13: val counts 1, 1, 3.
        Dataset d;
        d.rows = d.cols = 1;
        auto add = [&](int cls, int n) {
            for (int i = 0; i < n; ++i) {
                d.images.push_back({static_cast<std::uint8_t>(d.size())});
                d.labels.push_back(cls);
            }
        };
        add(0, 7);
        add(1, 3);
        add(2, 13);
        const auto [train_set, val_set] = stratified_split(d, 0.2, 11);
        auto count = [](const Dataset &ds, int cls) {
            return std::count(ds.labels.begin(), ds.labels.end(), cls);
        };
        CHECK(count(val_set, 0) == 1);
        CHECK(count(val_set, 1) == 1);
        CHECK(count(val_set, 2) == 3);
        for (int cls = 0; cls < 3; ++cls) {
            const double frac =
                static_cast<double>(count(val_set, cls)) /
                static_cast<double>(count(val_set, cls) + count(train_set, cls));
            CHECK(std::abs(frac - 0.2) <
                  1.0 / static_cast<double>(count(train_set, cls)));
        }
    }
    SECTION("rejects undersized classes and bad fractions") {
        Dataset d;
        d.rows = d.cols = 1;
        d.images = {{0}, {1}, {2}};
        d.labels = {0, 0, 1}; // class 1 has a single sample
        CHECK_THROWS_AS(stratified_split(d, 0.2, 1), data_error);
        CHECK_THROWS_AS(stratified_split(d, 0.0, 1), config_error);
        CHECK_THROWS_AS(stratified_split(d, 1.0, 1), config_error);
    }
}

TEST_CASE("dataset encoding pipeline", "[dataset]") {
    Dataset d;
    d.rows = d.cols = 8;
    for (int i = 0; i < 3; ++i) {
        std::vector<std::uint8_t> img(64);
        for (std::size_t p = 0; p < img.size(); ++p) {
            img[p] = static_cast<std::uint8_t>((p * (i + 1)) % 256);
        }
        d.images.push_back(std::move(img));
        d.labels.push_back(i % 2);
    }
    DaqcConfig config;
    config.n_qubits = 4;
    config.pooled_rows = 4;
    config.pooled_cols = 4;
    config.window_rows = 2;
    config.window_cols = 2;

    const auto encoded = encode_dataset(d, config, 1);
    REQUIRE(encoded.size() == 3);
    for (std::size_t i = 0; i < encoded.size(); ++i) {
        CHECK(encoded[i].label == d.labels[i]);
        CHECK(encoded[i].angles.size() == 16);
        for (double a : encoded[i].angles) {
            CHECK(a >= 0.0);
            CHECK(a <= std::numbers::pi + 1e-12);
        }
    }
}
