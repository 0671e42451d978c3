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

#include "daqc/metrics.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>

using namespace daqc;
using Catch::Approx;

namespace {

// Brute-force AUC oracle: fraction of (positive, negative) pairs ranked
// correctly, ties counting one half.
double auc_pair_oracle(std::span<const double> scores,
                       std::span<const int> labels) {
    double wins = 0.0;
    std::size_t pairs = 0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        if (labels[i] != 1) {
            continue;
        }
        for (std::size_t j = 0; j < scores.size(); ++j) {
            if (labels[j] != 0) {
                continue;
            }
            ++pairs;
            if (scores[i] > scores[j]) {
                wins += 1.0;
            } else if (scores[i] == scores[j]) {
                wins += 0.5;
            }
        }
    }
    return wins / static_cast<double>(pairs);
}

std::vector<double> binary_scores_to_rows(std::span<const double> s1) {
    std::vector<double> rows;
    for (double s : s1) {
        rows.push_back(1.0 - s);
        rows.push_back(s);
    }
    return rows;
}

} // namespace

TEST_CASE("binary AUC equals the pairwise rank statistic", "[metrics]") {
    // 6-sample fixture with a tie between a positive and a negative.
    const std::vector<double> scores{0.9, 0.4, 0.7, 0.4, 0.2, 0.65};
    const std::vector<int> labels{1, 0, 1, 1, 0, 0};
    CHECK(auc_binary(scores, labels) ==
          Approx(auc_pair_oracle(scores, labels)).margin(1e-12));

    SECTION("random fixtures") {
        Rng rng(1009);
        for (int rep = 0; rep < 30; ++rep) {
            const std::size_t n = 4 + uniform_index(rng, 20);
            std::vector<double> s(n);
            std::vector<int> y(n);
            bool has_pos = false;
            bool has_neg = false;
            for (std::size_t i = 0; i < n; ++i) {
                s[i] = std::round(uniform_unit(rng) * 8.0) / 8.0; // force ties
                y[i] = uniform_index(rng, 2) ? 1 : 0;
                has_pos |= y[i] == 1;
                has_neg |= y[i] == 0;
            }
            if (!has_pos || !has_neg) {
                continue;
            }
            CHECK(auc_binary(s, y) ==
                  Approx(auc_pair_oracle(s, y)).margin(1e-12));
        }
    }
}

TEST_CASE("AUC is invariant under strictly monotone transforms",
          "[metrics]") {
    Rng rng(1013);
    std::vector<double> s(40);
    std::vector<int> y(40);
    for (std::size_t i = 0; i < s.size(); ++i) {
        s[i] = uniform_real(rng, -3.0, 3.0);
        y[i] = uniform_index(rng, 2) ? 1 : 0;
    }
    y[0] = 1;
    y[1] = 0;
    const double base = auc_binary(s, y);
    std::vector<double> warped(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        warped[i] = std::tanh(2.0 * s[i]) + 5.0;
    }
    CHECK(auc_binary(warped, y) == Approx(base).margin(1e-12));
}

TEST_CASE("metric reports", "[metrics]") {
    SECTION("perfect binary classifier") {
        const std::vector<double> s1{0.9, 0.8, 0.1, 0.2};
        const std::vector<int> y{1, 1, 0, 0};
        const auto rows = binary_scores_to_rows(s1);
        const MetricsReport r = evaluate_scores(rows, y, 2);
        CHECK(r.auc == Approx(1.0));
        CHECK(r.acc == Approx(1.0));
        CHECK(r.specificity == Approx(1.0));
        CHECK(r.sensitivity == Approx(1.0));
        CHECK(r.f1 == Approx(1.0));
    }
    SECTION("constant classifier predicting the positive class") {
        const std::vector<double> s1{0.8, 0.8, 0.8, 0.8};
        const std::vector<int> y{1, 0, 1, 0};
        const auto rows = binary_scores_to_rows(s1);
        const MetricsReport r = evaluate_scores(rows, y, 2);
        CHECK(r.acc == Approx(0.5));
        CHECK(r.sensitivity == Approx(1.0));
        CHECK(r.specificity == Approx(0.0));
        CHECK(r.auc == Approx(0.5));
    }
    SECTION("single-class split has no AUC") {
        const std::vector<double> s1{0.8, 0.2};
        const std::vector<int> y{1, 1};
        const auto rows = binary_scores_to_rows(s1);
        CHECK_THROWS_AS(evaluate_scores(rows, y, 2), data_error);
    }
    SECTION("macro one-vs-rest on a 3-class fixture") {
        // 3 samples, all predicted correctly except the last.
        const std::vector<double> rows{
            0.7, 0.2, 0.1, // -> 0
            0.1, 0.8, 0.1, // -> 1
            0.5, 0.3, 0.2, // -> 0 (true 2)
        };
        const std::vector<int> y{0, 1, 2};
        const MetricsReport r = evaluate_scores(rows, y, 3);
        CHECK(r.acc == Approx(2.0 / 3.0));
        // Per-class sensitivity: 1, 1, 0.
        CHECK(r.sensitivity == Approx(2.0 / 3.0));
        // Per-class specificity: class 0 sees one false positive.
        CHECK(r.specificity == Approx((0.5 + 1.0 + 1.0) / 3.0));
        // Per-class F1: 2/3 (class 0), 1 (class 1), 0 (class 2).
        CHECK(r.f1 == Approx((2.0 / 3.0 + 1.0 + 0.0) / 3.0));
    }
    SECTION("shape and label validation") {
        const std::vector<double> rows{0.5, 0.5};
        const std::vector<int> bad{7};
        CHECK_THROWS_AS(evaluate_scores(rows, bad, 2), data_error);
        const std::vector<int> y{0};
        const std::vector<double> short_rows{0.5};
        CHECK_THROWS_AS(evaluate_scores(short_rows, y, 2),
                        std::invalid_argument);
    }
}
