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
 * Classification metrics: accuracy, ROC AUC, specificity, sensitivity,
 * and F1. Binary tasks treat class 1 as positive; multiclass tasks are
 * macro-averaged one-vs-rest, with per-class scores taken from the
 * softmax probabilities.
 */
#pragma once

#include "daqc/common.hpp"

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <span>
#include <vector>

namespace daqc {

struct MetricsReport {
    double auc = 0.0;
    double acc = 0.0;
    double specificity = 0.0;
    double sensitivity = 0.0;
    double f1 = 0.0;
};

/**
 * @brief ROC AUC of `scores` against binary `labels` (1 = positive).
 *
 * Rank statistic with average ranks on ties, equivalent to the
 * Mann-Whitney U normalization; invariant under strictly monotone
 * transforms of the scores.
 */
inline double auc_binary(std::span<const double> scores,
                         std::span<const int> labels) {
    if (scores.size() != labels.size()) {
        throw std::invalid_argument("scores and labels differ in length");
    }
    const std::size_t n = scores.size();
    std::size_t n_pos = 0;
    for (int y : labels) {
        n_pos += (y == 1) ? 1U : 0U;
    }
    const std::size_t n_neg = n - n_pos;
    if (n_pos == 0 || n_neg == 0) {
        throw data_error("AUC undefined: split contains a single class");
    }

    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        return scores[a] < scores[b];
    });

    double rank_sum_pos = 0.0;
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && scores[idx[j + 1]] == scores[idx[i]]) {
            ++j;
        }
        // 1-based average rank of the tie group [i, j].
        const double avg_rank = 0.5 * static_cast<double>(i + j) + 1.0;
        for (std::size_t k = i; k <= j; ++k) {
            if (labels[idx[k]] == 1) {
                rank_sum_pos += avg_rank;
            }
        }
        i = j + 1;
    }
    const double n_pos_d = static_cast<double>(n_pos);
    const double n_neg_d = static_cast<double>(n_neg);
    return (rank_sum_pos - n_pos_d * (n_pos_d + 1.0) / 2.0) /
           (n_pos_d * n_neg_d);
}

/**
 * @brief Metrics from per-sample class scores (row-major n_samples x
 * n_classes, e.g. softmax probabilities) and integer labels.
 *
 * Accuracy uses the argmax prediction. For n_classes == 2, AUC and the
 * confusion-based metrics are reported for positive class 1; otherwise
 * all four are macro one-vs-rest averages. Degenerate per-class ratios
 * (empty denominator) count as 0 in the macro average.
 */
inline MetricsReport evaluate_scores(std::span<const double> scores,
                                     std::span<const int> labels,
                                     std::size_t n_classes) {
    const std::size_t n = labels.size();
    if (n == 0) {
        throw data_error("cannot evaluate an empty split");
    }
    if (scores.size() != n * n_classes) {
        throw std::invalid_argument("score matrix shape mismatch");
    }
    for (int y : labels) {
        if (y < 0 || static_cast<std::size_t>(y) >= n_classes) {
            throw data_error("label " + std::to_string(y) +
                             " outside [0, " + std::to_string(n_classes) + ")");
        }
    }

    std::vector<int> predicted(n);
    std::size_t correct = 0;
    for (std::size_t s = 0; s < n; ++s) {
        const auto row = scores.subspan(s * n_classes, n_classes);
        predicted[s] = static_cast<int>(
            std::max_element(row.begin(), row.end()) - row.begin());
        correct += (predicted[s] == labels[s]) ? 1U : 0U;
    }

    MetricsReport report;
    report.acc = static_cast<double>(correct) / static_cast<double>(n);

    auto one_vs_rest = [&](std::size_t cls) {
        std::size_t tp = 0;
        std::size_t tn = 0;
        std::size_t fp = 0;
        std::size_t fn = 0;
        for (std::size_t s = 0; s < n; ++s) {
            const bool truth = labels[s] == static_cast<int>(cls);
            const bool pred = predicted[s] == static_cast<int>(cls);
            tp += (truth && pred) ? 1U : 0U;
            tn += (!truth && !pred) ? 1U : 0U;
            fp += (!truth && pred) ? 1U : 0U;
            fn += (truth && !pred) ? 1U : 0U;
        }
        auto ratio = [](std::size_t num, std::size_t den) {
            return den == 0 ? 0.0
                            : static_cast<double>(num) /
                                  static_cast<double>(den);
        };
        struct {
            double sens, spec, f1;
        } out{ratio(tp, tp + fn), ratio(tn, tn + fp),
              ratio(2 * tp, 2 * tp + fp + fn)};
        return out;
    };

    auto class_scores = [&](std::size_t cls) {
        std::vector<double> s_cls(n);
        std::vector<int> y_cls(n);
        for (std::size_t s = 0; s < n; ++s) {
            s_cls[s] = scores[s * n_classes + cls];
            y_cls[s] = labels[s] == static_cast<int>(cls) ? 1 : 0;
        }
        return std::pair{std::move(s_cls), std::move(y_cls)};
    };

    if (n_classes == 2) {
        const auto stats = one_vs_rest(1);
        report.sensitivity = stats.sens;
        report.specificity = stats.spec;
        report.f1 = stats.f1;
        const auto [s1, y1] = class_scores(1);
        report.auc = auc_binary(s1, y1);
    } else {
        double auc_acc = 0.0;
        double sens_acc = 0.0;
        double spec_acc = 0.0;
        double f1_acc = 0.0;
        for (std::size_t cls = 0; cls < n_classes; ++cls) {
            const auto stats = one_vs_rest(cls);
            sens_acc += stats.sens;
            spec_acc += stats.spec;
            f1_acc += stats.f1;
            const auto [s_c, y_c] = class_scores(cls);
            auc_acc += auc_binary(s_c, y_c);
        }
        const double k = static_cast<double>(n_classes);
        report.auc = auc_acc / k;
        report.sensitivity = sens_acc / k;
        report.specificity = spec_acc / k;
        report.f1 = f1_acc / k;
    }
    return report;
}

} // namespace daqc
