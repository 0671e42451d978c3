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
 * JSON/CSV serialization: run configs (kind-discriminated), circuit
 * provenance documents, checkpoints, and report files. Field names are
 * documented in docs/file-formats.md and covered by round-trip tests.
 *
 * All report writers are timestamp-free so identical runs produce
 * byte-identical files; volatile run metadata goes to run.json only.
 */
#pragma once

#include "daqc/circuit.hpp"
#include "daqc/dataset.hpp"
#include "daqc/diagnostics.hpp"
#include "daqc/metrics.hpp"
#include "daqc/model.hpp"
#include "daqc/training.hpp"

#include <json.hpp>

#include <charconv>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

namespace daqc {

using json = nlohmann::ordered_json;

namespace io_detail {

inline const json &require(const json &j, const std::string &key,
                           const std::string &context) {
    if (!j.contains(key)) {
        throw config_error(context + ": missing field '" + key + "'");
    }
    return j.at(key);
}

template <typename T>
T get_field(const json &j, const std::string &key, const std::string &context) {
    try {
        return require(j, key, context).get<T>();
    } catch (const config_error &) {
        throw;
    } catch (const std::exception &e) {
        throw config_error(context + "." + key + ": " + e.what());
    }
}

template <typename T>
T get_or(const json &j, const std::string &key, const std::string &context,
         T fallback) {
    if (!j.contains(key)) {
        return fallback;
    }
    return get_field<T>(j, key, context);
}

inline void reject_unknown(const json &j,
                           std::initializer_list<const char *> known,
                           const std::string &context) {
    for (const auto &item : j.items()) {
        bool found = false;
        for (const char *k : known) {
            if (item.key() == k) {
                found = true;
                break;
            }
        }
        if (!found) {
            throw config_error(context + ": unknown field '" + item.key() +
                               "'");
        }
    }
}

} // namespace io_detail

// ---------------------------------------------------------------------
// Circuit configuration and provenance.

inline json daqc_config_to_json(const DaqcConfig &config) {
    return json{{"n_qubits", config.n_qubits},
                {"pooled_rows", config.pooled_rows},
                {"pooled_cols", config.pooled_cols},
                {"window_rows", config.window_rows},
                {"window_cols", config.window_cols},
                {"entangle_period", config.entangle_period},
                {"axis_seed", config.axis_seed}};
}

inline DaqcConfig daqc_config_from_json(const json &j,
                                        const std::string &context) {
    using namespace io_detail;
    reject_unknown(j,
                   {"n_qubits", "pooled_rows", "pooled_cols", "window_rows",
                    "window_cols", "entangle_period", "axis_seed"},
                   context);
    DaqcConfig config;
    config.n_qubits = get_or<std::size_t>(j, "n_qubits", context, config.n_qubits);
    config.pooled_rows =
        get_or<std::size_t>(j, "pooled_rows", context, config.pooled_rows);
    config.pooled_cols =
        get_or<std::size_t>(j, "pooled_cols", context, config.pooled_cols);
    config.window_rows =
        get_or<std::size_t>(j, "window_rows", context, config.window_rows);
    config.window_cols =
        get_or<std::size_t>(j, "window_cols", context, config.window_cols);
    config.entangle_period = get_or<std::size_t>(j, "entangle_period", context,
                                                 config.entangle_period);
    config.axis_seed =
        get_or<std::uint64_t>(j, "axis_seed", context, config.axis_seed);
    return config;
}

inline json axes_to_json(const CircuitSpec &spec) {
    json embed = json::array();
    for (std::size_t t = 0; t < spec.n_cycles; ++t) {
        json row = json::array();
        for (std::size_t q = 0; q < spec.config.n_qubits; ++q) {
            row.push_back(std::string(1, axis_name(spec.embed_axis(t, q))));
        }
        embed.push_back(std::move(row));
    }
    json train = json::array();
    for (std::size_t t = 0; t < spec.n_cycles; ++t) {
        json columns = json::array();
        for (std::size_t k = 0; k < DaqcConfig::trainable_layers_per_cycle;
             ++k) {
            json row = json::array();
            for (std::size_t q = 0; q < spec.config.n_qubits; ++q) {
                row.push_back(
                    std::string(1, axis_name(spec.train_axis(t, k, q))));
            }
            columns.push_back(std::move(row));
        }
        train.push_back(std::move(columns));
    }
    return json{{"embed_axes", std::move(embed)},
                {"train_axes", std::move(train)}};
}

/// Full provenance document for a built circuit.
inline json circuit_to_json(const CircuitSpec &spec) {
    json doc;
    doc["format_version"] = 1;
    doc["config"] = daqc_config_to_json(spec.config);
    doc["n_cycles"] = spec.n_cycles;
    doc["n_features"] = spec.n_features;
    json ecr_cycles = json::array();
    for (std::size_t t = 0; t < spec.n_cycles; ++t) {
        if (spec.has_ecr_layer(t)) {
            ecr_cycles.push_back(t);
        }
    }
    doc["ecr_cycles"] = std::move(ecr_cycles);
    doc["gate_counts"] = json{{"feature", spec.n_feature_gates},
                              {"parameter", spec.n_param_gates},
                              {"ecr", spec.n_ecr_gates}};
    const json axes = axes_to_json(spec);
    doc["embed_axes"] = axes.at("embed_axes");
    doc["train_axes"] = axes.at("train_axes");
    return doc;
}

/// Rebuilds a CircuitSpec from a provenance document. Axis tables are
/// taken from the document, not re-sampled, so old circuits stay valid
/// even if the sampling stream ever changes.
inline CircuitSpec circuit_from_json(const json &doc,
                                     const std::string &context) {
    using namespace io_detail;
    const DaqcConfig config =
        daqc_config_from_json(require(doc, "config", context), context + ".config");
    CircuitSpec spec = build_circuit(config);

    const json &embed = require(doc, "embed_axes", context);
    const json &train = require(doc, "train_axes", context);
    if (embed.size() != spec.n_cycles || train.size() != spec.n_cycles) {
        throw config_error(context + ": axis tables do not match n_cycles");
    }
    for (std::size_t t = 0; t < spec.n_cycles; ++t) {
        for (std::size_t q = 0; q < config.n_qubits; ++q) {
            const std::string name = embed.at(t).at(q).get<std::string>();
            spec.embed_axes[t * config.n_qubits + q] =
                axis_from_name(name.at(0));
        }
        for (std::size_t k = 0; k < DaqcConfig::trainable_layers_per_cycle;
             ++k) {
            for (std::size_t q = 0; q < config.n_qubits; ++q) {
                const std::string name =
                    train.at(t).at(k).at(q).get<std::string>();
                spec.train_axes[(t * DaqcConfig::trainable_layers_per_cycle +
                                 k) *
                                    config.n_qubits +
                                q] = axis_from_name(name.at(0));
            }
        }
    }
    // Re-emit the ops with the documented axes.
    CircuitSpec rebuilt = spec;
    rebuilt.ops.clear();
    rebuilt.n_feature_gates = rebuilt.n_param_gates = rebuilt.n_ecr_gates = 0;
    for (std::size_t t = 0; t < spec.n_cycles; ++t) {
        for (std::size_t q = 0; q < config.n_qubits; ++q) {
            const std::size_t k = t * config.n_qubits + q;
            if (k >= spec.n_features) {
                continue;
            }
            rebuilt.ops.push_back(GateOp::rotation(spec.embed_axis(t, q), q,
                                                   AngleKind::Feature, k));
            ++rebuilt.n_feature_gates;
        }
        if (spec.has_ecr_layer(t)) {
            for (std::size_t e = 0; e < config.n_qubits; ++e) {
                rebuilt.ops.push_back(
                    GateOp::ecr(e, (e + 1) % config.n_qubits));
                ++rebuilt.n_ecr_gates;
            }
        }
        for (std::size_t k = 0; k < DaqcConfig::trainable_layers_per_cycle;
             ++k) {
            for (std::size_t q = 0; q < config.n_qubits; ++q) {
                rebuilt.ops.push_back(
                    GateOp::rotation(spec.train_axis(t, k, q), q,
                                     AngleKind::Parameter,
                                     spec.param_slot(t, k, q)));
                ++rebuilt.n_param_gates;
            }
        }
    }
    return rebuilt;
}

// ---------------------------------------------------------------------
// Training / eval configuration.

inline json train_config_to_json(const TrainConfig &config) {
    return json{{"learning_rate", config.learning_rate},
                {"weight_decay", config.weight_decay},
                {"epochs", config.epochs},
                {"batch_size", config.batch_size},
                {"early_stop_patience", config.early_stop_patience},
                {"init_seed", config.init_seed},
                {"threads", config.threads}};
}

inline TrainConfig train_config_from_json(const json &j,
                                          const std::string &context) {
    using namespace io_detail;
    reject_unknown(j,
                   {"learning_rate", "weight_decay", "epochs", "batch_size",
                    "early_stop_patience", "init_seed", "threads"},
                   context);
    TrainConfig config;
    config.learning_rate =
        get_or<double>(j, "learning_rate", context, config.learning_rate);
    config.weight_decay =
        get_or<double>(j, "weight_decay", context, config.weight_decay);
    config.epochs = get_or<std::size_t>(j, "epochs", context, config.epochs);
    config.batch_size =
        get_or<std::size_t>(j, "batch_size", context, config.batch_size);
    config.early_stop_patience = get_or<std::size_t>(
        j, "early_stop_patience", context, config.early_stop_patience);
    config.init_seed =
        get_or<std::uint64_t>(j, "init_seed", context, config.init_seed);
    config.threads =
        get_or<std::size_t>(j, "threads", context, config.threads);
    return config;
}

/// Dataset file bindings for a training or evaluation run.
struct DataConfig {
    std::string train_images;
    std::string train_labels;
    std::string val_images;  ///< optional pre-split validation files
    std::string val_labels;
    std::string test_images;
    std::string test_labels;
    std::vector<int> keep_classes; ///< empty = keep all classes
    double val_fraction = 0.2;
    std::uint64_t split_seed = 0;
    std::size_t train_limit = 0; ///< 0 = use every training sample
    std::string name = "dataset";

    [[nodiscard]] bool has_explicit_val() const {
        return !val_images.empty();
    }
};

inline json data_config_to_json(const DataConfig &config) {
    json j{{"train_images", config.train_images},
           {"train_labels", config.train_labels},
           {"val_images", config.val_images},
           {"val_labels", config.val_labels},
           {"test_images", config.test_images},
           {"test_labels", config.test_labels},
           {"keep_classes", config.keep_classes},
           {"val_fraction", config.val_fraction},
           {"split_seed", config.split_seed},
           {"train_limit", config.train_limit},
           {"name", config.name}};
    return j;
}

inline DataConfig data_config_from_json(const json &j,
                                        const std::string &context) {
    using namespace io_detail;
    reject_unknown(j,
                   {"train_images", "train_labels", "val_images", "val_labels",
                    "test_images", "test_labels", "keep_classes",
                    "val_fraction", "split_seed", "train_limit", "name"},
                   context);
    DataConfig config;
    config.train_images =
        get_or<std::string>(j, "train_images", context, "");
    config.train_labels =
        get_or<std::string>(j, "train_labels", context, "");
    config.val_images = get_or<std::string>(j, "val_images", context, "");
    config.val_labels = get_or<std::string>(j, "val_labels", context, "");
    config.test_images = get_or<std::string>(j, "test_images", context, "");
    config.test_labels = get_or<std::string>(j, "test_labels", context, "");
    config.keep_classes = get_or<std::vector<int>>(j, "keep_classes", context,
                                                   config.keep_classes);
    config.val_fraction =
        get_or<double>(j, "val_fraction", context, config.val_fraction);
    config.split_seed =
        get_or<std::uint64_t>(j, "split_seed", context, config.split_seed);
    config.train_limit =
        get_or<std::size_t>(j, "train_limit", context, config.train_limit);
    config.name = get_or<std::string>(j, "name", context, config.name);
    return config;
}

// ---------------------------------------------------------------------
// Diagnostics configuration.

inline json expressibility_config_to_json(const ExpressibilityConfig &config) {
    return json{{"n_states", config.n_states},
                {"n_pairs", config.n_pairs},
                {"n_bins", config.n_bins},
                {"embed_hi", config.embed_hi},
                {"param_hi", config.param_hi},
                {"bin_range",
                 config.bin_range == BinRange::Data ? "data" : "unit"},
                {"seed", config.seed},
                {"threads", config.threads},
                {"cache_bytes", config.cache_bytes}};
}

inline ExpressibilityConfig
expressibility_config_from_json(const json &j, const std::string &context) {
    using namespace io_detail;
    reject_unknown(j,
                   {"n_states", "n_pairs", "n_bins", "embed_hi", "param_hi",
                    "bin_range", "seed", "threads", "cache_bytes"},
                   context);
    ExpressibilityConfig config;
    config.n_states =
        get_or<std::size_t>(j, "n_states", context, config.n_states);
    config.n_pairs = get_or<std::size_t>(j, "n_pairs", context, config.n_pairs);
    config.n_bins = get_or<std::size_t>(j, "n_bins", context, config.n_bins);
    config.embed_hi = get_or<double>(j, "embed_hi", context, config.embed_hi);
    config.param_hi = get_or<double>(j, "param_hi", context, config.param_hi);
    const std::string range =
        get_or<std::string>(j, "bin_range", context, "data");
    if (range == "data") {
        config.bin_range = BinRange::Data;
    } else if (range == "unit") {
        config.bin_range = BinRange::Unit;
    } else {
        throw config_error(context + ".bin_range: expected 'data' or 'unit'");
    }
    config.seed = get_or<std::uint64_t>(j, "seed", context, config.seed);
    config.threads = get_or<std::size_t>(j, "threads", context, config.threads);
    config.cache_bytes =
        get_or<std::size_t>(j, "cache_bytes", context, config.cache_bytes);
    return config;
}

inline json bp_config_to_json(const BpSweepConfig &config) {
    return json{{"qubit_list", config.qubit_list},
                {"instances_per_config", config.instances_per_config},
                {"weight_samples", config.weight_samples},
                {"cost", bp_cost_name(config.cost)},
                {"seed", config.seed},
                {"threads", config.threads},
                {"max_qubits", config.max_qubits},
                {"embed_cycles", config.embed_cycles},
                {"entangle_period", config.entangle_period}};
}

inline BpSweepConfig bp_config_from_json(const json &j,
                                         const std::string &context) {
    using namespace io_detail;
    reject_unknown(j,
                   {"qubit_list", "instances_per_config", "weight_samples",
                    "cost", "seed", "threads", "max_qubits", "embed_cycles",
                    "entangle_period"},
                   context);
    BpSweepConfig config;
    config.qubit_list = get_or<std::vector<std::size_t>>(
        j, "qubit_list", context, config.qubit_list);
    config.instances_per_config = get_or<std::size_t>(
        j, "instances_per_config", context, config.instances_per_config);
    config.weight_samples = get_or<std::size_t>(j, "weight_samples", context,
                                                config.weight_samples);
    const std::string cost = get_or<std::string>(j, "cost", context, "global");
    if (cost == "global") {
        config.cost = BpCost::GlobalZ;
    } else if (cost == "local") {
        config.cost = BpCost::LocalZ0;
    } else {
        throw config_error(context + ".cost: expected 'global' or 'local'");
    }
    config.seed = get_or<std::uint64_t>(j, "seed", context, config.seed);
    config.threads = get_or<std::size_t>(j, "threads", context, config.threads);
    config.max_qubits =
        get_or<std::size_t>(j, "max_qubits", context, config.max_qubits);
    config.embed_cycles =
        get_or<std::size_t>(j, "embed_cycles", context, config.embed_cycles);
    config.entangle_period = get_or<std::size_t>(j, "entangle_period", context,
                                                 config.entangle_period);
    return config;
}

// ---------------------------------------------------------------------
// Checkpoints.

struct Checkpoint {
    CircuitSpec spec;
    ModelParams params;
    std::size_t best_epoch = 0;
    double best_val_auc = 0.0;
};

inline json checkpoint_to_json(const Checkpoint &ck) {
    json doc;
    doc["format_version"] = 1;
    doc["kind"] = "checkpoint";
    doc["circuit"] = circuit_to_json(ck.spec);
    doc["n_classes"] = ck.params.n_classes();
    doc["theta"] = ck.params.theta;
    doc["readout_w"] = ck.params.readout_w;
    doc["readout_b"] = ck.params.readout_b;
    doc["best_epoch"] = ck.best_epoch;
    doc["best_val_auc"] = ck.best_val_auc;
    return doc;
}

inline Checkpoint checkpoint_from_json(const json &doc,
                                       const std::string &context) {
    using namespace io_detail;
    if (get_or<int>(doc, "format_version", context, 1) != 1) {
        throw config_error(context + ": unsupported checkpoint version");
    }
    Checkpoint ck;
    ck.spec = circuit_from_json(require(doc, "circuit", context),
                                context + ".circuit");
    ck.params.theta = get_field<std::vector<double>>(doc, "theta", context);
    ck.params.readout_w =
        get_field<std::vector<double>>(doc, "readout_w", context);
    ck.params.readout_b =
        get_field<std::vector<double>>(doc, "readout_b", context);
    ck.best_epoch = get_or<std::size_t>(doc, "best_epoch", context, 0);
    ck.best_val_auc = get_or<double>(doc, "best_val_auc", context, 0.0);
    const auto n_classes = get_field<std::size_t>(doc, "n_classes", context);
    if (ck.params.n_classes() != n_classes) {
        throw config_error(context + ": readout_b length disagrees with "
                                     "n_classes");
    }
    ck.params.check_shapes(ck.spec);
    return ck;
}

// ---------------------------------------------------------------------
// Reports.

inline json metrics_to_json(const MetricsReport &m) {
    return json{{"auc", m.auc},
                {"acc", m.acc},
                {"specificity", m.specificity},
                {"sensitivity", m.sensitivity},
                {"f1", m.f1}};
}

inline void write_text_file(const std::filesystem::path &path,
                            const std::string &content) {
    std::ofstream out(path);
    if (!out) {
        throw data_error("cannot write " + path.string());
    }
    out << content;
}

inline void write_json_file(const std::filesystem::path &path, const json &doc) {
    write_text_file(path, doc.dump(2) + "\n");
}

inline json load_json_file(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw data_error("cannot open " + path);
    }
    try {
        return json::parse(in);
    } catch (const std::exception &e) {
        throw config_error(path + ": " + e.what());
    }
}

/// Shortest decimal form that round-trips the exact double.
inline std::string format_double(double v) {
    char buf[32];
    const auto result = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, result.ptr);
}

inline std::string trace_to_csv(const std::vector<EpochStats> &trace) {
    std::string csv = "epoch,train_loss,val_loss,val_auc,grad_l2\n";
    for (const EpochStats &row : trace) {
        csv += std::to_string(row.epoch) + "," + format_double(row.train_loss) +
               "," + format_double(row.val_loss) + "," +
               format_double(row.val_auc) + "," + format_double(row.grad_l2) +
               "\n";
    }
    return csv;
}

inline std::string histogram_to_csv(const FidelityHistogram &hist) {
    std::string csv = "bin_lo,bin_hi,count,haar_mass\n";
    for (std::size_t b = 0; b < hist.counts.size(); ++b) {
        csv += format_double(hist.edges[b]) + "," +
               format_double(hist.edges[b + 1]) + "," +
               std::to_string(hist.counts[b]) + "," +
               format_double(hist.haar_mass[b]) + "\n";
    }
    return csv;
}

inline std::string bp_to_csv(const BpReport &report) {
    std::string csv = "n,cost,layer,variance\n";
    for (const BpConfigReport &row : report.rows) {
        csv += std::to_string(row.n_qubits) + "," + bp_cost_name(report.cost) +
               ",all," + format_double(row.mean_variance) + "\n";
        for (std::size_t layer = 0; layer < row.layer_mean_variance.size();
             ++layer) {
            csv += std::to_string(row.n_qubits) + "," +
                   bp_cost_name(report.cost) + "," + std::to_string(layer) +
                   "," + format_double(row.layer_mean_variance[layer]) + "\n";
        }
    }
    return csv;
}

} // namespace daqc
