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
// daqc: command-line front end. Subcommands: train, eval,
// diag {expressibility, entangling, bp-sweep}, circuit.
//
// Every run is a pure function of (config file, seed, input files); the
// only volatile output is run.json, which carries the timestamp and git
// description. Exit codes: 0 success, 2 config error, 3 data error,
// 4 capacity error.

#include "daqc/io.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

namespace {

using daqc::json;

struct GlobalFlags {
    std::string config_path;
    std::optional<std::uint64_t> seed_override;
    std::optional<std::size_t> threads_override;
    bool deterministic = false;
    std::string out_override;
    bool print_defaults = false;
};

std::string git_describe() {
    FILE *pipe = ::popen("git describe --always --dirty 2>/dev/null", "r");
    if (pipe == nullptr) {
        return "unknown";
    }
    char buf[128] = {0};
    std::string out;
    while (std::fgets(buf, sizeof(buf), pipe) != nullptr) {
        out += buf;
    }
    ::pclose(pipe);
    while (!out.empty() && (out.back() == '\n' || out.back() == '\r')) {
        out.pop_back();
    }
    return out.empty() ? "unknown" : out;
}

std::string iso_timestamp() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[64];
    std::strftime(buf, sizeof(buf), "%FT%TZ", std::gmtime(&t));
    return buf;
}

std::filesystem::path prepare_output_dir(const json &config,
                                         const GlobalFlags &flags) {
    std::string dir = flags.out_override;
    if (dir.empty()) {
        dir = daqc::io_detail::get_or<std::string>(config, "output_dir",
                                                   "config", "");
    }
    if (dir.empty()) {
        throw daqc::config_error(
            "config.output_dir: missing (or pass --out DIR)");
    }
    std::filesystem::create_directories(dir);
    return dir;
}

void write_run_metadata(const std::filesystem::path &dir,
                        const json &config_echo, std::uint64_t seed,
                        int argc, char **argv) {
    daqc::write_json_file(dir / "config.json", config_echo);
    std::string cmd;
    for (int i = 0; i < argc; ++i) {
        if (i > 0) {
            cmd += ' ';
        }
        cmd += argv[i];
    }
    const json run{{"timestamp", iso_timestamp()},
                   {"git_describe", git_describe()},
                   {"command", cmd},
                   {"seed", seed}};
    daqc::write_json_file(dir / "run.json", run);
}

/// Fills omitted sub-seeds from the global seed so the echoed config is
/// fully explicit. Stream tags: 1 axis, 2 init, 3 split, 4 eval-limit,
/// 5 sampling, 6 sweep.
void fill_seeds(json &config, std::uint64_t seed) {
    auto fill = [&](const char *section, const char *field,
                    std::uint64_t tag) {
        if (!config.contains(section)) {
            return;
        }
        json &sub = config[section];
        if (!sub.contains(field)) {
            sub[field] = daqc::mix_seed(seed, tag);
        }
    };
    fill("circuit", "axis_seed", 1);
    fill("train", "init_seed", 2);
    fill("data", "split_seed", 3);
    fill("sampling", "seed", 5);
    fill("sweep", "seed", 6);
}

void apply_thread_flags(json &config, const GlobalFlags &flags) {
    std::optional<std::size_t> threads = flags.threads_override;
    if (flags.deterministic) {
        threads = 1; // sequential reductions
    }
    if (!threads) {
        return;
    }
    for (const char *section : {"train", "sampling", "sweep"}) {
        if (config.contains(section)) {
            config[section]["threads"] = *threads;
        }
    }
}

json load_run_config(const GlobalFlags &flags, const std::string &kind) {
    if (flags.config_path.empty()) {
        throw daqc::config_error("--config PATH is required");
    }
    json config = daqc::load_json_file(flags.config_path);
    const std::string found = daqc::io_detail::get_or<std::string>(
        config, "kind", "config", kind);
    if (found != kind) {
        throw daqc::config_error("config.kind: expected '" + kind +
                                 "', found '" + found + "'");
    }
    config["kind"] = kind;
    if (flags.seed_override) {
        config["seed"] = *flags.seed_override;
    }
    if (!config.contains("seed")) {
        config["seed"] = 0;
    }
    fill_seeds(config, config["seed"].get<std::uint64_t>());
    apply_thread_flags(config, flags);
    return config;
}

daqc::Dataset load_and_subset(const std::string &images,
                              const std::string &labels,
                              const std::vector<int> &keep_classes,
                              const std::string &field_context) {
    if (images.empty() || labels.empty()) {
        throw daqc::config_error("config.data." + field_context +
                                 ": missing dataset path");
    }
    daqc::Dataset dataset = daqc::load_idx(images, labels);
    if (!keep_classes.empty()) {
        dataset = daqc::subset(dataset, daqc::SubsetRule{keep_classes});
    }
    return dataset;
}

std::size_t class_count(const daqc::Dataset &dataset,
                        const std::vector<int> &keep_classes) {
    if (!keep_classes.empty()) {
        return keep_classes.size();
    }
    int hi = 0;
    for (int label : dataset.labels) {
        hi = std::max(hi, label);
    }
    return static_cast<std::size_t>(hi) + 1;
}

daqc::Dataset seeded_subsample(const daqc::Dataset &dataset,
                               std::size_t limit, std::uint64_t seed) {
    if (limit == 0 || limit >= dataset.size()) {
        return dataset;
    }
    std::vector<std::size_t> order(dataset.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    daqc::Rng rng(seed);
    daqc::seeded_shuffle(order, rng);
    order.resize(limit);
    std::sort(order.begin(), order.end());
    daqc::Dataset out;
    out.rows = dataset.rows;
    out.cols = dataset.cols;
    out.name = dataset.name;
    for (std::size_t i : order) {
        out.images.push_back(dataset.images[i]);
        out.labels.push_back(dataset.labels[i]);
    }
    return out;
}

int cmd_train(const GlobalFlags &flags, int argc, char **argv) {
    if (flags.print_defaults) {
        json defaults{{"kind", "train"},
                      {"seed", 0},
                      {"circuit", daqc::daqc_config_to_json(daqc::DaqcConfig{})},
                      {"train", daqc::train_config_to_json(daqc::TrainConfig{})},
                      {"data", daqc::data_config_to_json(daqc::DataConfig{})},
                      {"output_dir", "runs/train"}};
        std::cout << defaults.dump(2) << "\n";
        return 0;
    }
    json config = load_run_config(flags, "train");
    daqc::io_detail::reject_unknown(
        config, {"kind", "seed", "circuit", "train", "data", "output_dir"},
        "config");
    const auto circuit_config = daqc::daqc_config_from_json(
        daqc::io_detail::require(config, "circuit", "config"),
        "config.circuit");
    const auto train_config = daqc::train_config_from_json(
        daqc::io_detail::require(config, "train", "config"), "config.train");
    const auto data_config = daqc::data_config_from_json(
        daqc::io_detail::require(config, "data", "config"), "config.data");
    circuit_config.validate();
    train_config.validate();
    const std::uint64_t seed = config["seed"].get<std::uint64_t>();

    const auto out_dir = prepare_output_dir(config, flags);
    write_run_metadata(out_dir, config, seed, argc, argv);

    daqc::Dataset train_full =
        load_and_subset(data_config.train_images, data_config.train_labels,
                        data_config.keep_classes, "train_images");
    const std::size_t n_classes =
        class_count(train_full, data_config.keep_classes);

    daqc::Dataset train_set;
    daqc::Dataset val_set;
    if (data_config.has_explicit_val()) {
        train_set = std::move(train_full);
        val_set =
            load_and_subset(data_config.val_images, data_config.val_labels,
                            data_config.keep_classes, "val_images");
    } else {
        std::tie(train_set, val_set) = daqc::stratified_split(
            train_full, data_config.val_fraction, data_config.split_seed);
    }
    train_set = seeded_subsample(train_set, data_config.train_limit,
                                 daqc::mix_seed(seed, 7));

    const daqc::CircuitSpec spec = daqc::build_circuit(circuit_config);
    const auto train_samples =
        daqc::encode_dataset(train_set, circuit_config, train_config.threads);
    const auto val_samples =
        daqc::encode_dataset(val_set, circuit_config, train_config.threads);

    std::cout << "training on " << train_samples.size() << " samples, "
              << val_samples.size() << " validation samples, " << n_classes
              << " classes\n";
    const daqc::TrainResult result =
        daqc::train(spec, train_samples, val_samples, n_classes, train_config);
    std::cout << "best val AUC " << result.best_val_auc << " at epoch "
              << result.best_epoch << " (" << result.trace.size()
              << " epochs run)\n";

    daqc::Checkpoint ck{spec, result.params, result.best_epoch,
                        result.best_val_auc};
    daqc::write_json_file(out_dir / "checkpoint.json",
                          daqc::checkpoint_to_json(ck));
    daqc::write_text_file(out_dir / "trace.csv",
                          daqc::trace_to_csv(result.trace));

    daqc::Dataset test_set =
        load_and_subset(data_config.test_images, data_config.test_labels,
                        data_config.keep_classes, "test_images");
    const auto test_samples =
        daqc::encode_dataset(test_set, circuit_config, train_config.threads);
    const daqc::MetricsReport metrics = daqc::evaluate(
        spec, result.params, test_samples, train_config.threads);
    json metrics_doc = daqc::metrics_to_json(metrics);
    metrics_doc["split"] = "test";
    metrics_doc["n_samples"] = test_samples.size();
    daqc::write_json_file(out_dir / "metrics.json", metrics_doc);
    std::cout << "test acc " << metrics.acc << ", auc " << metrics.auc
              << "\n";
    return 0;
}

int cmd_eval(const GlobalFlags &flags, std::size_t limit, int argc,
             char **argv) {
    if (flags.print_defaults) {
        json defaults{{"kind", "eval"},
                      {"seed", 0},
                      {"checkpoint", "runs/train/checkpoint.json"},
                      {"data", daqc::data_config_to_json(daqc::DataConfig{})},
                      {"limit", 0},
                      {"output_dir", "runs/eval"}};
        std::cout << defaults.dump(2) << "\n";
        return 0;
    }
    json config = load_run_config(flags, "eval");
    daqc::io_detail::reject_unknown(
        config,
        {"kind", "seed", "checkpoint", "data", "limit", "output_dir"},
        "config");
    const std::uint64_t seed = config["seed"].get<std::uint64_t>();
    const auto data_config = daqc::data_config_from_json(
        daqc::io_detail::require(config, "data", "config"), "config.data");
    const std::string ck_path = daqc::io_detail::get_field<std::string>(
        config, "checkpoint", "config");
    std::size_t effective_limit =
        daqc::io_detail::get_or<std::size_t>(config, "limit", "config", 0);
    if (limit != 0) {
        effective_limit = limit;
        config["limit"] = limit;
    }

    const daqc::Checkpoint ck = daqc::checkpoint_from_json(
        daqc::load_json_file(ck_path), "checkpoint");

    daqc::Dataset test_set =
        load_and_subset(data_config.test_images, data_config.test_labels,
                        data_config.keep_classes, "test_images");
    const std::size_t n_classes =
        class_count(test_set, data_config.keep_classes);
    if (n_classes != ck.params.n_classes()) {
        throw daqc::config_error(
            "checkpoint was trained for " +
            std::to_string(ck.params.n_classes()) +
            " classes but the dataset provides " + std::to_string(n_classes));
    }

    const auto out_dir = prepare_output_dir(config, flags);
    write_run_metadata(out_dir, config, seed, argc, argv);

    test_set =
        seeded_subsample(test_set, effective_limit, daqc::mix_seed(seed, 4));
    const auto samples = daqc::encode_dataset(test_set, ck.spec.config, 0);
    const daqc::MetricsReport metrics =
        daqc::evaluate(ck.spec, ck.params, samples, 0);
    json metrics_doc = daqc::metrics_to_json(metrics);
    metrics_doc["split"] = data_config.name;
    metrics_doc["n_samples"] = samples.size();
    daqc::write_json_file(out_dir / "metrics.json", metrics_doc);
    std::cout << metrics_doc.dump(2) << "\n";
    return 0;
}

int cmd_diag(const GlobalFlags &flags, const std::string &mode, int argc,
             char **argv) {
    if (flags.print_defaults) {
        json defaults{{"kind", mode}, {"seed", 0}, {"output_dir", "runs/" + mode}};
        if (mode == "bp-sweep") {
            defaults["sweep"] = daqc::bp_config_to_json(daqc::BpSweepConfig{});
        } else {
            daqc::DaqcConfig circuit;
            defaults["circuit"] = daqc::daqc_config_to_json(circuit);
            defaults["sampling"] = daqc::expressibility_config_to_json(
                daqc::ExpressibilityConfig{});
        }
        std::cout << defaults.dump(2) << "\n";
        return 0;
    }
    json config = load_run_config(flags, mode);
    const std::uint64_t seed = config["seed"].get<std::uint64_t>();
    const auto out_dir = prepare_output_dir(config, flags);
    write_run_metadata(out_dir, config, seed, argc, argv);

    if (mode == "bp-sweep") {
        daqc::io_detail::reject_unknown(
            config, {"kind", "seed", "sweep", "output_dir"}, "config");
        const auto sweep_config = daqc::bp_config_from_json(
            daqc::io_detail::require(config, "sweep", "config"),
            "config.sweep");
        const daqc::BpReport report = daqc::bp_sweep(sweep_config);
        daqc::write_text_file(out_dir / "bp.csv", daqc::bp_to_csv(report));
        json summary{{"cost", daqc::bp_cost_name(report.cost)},
                     {"seed", seed},
                     {"rows", json::array()}};
        for (const auto &row : report.rows) {
            summary["rows"].push_back(
                json{{"n_qubits", row.n_qubits},
                     {"parameter_count", row.parameter_count},
                     {"mean_variance", row.mean_variance}});
        }
        daqc::write_json_file(out_dir / "bp.json", summary);
        std::cout << summary.dump(2) << "\n";
        return 0;
    }

    daqc::io_detail::reject_unknown(
        config, {"kind", "seed", "circuit", "sampling", "output_dir"},
        "config");
    const auto circuit_config = daqc::daqc_config_from_json(
        daqc::io_detail::require(config, "circuit", "config"),
        "config.circuit");
    const auto sampling = daqc::expressibility_config_from_json(
        daqc::io_detail::require(config, "sampling", "config"),
        "config.sampling");
    const daqc::CircuitSpec spec = daqc::build_circuit(circuit_config);

    if (mode == "entangling") {
        const double mean_q = daqc::mean_q_ensemble(spec, sampling);
        const json summary{{"mean_q", mean_q},
                           {"n_qubits", spec.n_qubits()},
                           {"n_ecr_gates", spec.n_ecr_gates},
                           {"seed", seed},
                           {"config", config}};
        daqc::write_json_file(out_dir / "entangling.json", summary);
        std::cout << summary.dump(2) << "\n";
        return 0;
    }

    const daqc::ExpressibilityReport report =
        daqc::expressibility(spec, sampling);
    daqc::write_text_file(out_dir / "histogram.csv",
                          daqc::histogram_to_csv(report.histogram));
    const json summary{{"d_kl", report.d_kl},
                       {"mean_q", report.mean_q},
                       {"n_qubits", report.n_qubits},
                       {"n_ecr_gates", spec.n_ecr_gates},
                       {"seed", seed},
                       {"config", config}};
    daqc::write_json_file(out_dir / "expressibility.json", summary);
    std::cout << summary.dump(2) << "\n";
    return 0;
}

int cmd_circuit(const GlobalFlags &flags, int argc, char **argv) {
    if (flags.print_defaults) {
        json defaults{{"kind", "circuit"},
                      {"seed", 0},
                      {"circuit", daqc::daqc_config_to_json(daqc::DaqcConfig{})},
                      {"output_dir", "runs/circuit"}};
        std::cout << defaults.dump(2) << "\n";
        return 0;
    }
    json config = load_run_config(flags, "circuit");
    daqc::io_detail::reject_unknown(
        config, {"kind", "seed", "circuit", "output_dir"}, "config");
    const auto circuit_config = daqc::daqc_config_from_json(
        daqc::io_detail::require(config, "circuit", "config"),
        "config.circuit");
    const std::uint64_t seed = config["seed"].get<std::uint64_t>();
    const auto out_dir = prepare_output_dir(config, flags);
    write_run_metadata(out_dir, config, seed, argc, argv);
    const daqc::CircuitSpec spec = daqc::build_circuit(circuit_config);
    daqc::write_json_file(out_dir / "circuit.json",
                          daqc::circuit_to_json(spec));
    std::cout << "wrote " << (out_dir / "circuit.json").string() << " ("
              << spec.ops.size() << " gates)\n";
    return 0;
}

void add_common_flags(CLI::App *cmd, GlobalFlags &flags) {
    cmd->add_option("--config", flags.config_path, "Run configuration JSON");
    cmd->add_option("--seed", flags.seed_override,
                    "Override the config's global seed");
    cmd->add_option("--threads", flags.threads_override,
                    "Worker threads (0 = all cores)");
    cmd->add_flag("--deterministic", flags.deterministic,
                  "Force sequential reductions for bit-reproducibility");
    cmd->add_option("--out", flags.out_override,
                    "Output directory (overrides config.output_dir)");
    cmd->add_flag("--print-defaults", flags.print_defaults,
                  "Print the default config JSON for this command and exit");
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"daqcsim: domain-aware quantum circuit simulator and "
                 "training toolkit"};
    app.require_subcommand(1);

    GlobalFlags train_flags;
    GlobalFlags eval_flags;
    GlobalFlags diag_flags;
    GlobalFlags circuit_flags;
    std::size_t eval_limit = 0;
    std::string diag_mode;

    CLI::App *train_cmd =
        app.add_subcommand("train", "Train a model from a config file");
    add_common_flags(train_cmd, train_flags);

    CLI::App *eval_cmd =
        app.add_subcommand("eval", "Evaluate a checkpoint on a dataset");
    add_common_flags(eval_cmd, eval_flags);
    eval_cmd->add_option("--limit", eval_limit,
                         "Evaluate a seeded subsample of N test samples");

    CLI::App *diag_cmd = app.add_subcommand(
        "diag", "Ansatz diagnostics: expressibility, entangling, bp-sweep");
    diag_cmd
        ->add_option("mode", diag_mode,
                     "One of: expressibility, entangling, bp-sweep")
        ->required()
        ->check(CLI::IsMember({"expressibility", "entangling", "bp-sweep"}));
    add_common_flags(diag_cmd, diag_flags);

    CLI::App *circuit_cmd = app.add_subcommand(
        "circuit", "Materialize a circuit and write its provenance JSON");
    add_common_flags(circuit_cmd, circuit_flags);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (train_cmd->parsed()) {
            return cmd_train(train_flags, argc, argv);
        }
        if (eval_cmd->parsed()) {
            return cmd_eval(eval_flags, eval_limit, argc, argv);
        }
        if (diag_cmd->parsed()) {
            return cmd_diag(diag_flags, diag_mode, argc, argv);
        }
        if (circuit_cmd->parsed()) {
            return cmd_circuit(circuit_flags, argc, argv);
        }
    } catch (const daqc::config_error &e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const daqc::data_error &e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 3;
    } catch (const daqc::capacity_error &e) {
        std::cerr << "capacity error: " << e.what() << "\n";
        return 4;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
