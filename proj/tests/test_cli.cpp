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
// End-to-end exercises of the installed CLI binary (path injected by the
// build as DAQC_CLI_PATH).

#include "daqc/dataset.hpp"
#include "daqc/io.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace daqc;

namespace {

namespace fs = std::filesystem;

struct CliTempDir {
    fs::path path;
    CliTempDir() {
        static int counter = 0;
        path = fs::temp_directory_path() /
               ("daqc_cli_" + std::to_string(::getpid()) + "_" +
                std::to_string(counter++));
        fs::create_directories(path);
    }
    ~CliTempDir() { fs::remove_all(path); }
    [[nodiscard]] std::string file(const std::string &name) const {
        return (path / name).string();
    }
};

int run_cli(const std::string &args, const std::string &log_path) {
    const std::string cmd =
        std::string(DAQC_CLI_PATH) + " " + args + " > " + log_path + " 2>&1";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

std::string slurp(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

/// Tiny separable 2-class image set at 8x8, written as IDX files.
void write_toy_idx(const CliTempDir &tmp, std::size_t count,
                   const std::string &img_name, const std::string &lab_name,
                   std::uint64_t seed) {
    Rng rng(seed);
    std::vector<std::vector<std::uint8_t>> images;
    std::vector<int> labels;
    for (std::size_t i = 0; i < count; ++i) {
        const int label = static_cast<int>(i % 2);
        std::vector<std::uint8_t> img(64);
        for (std::size_t p = 0; p < 64; ++p) {
            const std::size_t row = p / 8;
            const bool bright_half = label == 0 ? row < 4 : row >= 4;
            const int base = bright_half ? 200 : 40;
            img[p] = static_cast<std::uint8_t>(
                std::clamp<int>(base + static_cast<int>(uniform_index(rng, 31)) - 15,
                                0, 255));
        }
        images.push_back(std::move(img));
        labels.push_back(label);
    }
    write_idx_images(tmp.file(img_name), images, 8, 8);
    write_idx_labels(tmp.file(lab_name), labels);
}

json toy_train_config(const CliTempDir &tmp, const std::string &out_dir) {
    json config;
    config["kind"] = "train";
    config["seed"] = 13;
    config["circuit"] = {{"n_qubits", 4},     {"pooled_rows", 4},
                         {"pooled_cols", 4},  {"window_rows", 2},
                         {"window_cols", 2},  {"entangle_period", 2}};
    config["train"] = {{"learning_rate", 0.02}, {"epochs", 4},
                       {"batch_size", 8},       {"early_stop_patience", 4},
                       {"threads", 1}};
    config["data"] = {{"train_images", tmp.file("train_img.idx")},
                      {"train_labels", tmp.file("train_lab.idx")},
                      {"test_images", tmp.file("test_img.idx")},
                      {"test_labels", tmp.file("test_lab.idx")},
                      {"name", "toy"}};
    config["output_dir"] = out_dir;
    return config;
}

} // namespace

TEST_CASE("cli prints defaults", "[cli]") {
    CliTempDir tmp;
    CHECK(run_cli("train --print-defaults", tmp.file("log")) == 0);
    CHECK(slurp(tmp.file("log")).find("\"kind\": \"train\"") !=
          std::string::npos);
    CHECK(run_cli("diag expressibility --print-defaults", tmp.file("log")) ==
          0);
    CHECK(slurp(tmp.file("log")).find("\"n_states\": 2000") !=
          std::string::npos);
}

TEST_CASE("cli config errors use exit code 2 and name the field", "[cli]") {
    CliTempDir tmp;
    SECTION("missing config flag") {
        CHECK(run_cli("train", tmp.file("log")) == 2);
    }
    SECTION("missing dataset path") {
        json config = toy_train_config(tmp, tmp.file("out"));
        config["data"].erase("train_images");
        write_json_file(tmp.file("cfg.json"), config);
        CHECK(run_cli("train --config " + tmp.file("cfg.json"),
                      tmp.file("log")) == 2);
        CHECK(slurp(tmp.file("log")).find("train_images") !=
              std::string::npos);
    }
    SECTION("wrong kind") {
        json config = toy_train_config(tmp, tmp.file("out"));
        config["kind"] = "eval";
        write_json_file(tmp.file("cfg.json"), config);
        CHECK(run_cli("train --config " + tmp.file("cfg.json"),
                      tmp.file("log")) == 2);
    }
    SECTION("unreadable dataset is a data error (exit 3)") {
        write_toy_idx(CliTempDir{}, 4, "x", "y", 0); // unrelated files
        json config = toy_train_config(tmp, tmp.file("out"));
        write_json_file(tmp.file("cfg.json"), config);
        // Paths point into tmp but the files were never created there.
        CHECK(run_cli("train --config " + tmp.file("cfg.json"),
                      tmp.file("log")) == 3);
    }
}

TEST_CASE("cli end-to-end train, eval, and determinism", "[cli]") {
    CliTempDir tmp;
    write_toy_idx(tmp, 32, "train_img.idx", "train_lab.idx", 1);
    write_toy_idx(tmp, 12, "test_img.idx", "test_lab.idx", 2);
    write_json_file(tmp.file("cfg.json"),
                    toy_train_config(tmp, tmp.file("run_a")));

    REQUIRE(run_cli("train --config " + tmp.file("cfg.json") +
                        " --deterministic",
                    tmp.file("log_a")) == 0);
    CHECK(fs::exists(tmp.file("run_a") + "/checkpoint.json"));
    CHECK(fs::exists(tmp.file("run_a") + "/trace.csv"));
    CHECK(fs::exists(tmp.file("run_a") + "/metrics.json"));
    CHECK(fs::exists(tmp.file("run_a") + "/config.json"));
    CHECK(fs::exists(tmp.file("run_a") + "/run.json"));

    const json metrics = load_json_file(tmp.file("run_a") + "/metrics.json");
    for (const char *field : {"auc", "acc", "specificity", "sensitivity",
                              "f1"}) {
        REQUIRE(metrics.contains(field));
        const double v = metrics.at(field).get<double>();
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
    }

    SECTION("re-running reproduces byte-identical reports") {
        REQUIRE(run_cli("train --config " + tmp.file("cfg.json") +
                            " --deterministic --out " + tmp.file("run_b"),
                        tmp.file("log_b")) == 0);
        for (const char *name :
             {"checkpoint.json", "trace.csv", "metrics.json"}) {
            CHECK(slurp(tmp.file("run_a") + "/" + name) ==
                  slurp(tmp.file("run_b") + "/" + name));
        }
        // config echo differs only in output_dir; run.json is volatile.
    }

    SECTION("eval consumes the checkpoint, honors --limit") {
        json eval_config;
        eval_config["kind"] = "eval";
        eval_config["seed"] = 5;
        eval_config["checkpoint"] = tmp.file("run_a") + "/checkpoint.json";
        eval_config["data"] = {{"test_images", tmp.file("test_img.idx")},
                               {"test_labels", tmp.file("test_lab.idx")},
                               {"name", "toy-test"}};
        eval_config["output_dir"] = tmp.file("eval_out");
        write_json_file(tmp.file("eval.json"), eval_config);

        REQUIRE(run_cli("eval --config " + tmp.file("eval.json") +
                            " --limit 6",
                        tmp.file("log_e")) == 0);
        const json m = load_json_file(tmp.file("eval_out") + "/metrics.json");
        CHECK(m.at("n_samples").get<std::size_t>() == 6);
    }

    SECTION("class-count mismatch is a config error") {
        // Relabel the test set to 3 classes.
        Dataset broken = load_idx(tmp.file("test_img.idx"),
                                  tmp.file("test_lab.idx"));
        for (std::size_t i = 0; i < broken.labels.size(); ++i) {
            broken.labels[i] = static_cast<int>(i % 3);
        }
        write_idx_labels(tmp.file("test_lab3.idx"), broken.labels);

        json eval_config;
        eval_config["kind"] = "eval";
        eval_config["checkpoint"] = tmp.file("run_a") + "/checkpoint.json";
        eval_config["data"] = {{"test_images", tmp.file("test_img.idx")},
                               {"test_labels", tmp.file("test_lab3.idx")}};
        eval_config["output_dir"] = tmp.file("eval_bad");
        write_json_file(tmp.file("eval_bad.json"), eval_config);
        CHECK(run_cli("eval --config " + tmp.file("eval_bad.json"),
                      tmp.file("log_bad")) == 2);
    }
}

TEST_CASE("cli diagnostics commands emit reports deterministically",
          "[cli]") {
    CliTempDir tmp;
    json config;
    config["kind"] = "expressibility";
    config["seed"] = 9;
    config["circuit"] = {{"n_qubits", 4}, {"pooled_rows", 4},
                         {"pooled_cols", 4}, {"window_rows", 1},
                         {"window_cols", 1}, {"entangle_period", 2}};
    config["sampling"] = {{"n_states", 40}, {"n_pairs", 100}, {"n_bins", 15},
                          {"threads", 1}};
    config["output_dir"] = tmp.file("expr_a");
    write_json_file(tmp.file("expr.json"), config);

    REQUIRE(run_cli("diag expressibility --config " + tmp.file("expr.json") +
                        " --deterministic",
                    tmp.file("log")) == 0);
    const json summary =
        load_json_file(tmp.file("expr_a") + "/expressibility.json");
    CHECK(summary.contains("d_kl"));
    CHECK(summary.at("d_kl").get<double>() >= 0.0);
    CHECK(fs::exists(tmp.file("expr_a") + "/histogram.csv"));

    REQUIRE(run_cli("diag expressibility --config " + tmp.file("expr.json") +
                        " --deterministic --out " + tmp.file("expr_b"),
                    tmp.file("log")) == 0);
    CHECK(slurp(tmp.file("expr_a") + "/histogram.csv") ==
          slurp(tmp.file("expr_b") + "/histogram.csv"));
    const json again =
        load_json_file(tmp.file("expr_b") + "/expressibility.json");
    CHECK(again.at("d_kl").get<double>() ==
          summary.at("d_kl").get<double>());

    SECTION("entangling with no ECR layers reports mean_q = 0") {
        json ent = config;
        ent["kind"] = "entangling";
        ent["circuit"]["entangle_period"] = 99;
        ent["output_dir"] = tmp.file("ent");
        write_json_file(tmp.file("ent.json"), ent);
        REQUIRE(run_cli("diag entangling --config " + tmp.file("ent.json"),
                        tmp.file("log")) == 0);
        const json q = load_json_file(tmp.file("ent") + "/entangling.json");
        CHECK(q.at("mean_q").get<double>() ==
              Catch::Approx(0.0).margin(1e-12));
        CHECK(q.at("n_ecr_gates").get<std::size_t>() == 0);
    }

    SECTION("small bp-sweep completes and writes CSV") {
        json bp;
        bp["kind"] = "bp-sweep";
        bp["seed"] = 3;
        bp["sweep"] = {{"qubit_list", json::array({2, 3})},
                       {"instances_per_config", 2},
                       {"weight_samples", 5},
                       {"embed_cycles", 2},
                       {"cost", "local"},
                       {"threads", 1}};
        bp["output_dir"] = tmp.file("bp");
        write_json_file(tmp.file("bp.json"), bp);
        REQUIRE(run_cli("diag bp-sweep --config " + tmp.file("bp.json"),
                        tmp.file("log")) == 0);
        const std::string csv = slurp(tmp.file("bp") + "/bp.csv");
        CHECK(csv.find("n,cost,layer,variance") == 0);
        CHECK(csv.find("2,local,all,") != std::string::npos);
        CHECK(csv.find("3,local,all,") != std::string::npos);
    }

    SECTION("capacity violations exit with code 4") {
        json bp;
        bp["kind"] = "bp-sweep";
        bp["sweep"] = {{"qubit_list", json::array({20})}};
        bp["output_dir"] = tmp.file("bp_cap");
        write_json_file(tmp.file("bp_cap.json"), bp);
        CHECK(run_cli("diag bp-sweep --config " + tmp.file("bp_cap.json"),
                      tmp.file("log")) == 4);
    }
}
