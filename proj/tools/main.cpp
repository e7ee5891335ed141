// hybridchain CLI: run / sweep / train / report over the shared-library C API.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "hybridchain.h"

namespace {

struct ConfigHandle {
    hc_config* ptr = nullptr;
    ~ConfigHandle() { hc_config_free(ptr); }
};

struct ResultHandle {
    hc_result* ptr = nullptr;
    ~ResultHandle() { hc_result_free(ptr); }
};

int status_to_exit(hc_status s) {
    switch (s) {
        case HC_OK: return 0;
        case HC_ERROR_CONFIG: return 1;
        default: return 2;
    }
}

int fail(hc_status s) {
    std::cerr << "error: " << hc_last_error() << "\n";
    return status_to_exit(s);
}

// --seed beats HYBRIDCHAIN_SEED beats the config file.
int load_config(const std::string& config_path, const std::string& preset, bool seed_set,
                std::uint64_t seed, const std::string& out_dir, ConfigHandle& handle) {
    if (!config_path.empty() && !preset.empty()) {
        std::cerr << "error: --config and --preset are mutually exclusive\n";
        return 1;
    }
    if (config_path.empty() && preset.empty()) {
        std::cerr << "error: one of --config or --preset is required\n";
        return 1;
    }
    hc_status s = config_path.empty() ? hc_config_preset(preset.c_str(), &handle.ptr)
                                      : hc_config_from_file(config_path.c_str(), &handle.ptr);
    if (s != HC_OK) return fail(s);

    if (seed_set) {
        hc_config_set_seed(handle.ptr, seed);
    } else if (const char* env = std::getenv("HYBRIDCHAIN_SEED")) {
        char* end = nullptr;
        const unsigned long long v = std::strtoull(env, &end, 10);
        if (end == env || *end != '\0') {
            std::cerr << "error: HYBRIDCHAIN_SEED is not an integer\n";
            return 1;
        }
        hc_config_set_seed(handle.ptr, v);
    }
    if (!out_dir.empty()) hc_config_set_output_dir(handle.ptr, out_dir.c_str());
    return 0;
}

bool write_file(const std::filesystem::path& path, const char* text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) return false;
    f << text;
    return static_cast<bool>(f);
}

int cmd_run(const std::string& config_path, const std::string& preset, bool seed_set,
            std::uint64_t seed, const std::string& out_dir) {
    ConfigHandle cfg;
    if (int rc = load_config(config_path, preset, seed_set, seed, out_dir, cfg)) return rc;

    ResultHandle res;
    hc_status s = hc_run(cfg.ptr, &res.ptr);
    if (s != HC_OK) return fail(s);

    const char* warning = hc_result_warning(res.ptr);
    if (warning[0] != '\0') std::cerr << warning << "\n";

    std::filesystem::path dir(hc_config_output_dir(cfg.ptr));
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (!write_file(dir / "events.jsonl", hc_result_events_jsonl(res.ptr)) ||
        !write_file(dir / "metrics.csv", hc_result_metrics_csv(res.ptr)) ||
        !write_file(dir / "metrics.json", hc_result_metrics_json(res.ptr)) ||
        !write_file(dir / "workload.jsonl", hc_result_workload_jsonl(res.ptr))) {
        std::cerr << "error: cannot write outputs under " << dir << "\n";
        return 1;
    }
    if (hc_result_reliability_jsonl(res.ptr)[0] != '\0')
        write_file(dir / "reliability.jsonl", hc_result_reliability_jsonl(res.ptr));
    if (hc_result_beliefs_jsonl(res.ptr)[0] != '\0')
        write_file(dir / "beliefs.jsonl", hc_result_beliefs_jsonl(res.ptr));

    std::cout << "decided " << hc_result_decided(res.ptr) << ", backlog " << hc_result_backlog(res.ptr)
              << ", accuracy " << hc_result_accuracy(res.ptr) << ", throughput "
              << hc_result_throughput(res.ptr) << "/min, max latency "
              << hc_result_latency_max_ms(res.ptr) << " ms\n"
              << "outputs: " << (dir / "events.jsonl").string() << ", "
              << (dir / "metrics.csv").string() << ", " << (dir / "workload.jsonl").string() << "\n";
    return 0;
}

int cmd_sweep(const std::string& spec_path, const std::string& out_dir) {
    char* csv = nullptr;
    hc_status s = hc_sweep_file(spec_path.c_str(), &csv);
    if (s != HC_OK) return fail(s);
    std::cout << csv;
    if (!out_dir.empty()) {
        std::filesystem::path dir(out_dir);
        std::error_code ec;
        std::filesystem::create_directories(dir, ec);
        if (!write_file(dir / "sweep.csv", csv)) {
            std::cerr << "error: cannot write " << (dir / "sweep.csv") << "\n";
            hc_string_free(csv);
            return 1;
        }
    }
    hc_string_free(csv);
    return 0;
}

int cmd_train(const std::string& config_path, const std::string& preset, bool seed_set,
              std::uint64_t seed, const std::string& out_dir) {
    ConfigHandle cfg;
    if (int rc = load_config(config_path, preset, seed_set, seed, out_dir, cfg)) return rc;

    double accuracy = 0.0;
    char* weights = nullptr;
    hc_status s = hc_train(cfg.ptr, &accuracy, &weights);
    if (s != HC_OK) return fail(s);

    std::filesystem::path dir(hc_config_output_dir(cfg.ptr));
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    const auto weights_path = dir / "weights.txt";
    const std::string record = std::string(weights) + "\n";
    hc_string_free(weights);
    bool ok = write_file(weights_path, record.c_str());
    if (!ok) {
        std::cerr << "error: cannot write " << weights_path << "\n";
        return 1;
    }
    std::printf("heldout accuracy %.4f\n", accuracy);
    std::cout << "weights: " << weights_path.string() << "\n";
    return 0;
}

int cmd_report(const std::string& events_path) {
    char* csv = nullptr;
    hc_status s = hc_report(events_path.c_str(), &csv);
    if (s != HC_OK) return fail(s);
    std::cout << csv;
    hc_string_free(csv);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"HybridChain consensus protocol simulator"};
    app.require_subcommand(1);

    std::string config_path, preset, out_dir, spec_path, events_path;
    std::uint64_t seed = 0;

    auto* run = app.add_subcommand("run", "simulate one seeded run and write events + metrics");
    run->add_option("--config", config_path, "JSON run config");
    run->add_option("--preset", preset, "built-in config: desk | paper");
    auto* run_seed = run->add_option("--seed", seed, "seed override");
    run->add_option("--out", out_dir, "output directory (default: config output_dir)");

    auto* sweep = app.add_subcommand("sweep", "run a parameter sweep from a JSON spec");
    sweep->add_option("--spec", spec_path, "JSON sweep spec")->required();
    sweep->add_option("--out", out_dir, "also write sweep.csv here");

    auto* train = app.add_subcommand("train", "bootstrap-train the classifier and export weights");
    train->add_option("--config", config_path, "JSON run config");
    train->add_option("--preset", preset, "built-in config: desk | paper");
    auto* train_seed = train->add_option("--seed", seed, "seed override");
    train->add_option("--out", out_dir, "output directory");

    auto* report = app.add_subcommand("report", "recompute metrics from an event log");
    report->add_option("--events", events_path, "events.jsonl path")->required();

    CLI11_PARSE(app, argc, argv);

    if (run->parsed()) return cmd_run(config_path, preset, run_seed->count() > 0, seed, out_dir);
    if (sweep->parsed()) return cmd_sweep(spec_path, out_dir);
    if (train->parsed()) return cmd_train(config_path, preset, train_seed->count() > 0, seed, out_dir);
    if (report->parsed()) return cmd_report(events_path);
    return 1;
}
