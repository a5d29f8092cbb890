// Command-line driver: data generation, training, evaluation and sweeps.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "auadv/experiment.hpp"

namespace {

constexpr int kExitConfigError = 2;
constexpr int kExitDivergence = 3;

std::vector<double> parse_double_list(const std::string& s) {
    std::vector<double> out;
    std::istringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(std::stod(tok));
    return out;
}

std::vector<std::uint64_t> parse_seed_list(const std::string& s) {
    std::vector<std::uint64_t> out;
    std::istringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(std::stoull(tok));
    return out;
}

int cmd_gen_data(const std::string& spec_path, const std::string& out_path,
                 std::size_t n, std::size_t d, double noise_sigma, std::uint64_t seed) {
    auadv::LabelDistributionSpec spec = spec_path.empty()
                                            ? auadv::LabelDistributionSpec::default_spec()
                                            : auadv::parse_spec_file(spec_path);
    const auadv::Dataset ds = auadv::generate_dataset(spec, n, d, noise_sigma, seed);
    auadv::save_dataset(ds, out_path);
    std::cout << "wrote " << ds.num_rows() << " rows (d=" << ds.features.cols
              << ", l=" << ds.labels.cols << ") to " << out_path << "\n";
    return 0;
}

int cmd_train(const std::string& config_path, const std::string& out_dir,
              std::uint64_t seed, bool seed_given) {
    auadv::ExperimentConfig cfg = auadv::parse_config_file(config_path);
    if (!out_dir.empty()) cfg.out_dir = out_dir;
    if (seed_given) cfg.train.seed = seed;
    if (cfg.out_dir.empty()) cfg.out_dir = "out";
    const auadv::ExperimentResult res = auadv::run_experiment(cfg);
    std::cout << "avg_f1=" << res.report.avg_f1 << " avg_auc=" << res.report.avg_auc
              << " avg_acc=" << res.report.avg_accuracy << "\n";
    std::cout << "artifacts in " << cfg.out_dir << "\n";
    return 0;
}

int cmd_eval(const std::string& checkpoint, const std::string& data_path,
             double threshold, const std::string& out_path) {
    const auadv::MlpParams model = auadv::load_checkpoint(checkpoint);
    const auadv::Dataset ds = auadv::load_dataset(data_path);
    const auadv::MetricsReport report = auadv::evaluate(model, ds, threshold);
    const std::string json = auadv::report_to_json(report);
    if (out_path.empty()) {
        std::cout << json << "\n";
    } else {
        std::ofstream f(out_path);
        f << json << "\n";
    }
    return 0;
}

int cmd_sweep(const std::string& config_path, const std::string& axis,
              const std::string& values, const std::string& seeds,
              const std::string& out_dir) {
    auadv::ExperimentConfig base = auadv::parse_config_file(config_path);
    const auto cells =
        auadv::run_sweep(base, axis, parse_double_list(values), parse_seed_list(seeds));
    std::filesystem::create_directories(out_dir);
    const std::string csv = (std::filesystem::path(out_dir) / "sweep.csv").string();
    auadv::write_sweep_csv(axis, cells, csv);
    std::cout << cells.size() << " cells -> " << csv << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Adversarial semi-supervised multi-label recognition workbench"};
    app.require_subcommand(1);

    std::string spec_path, out_path, config_path, out_dir, checkpoint, data_path;
    std::string axis = "alpha", values = "0,0.01", seeds = "1";
    std::size_t n = 2000, d = 16;
    double noise_sigma = 1.0, threshold = 0.5;
    std::uint64_t seed = 1;

    auto* gen = app.add_subcommand("gen-data", "Generate a synthetic dataset");
    gen->add_option("--spec", spec_path, "Label-distribution spec file");
    gen->add_option("--out", out_path, "Output dataset CSV path")->required();
    gen->add_option("--n", n, "Number of rows");
    gen->add_option("--d", d, "Feature dimension");
    gen->add_option("--noise-sigma", noise_sigma, "Feature noise std");
    gen->add_option("--seed", seed, "Generation seed");

    auto* train = app.add_subcommand("train", "Train from a config file");
    train->add_option("--config", config_path, "Config file (key=value)")->required();
    train->add_option("--out", out_dir, "Output directory (overrides out.dir)");
    auto* seed_opt = train->add_option("--seed", seed, "Training seed (overrides train.seed)");

    auto* eval = app.add_subcommand("eval", "Evaluate a checkpoint on a dataset");
    eval->add_option("--checkpoint", checkpoint, "Model checkpoint")->required();
    eval->add_option("--data", data_path, "Dataset CSV")->required();
    eval->add_option("--threshold", threshold, "Binarization threshold");
    eval->add_option("--out", out_path, "Write the JSON report here instead of stdout");

    auto* sweep = app.add_subcommand("sweep", "Sweep alpha or missing_rate over seeds");
    sweep->add_option("--config", config_path, "Base config file")->required();
    sweep->add_option("--axis", axis, "alpha | missing_rate");
    sweep->add_option("--values", values, "Comma-separated axis values");
    sweep->add_option("--seeds", seeds, "Comma-separated training seeds");
    sweep->add_option("--out", out_dir, "Output directory")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) return cmd_gen_data(spec_path, out_path, n, d, noise_sigma, seed);
        if (train->parsed())
            return cmd_train(config_path, out_dir, seed, seed_opt->count() > 0);
        if (eval->parsed()) return cmd_eval(checkpoint, data_path, threshold, out_path);
        if (sweep->parsed()) return cmd_sweep(config_path, axis, values, seeds, out_dir);
    } catch (const auadv::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfigError;
    } catch (const auadv::NumericError& e) {
        std::cerr << "training diverged: " << e.what() << "\n";
        return kExitDivergence;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
