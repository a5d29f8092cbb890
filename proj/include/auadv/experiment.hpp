#pragma once

#include <map>
#include <string>
#include <vector>

#include "auadv/data.hpp"
#include "auadv/eval.hpp"
#include "auadv/trainer.hpp"

namespace auadv {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Everything a single training run needs: dataset source, masking, split,
/// the TrainConfig, and the output directory.
struct ExperimentConfig {
    std::string data_path;  // empty = generate synthetically
    std::size_t n = 2000;
    std::size_t d = 16;
    double noise_sigma = 1.0;
    std::uint64_t data_seed = 1;
    double missing_rate = 0.5;
    double eval_split = 0.25;
    LabelDistributionSpec label_spec = LabelDistributionSpec::default_spec();
    TrainConfig train;
    std::string out_dir;
};

/// Plain key=value lines with dotted sections; '#' starts a comment.
/// Unknown keys raise ConfigError naming the key.
ExperimentConfig parse_config(const std::map<std::string, std::string>& kv);
ExperimentConfig parse_config_file(const std::string& path);
std::map<std::string, std::string> read_kv_file(const std::string& path);

/// Label-distribution spec file: keys l, unary (comma list), pair (i,j,strength;
/// repeatable as pair.0, pair.1, ...), d, noise_sigma.
LabelDistributionSpec parse_spec_file(const std::string& path);

/// Fully labeled synthetic dataset drawn from the given label spec.
Dataset generate_dataset(const LabelDistributionSpec& spec, std::size_t n, std::size_t d,
                         double noise_sigma, std::uint64_t seed);

struct SplitDatasets {
    Dataset train;  // masked per missing_rate
    Dataset eval;   // held out, fully labeled
};

/// Deterministic shuffle-split from data_seed, then masking of the train part.
SplitDatasets prepare_datasets(const ExperimentConfig& cfg);

struct ExperimentResult {
    TrainResult trained;
    MetricsReport report;  // on the held-out split
};

/// Runs one experiment; writes artifacts when cfg.out_dir is non-empty
/// (checkpoint.txt, discriminator.txt, history.csv, metrics.json, run.meta).
ExperimentResult run_experiment(const ExperimentConfig& cfg);

void write_history_csv(const TrainHistory& history, const std::string& path);

struct SweepCell {
    double value = 0.0;
    std::uint64_t seed = 0;
    MetricsReport report;
};

/// axis is "alpha" or "missing_rate". Cells sharing a data_seed share the
/// dataset and its mask, so alpha sweeps are controlled comparisons.
std::vector<SweepCell> run_sweep(const ExperimentConfig& base, const std::string& axis,
                                 const std::vector<double>& values,
                                 const std::vector<std::uint64_t>& seeds);

void write_sweep_csv(const std::string& axis, const std::vector<SweepCell>& cells,
                     const std::string& path);

}  // namespace auadv
