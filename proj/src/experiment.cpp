#include "auadv/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>

namespace auadv {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

double to_double(const std::string& key, const std::string& val) {
    char* end = nullptr;
    const double v = std::strtod(val.c_str(), &end);
    if (end == val.c_str() || *end != '\0') {
        throw ConfigError("config key '" + key + "': bad numeric value '" + val + "'");
    }
    return v;
}

std::size_t to_size(const std::string& key, const std::string& val) {
    const double v = to_double(key, val);
    if (v < 0 || v != std::floor(v)) {
        throw ConfigError("config key '" + key + "': expected a non-negative integer");
    }
    return static_cast<std::size_t>(v);
}

std::vector<std::size_t> to_size_list(const std::string& key, const std::string& val) {
    std::vector<std::size_t> out;
    std::istringstream s(val);
    std::string tok;
    while (std::getline(s, tok, ',')) out.push_back(to_size(key, trim(tok)));
    return out;
}

}  // namespace

std::map<std::string, std::string> read_kv_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open config file: " + path);
    std::map<std::string, std::string> kv;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(f, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(path + ":" + std::to_string(line_no) +
                              ": expected key=value");
        }
        kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    return kv;
}

ExperimentConfig parse_config(const std::map<std::string, std::string>& kv) {
    ExperimentConfig cfg;
    for (const auto& [key, val] : kv) {
        if (key == "data.path") cfg.data_path = val;
        else if (key == "data.n") cfg.n = to_size(key, val);
        else if (key == "data.d") cfg.d = to_size(key, val);
        else if (key == "data.noise_sigma") cfg.noise_sigma = to_double(key, val);
        else if (key == "data.seed") cfg.data_seed = to_size(key, val);
        else if (key == "data.missing_rate") cfg.missing_rate = to_double(key, val);
        else if (key == "data.eval_split") cfg.eval_split = to_double(key, val);
        else if (key == "data.spec") cfg.label_spec = parse_spec_file(val);
        else if (key == "train.steps") cfg.train.max_steps = to_size(key, val);
        else if (key == "train.h_d") cfg.train.h_d = to_size(key, val);
        else if (key == "train.h_r") cfg.train.h_r = to_size(key, val);
        else if (key == "train.m1") cfg.train.m1 = to_size(key, val);
        else if (key == "train.m2") cfg.train.m2 = to_size(key, val);
        else if (key == "train.alpha") cfg.train.alpha = to_double(key, val);
        else if (key == "train.seed") cfg.train.seed = to_size(key, val);
        else if (key == "train.eval_every") cfg.train.eval_every = to_size(key, val);
        else if (key == "train.threshold") cfg.train.threshold = to_double(key, val);
        else if (key == "train.real_label_smoothing")
            cfg.train.real_label_smoothing = to_double(key, val);
        else if (key == "model.hidden_dims") cfg.train.classifier_hidden = to_size_list(key, val);
        else if (key == "model.disc_hidden") cfg.train.discriminator_hidden = to_size(key, val);
        else if (key == "adam_r.lr") cfg.train.adam_r.lr = to_double(key, val);
        else if (key == "adam_r.beta1") cfg.train.adam_r.beta1 = to_double(key, val);
        else if (key == "adam_r.beta2") cfg.train.adam_r.beta2 = to_double(key, val);
        else if (key == "adam_r.eps") cfg.train.adam_r.eps = to_double(key, val);
        else if (key == "adam_d.lr") cfg.train.adam_d.lr = to_double(key, val);
        else if (key == "adam_d.beta1") cfg.train.adam_d.beta1 = to_double(key, val);
        else if (key == "adam_d.beta2") cfg.train.adam_d.beta2 = to_double(key, val);
        else if (key == "adam_d.eps") cfg.train.adam_d.eps = to_double(key, val);
        else if (key == "out.dir") cfg.out_dir = val;
        else throw ConfigError("unknown config key '" + key + "'");
    }
    if (cfg.missing_rate < 0.0 || cfg.missing_rate >= 1.0) {
        throw ConfigError("config key 'data.missing_rate': must lie in [0,1)");
    }
    if (cfg.eval_split <= 0.0 || cfg.eval_split >= 1.0) {
        throw ConfigError("config key 'data.eval_split': must lie in (0,1)");
    }
    return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
    return parse_config(read_kv_file(path));
}

LabelDistributionSpec parse_spec_file(const std::string& path) {
    const auto kv = read_kv_file(path);
    LabelDistributionSpec spec;
    spec.num_labels = 0;
    for (const auto& [key, val] : kv) {
        if (key == "l") {
            spec.num_labels = to_size(key, val);
        } else if (key == "unary") {
            std::istringstream s(val);
            std::string tok;
            while (std::getline(s, tok, ',')) {
                spec.unary_logits.push_back(to_double(key, trim(tok)));
            }
        } else if (key.rfind("pair", 0) == 0) {
            std::istringstream s(val);
            std::string tok;
            std::vector<double> parts;
            while (std::getline(s, tok, ',')) parts.push_back(to_double(key, trim(tok)));
            if (parts.size() != 3) {
                throw ConfigError("spec key '" + key + "': expected i,j,strength");
            }
            spec.pairs.push_back({static_cast<std::size_t>(parts[0]),
                                  static_cast<std::size_t>(parts[1]), parts[2]});
        } else {
            throw ConfigError("unknown spec key '" + key + "'");
        }
    }
    if (spec.num_labels == 0) throw ConfigError("spec file missing key 'l'");
    if (spec.unary_logits.empty()) spec.unary_logits.assign(spec.num_labels, 0.0);
    if (spec.unary_logits.size() != spec.num_labels) {
        throw ConfigError("spec file: 'unary' length does not match 'l'");
    }
    return spec;
}

Dataset generate_dataset(const LabelDistributionSpec& spec, std::size_t n, std::size_t d,
                         double noise_sigma, std::uint64_t seed) {
    const ProbTable table = enumerate_distribution(spec);
    Dataset ds;
    ds.labels = sample_labels(table, n, derive_seed(seed, "labels"));
    ds.features = synth_features(ds.labels, d, noise_sigma, derive_seed(seed, "features"));
    ds.labeled.assign(n, 1);
    ds.digest = spec.digest();
    ds.gen_seed = seed;
    return ds;
}

SplitDatasets prepare_datasets(const ExperimentConfig& cfg) {
    Dataset full;
    if (!cfg.data_path.empty()) {
        full = load_dataset(cfg.data_path);
    } else {
        full = generate_dataset(cfg.label_spec, cfg.n, cfg.d, cfg.noise_sigma,
                                cfg.data_seed);
    }
    const std::size_t n = full.num_rows();
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    Rng rng(derive_seed(cfg.data_seed, "eval-split"));
    for (std::size_t i = n; i-- > 1;) {
        std::swap(perm[i], perm[rng.index(i + 1)]);
    }
    const std::size_t n_eval = std::max<std::size_t>(
        1, static_cast<std::size_t>(cfg.eval_split * static_cast<double>(n)));
    if (n_eval >= n) throw ConfigError("eval split leaves no training rows");

    SplitDatasets out;
    out.train = subset(full, {perm.begin(), perm.end() - static_cast<std::ptrdiff_t>(n_eval)});
    out.eval = subset(full, {perm.end() - static_cast<std::ptrdiff_t>(n_eval), perm.end()});
    out.train = apply_missing(out.train, cfg.missing_rate, derive_seed(cfg.data_seed, "mask"));
    return out;
}

void write_history_csv(const TrainHistory& history, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot open history file: " + path);
    f << "step,d_loss,r_sup_loss,r_adv_loss,avg_f1,avg_auc,avg_acc\n";
    char buf[256];
    for (const auto& r : history.records) {
        std::snprintf(buf, sizeof(buf), "%zu,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                      r.step, r.d_loss, r.r_sup_loss, r.r_adv_loss, r.avg_f1, r.avg_auc,
                      r.avg_acc);
        f << buf;
    }
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
    const SplitDatasets split = prepare_datasets(cfg);
    ExperimentResult res;
    res.trained = train(cfg.train, split.train, &split.eval);
    res.report = evaluate(res.trained.classifier, split.eval, cfg.train.threshold);

    if (!cfg.out_dir.empty()) {
        namespace fs = std::filesystem;
        fs::create_directories(cfg.out_dir);
        const fs::path dir(cfg.out_dir);
        save_checkpoint(res.trained.classifier, (dir / "checkpoint.txt").string());
        save_checkpoint(res.trained.discriminator, (dir / "discriminator.txt").string());
        write_history_csv(res.trained.history, (dir / "history.csv").string());
        std::ofstream mj(dir / "metrics.json");
        mj << report_to_json(res.report) << "\n";
        std::ofstream meta(dir / "run.meta");
        meta << "variant=" << (cfg.train.alpha == 0.0 ? "O-wlc baseline" : "adversarial")
             << "\n"
             << "alpha=" << cfg.train.alpha << "\n"
             << "missing_rate=" << cfg.missing_rate << "\n"
             << "train_seed=" << cfg.train.seed << "\n"
             << "data_seed=" << cfg.data_seed << "\n"
             << "dataset_digest=" << split.train.digest << "\n";
    }
    return res;
}

std::vector<SweepCell> run_sweep(const ExperimentConfig& base, const std::string& axis,
                                 const std::vector<double>& values,
                                 const std::vector<std::uint64_t>& seeds) {
    if (axis != "alpha" && axis != "missing_rate") {
        throw ConfigError("sweep axis must be 'alpha' or 'missing_rate', got '" + axis + "'");
    }
    std::vector<SweepCell> cells;
    for (double v : values) {
        for (std::uint64_t s : seeds) {
            ExperimentConfig cfg = base;
            cfg.out_dir.clear();
            cfg.train.seed = s;
            if (axis == "alpha") {
                cfg.train.alpha = v;
            } else {
                cfg.missing_rate = v;
            }
            SweepCell cell;
            cell.value = v;
            cell.seed = s;
            cell.report = run_experiment(cfg).report;
            cells.push_back(std::move(cell));
        }
    }
    return cells;
}

void write_sweep_csv(const std::string& axis, const std::vector<SweepCell>& cells,
                     const std::string& path) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot open sweep file: " + path);
    f << "axis,value,seed,avg_f1,avg_auc,avg_acc,marginal_diff_mean,conditional_diff_mean\n";
    char buf[256];
    for (const auto& c : cells) {
        std::snprintf(buf, sizeof(buf), "%s,%.17g,%llu,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                      axis.c_str(), c.value, static_cast<unsigned long long>(c.seed),
                      c.report.avg_f1, c.report.avg_auc, c.report.avg_accuracy,
                      c.report.marginal_abs_diff_mean, c.report.conditional_abs_diff_mean);
        f << buf;
    }
}

}  // namespace auadv
