#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "auadv/data.hpp"
#include "auadv/eval.hpp"
#include "auadv/losses.hpp"
#include "auadv/mlp.hpp"
#include "auadv/rng.hpp"

namespace auadv {

/// Hyperparameters of the alternating adversarial training loop.
struct TrainConfig {
    std::size_t max_steps = 2000;  // K
    std::size_t h_d = 1;           // discriminator updates per step
    std::size_t h_r = 1;           // classifier updates per step
    std::size_t m1 = 32;           // labeled batch size
    std::size_t m2 = 32;           // unlabeled batch size
    double alpha = 0.01;
    AdamHyper adam_r;
    AdamHyper adam_d;
    std::uint64_t seed = 0;
    std::size_t eval_every = 100;
    double threshold = 0.5;
    std::vector<std::size_t> classifier_hidden = {64, 64};
    std::size_t discriminator_hidden = 32;
    // Optional smoothing of the "real" labels fed to the discriminator;
    // off by default.
    double real_label_smoothing = 0.0;
};

struct HistoryRecord {
    std::size_t step = 0;
    double d_loss = 0.0;
    double r_sup_loss = 0.0;
    double r_adv_loss = 0.0;
    double avg_f1 = 0.0;
    double avg_auc = 0.0;
    double avg_acc = 0.0;
};

struct TrainHistory {
    std::vector<HistoryRecord> records;
};

struct TrainResult {
    MlpParams classifier;
    MlpParams discriminator;
    TrainHistory history;
};

struct DBatch {
    Matrix images;       // m x d, drawn from all rows
    Matrix real_labels;  // m x l, drawn independently from labeled rows
};

/// Images uniformly from all rows, real labels uniformly and independently
/// from the labeled rows; the two draws are not paired.
DBatch sample_d_batch(const Dataset& ds, std::size_t m, Rng& rng);

/// One Adam descent step of the discriminator loss; classifier untouched.
void train_discriminator_step(const MlpParams& classifier, MlpParams& discriminator,
                              const DBatch& batch, AdamState& state,
                              const AdamHyper& hyper, double* loss_out = nullptr);

/// One Adam step on (alpha/m) sum -log D(R(x)) + ((1-alpha)/m1) sum Ls;
/// gradient flows through the frozen discriminator into the classifier.
void train_classifier_step(MlpParams& classifier, const MlpParams& discriminator,
                           const Matrix& labeled_x, const Matrix& labeled_y,
                           const Matrix& unlabeled_x, double alpha, AdamState& state,
                           const AdamHyper& hyper, double* sup_loss_out = nullptr,
                           double* adv_loss_out = nullptr);

/// The full alternating loop. Hidden labels of unlabeled rows are never read.
/// eval_ds, when given, supplies the held-out metric snapshots.
TrainResult train(const TrainConfig& config, const Dataset& trainset,
                  const Dataset* eval_ds = nullptr);

}  // namespace auadv
