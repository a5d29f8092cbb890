#include "auadv/trainer.hpp"

#include <cmath>

namespace auadv {

DBatch sample_d_batch(const Dataset& ds, std::size_t m, Rng& rng) {
    const std::size_t n = ds.num_rows();
    std::vector<std::size_t> labeled_idx;
    for (std::size_t i = 0; i < n; ++i) {
        if (ds.labeled[i]) labeled_idx.push_back(i);
    }
    if (labeled_idx.empty()) {
        throw std::runtime_error("sample_d_batch: dataset has no labeled rows");
    }
    DBatch batch;
    batch.images = Matrix(m, ds.features.cols);
    batch.real_labels = Matrix(m, ds.labels.cols);
    for (std::size_t r = 0; r < m; ++r) {
        const std::size_t src = rng.index(n);
        for (std::size_t j = 0; j < ds.features.cols; ++j) {
            batch.images(r, j) = ds.features(src, j);
        }
    }
    for (std::size_t r = 0; r < m; ++r) {
        const std::size_t src = labeled_idx[rng.index(labeled_idx.size())];
        for (std::size_t j = 0; j < ds.labels.cols; ++j) {
            batch.real_labels(r, j) = ds.labels(src, j);
        }
    }
    return batch;
}

void train_discriminator_step(const MlpParams& classifier, MlpParams& discriminator,
                              const DBatch& batch, AdamState& state,
                              const AdamHyper& hyper, double* loss_out) {
    const Matrix fake = classifier_forward(classifier, batch.images);

    ForwardTrace real_trace = mlp_forward_trace(discriminator, batch.real_labels);
    ForwardTrace fake_trace = mlp_forward_trace(discriminator, fake);

    const DLossResult dl = d_loss(real_trace.output.data, fake_trace.output.data);
    if (loss_out) *loss_out = dl.loss;

    Matrix grad_real(batch.real_labels.rows, 1);
    grad_real.data = dl.grad_real;
    Matrix grad_fake(fake.rows, 1);
    grad_fake.data = dl.grad_fake;

    const MlpGrads g_real = mlp_backward(discriminator, real_trace, grad_real);
    const MlpGrads g_fake = mlp_backward(discriminator, fake_trace, grad_fake);

    std::vector<double> grads = g_real.flatten();
    const std::vector<double> grads_fake = g_fake.flatten();
    for (std::size_t i = 0; i < grads.size(); ++i) grads[i] += grads_fake[i];

    std::vector<double> params = discriminator.flatten();
    adam_step(params, grads, state, hyper);
    discriminator.unflatten(params);
}

void train_classifier_step(MlpParams& classifier, const MlpParams& discriminator,
                           const Matrix& labeled_x, const Matrix& labeled_y,
                           const Matrix& unlabeled_x, double alpha, AdamState& state,
                           const AdamHyper& hyper, double* sup_loss_out,
                           double* adv_loss_out) {
    const std::size_t m1 = labeled_x.rows;
    const std::size_t m2 = unlabeled_x.rows;
    if (m1 < 1) throw std::runtime_error("train_classifier_step: m1 must be >= 1");

    Matrix x(m1 + m2, labeled_x.cols);
    for (std::size_t i = 0; i < m1; ++i)
        for (std::size_t j = 0; j < x.cols; ++j) x(i, j) = labeled_x(i, j);
    for (std::size_t i = 0; i < m2; ++i)
        for (std::size_t j = 0; j < x.cols; ++j) x(m1 + i, j) = unlabeled_x(i, j);

    ForwardTrace r_trace = mlp_forward_trace(classifier, x);
    const Matrix& probs = r_trace.output;

    // Supervised term over the labeled rows only.
    Matrix labeled_probs(m1, probs.cols);
    for (std::size_t i = 0; i < m1; ++i)
        for (std::size_t j = 0; j < probs.cols; ++j) labeled_probs(i, j) = probs(i, j);
    const BceResult sup = bce_loss(labeled_probs, labeled_y);
    if (sup_loss_out) *sup_loss_out = sup.loss;

    // Adversarial term through the frozen discriminator over all rows.
    ForwardTrace d_trace = mlp_forward_trace(discriminator, probs);
    const AdvLossResult adv = r_adv_loss(d_trace.output.data);
    if (adv_loss_out) *adv_loss_out = adv.loss;

    Matrix grad_probs(probs.rows, probs.cols);
    if (alpha != 0.0) {
        Matrix grad_scores(probs.rows, 1);
        grad_scores.data = adv.grad_fake;
        const MlpGrads d_grads = mlp_backward(discriminator, d_trace, grad_scores);
        for (std::size_t k = 0; k < grad_probs.size(); ++k) {
            grad_probs.data[k] = alpha * d_grads.grad_input.data[k];
        }
    }
    const double sup_coef = 1.0 - alpha;
    for (std::size_t i = 0; i < m1; ++i) {
        for (std::size_t j = 0; j < probs.cols; ++j) {
            grad_probs(i, j) += sup_coef * sup.grad_pred(i, j);
        }
    }

    const MlpGrads r_grads = mlp_backward(classifier, r_trace, grad_probs);
    std::vector<double> params = classifier.flatten();
    adam_step(params, r_grads.flatten(), state, hyper);
    classifier.unflatten(params);
}

namespace {

Matrix gather_rows(const Matrix& src, const std::vector<std::size_t>& idx) {
    Matrix out(idx.size(), src.cols);
    for (std::size_t r = 0; r < idx.size(); ++r)
        for (std::size_t j = 0; j < src.cols; ++j) out(r, j) = src(idx[r], j);
    return out;
}

}  // namespace

TrainResult train(const TrainConfig& config, const Dataset& trainset,
                  const Dataset* eval_ds) {
    if (config.max_steps < 1 || config.h_d < 1 || config.h_r < 1 || config.m1 < 1) {
        throw std::invalid_argument("train: K, H_D, H_R and m1 must all be >= 1");
    }
    if (config.alpha < 0.0 || config.alpha > 1.0) {
        throw std::invalid_argument("train: alpha must lie in [0,1]");
    }
    const std::size_t n = trainset.num_rows();
    const std::size_t d = trainset.features.cols;
    const std::size_t l = trainset.labels.cols;

    // Split the dataset into what the trainer may and may not read. Hidden
    // labels of unlabeled rows are stripped here and never touched again.
    std::vector<std::size_t> labeled_idx, unlabeled_idx;
    for (std::size_t i = 0; i < n; ++i) {
        (trainset.labeled[i] ? labeled_idx : unlabeled_idx).push_back(i);
    }
    if (labeled_idx.empty()) throw std::runtime_error("train: no labeled rows");
    const Matrix labeled_x = gather_rows(trainset.features, labeled_idx);
    const Matrix labeled_y = gather_rows(trainset.labels, labeled_idx);
    const Matrix unlabeled_x = gather_rows(trainset.features, unlabeled_idx);
    Matrix all_x(n, d);
    all_x.data = trainset.features.data;

    Dataset d_pool;  // visible portion only: all features plus labeled labels
    d_pool.features = all_x;
    d_pool.labels = Matrix(n, l);
    d_pool.labeled.assign(n, 0);
    for (std::size_t k = 0; k < labeled_idx.size(); ++k) {
        const std::size_t i = labeled_idx[k];
        d_pool.labeled[i] = 1;
        for (std::size_t j = 0; j < l; ++j) d_pool.labels(i, j) = labeled_y(k, j);
    }

    TrainResult result;
    result.classifier = init_classifier(
        ClassifierSpec{d, config.classifier_hidden, l},
        derive_seed(config.seed, "init-classifier"));
    result.discriminator = init_discriminator(
        DiscriminatorSpec{l, config.discriminator_hidden},
        derive_seed(config.seed, "init-discriminator"));

    AdamState state_r(result.classifier.num_params());
    AdamState state_d(result.discriminator.num_params());
    Rng d_rng(derive_seed(config.seed, "d-batches"));
    Rng r_rng(derive_seed(config.seed, "r-batches"));

    const std::size_t m = config.m1 + config.m2;
    const std::size_t m2_eff = unlabeled_idx.empty() ? 0 : config.m2;

    double last_d_loss = 0.0, last_sup = 0.0, last_adv = 0.0;
    auto snapshot = [&](std::size_t step) {
        HistoryRecord rec;
        rec.step = step;
        rec.d_loss = last_d_loss;
        rec.r_sup_loss = last_sup;
        rec.r_adv_loss = last_adv;
        if (eval_ds) {
            const MetricsReport rep = evaluate(result.classifier, *eval_ds, config.threshold);
            rec.avg_f1 = rep.avg_f1;
            rec.avg_auc = rep.avg_auc;
            rec.avg_acc = rep.avg_accuracy;
        } else {
            Dataset t1;
            t1.features = labeled_x;
            t1.labels = labeled_y;
            t1.labeled.assign(labeled_x.rows, 1);
            const MetricsReport rep = evaluate(result.classifier, t1, config.threshold);
            rec.avg_f1 = rep.avg_f1;
            rec.avg_auc = rep.avg_auc;
            rec.avg_acc = rep.avg_accuracy;
        }
        result.history.records.push_back(rec);
    };

    for (std::size_t step = 1; step <= config.max_steps; ++step) {
        for (std::size_t h = 0; h < config.h_d; ++h) {
            DBatch batch = sample_d_batch(d_pool, m, d_rng);
            if (config.real_label_smoothing > 0.0) {
                const double s = config.real_label_smoothing;
                for (double& v : batch.real_labels.data) v = v * (1.0 - s) + 0.5 * s;
            }
            train_discriminator_step(result.classifier, result.discriminator, batch,
                                     state_d, config.adam_d, &last_d_loss);
        }
        for (std::size_t h = 0; h < config.h_r; ++h) {
            Matrix bx(config.m1, d), by(config.m1, l);
            for (std::size_t r = 0; r < config.m1; ++r) {
                const std::size_t src = r_rng.index(labeled_x.rows);
                for (std::size_t j = 0; j < d; ++j) bx(r, j) = labeled_x(src, j);
                for (std::size_t j = 0; j < l; ++j) by(r, j) = labeled_y(src, j);
            }
            Matrix bu(m2_eff, d);
            for (std::size_t r = 0; r < m2_eff; ++r) {
                const std::size_t src = r_rng.index(unlabeled_x.rows);
                for (std::size_t j = 0; j < d; ++j) bu(r, j) = unlabeled_x(src, j);
            }
            train_classifier_step(result.classifier, result.discriminator, bx, by, bu,
                                  config.alpha, state_r, config.adam_r, &last_sup,
                                  &last_adv);
        }
        if (!std::isfinite(last_d_loss) || !std::isfinite(last_sup) ||
            !std::isfinite(last_adv)) {
            throw NumericError("train: non-finite loss at step " + std::to_string(step) +
                               " (d=" + std::to_string(last_d_loss) +
                               ", sup=" + std::to_string(last_sup) +
                               ", adv=" + std::to_string(last_adv) + ")");
        }
        if (step == 1 || step == config.max_steps || step % config.eval_every == 0) {
            snapshot(step);
        }
    }
    return result;
}

}  // namespace auadv
