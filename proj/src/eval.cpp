#include "auadv/eval.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <nlohmann/json.hpp>

namespace auadv {

Matrix binarize(const Matrix& probs, double threshold) {
    if (!(threshold > 0.0 && threshold < 1.0)) {
        throw std::invalid_argument("binarize: threshold must lie in (0,1)");
    }
    Matrix out(probs.rows, probs.cols);
    for (std::size_t k = 0; k < probs.size(); ++k) {
        out.data[k] = probs.data[k] >= threshold ? 1.0 : 0.0;
    }
    return out;
}

MetricValue f1_score(const std::vector<double>& pred, const std::vector<double>& truth) {
    if (pred.size() != truth.size()) throw DimensionError("f1_score: length mismatch");
    std::size_t tp = 0, fp = 0, fn = 0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        const bool p = pred[i] != 0.0;
        const bool t = truth[i] != 0.0;
        tp += p && t;
        fp += p && !t;
        fn += !p && t;
    }
    if (tp + fp + fn == 0) return {0.0, false};
    const double f1 = 2.0 * static_cast<double>(tp) / static_cast<double>(2 * tp + fp + fn);
    return {f1, true};
}

MetricValue auc(const std::vector<double>& scores, const std::vector<double>& truth) {
    if (scores.size() != truth.size()) throw DimensionError("auc: length mismatch");
    const std::size_t n = scores.size();
    std::size_t n_pos = 0;
    for (double t : truth) n_pos += t != 0.0;
    const std::size_t n_neg = n - n_pos;
    if (n_pos == 0 || n_neg == 0) return {0.0, false};

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

    // Average ranks over tie groups, then the rank-sum formula.
    double pos_rank_sum = 0.0;
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j < n && scores[order[j]] == scores[order[i]]) ++j;
        const double avg_rank = 0.5 * static_cast<double>(i + 1 + j);  // ranks are 1-based
        for (std::size_t k = i; k < j; ++k) {
            if (truth[order[k]] != 0.0) pos_rank_sum += avg_rank;
        }
        i = j;
    }
    const double np = static_cast<double>(n_pos);
    const double auc_val = (pos_rank_sum - np * (np + 1.0) / 2.0) /
                           (np * static_cast<double>(n_neg));
    return {auc_val, true};
}

double accuracy(const std::vector<double>& pred, const std::vector<double>& truth) {
    if (pred.size() != truth.size()) throw DimensionError("accuracy: length mismatch");
    std::size_t hits = 0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        hits += (pred[i] != 0.0) == (truth[i] != 0.0);
    }
    return static_cast<double>(hits) / static_cast<double>(pred.size());
}

MarginalDiff marginal_diff(const Matrix& pred_bin, const Matrix& truth) {
    if (!pred_bin.same_shape(truth)) {
        throw DimensionError("marginal_diff: shape mismatch " + shape_str(pred_bin) +
                             " vs " + shape_str(truth));
    }
    const std::size_t l = truth.cols;
    const double n = static_cast<double>(truth.rows);
    MarginalDiff md;
    md.pred_marginals.assign(l, 0.0);
    md.truth_marginals.assign(l, 0.0);
    md.abs_diff.assign(l, 0.0);
    for (std::size_t i = 0; i < truth.rows; ++i) {
        for (std::size_t j = 0; j < l; ++j) {
            md.pred_marginals[j] += pred_bin(i, j) != 0.0;
            md.truth_marginals[j] += truth(i, j) != 0.0;
        }
    }
    for (std::size_t j = 0; j < l; ++j) {
        md.pred_marginals[j] /= n;
        md.truth_marginals[j] /= n;
        md.abs_diff[j] = std::abs(md.pred_marginals[j] - md.truth_marginals[j]);
    }
    return md;
}

ConditionalDiff conditional_diff(const Matrix& pred_bin, const Matrix& truth,
                                 std::size_t min_support) {
    if (!pred_bin.same_shape(truth)) {
        throw DimensionError("conditional_diff: shape mismatch");
    }
    const std::size_t l = truth.cols;
    ConditionalDiff cd;
    double total = 0.0;
    for (std::size_t j = 0; j < l; ++j) {
        std::size_t truth_j = 0, pred_j = 0;
        for (std::size_t r = 0; r < truth.rows; ++r) {
            truth_j += truth(r, j) != 0.0;
            pred_j += pred_bin(r, j) != 0.0;
        }
        for (std::size_t i = 0; i < l; ++i) {
            if (i == j) continue;
            if (truth_j < min_support || pred_j == 0) {
                ++cd.skipped;
                continue;
            }
            std::size_t truth_ij = 0, pred_ij = 0;
            for (std::size_t r = 0; r < truth.rows; ++r) {
                truth_ij += truth(r, j) != 0.0 && truth(r, i) != 0.0;
                pred_ij += pred_bin(r, j) != 0.0 && pred_bin(r, i) != 0.0;
            }
            ConditionalPair p;
            p.i = i;
            p.j = j;
            p.truth_cond = static_cast<double>(truth_ij) / static_cast<double>(truth_j);
            p.pred_cond = static_cast<double>(pred_ij) / static_cast<double>(pred_j);
            p.abs_diff = std::abs(p.pred_cond - p.truth_cond);
            total += p.abs_diff;
            cd.pairs.push_back(p);
        }
    }
    cd.mean_abs_diff = cd.pairs.empty() ? 0.0 : total / static_cast<double>(cd.pairs.size());
    return cd;
}

MetricsReport evaluate(const MlpParams& classifier, const Dataset& ds, double threshold,
                       std::size_t min_support) {
    const Matrix probs = classifier_forward(classifier, ds.features);
    const Matrix pred = binarize(probs, threshold);
    const std::size_t l = ds.labels.cols;

    MetricsReport r;
    r.threshold = threshold;
    double f1_sum = 0.0, auc_sum = 0.0, acc_sum = 0.0;
    std::size_t f1_n = 0, auc_n = 0;
    for (std::size_t j = 0; j < l; ++j) {
        std::vector<double> pj(ds.num_rows()), sj(ds.num_rows()), tj(ds.num_rows());
        for (std::size_t i = 0; i < ds.num_rows(); ++i) {
            pj[i] = pred(i, j);
            sj[i] = probs(i, j);
            tj[i] = ds.labels(i, j);
        }
        const MetricValue f1 = f1_score(pj, tj);
        const MetricValue a = auc(sj, tj);
        const double acc = accuracy(pj, tj);
        r.per_label_f1.push_back(f1);
        r.per_label_auc.push_back(a);
        r.per_label_accuracy.push_back(acc);
        if (f1.defined) {
            f1_sum += f1.value;
            ++f1_n;
        }
        if (a.defined) {
            auc_sum += a.value;
            ++auc_n;
        }
        acc_sum += acc;
    }
    r.avg_f1 = f1_n ? f1_sum / static_cast<double>(f1_n) : 0.0;
    r.avg_auc = auc_n ? auc_sum / static_cast<double>(auc_n) : 0.0;
    r.avg_accuracy = acc_sum / static_cast<double>(l);

    MarginalDiff md = marginal_diff(pred, ds.labels);
    r.marginal_pred = std::move(md.pred_marginals);
    r.marginal_truth = std::move(md.truth_marginals);
    r.marginal_abs_diff = std::move(md.abs_diff);
    r.marginal_abs_diff_mean =
        std::accumulate(r.marginal_abs_diff.begin(), r.marginal_abs_diff.end(), 0.0) /
        static_cast<double>(l);
    r.conditional_abs_diff_mean = conditional_diff(pred, ds.labels, min_support).mean_abs_diff;
    return r;
}

std::string report_to_json(const MetricsReport& r) {
    nlohmann::json j;
    auto metric_array = [](const std::vector<MetricValue>& vals) {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& v : vals) {
            if (v.defined) {
                arr.push_back(v.value);
            } else {
                arr.push_back(nullptr);
            }
        }
        return arr;
    };
    j["per_label_f1"] = metric_array(r.per_label_f1);
    j["per_label_auc"] = metric_array(r.per_label_auc);
    j["per_label_accuracy"] = r.per_label_accuracy;
    j["avg_f1"] = r.avg_f1;
    j["avg_auc"] = r.avg_auc;
    j["avg_accuracy"] = r.avg_accuracy;
    j["marginal_pred"] = r.marginal_pred;
    j["marginal_truth"] = r.marginal_truth;
    j["marginal_abs_diff"] = r.marginal_abs_diff;
    j["marginal_abs_diff_mean"] = r.marginal_abs_diff_mean;
    j["conditional_abs_diff_mean"] = r.conditional_abs_diff_mean;
    j["threshold"] = r.threshold;
    return j.dump(2);
}

}  // namespace auadv
