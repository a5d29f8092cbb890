#pragma once

#include <string>
#include <vector>

#include "auadv/data.hpp"
#include "auadv/matrix.hpp"
#include "auadv/mlp.hpp"

namespace auadv {

/// entry = 1 iff prob >= threshold.
Matrix binarize(const Matrix& probs, double threshold);

struct MetricValue {
    double value = 0.0;
    bool defined = false;
};

/// 2PR/(P+R); undefined when pred and truth contain no positives at all.
MetricValue f1_score(const std::vector<double>& pred, const std::vector<double>& truth);

/// Rank-based (Mann-Whitney) AUC, ties counting one half; undefined without
/// at least one positive and one negative.
MetricValue auc(const std::vector<double>& scores, const std::vector<double>& truth);

double accuracy(const std::vector<double>& pred, const std::vector<double>& truth);

struct MarginalDiff {
    std::vector<double> pred_marginals;
    std::vector<double> truth_marginals;
    std::vector<double> abs_diff;
};

MarginalDiff marginal_diff(const Matrix& pred_bin, const Matrix& truth);

struct ConditionalPair {
    std::size_t i = 0;
    std::size_t j = 0;
    double pred_cond = 0.0;
    double truth_cond = 0.0;
    double abs_diff = 0.0;
};

struct ConditionalDiff {
    std::vector<ConditionalPair> pairs;  // retained (i, j) pairs only
    std::size_t skipped = 0;             // pairs below min_support in truth
    double mean_abs_diff = 0.0;
};

/// |P(y_i=1|y_j=1)| differences over ordered pairs whose conditioning event
/// occurs at least min_support times in truth.
ConditionalDiff conditional_diff(const Matrix& pred_bin, const Matrix& truth,
                                 std::size_t min_support = 10);

struct MetricsReport {
    std::vector<MetricValue> per_label_f1;
    std::vector<MetricValue> per_label_auc;
    std::vector<double> per_label_accuracy;
    double avg_f1 = 0.0;
    double avg_auc = 0.0;
    double avg_accuracy = 0.0;
    std::vector<double> marginal_pred;
    std::vector<double> marginal_truth;
    std::vector<double> marginal_abs_diff;
    double marginal_abs_diff_mean = 0.0;
    double conditional_abs_diff_mean = 0.0;
    double threshold = 0.5;
};

MetricsReport evaluate(const MlpParams& classifier, const Dataset& ds, double threshold,
                       std::size_t min_support = 10);

std::string report_to_json(const MetricsReport& r);

}  // namespace auadv
