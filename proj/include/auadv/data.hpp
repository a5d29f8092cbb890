#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "auadv/matrix.hpp"

namespace auadv {

struct PairPotential {
    std::size_t i = 0;
    std::size_t j = 0;
    double strength = 0.0;  // positive = co-occurrence, negative = exclusion
};

/// Discrete distribution over {0,1}^l from unary biases and pairwise
/// potentials; exact by 2^l enumeration (l <= 16 enforced).
struct LabelDistributionSpec {
    std::size_t num_labels = 0;
    std::vector<double> unary_logits;
    std::vector<PairPotential> pairs;

    /// 8 labels, one co-occurrence pair, one exclusion pair, uneven marginals.
    static LabelDistributionSpec default_spec();

    std::string digest() const;
};

struct ProbTable {
    std::size_t num_labels = 0;
    std::vector<double> probs;  // indexed by the label bit-pattern, bit i = label i
};

ProbTable enumerate_distribution(const LabelDistributionSpec& spec);

std::vector<double> table_marginals(const ProbTable& table);
/// P(y_i = 1 | y_j = 1); NaN when P(y_j = 1) is zero.
double table_conditional(const ProbTable& table, std::size_t i, std::size_t j);

/// i.i.d. inverse-CDF draws over the 2^l patterns; rows are {0,1}^l.
Matrix sample_labels(const ProbTable& table, std::size_t n, std::uint64_t seed);

/// x = y * W_gen + tanh(y * V_gen) + noise, with the generator matrices fixed
/// by the seed.
Matrix synth_features(const Matrix& labels, std::size_t d, double noise_sigma,
                      std::uint64_t seed);

struct Dataset {
    Matrix features;               // N x d
    Matrix labels;                 // N x l, entries in {0,1}
    std::vector<std::uint8_t> labeled;  // 1 = row belongs to T1
    std::string digest;
    std::uint64_t gen_seed = 0;

    std::size_t num_rows() const { return features.rows; }
    std::size_t num_labeled() const;
};

/// Flags floor(rate * N) uniformly random rows as unlabeled. True labels are
/// retained for evaluation only.
Dataset apply_missing(const Dataset& ds, double missing_rate, std::uint64_t seed);

/// Rows of ds with the given indices.
Dataset subset(const Dataset& ds, const std::vector<std::size_t>& idx);

void save_dataset(const Dataset& ds, const std::string& path);
Dataset load_dataset(const std::string& path);

}  // namespace auadv
