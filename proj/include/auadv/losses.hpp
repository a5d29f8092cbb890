#pragma once

#include <cstdint>
#include <vector>

#include "auadv/matrix.hpp"

namespace auadv {

// Probabilities are clamped to [kProbEps, 1 - kProbEps] before logs.
inline constexpr double kProbEps = 1e-12;

struct BceResult {
    double loss = 0.0;
    Matrix grad_pred;
};

/// Sum of per-label binary cross entropies per sample, mean over the batch.
BceResult bce_loss(const Matrix& pred, const Matrix& target);

struct DLossResult {
    double loss = 0.0;
    std::vector<double> grad_real;
    std::vector<double> grad_fake;
};

/// -(1/m) sum [ log d_real + log(1 - d_fake) ].
DLossResult d_loss(const std::vector<double>& d_real, const std::vector<double>& d_fake);

struct AdvLossResult {
    double loss = 0.0;
    std::vector<double> grad_fake;
};

/// Non-saturating generator loss: -(1/m) sum log d_fake.
AdvLossResult r_adv_loss(const std::vector<double>& d_fake);

struct AdamHyper {
    double lr = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
};

struct AdamState {
    std::vector<double> m;
    std::vector<double> v;
    std::uint64_t t = 0;

    AdamState() = default;
    explicit AdamState(std::size_t n) : m(n, 0.0), v(n, 0.0) {}
};

/// Standard Adam with bias correction; updates params and state in place.
void adam_step(std::vector<double>& params, const std::vector<double>& grads,
               AdamState& state, const AdamHyper& hyper);

}  // namespace auadv
