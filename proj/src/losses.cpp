#include "auadv/losses.hpp"

#include <algorithm>
#include <cmath>

namespace auadv {

namespace {

double clamp_prob(double p, const char* what) {
    if (p <= 0.0 || p >= 1.0) {
        throw std::domain_error(std::string(what) + ": probability at or beyond 0/1");
    }
    return std::clamp(p, kProbEps, 1.0 - kProbEps);
}

}  // namespace

BceResult bce_loss(const Matrix& pred, const Matrix& target) {
    if (!pred.same_shape(target)) {
        throw DimensionError("bce_loss: pred " + shape_str(pred) + " vs target " +
                             shape_str(target));
    }
    const double m = static_cast<double>(pred.rows);
    BceResult res;
    res.grad_pred = Matrix(pred.rows, pred.cols);
    double total = 0.0;
    for (std::size_t k = 0; k < pred.size(); ++k) {
        const double p = clamp_prob(pred.data[k], "bce_loss");
        const double y = target.data[k];
        total -= y * std::log(p) + (1.0 - y) * std::log(1.0 - p);
        res.grad_pred.data[k] = (p - y) / (p * (1.0 - p)) / m;
    }
    res.loss = total / m;
    return res;
}

DLossResult d_loss(const std::vector<double>& d_real, const std::vector<double>& d_fake) {
    if (d_real.size() != d_fake.size()) {
        throw DimensionError("d_loss: batch sizes differ");
    }
    const double m = static_cast<double>(d_real.size());
    DLossResult res;
    res.grad_real.resize(d_real.size());
    res.grad_fake.resize(d_fake.size());
    double total = 0.0;
    for (std::size_t i = 0; i < d_real.size(); ++i) {
        const double r = clamp_prob(d_real[i], "d_loss");
        const double f = clamp_prob(d_fake[i], "d_loss");
        total -= std::log(r) + std::log(1.0 - f);
        res.grad_real[i] = -1.0 / (r * m);
        res.grad_fake[i] = 1.0 / ((1.0 - f) * m);
    }
    res.loss = total / m;
    return res;
}

AdvLossResult r_adv_loss(const std::vector<double>& d_fake) {
    const double m = static_cast<double>(d_fake.size());
    AdvLossResult res;
    res.grad_fake.resize(d_fake.size());
    double total = 0.0;
    for (std::size_t i = 0; i < d_fake.size(); ++i) {
        const double f = clamp_prob(d_fake[i], "r_adv_loss");
        total -= std::log(f);
        res.grad_fake[i] = -1.0 / (f * m);
    }
    res.loss = total / m;
    return res;
}

void adam_step(std::vector<double>& params, const std::vector<double>& grads,
               AdamState& state, const AdamHyper& hyper) {
    if (params.size() != grads.size() || params.size() != state.m.size() ||
        params.size() != state.v.size()) {
        throw DimensionError("adam_step: length mismatch");
    }
    state.t += 1;
    const double bc1 = 1.0 - std::pow(hyper.beta1, static_cast<double>(state.t));
    const double bc2 = 1.0 - std::pow(hyper.beta2, static_cast<double>(state.t));
    for (std::size_t i = 0; i < params.size(); ++i) {
        const double g = grads[i];
        state.m[i] = hyper.beta1 * state.m[i] + (1.0 - hyper.beta1) * g;
        state.v[i] = hyper.beta2 * state.v[i] + (1.0 - hyper.beta2) * g * g;
        const double mhat = state.m[i] / bc1;
        const double vhat = state.v[i] / bc2;
        params[i] -= hyper.lr * mhat / (std::sqrt(vhat) + hyper.eps);
    }
}

}  // namespace auadv
