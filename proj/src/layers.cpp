#include "auadv/layers.hpp"

#include <algorithm>
#include <cmath>

namespace auadv {

double sigmoid(double z) {
    z = std::clamp(z, -kSigmoidClamp, kSigmoidClamp);
    if (z >= 0.0) {
        return 1.0 / (1.0 + std::exp(-z));
    }
    const double e = std::exp(z);
    return e / (1.0 + e);
}

namespace {

double apply_act(Activation act, double z) {
    switch (act) {
        case Activation::ReLU: return z > 0.0 ? z : 0.0;
        case Activation::Sigmoid: return sigmoid(z);
        case Activation::Identity: return z;
    }
    return z;
}

double act_deriv(Activation act, double z) {
    switch (act) {
        case Activation::ReLU: return z > 0.0 ? 1.0 : 0.0;
        case Activation::Sigmoid: {
            const double s = sigmoid(z);
            return s * (1.0 - s);
        }
        case Activation::Identity: return 1.0;
    }
    return 1.0;
}

}  // namespace

std::pair<Matrix, LayerCache> dense_forward(const Matrix& x, const Matrix& w,
                                            const std::vector<double>& b,
                                            Activation act) {
    if (x.cols != w.rows) {
        throw DimensionError("dense_forward: input " + shape_str(x) +
                             " does not match weights " + shape_str(w));
    }
    if (b.size() != w.cols) {
        throw DimensionError("dense_forward: bias length " + std::to_string(b.size()) +
                             " does not match weights " + shape_str(w));
    }
    Matrix pre = matmul(x, w);
    for (std::size_t i = 0; i < pre.rows; ++i)
        for (std::size_t j = 0; j < pre.cols; ++j) pre(i, j) += b[j];

    Matrix out(pre.rows, pre.cols);
    for (std::size_t k = 0; k < pre.size(); ++k) out.data[k] = apply_act(act, pre.data[k]);

    LayerCache cache{x, pre, act};
    return {std::move(out), std::move(cache)};
}

LayerGrads dense_backward(const LayerCache& cache, const Matrix& w,
                          const Matrix& grad_out) {
    if (!grad_out.same_shape(cache.pre_activation)) {
        throw DimensionError("dense_backward: grad_out " + shape_str(grad_out) +
                             " does not match forward output " +
                             shape_str(cache.pre_activation));
    }
    // Chain through the activation first.
    Matrix delta(grad_out.rows, grad_out.cols);
    for (std::size_t k = 0; k < delta.size(); ++k) {
        delta.data[k] = grad_out.data[k] * act_deriv(cache.act, cache.pre_activation.data[k]);
    }

    LayerGrads g;
    g.grad_w = matmul(transpose(cache.input), delta);
    g.grad_in = matmul(delta, transpose(w));
    g.grad_b.assign(w.cols, 0.0);
    for (std::size_t i = 0; i < delta.rows; ++i)
        for (std::size_t j = 0; j < delta.cols; ++j) g.grad_b[j] += delta(i, j);
    return g;
}

double grad_check(
    const std::function<std::pair<double, std::vector<double>>(const std::vector<double>&)>& loss_fn,
    const std::vector<double>& params, double step) {
    if (!(step > 0.0)) throw NumericError("grad_check: step must be positive");

    const auto [loss0, analytic] = loss_fn(params);
    if (!std::isfinite(loss0)) throw NumericError("grad_check: non-finite loss");

    double max_rel = 0.0;
    std::vector<double> p = params;
    for (std::size_t i = 0; i < p.size(); ++i) {
        const double saved = p[i];
        p[i] = saved + step;
        const double lp = loss_fn(p).first;
        p[i] = saved - step;
        const double lm = loss_fn(p).first;
        p[i] = saved;
        if (!std::isfinite(lp) || !std::isfinite(lm)) {
            throw NumericError("grad_check: non-finite loss at perturbed point");
        }
        const double cd = (lp - lm) / (2.0 * step);
        const double rel = std::abs(analytic[i] - cd) / std::max(1.0, std::abs(cd));
        max_rel = std::max(max_rel, rel);
    }
    return max_rel;
}

}  // namespace auadv
