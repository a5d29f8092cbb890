#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "auadv/matrix.hpp"

namespace auadv {

enum class Activation { ReLU, Sigmoid, Identity };

// Pre-activations are clamped to this magnitude before the sigmoid so the
// output never rounds to exactly 0 or 1 in double precision.
inline constexpr double kSigmoidClamp = 35.0;

double sigmoid(double z);

/// Forward state retained for the backward pass.
struct LayerCache {
    Matrix input;
    Matrix pre_activation;
    Activation act = Activation::Identity;
};

/// out = act(x * w + b), bias broadcast per row.
std::pair<Matrix, LayerCache> dense_forward(const Matrix& x, const Matrix& w,
                                            const std::vector<double>& b,
                                            Activation act);

struct LayerGrads {
    Matrix grad_in;
    Matrix grad_w;
    std::vector<double> grad_b;
};

/// Exact analytic gradients of the layer output chained with grad_out.
LayerGrads dense_backward(const LayerCache& cache, const Matrix& w,
                          const Matrix& grad_out);

/// loss_fn maps a flat parameter vector to (loss, analytic gradient).
/// Returns the max over coordinates of
/// |analytic - central difference| / max(1, |central difference|).
double grad_check(
    const std::function<std::pair<double, std::vector<double>>(const std::vector<double>&)>& loss_fn,
    const std::vector<double>& params, double step);

}  // namespace auadv
