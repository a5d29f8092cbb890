#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "auadv/layers.hpp"
#include "auadv/matrix.hpp"

namespace auadv {

/// Layered weight/bias stacks for the classifier and the discriminator.
struct MlpParams {
    std::vector<std::size_t> layer_dims;  // input dim first, output dim last
    std::vector<Matrix> weights;          // weights[i]: (dims[i], dims[i+1])
    std::vector<std::vector<double>> biases;
    Activation hidden_activation = Activation::ReLU;
    Activation output_activation = Activation::Sigmoid;

    std::size_t num_layers() const { return weights.size(); }
    std::size_t input_dim() const { return layer_dims.front(); }
    std::size_t output_dim() const { return layer_dims.back(); }
    std::size_t num_params() const;

    std::vector<double> flatten() const;
    void unflatten(const std::vector<double>& flat);
};

struct ClassifierSpec {
    std::size_t input_dim = 16;
    std::vector<std::size_t> hidden_dims = {64, 64};
    std::size_t num_labels = 8;
};

/// Three layers: input(l) -> hidden -> hidden -> 1.
struct DiscriminatorSpec {
    std::size_t num_labels = 8;
    std::size_t hidden_dim = 32;
};

/// He-scaled hidden weights, Xavier-scaled output weights, zero biases.
/// Deterministic for a fixed seed.
MlpParams init_params(const std::vector<std::size_t>& layer_dims, std::uint64_t seed);
MlpParams init_classifier(const ClassifierSpec& spec, std::uint64_t seed);
MlpParams init_discriminator(const DiscriminatorSpec& spec, std::uint64_t seed);

struct ForwardTrace {
    std::vector<LayerCache> caches;
    Matrix output;
};

Matrix mlp_forward(const MlpParams& params, const Matrix& x);
ForwardTrace mlp_forward_trace(const MlpParams& params, const Matrix& x);

struct MlpGrads {
    std::vector<Matrix> grad_w;
    std::vector<std::vector<double>> grad_b;
    Matrix grad_input;

    std::vector<double> flatten() const;
};

/// Backward through the whole stack; grad_out is w.r.t. the post-activation
/// output of the last layer.
MlpGrads mlp_backward(const MlpParams& params, const ForwardTrace& trace,
                      const Matrix& grad_out);

/// Per-label probabilities, every entry strictly in (0,1).
Matrix classifier_forward(const MlpParams& params, const Matrix& x);

/// One realism score per row of y; entries of y must lie in [0,1].
std::vector<double> discriminator_forward(const MlpParams& params, const Matrix& y);

/// Self-describing text checkpoint; round trip is bit-exact.
void save_checkpoint(const MlpParams& params, const std::string& path);
MlpParams load_checkpoint(const std::string& path);

}  // namespace auadv
