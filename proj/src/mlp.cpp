#include "auadv/mlp.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "auadv/rng.hpp"

namespace auadv {

std::size_t MlpParams::num_params() const {
    std::size_t n = 0;
    for (std::size_t i = 0; i < weights.size(); ++i) n += weights[i].size() + biases[i].size();
    return n;
}

std::vector<double> MlpParams::flatten() const {
    std::vector<double> flat;
    flat.reserve(num_params());
    for (std::size_t i = 0; i < weights.size(); ++i) {
        flat.insert(flat.end(), weights[i].data.begin(), weights[i].data.end());
        flat.insert(flat.end(), biases[i].begin(), biases[i].end());
    }
    return flat;
}

void MlpParams::unflatten(const std::vector<double>& flat) {
    if (flat.size() != num_params()) {
        throw DimensionError("unflatten: expected " + std::to_string(num_params()) +
                             " values, got " + std::to_string(flat.size()));
    }
    std::size_t off = 0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        std::copy(flat.begin() + off, flat.begin() + off + weights[i].size(),
                  weights[i].data.begin());
        off += weights[i].size();
        std::copy(flat.begin() + off, flat.begin() + off + biases[i].size(),
                  biases[i].begin());
        off += biases[i].size();
    }
}

MlpParams init_params(const std::vector<std::size_t>& layer_dims, std::uint64_t seed) {
    if (layer_dims.size() < 2) throw DimensionError("init_params: need at least two dims");
    MlpParams p;
    p.layer_dims = layer_dims;
    Rng rng(seed);
    const std::size_t L = layer_dims.size() - 1;
    for (std::size_t i = 0; i < L; ++i) {
        const std::size_t fan_in = layer_dims[i];
        const std::size_t fan_out = layer_dims[i + 1];
        // He for ReLU hidden layers, Xavier for the sigmoid output layer.
        const double scale = (i + 1 < L)
                                 ? std::sqrt(2.0 / static_cast<double>(fan_in))
                                 : std::sqrt(2.0 / static_cast<double>(fan_in + fan_out));
        Matrix w(fan_in, fan_out);
        for (double& v : w.data) v = scale * rng.normal();
        p.weights.push_back(std::move(w));
        p.biases.emplace_back(fan_out, 0.0);
    }
    return p;
}

MlpParams init_classifier(const ClassifierSpec& spec, std::uint64_t seed) {
    if (spec.num_labels < 1 || spec.input_dim < 1) {
        throw DimensionError("init_classifier: input_dim and num_labels must be >= 1");
    }
    std::vector<std::size_t> dims;
    dims.push_back(spec.input_dim);
    dims.insert(dims.end(), spec.hidden_dims.begin(), spec.hidden_dims.end());
    dims.push_back(spec.num_labels);
    return init_params(dims, seed);
}

MlpParams init_discriminator(const DiscriminatorSpec& spec, std::uint64_t seed) {
    return init_params({spec.num_labels, spec.hidden_dim, spec.hidden_dim, 1}, seed);
}

ForwardTrace mlp_forward_trace(const MlpParams& params, const Matrix& x) {
    if (x.cols != params.input_dim()) {
        throw DimensionError("mlp_forward: input " + shape_str(x) + " does not match dim " +
                             std::to_string(params.input_dim()));
    }
    ForwardTrace trace;
    Matrix cur = x;
    const std::size_t L = params.num_layers();
    for (std::size_t i = 0; i < L; ++i) {
        const Activation act =
            (i + 1 < L) ? params.hidden_activation : params.output_activation;
        auto [out, cache] = dense_forward(cur, params.weights[i], params.biases[i], act);
        trace.caches.push_back(std::move(cache));
        cur = std::move(out);
    }
    trace.output = std::move(cur);
    return trace;
}

Matrix mlp_forward(const MlpParams& params, const Matrix& x) {
    return mlp_forward_trace(params, x).output;
}

std::vector<double> MlpGrads::flatten() const {
    std::vector<double> flat;
    for (std::size_t i = 0; i < grad_w.size(); ++i) {
        flat.insert(flat.end(), grad_w[i].data.begin(), grad_w[i].data.end());
        flat.insert(flat.end(), grad_b[i].begin(), grad_b[i].end());
    }
    return flat;
}

MlpGrads mlp_backward(const MlpParams& params, const ForwardTrace& trace,
                      const Matrix& grad_out) {
    const std::size_t L = params.num_layers();
    MlpGrads g;
    g.grad_w.resize(L);
    g.grad_b.resize(L);
    Matrix grad = grad_out;
    for (std::size_t i = L; i-- > 0;) {
        LayerGrads lg = dense_backward(trace.caches[i], params.weights[i], grad);
        g.grad_w[i] = std::move(lg.grad_w);
        g.grad_b[i] = std::move(lg.grad_b);
        grad = std::move(lg.grad_in);
    }
    g.grad_input = std::move(grad);
    return g;
}

Matrix classifier_forward(const MlpParams& params, const Matrix& x) {
    Matrix probs = mlp_forward(params, x);
    check_finite(probs, "classifier_forward");
    return probs;
}

std::vector<double> discriminator_forward(const MlpParams& params, const Matrix& y) {
    for (double v : y.data) {
        if (v < 0.0 || v > 1.0) {
            throw std::domain_error("discriminator_forward: label entry outside [0,1]");
        }
    }
    Matrix out = mlp_forward(params, y);
    if (out.cols != 1) throw DimensionError("discriminator_forward: output is not a column");
    check_finite(out, "discriminator_forward");
    return out.data;
}

namespace {

const char* act_name(Activation a) {
    switch (a) {
        case Activation::ReLU: return "relu";
        case Activation::Sigmoid: return "sigmoid";
        case Activation::Identity: return "identity";
    }
    return "identity";
}

Activation act_from_name(const std::string& s) {
    if (s == "relu") return Activation::ReLU;
    if (s == "sigmoid") return Activation::Sigmoid;
    if (s == "identity") return Activation::Identity;
    throw std::runtime_error("checkpoint: unknown activation '" + s + "'");
}

}  // namespace

void save_checkpoint(const MlpParams& params, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot open checkpoint for writing: " + path);
    f << "auadv-mlp 1\n";
    f << "dims";
    for (std::size_t d : params.layer_dims) f << ' ' << d;
    f << '\n';
    f << "hidden " << act_name(params.hidden_activation) << '\n';
    f << "output " << act_name(params.output_activation) << '\n';
    char buf[64];
    for (std::size_t i = 0; i < params.num_layers(); ++i) {
        f << "layer " << i << '\n';
        for (double v : params.weights[i].data) {
            std::snprintf(buf, sizeof(buf), "%a", v);
            f << buf << '\n';
        }
        for (double v : params.biases[i]) {
            std::snprintf(buf, sizeof(buf), "%a", v);
            f << buf << '\n';
        }
    }
    if (!f) throw std::runtime_error("write failure on checkpoint: " + path);
}

MlpParams load_checkpoint(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open checkpoint: " + path);
    std::string magic;
    int version = 0;
    f >> magic >> version;
    if (magic != "auadv-mlp" || version != 1) {
        throw std::runtime_error("not an auadv checkpoint: " + path);
    }
    std::string tok;
    f >> tok;
    if (tok != "dims") throw std::runtime_error("checkpoint: expected 'dims'");
    MlpParams p;
    std::string line;
    std::getline(f, line);
    std::istringstream dims(line);
    std::size_t d;
    while (dims >> d) p.layer_dims.push_back(d);
    if (p.layer_dims.size() < 2) throw std::runtime_error("checkpoint: bad dims line");
    std::string name;
    f >> tok >> name;
    if (tok != "hidden") throw std::runtime_error("checkpoint: expected 'hidden'");
    p.hidden_activation = act_from_name(name);
    f >> tok >> name;
    if (tok != "output") throw std::runtime_error("checkpoint: expected 'output'");
    p.output_activation = act_from_name(name);
    for (std::size_t i = 0; i + 1 < p.layer_dims.size(); ++i) {
        std::size_t idx;
        f >> tok >> idx;
        if (tok != "layer" || idx != i) throw std::runtime_error("checkpoint: bad layer header");
        Matrix w(p.layer_dims[i], p.layer_dims[i + 1]);
        for (double& v : w.data) {
            f >> tok;
            v = std::strtod(tok.c_str(), nullptr);
        }
        std::vector<double> b(p.layer_dims[i + 1]);
        for (double& v : b) {
            f >> tok;
            v = std::strtod(tok.c_str(), nullptr);
        }
        if (!f) throw std::runtime_error("checkpoint: truncated layer " + std::to_string(i));
        p.weights.push_back(std::move(w));
        p.biases.push_back(std::move(b));
    }
    return p;
}

}  // namespace auadv
