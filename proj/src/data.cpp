#include "auadv/data.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>

#include "auadv/rng.hpp"

namespace auadv {

LabelDistributionSpec LabelDistributionSpec::default_spec() {
    LabelDistributionSpec spec;
    spec.num_labels = 8;
    // Uneven per-label biases so marginals span roughly 0.15 to 0.6.
    spec.unary_logits = {-0.6, -1.0, 0.4, -1.4, 0.8, -0.2, -1.7, -1.1};
    spec.pairs = {
        {0, 1, 2.0},   // co-occurrence, AU1/AU2 style
        {4, 5, -3.0},  // exclusion, AU12/AU15 style
    };
    return spec;
}

std::string LabelDistributionSpec::digest() const {
    std::ostringstream s;
    s << "l=" << num_labels << ";u=";
    char buf[32];
    for (double v : unary_logits) {
        std::snprintf(buf, sizeof(buf), "%.17g,", v);
        s << buf;
    }
    s << ";p=";
    for (const auto& p : pairs) {
        std::snprintf(buf, sizeof(buf), "%.17g", p.strength);
        s << p.i << ":" << p.j << ":" << buf << ",";
    }
    return s.str();
}

ProbTable enumerate_distribution(const LabelDistributionSpec& spec) {
    const std::size_t l = spec.num_labels;
    if (l > 16) {
        throw std::length_error("enumerate_distribution: l > 16 exceeds exact-enumeration capacity");
    }
    if (l == 0 || spec.unary_logits.size() != l) {
        throw DimensionError("enumerate_distribution: unary_logits length must equal l");
    }
    for (const auto& p : spec.pairs) {
        if (!(p.i < p.j && p.j < l)) {
            throw DimensionError("enumerate_distribution: pair indices must satisfy 0 <= i < j < l");
        }
    }
    const std::size_t count = std::size_t{1} << l;
    ProbTable table;
    table.num_labels = l;
    table.probs.resize(count);
    double z = 0.0;
    for (std::size_t pat = 0; pat < count; ++pat) {
        double energy = 0.0;
        for (std::size_t i = 0; i < l; ++i) {
            if (pat >> i & 1) energy += spec.unary_logits[i];
        }
        for (const auto& p : spec.pairs) {
            if ((pat >> p.i & 1) && (pat >> p.j & 1)) energy += p.strength;
        }
        table.probs[pat] = std::exp(energy);
        z += table.probs[pat];
    }
    for (double& p : table.probs) p /= z;
    return table;
}

std::vector<double> table_marginals(const ProbTable& table) {
    std::vector<double> marg(table.num_labels, 0.0);
    for (std::size_t pat = 0; pat < table.probs.size(); ++pat) {
        for (std::size_t i = 0; i < table.num_labels; ++i) {
            if (pat >> i & 1) marg[i] += table.probs[pat];
        }
    }
    return marg;
}

double table_conditional(const ProbTable& table, std::size_t i, std::size_t j) {
    double pj = 0.0, pij = 0.0;
    for (std::size_t pat = 0; pat < table.probs.size(); ++pat) {
        if (pat >> j & 1) {
            pj += table.probs[pat];
            if (pat >> i & 1) pij += table.probs[pat];
        }
    }
    return pij / pj;
}

Matrix sample_labels(const ProbTable& table, std::size_t n, std::uint64_t seed) {
    std::vector<double> cdf(table.probs.size());
    std::partial_sum(table.probs.begin(), table.probs.end(), cdf.begin());
    cdf.back() = 1.0;
    Rng rng(seed);
    Matrix out(n, table.num_labels);
    for (std::size_t r = 0; r < n; ++r) {
        const double u = rng.uniform();
        const auto it = std::lower_bound(cdf.begin(), cdf.end(), u);
        const std::size_t pat = static_cast<std::size_t>(it - cdf.begin());
        for (std::size_t i = 0; i < table.num_labels; ++i) {
            out(r, i) = (pat >> i & 1) ? 1.0 : 0.0;
        }
    }
    return out;
}

Matrix synth_features(const Matrix& labels, std::size_t d, double noise_sigma,
                      std::uint64_t seed) {
    const std::size_t l = labels.cols;
    Rng gen_rng(derive_seed(seed, "feature-gen"));
    Matrix w(l, d), v(l, d);
    for (double& x : w.data) x = gen_rng.normal();
    for (double& x : v.data) x = gen_rng.normal();

    Matrix lin = matmul(labels, w);
    Matrix nl = matmul(labels, v);
    Rng noise_rng(derive_seed(seed, "feature-noise"));
    Matrix out(labels.rows, d);
    for (std::size_t k = 0; k < out.size(); ++k) {
        out.data[k] = lin.data[k] + std::tanh(nl.data[k]);
    }
    if (noise_sigma > 0.0) {
        for (std::size_t k = 0; k < out.size(); ++k) {
            out.data[k] += noise_sigma * noise_rng.normal();
        }
    }
    return out;
}

std::size_t Dataset::num_labeled() const {
    std::size_t n = 0;
    for (auto b : labeled) n += b != 0;
    return n;
}

Dataset apply_missing(const Dataset& ds, double missing_rate, std::uint64_t seed) {
    if (!(missing_rate >= 0.0 && missing_rate < 1.0)) {
        throw std::invalid_argument("apply_missing: missing_rate must lie in [0,1)");
    }
    Dataset out = ds;
    const std::size_t n = ds.num_rows();
    const std::size_t k = static_cast<std::size_t>(missing_rate * static_cast<double>(n));
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    Rng rng(seed);
    // Fisher-Yates prefix selection of k rows to mask.
    for (std::size_t i = 0; i < k; ++i) {
        const std::size_t j = i + rng.index(n - i);
        std::swap(idx[i], idx[j]);
    }
    out.labeled.assign(n, 1);
    for (std::size_t i = 0; i < k; ++i) out.labeled[idx[i]] = 0;
    return out;
}

Dataset subset(const Dataset& ds, const std::vector<std::size_t>& idx) {
    Dataset out;
    out.features = Matrix(idx.size(), ds.features.cols);
    out.labels = Matrix(idx.size(), ds.labels.cols);
    out.labeled.resize(idx.size());
    out.digest = ds.digest;
    out.gen_seed = ds.gen_seed;
    for (std::size_t r = 0; r < idx.size(); ++r) {
        for (std::size_t j = 0; j < ds.features.cols; ++j)
            out.features(r, j) = ds.features(idx[r], j);
        for (std::size_t j = 0; j < ds.labels.cols; ++j)
            out.labels(r, j) = ds.labels(idx[r], j);
        out.labeled[r] = ds.labeled[idx[r]];
    }
    return out;
}

void save_dataset(const Dataset& ds, const std::string& path) {
    const std::size_t n = ds.num_rows();
    const std::size_t d = ds.features.cols;
    const std::size_t l = ds.labels.cols;
    if (ds.labels.rows != n || ds.labeled.size() != n) {
        throw DimensionError("save_dataset: inconsistent row counts");
    }
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot open dataset for writing: " + path);
    for (std::size_t j = 0; j < d; ++j) f << "f" << j << ",";
    for (std::size_t j = 0; j < l; ++j) f << "y" << j << ",";
    f << "labeled\n";
    char buf[32];
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < d; ++j) {
            std::snprintf(buf, sizeof(buf), "%.17g", ds.features(i, j));
            f << buf << ",";
        }
        for (std::size_t j = 0; j < l; ++j) f << (ds.labels(i, j) != 0.0 ? 1 : 0) << ",";
        f << int(ds.labeled[i]) << "\n";
    }
    if (!f) throw std::runtime_error("write failure on dataset: " + path);

    std::ofstream meta(path + ".meta");
    if (!meta) throw std::runtime_error("cannot open sidecar for writing: " + path + ".meta");
    meta << "d=" << d << "\n"
         << "l=" << l << "\n"
         << "n=" << n << "\n"
         << "seed=" << ds.gen_seed << "\n"
         << "digest=" << ds.digest << "\n";
}

namespace {

[[noreturn]] void parse_fail(const std::string& path, std::size_t line_no,
                             const std::string& msg) {
    throw std::runtime_error(path + ":" + std::to_string(line_no) + ": " + msg);
}

}  // namespace

Dataset load_dataset(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open dataset: " + path);
    std::string line;
    if (!std::getline(f, line)) parse_fail(path, 1, "empty file");

    std::vector<std::string> cols;
    {
        std::istringstream s(line);
        std::string tok;
        while (std::getline(s, tok, ',')) cols.push_back(tok);
    }
    std::size_t d = 0, l = 0;
    while (d < cols.size() && cols[d] == "f" + std::to_string(d)) ++d;
    while (d + l < cols.size() && cols[d + l] == "y" + std::to_string(l)) ++l;
    if (d == 0 || l == 0 || d + l + 1 != cols.size() || cols.back() != "labeled") {
        parse_fail(path, 1, "header must be f0..f{d-1},y0..y{l-1},labeled");
    }

    std::vector<double> feat, lab;
    std::vector<std::uint8_t> mask;
    std::size_t line_no = 1;
    while (std::getline(f, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::istringstream s(line);
        std::string tok;
        std::vector<double> vals;
        while (std::getline(s, tok, ',')) {
            char* end = nullptr;
            const double v = std::strtod(tok.c_str(), &end);
            if (end == tok.c_str() || *end != '\0') {
                parse_fail(path, line_no, "bad numeric field '" + tok + "'");
            }
            vals.push_back(v);
        }
        if (vals.size() != d + l + 1) {
            parse_fail(path, line_no, "expected " + std::to_string(d + l + 1) +
                                          " fields, got " + std::to_string(vals.size()));
        }
        for (std::size_t j = 0; j < d; ++j) feat.push_back(vals[j]);
        for (std::size_t j = 0; j < l; ++j) {
            if (vals[d + j] != 0.0 && vals[d + j] != 1.0) {
                parse_fail(path, line_no, "label field must be 0 or 1");
            }
            lab.push_back(vals[d + j]);
        }
        const double m = vals[d + l];
        if (m != 0.0 && m != 1.0) parse_fail(path, line_no, "labeled field must be 0 or 1");
        mask.push_back(static_cast<std::uint8_t>(m));
    }
    const std::size_t n = mask.size();
    Dataset ds;
    ds.features = Matrix(n, d);
    ds.features.data = std::move(feat);
    ds.labels = Matrix(n, l);
    ds.labels.data = std::move(lab);
    ds.labeled = std::move(mask);

    std::ifstream meta(path + ".meta");
    if (meta) {
        std::string mline;
        while (std::getline(meta, mline)) {
            const auto eq = mline.find('=');
            if (eq == std::string::npos) continue;
            const std::string key = mline.substr(0, eq);
            const std::string val = mline.substr(eq + 1);
            if (key == "digest") ds.digest = val;
            if (key == "seed") ds.gen_seed = std::strtoull(val.c_str(), nullptr, 10);
        }
    }
    return ds;
}

}  // namespace auadv
