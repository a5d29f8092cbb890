#include <doctest.h>

#include <cmath>
#include <cstdio>

#include "auadv/mlp.hpp"
#include "auadv/rng.hpp"

using namespace auadv;

namespace {

// Scalar-loop forward oracle, independent of the Matrix machinery.
std::vector<double> scalar_forward_row(const MlpParams& p, const std::vector<double>& in) {
    std::vector<double> cur = in;
    const std::size_t L = p.num_layers();
    for (std::size_t layer = 0; layer < L; ++layer) {
        const Matrix& w = p.weights[layer];
        std::vector<double> next(w.cols);
        for (std::size_t j = 0; j < w.cols; ++j) {
            double z = p.biases[layer][j];
            for (std::size_t i = 0; i < w.rows; ++i) z += cur[i] * w(i, j);
            if (layer + 1 < L) {
                next[j] = z > 0.0 ? z : 0.0;
            } else {
                if (z > kSigmoidClamp) z = kSigmoidClamp;
                if (z < -kSigmoidClamp) z = -kSigmoidClamp;
                next[j] = 1.0 / (1.0 + std::exp(-z));
            }
        }
        cur = std::move(next);
    }
    return cur;
}

}  // namespace

TEST_CASE("init_params is deterministic and zero-biased") {
    const ClassifierSpec spec{6, {8, 8}, 3};
    const MlpParams a = init_classifier(spec, 99);
    const MlpParams b = init_classifier(spec, 99);
    CHECK(a.flatten() == b.flatten());

    const MlpParams c = init_classifier(spec, 100);
    CHECK(a.flatten() != c.flatten());

    for (const auto& bias : a.biases) {
        for (double v : bias) CHECK(v == 0.0);
    }
}

TEST_CASE("init_params weight variance tracks He scaling") {
    const MlpParams p = init_params({64, 64, 1}, 7);
    const Matrix& w = p.weights[0];
    double mean = 0.0;
    for (double v : w.data) mean += v;
    mean /= static_cast<double>(w.size());
    double var = 0.0;
    for (double v : w.data) var += (v - mean) * (v - mean);
    var /= static_cast<double>(w.size());
    const double expected = 2.0 / 64.0;
    CHECK(var > 0.5 * expected);
    CHECK(var < 1.5 * expected);
}

TEST_CASE("classifier_forward on a zero-initialized network gives 0.5") {
    MlpParams p = init_classifier(ClassifierSpec{4, {5}, 3}, 1);
    for (auto& w : p.weights) std::fill(w.data.begin(), w.data.end(), 0.0);
    const Matrix x(2, 4, 1.3);
    const Matrix probs = classifier_forward(p, x);
    for (double v : probs.data) CHECK(v == 0.5);
}

TEST_CASE("classifier_forward is batch-row independent") {
    Rng rng(5);
    const MlpParams p = init_classifier(ClassifierSpec{4, {6}, 3}, 2);
    Matrix big(5, 4);
    for (double& v : big.data) v = rng.normal();
    const Matrix all = classifier_forward(p, big);
    for (std::size_t i = 0; i < 5; ++i) {
        const Matrix one = classifier_forward(p, big.row(i));
        for (std::size_t j = 0; j < 3; ++j) CHECK(one(0, j) == all(i, j));
    }
}

TEST_CASE("classifier_forward outputs strictly in (0,1) and matches the scalar oracle") {
    Rng rng(8);
    const MlpParams p = init_classifier(ClassifierSpec{3, {4, 4}, 2}, 3);
    Matrix x(6, 3);
    for (double& v : x.data) v = 3.0 * rng.normal();
    const Matrix probs = classifier_forward(p, x);
    for (std::size_t i = 0; i < 6; ++i) {
        const auto want = scalar_forward_row(p, {x(i, 0), x(i, 1), x(i, 2)});
        for (std::size_t j = 0; j < 2; ++j) {
            CHECK(probs(i, j) > 0.0);
            CHECK(probs(i, j) < 1.0);
            CHECK(probs(i, j) == doctest::Approx(want[j]).epsilon(1e-13));
        }
    }
    CHECK_THROWS_AS(classifier_forward(p, Matrix(2, 5)), DimensionError);
}

TEST_CASE("discriminator_forward basics") {
    MlpParams d = init_discriminator(DiscriminatorSpec{4, 6}, 11);
    CHECK(d.layer_dims == std::vector<std::size_t>{4, 6, 6, 1});

    MlpParams zero = d;
    for (auto& w : zero.weights) std::fill(w.data.begin(), w.data.end(), 0.0);
    Matrix y(3, 4);
    y.data = {0, 1, 1, 0, 1, 1, 0, 0, 0.5, 0.25, 1, 0};
    for (double s : discriminator_forward(zero, y)) CHECK(s == 0.5);

    // Permuting rows permutes scores.
    const auto scores = discriminator_forward(d, y);
    Matrix perm(3, 4);
    for (std::size_t j = 0; j < 4; ++j) {
        perm(0, j) = y(2, j);
        perm(1, j) = y(0, j);
        perm(2, j) = y(1, j);
    }
    const auto pscores = discriminator_forward(d, perm);
    CHECK(pscores[0] == scores[2]);
    CHECK(pscores[1] == scores[0]);
    CHECK(pscores[2] == scores[1]);

    for (double s : scores) {
        CHECK(s > 0.0);
        CHECK(s < 1.0);
    }

    Matrix bad = y;
    bad(0, 0) = 1.5;
    CHECK_THROWS_AS(discriminator_forward(d, bad), std::domain_error);
}

TEST_CASE("discriminator_forward matches the scalar oracle") {
    Rng rng(12);
    const MlpParams d = init_discriminator(DiscriminatorSpec{3, 4}, 13);
    Matrix y(4, 3);
    for (double& v : y.data) v = rng.uniform();
    const auto scores = discriminator_forward(d, y);
    for (std::size_t i = 0; i < 4; ++i) {
        const auto want = scalar_forward_row(d, {y(i, 0), y(i, 1), y(i, 2)});
        CHECK(scores[i] == doctest::Approx(want[0]).epsilon(1e-13));
    }
}

TEST_CASE("checkpoint round trip is bit-exact") {
    const MlpParams p = init_classifier(ClassifierSpec{5, {7, 3}, 2}, 77);
    const std::string path = "ckpt_roundtrip_test.txt";
    save_checkpoint(p, path);
    const MlpParams q = load_checkpoint(path);
    CHECK(q.layer_dims == p.layer_dims);
    CHECK(q.flatten() == p.flatten());
    std::remove(path.c_str());

    CHECK_THROWS(load_checkpoint("no_such_checkpoint_file.txt"));
}
