#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "auadv/eval.hpp"
#include "auadv/rng.hpp"

using namespace auadv;

namespace {

// All-pairs AUC oracle.
double auc_all_pairs(const std::vector<double>& scores, const std::vector<double>& truth) {
    double wins = 0.0;
    std::size_t pairs = 0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        if (truth[i] == 0.0) continue;
        for (std::size_t j = 0; j < scores.size(); ++j) {
            if (truth[j] != 0.0) continue;
            ++pairs;
            if (scores[i] > scores[j]) wins += 1.0;
            else if (scores[i] == scores[j]) wins += 0.5;
        }
    }
    return wins / static_cast<double>(pairs);
}

}  // namespace

TEST_CASE("binarize tie rule and thresholds") {
    Matrix probs(2, 2, 0.5);
    const Matrix ones = binarize(probs, 0.5);
    for (double v : ones.data) CHECK(v == 1.0);

    Matrix caps(2, 2, 0.9);
    const Matrix zeros = binarize(caps, 0.999);
    for (double v : zeros.data) CHECK(v == 0.0);

    Rng rng(3);
    Matrix mixed(4, 3);
    for (double& v : mixed.data) v = rng.uniform();
    const Matrix bin = binarize(mixed, 0.35);
    for (std::size_t k = 0; k < mixed.size(); ++k) {
        CHECK(bin.data[k] == (mixed.data[k] >= 0.35 ? 1.0 : 0.0));
    }
    CHECK_THROWS_AS(binarize(mixed, 0.0), std::invalid_argument);
}

TEST_CASE("binarize is monotone in the threshold") {
    Rng rng(4);
    Matrix probs(5, 4);
    for (double& v : probs.data) v = rng.uniform();
    double prev_count = 1e9;
    for (double t : {0.1, 0.3, 0.5, 0.7, 0.9}) {
        const Matrix bin = binarize(probs, t);
        double count = 0.0;
        for (double v : bin.data) count += v;
        CHECK(count <= prev_count);
        prev_count = count;
    }
}

TEST_CASE("f1_score conventions") {
    CHECK(f1_score({1, 0, 1}, {1, 0, 1}).value == 1.0);
    CHECK(f1_score({1, 0, 1}, {1, 0, 1}).defined);

    const MetricValue zero = f1_score({0, 0, 0}, {1, 0, 1});
    CHECK(zero.defined);
    CHECK(zero.value == 0.0);

    const MetricValue undef = f1_score({0, 0, 0}, {0, 0, 0});
    CHECK_FALSE(undef.defined);

    // tp=2, fp=1, fn=1 -> 2/3.
    const MetricValue mixed = f1_score({1, 1, 1, 0, 0}, {1, 1, 0, 1, 0});
    CHECK(mixed.value == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
}

TEST_CASE("auc analytic cases") {
    CHECK(auc({0.9, 0.8, 0.2, 0.1}, {1, 1, 0, 0}).value == 1.0);
    CHECK(auc({0.5, 0.5, 0.5, 0.5}, {1, 0, 1, 0}).value == 0.5);
    CHECK_FALSE(auc({0.1, 0.9}, {1, 1}).defined);
}

TEST_CASE("auc matches the all-pairs oracle with ties") {
    Rng rng(8);
    for (int trial = 0; trial < 25; ++trial) {
        std::vector<double> scores(20), truth(20);
        bool pos = false, neg = false;
        for (std::size_t i = 0; i < 20; ++i) {
            scores[i] = std::round(rng.uniform() * 10.0) / 10.0;  // forces ties
            truth[i] = rng.uniform() < 0.4 ? 1.0 : 0.0;
            (truth[i] != 0.0 ? pos : neg) = true;
        }
        if (!pos || !neg) continue;
        CHECK(auc(scores, truth).value ==
              doctest::Approx(auc_all_pairs(scores, truth)).epsilon(1e-12));
    }
}

TEST_CASE("auc is invariant under strictly monotone score transforms") {
    Rng rng(9);
    std::vector<double> scores(15), truth(15);
    for (std::size_t i = 0; i < 15; ++i) {
        scores[i] = rng.uniform();
        truth[i] = i % 3 == 0 ? 1.0 : 0.0;
    }
    const double base = auc(scores, truth).value;
    std::vector<double> warped(15);
    for (std::size_t i = 0; i < 15; ++i) warped[i] = std::exp(3.0 * scores[i]) - 0.5;
    CHECK(auc(warped, truth).value == doctest::Approx(base).epsilon(1e-14));
}

TEST_CASE("accuracy cases") {
    CHECK(accuracy({1, 0, 1}, {1, 0, 1}) == 1.0);
    CHECK(accuracy({1, 0, 1}, {0, 1, 0}) == 0.0);
    CHECK(accuracy({1, 0, 1, 1}, {1, 0, 1, 0}) == 0.75);
}

TEST_CASE("marginal_diff cases and counting oracle") {
    Matrix truth(4, 2);
    truth.data = {1, 0, 1, 1, 0, 0, 1, 0};
    const MarginalDiff same = marginal_diff(truth, truth);
    for (double d : same.abs_diff) CHECK(d == 0.0);

    Matrix all_ones(4, 2, 1.0);
    const MarginalDiff vs_ones = marginal_diff(all_ones, truth);
    CHECK(vs_ones.abs_diff[0] == doctest::Approx(1.0 - 0.75).epsilon(1e-14));
    CHECK(vs_ones.abs_diff[1] == doctest::Approx(1.0 - 0.25).epsilon(1e-14));

    Rng rng(11);
    Matrix pred(30, 3), t2(30, 3);
    for (double& v : pred.data) v = rng.uniform() < 0.5 ? 1.0 : 0.0;
    for (double& v : t2.data) v = rng.uniform() < 0.3 ? 1.0 : 0.0;
    const MarginalDiff md = marginal_diff(pred, t2);
    for (std::size_t j = 0; j < 3; ++j) {
        double cp = 0.0, ct = 0.0;
        for (std::size_t i = 0; i < 30; ++i) {
            cp += pred(i, j);
            ct += t2(i, j);
        }
        CHECK(md.pred_marginals[j] == doctest::Approx(cp / 30.0).epsilon(1e-14));
        CHECK(md.abs_diff[j] == doctest::Approx(std::abs(cp - ct) / 30.0).epsilon(1e-14));
    }
}

TEST_CASE("conditional_diff hand case") {
    // l=2, 6 rows.
    Matrix truth(6, 2);
    truth.data = {1, 1, 1, 1, 0, 1, 1, 0, 0, 0, 1, 1};
    Matrix pred(6, 2);
    pred.data = {1, 1, 0, 1, 1, 1, 1, 0, 0, 0, 0, 1};

    const ConditionalDiff same = conditional_diff(truth, truth, 1);
    CHECK(same.mean_abs_diff == 0.0);

    // truth: y1=1 rows {0,1,2,5}; y0=1 among them {0,1,5} -> 3/4.
    //        y0=1 rows {0,1,3,5}; y1=1 among them {0,1,5} -> 3/4.
    // pred:  y1=1 rows {0,1,2,5}; y0=1 among them {0,2} -> 2/4.
    //        y0=1 rows {0,2,3};   y1=1 among them {0,2} -> 2/3.
    const ConditionalDiff cd = conditional_diff(pred, truth, 1);
    REQUIRE(cd.pairs.size() == 2);
    double diff_0_given_1 = 0.0, diff_1_given_0 = 0.0;
    for (const auto& p : cd.pairs) {
        if (p.i == 0 && p.j == 1) diff_0_given_1 = p.abs_diff;
        if (p.i == 1 && p.j == 0) diff_1_given_0 = p.abs_diff;
    }
    CHECK(diff_0_given_1 == doctest::Approx(std::abs(0.5 - 0.75)).epsilon(1e-14));
    CHECK(diff_1_given_0 == doctest::Approx(std::abs(2.0 / 3.0 - 0.75)).epsilon(1e-14));
    CHECK(cd.mean_abs_diff ==
          doctest::Approx(0.5 * (0.25 + std::abs(2.0 / 3.0 - 0.75))).epsilon(1e-14));
}

TEST_CASE("conditional_diff respects min_support") {
    Matrix truth(6, 2, 0.0);
    truth(0, 1) = 1.0;  // y1 active once only
    for (std::size_t i = 0; i < 6; ++i) truth(i, 0) = 1.0;
    const ConditionalDiff cd = conditional_diff(truth, truth, 5);
    // Pair conditioned on y1 is skipped for lack of support.
    for (const auto& p : cd.pairs) CHECK(p.j != 1);
    CHECK(cd.skipped > 0);
}

TEST_CASE("metrics are invariant under simultaneous row permutation") {
    Rng rng(13);
    Matrix pred(12, 3), truth(12, 3);
    for (double& v : pred.data) v = rng.uniform() < 0.5 ? 1.0 : 0.0;
    for (double& v : truth.data) v = rng.uniform() < 0.4 ? 1.0 : 0.0;

    std::vector<std::size_t> perm(12);
    for (std::size_t i = 0; i < 12; ++i) perm[i] = (i * 5 + 3) % 12;
    Matrix ppred(12, 3), ptruth(12, 3);
    for (std::size_t i = 0; i < 12; ++i)
        for (std::size_t j = 0; j < 3; ++j) {
            ppred(i, j) = pred(perm[i], j);
            ptruth(i, j) = truth(perm[i], j);
        }

    for (std::size_t j = 0; j < 3; ++j) {
        std::vector<double> a(12), b(12), pa(12), pb(12);
        for (std::size_t i = 0; i < 12; ++i) {
            a[i] = pred(i, j);
            b[i] = truth(i, j);
            pa[i] = ppred(i, j);
            pb[i] = ptruth(i, j);
        }
        CHECK(f1_score(a, b).value == f1_score(pa, pb).value);
        CHECK(accuracy(a, b) == accuracy(pa, pb));
    }
    CHECK(marginal_diff(pred, truth).abs_diff == marginal_diff(ppred, ptruth).abs_diff);
    CHECK(conditional_diff(pred, truth, 1).mean_abs_diff ==
          conditional_diff(ppred, ptruth, 1).mean_abs_diff);
}

TEST_CASE("evaluate on a perfect oracle classifier") {
    // Features ARE the labels; a steep single-layer net recovers them exactly.
    LabelDistributionSpec spec;
    spec.num_labels = 3;
    spec.unary_logits = {0.3, -0.3, 0.0};
    const ProbTable t = enumerate_distribution(spec);
    Dataset ds;
    ds.labels = sample_labels(t, 200, 17);
    ds.features = ds.labels;
    ds.labeled.assign(200, 1);

    MlpParams oracle;
    oracle.layer_dims = {3, 3};
    Matrix w(3, 3, 0.0);
    for (std::size_t i = 0; i < 3; ++i) w(i, i) = 20.0;
    oracle.weights = {w};
    oracle.biases = {{-10.0, -10.0, -10.0}};
    oracle.output_activation = Activation::Sigmoid;

    const MetricsReport rep = evaluate(oracle, ds, 0.5);
    CHECK(rep.avg_f1 == 1.0);
    CHECK(rep.avg_accuracy == 1.0);
    CHECK(rep.avg_auc == 1.0);
    for (double d : rep.marginal_abs_diff) CHECK(d == 0.0);
    CHECK(rep.conditional_abs_diff_mean == 0.0);
}

TEST_CASE("evaluate matches a report composed from the primitives") {
    Rng rng(19);
    MlpParams net = init_classifier(ClassifierSpec{4, {5}, 3}, 23);
    Dataset ds;
    ds.features = Matrix(25, 4);
    for (double& v : ds.features.data) v = rng.normal();
    ds.labels = Matrix(25, 3);
    for (double& v : ds.labels.data) v = rng.uniform() < 0.4 ? 1.0 : 0.0;
    ds.labeled.assign(25, 1);

    const MetricsReport rep = evaluate(net, ds, 0.4, 2);

    const Matrix probs = classifier_forward(net, ds.features);
    const Matrix bin = binarize(probs, 0.4);
    double f1_sum = 0.0;
    std::size_t f1_n = 0;
    for (std::size_t j = 0; j < 3; ++j) {
        std::vector<double> p(25), s(25), t(25);
        for (std::size_t i = 0; i < 25; ++i) {
            p[i] = bin(i, j);
            s[i] = probs(i, j);
            t[i] = ds.labels(i, j);
        }
        const MetricValue f1 = f1_score(p, t);
        CHECK(rep.per_label_f1[j].defined == f1.defined);
        if (f1.defined) {
            CHECK(rep.per_label_f1[j].value == f1.value);
            f1_sum += f1.value;
            ++f1_n;
        }
        CHECK(rep.per_label_accuracy[j] == accuracy(p, t));
        if (rep.per_label_auc[j].defined) {
            CHECK(rep.per_label_auc[j].value == auc(s, t).value);
        }
    }
    CHECK(rep.avg_f1 == doctest::Approx(f1_sum / double(f1_n)).epsilon(1e-14));
    CHECK(rep.conditional_abs_diff_mean == conditional_diff(bin, ds.labels, 2).mean_abs_diff);
    CHECK(rep.marginal_abs_diff == marginal_diff(bin, ds.labels).abs_diff);

    // JSON serialization carries the headline fields.
    const std::string json = report_to_json(rep);
    CHECK(json.find("\"avg_f1\"") != std::string::npos);
    CHECK(json.find("\"conditional_abs_diff_mean\"") != std::string::npos);
}

TEST_CASE("constant-0.5 classifier accuracy equals the truth marginal under the tie rule") {
    LabelDistributionSpec spec;
    spec.num_labels = 2;
    spec.unary_logits = {1.0, -1.0};
    const ProbTable t = enumerate_distribution(spec);
    Dataset ds;
    ds.labels = sample_labels(t, 500, 29);
    ds.features = Matrix(500, 3, 0.0);
    ds.labeled.assign(500, 1);

    MlpParams flat;
    flat.layer_dims = {3, 2};
    flat.weights = {Matrix(3, 2, 0.0)};
    flat.biases = {{0.0, 0.0}};

    const MetricsReport rep = evaluate(flat, ds, 0.5);
    // All predictions binarize to 1, so accuracy per label is its marginal.
    for (std::size_t j = 0; j < 2; ++j) {
        double marg = 0.0;
        for (std::size_t i = 0; i < 500; ++i) marg += ds.labels(i, j);
        marg /= 500.0;
        CHECK(rep.per_label_accuracy[j] == doctest::Approx(marg).epsilon(1e-14));
    }
}
