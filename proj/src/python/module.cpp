#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "auadv/experiment.hpp"

namespace py = pybind11;
using namespace auadv;

namespace {

Matrix to_matrix(const py::array_t<double, py::array::c_style | py::array::forcecast>& arr) {
    if (arr.ndim() != 2) throw py::value_error("expected a 2-D array");
    Matrix m(static_cast<std::size_t>(arr.shape(0)), static_cast<std::size_t>(arr.shape(1)));
    std::copy(arr.data(), arr.data() + m.size(), m.data.begin());
    return m;
}

py::array_t<double> to_numpy(const Matrix& m) {
    py::array_t<double> arr({m.rows, m.cols});
    std::copy(m.data.begin(), m.data.end(), arr.mutable_data());
    return arr;
}

py::dict report_to_dict(const MetricsReport& r) {
    py::dict d;
    auto metric_list = [](const std::vector<MetricValue>& vals) {
        py::list out;
        for (const auto& v : vals) {
            if (v.defined) {
                out.append(v.value);
            } else {
                out.append(py::none());
            }
        }
        return out;
    };
    d["per_label_f1"] = metric_list(r.per_label_f1);
    d["per_label_auc"] = metric_list(r.per_label_auc);
    d["per_label_accuracy"] = r.per_label_accuracy;
    d["avg_f1"] = r.avg_f1;
    d["avg_auc"] = r.avg_auc;
    d["avg_accuracy"] = r.avg_accuracy;
    d["marginal_pred"] = r.marginal_pred;
    d["marginal_truth"] = r.marginal_truth;
    d["marginal_abs_diff"] = r.marginal_abs_diff;
    d["marginal_abs_diff_mean"] = r.marginal_abs_diff_mean;
    d["conditional_abs_diff_mean"] = r.conditional_abs_diff_mean;
    d["threshold"] = r.threshold;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Adversarial semi-supervised multi-label recognition core";

    py::class_<PairPotential>(m, "PairPotential")
        .def(py::init([](std::size_t i, std::size_t j, double strength) {
                 return PairPotential{i, j, strength};
             }),
             py::arg("i"), py::arg("j"), py::arg("strength"))
        .def_readwrite("i", &PairPotential::i)
        .def_readwrite("j", &PairPotential::j)
        .def_readwrite("strength", &PairPotential::strength);

    py::class_<LabelDistributionSpec>(m, "LabelDistributionSpec")
        .def(py::init<>())
        .def_static("default_spec", &LabelDistributionSpec::default_spec)
        .def_readwrite("num_labels", &LabelDistributionSpec::num_labels)
        .def_readwrite("unary_logits", &LabelDistributionSpec::unary_logits)
        .def_readwrite("pairs", &LabelDistributionSpec::pairs)
        .def("digest", &LabelDistributionSpec::digest);

    py::class_<ProbTable>(m, "ProbTable")
        .def_readonly("num_labels", &ProbTable::num_labels)
        .def_property_readonly("probs",
                               [](const ProbTable& t) { return py::cast(t.probs); });

    m.def("enumerate_distribution", &enumerate_distribution, py::arg("spec"));
    m.def("table_marginals", &table_marginals, py::arg("table"));
    m.def("table_conditional", &table_conditional, py::arg("table"), py::arg("i"),
          py::arg("j"));
    m.def(
        "sample_labels",
        [](const ProbTable& t, std::size_t n, std::uint64_t seed) {
            return to_numpy(sample_labels(t, n, seed));
        },
        py::arg("table"), py::arg("n"), py::arg("seed"));
    m.def(
        "synth_features",
        [](const py::array_t<double>& labels, std::size_t d, double noise_sigma,
           std::uint64_t seed) {
            return to_numpy(synth_features(to_matrix(labels), d, noise_sigma, seed));
        },
        py::arg("labels"), py::arg("d"), py::arg("noise_sigma"), py::arg("seed"));

    py::class_<Dataset>(m, "Dataset")
        .def(py::init<>())
        .def_property(
            "features", [](const Dataset& ds) { return to_numpy(ds.features); },
            [](Dataset& ds, const py::array_t<double>& a) { ds.features = to_matrix(a); })
        .def_property(
            "labels", [](const Dataset& ds) { return to_numpy(ds.labels); },
            [](Dataset& ds, const py::array_t<double>& a) { ds.labels = to_matrix(a); })
        .def_property(
            "labeled",
            [](const Dataset& ds) {
                py::list out;
                for (auto b : ds.labeled) out.append(bool(b));
                return out;
            },
            [](Dataset& ds, const std::vector<bool>& v) {
                ds.labeled.assign(v.begin(), v.end());
            })
        .def_readwrite("digest", &Dataset::digest)
        .def_property_readonly("num_rows", &Dataset::num_rows)
        .def_property_readonly("num_labeled", &Dataset::num_labeled);

    m.def("generate_dataset", &generate_dataset, py::arg("spec"), py::arg("n"),
          py::arg("d"), py::arg("noise_sigma"), py::arg("seed"));
    m.def("apply_missing", &apply_missing, py::arg("dataset"), py::arg("missing_rate"),
          py::arg("seed"));
    m.def("save_dataset", &save_dataset, py::arg("dataset"), py::arg("path"));
    m.def("load_dataset", &load_dataset, py::arg("path"));

    py::class_<AdamHyper>(m, "AdamHyper")
        .def(py::init<>())
        .def_readwrite("lr", &AdamHyper::lr)
        .def_readwrite("beta1", &AdamHyper::beta1)
        .def_readwrite("beta2", &AdamHyper::beta2)
        .def_readwrite("eps", &AdamHyper::eps);

    py::class_<TrainConfig>(m, "TrainConfig")
        .def(py::init<>())
        .def_readwrite("max_steps", &TrainConfig::max_steps)
        .def_readwrite("h_d", &TrainConfig::h_d)
        .def_readwrite("h_r", &TrainConfig::h_r)
        .def_readwrite("m1", &TrainConfig::m1)
        .def_readwrite("m2", &TrainConfig::m2)
        .def_readwrite("alpha", &TrainConfig::alpha)
        .def_readwrite("adam_r", &TrainConfig::adam_r)
        .def_readwrite("adam_d", &TrainConfig::adam_d)
        .def_readwrite("seed", &TrainConfig::seed)
        .def_readwrite("eval_every", &TrainConfig::eval_every)
        .def_readwrite("threshold", &TrainConfig::threshold)
        .def_readwrite("classifier_hidden", &TrainConfig::classifier_hidden)
        .def_readwrite("discriminator_hidden", &TrainConfig::discriminator_hidden)
        .def_readwrite("real_label_smoothing", &TrainConfig::real_label_smoothing);

    py::class_<MlpParams>(m, "MlpParams")
        .def_readonly("layer_dims", &MlpParams::layer_dims)
        .def("forward",
             [](const MlpParams& p, const py::array_t<double>& x) {
                 return to_numpy(mlp_forward(p, to_matrix(x)));
             })
        .def("flatten", &MlpParams::flatten)
        .def("save", &save_checkpoint, py::arg("path"));
    m.def("load_checkpoint", &load_checkpoint, py::arg("path"));

    py::class_<HistoryRecord>(m, "HistoryRecord")
        .def_readonly("step", &HistoryRecord::step)
        .def_readonly("d_loss", &HistoryRecord::d_loss)
        .def_readonly("r_sup_loss", &HistoryRecord::r_sup_loss)
        .def_readonly("r_adv_loss", &HistoryRecord::r_adv_loss)
        .def_readonly("avg_f1", &HistoryRecord::avg_f1)
        .def_readonly("avg_auc", &HistoryRecord::avg_auc)
        .def_readonly("avg_acc", &HistoryRecord::avg_acc);

    py::class_<TrainResult>(m, "TrainResult")
        .def_readonly("classifier", &TrainResult::classifier)
        .def_readonly("discriminator", &TrainResult::discriminator)
        .def_property_readonly("history", [](const TrainResult& r) {
            return py::cast(r.history.records);
        });

    m.def(
        "train",
        [](const TrainConfig& cfg, const Dataset& trainset, const Dataset* eval_ds) {
            return train(cfg, trainset, eval_ds);
        },
        py::arg("config"), py::arg("trainset"), py::arg("eval_ds") = nullptr);

    m.def(
        "evaluate",
        [](const MlpParams& model, const Dataset& ds, double threshold,
           std::size_t min_support) {
            return report_to_dict(evaluate(model, ds, threshold, min_support));
        },
        py::arg("model"), py::arg("dataset"), py::arg("threshold") = 0.5,
        py::arg("min_support") = 10);
}
