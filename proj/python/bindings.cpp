#include "csd/classifier.hpp"
#include "csd/cv.hpp"
#include "csd/dataset_ops.hpp"
#include "csd/error.hpp"
#include "csd/experiments.hpp"
#include "csd/io.hpp"
#include "csd/metrics.hpp"
#include "csd/mld_stats.hpp"
#include "csd/multilabel.hpp"
#include "csd/synthetic.hpp"

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

namespace py = pybind11;
using namespace csd;

namespace {

// JSON crosses the boundary as Python objects via the json module.
py::object to_python(const nlohmann::json &j) { return py::module_::import("json").attr("loads")(j.dump()); }

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

FeatureMatrix to_matrix(const Array &a) {
    if (a.ndim() != 2) {
        throw SchemaError("features must be a 2-D array");
    }
    const auto rows = static_cast<std::size_t>(a.shape(0));
    const auto cols = static_cast<std::size_t>(a.shape(1));
    FeatureMatrix m(rows, cols);
    auto v = a.unchecked<2>();
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols; ++c) {
            m(r, c) = v(static_cast<py::ssize_t>(r), static_cast<py::ssize_t>(c));
        }
    }
    return m;
}

py::array_t<double> to_array(const FeatureMatrix &m) {
    py::array_t<double> out({static_cast<py::ssize_t>(m.rows()), static_cast<py::ssize_t>(m.cols())});
    auto v = out.mutable_unchecked<2>();
    for (std::size_t r = 0; r < m.rows(); ++r) {
        for (std::size_t c = 0; c < m.cols(); ++c) {
            v(static_cast<py::ssize_t>(r), static_cast<py::ssize_t>(c)) = m(r, c);
        }
    }
    return out;
}

std::vector<LabelSet> to_sets(const std::vector<std::string> &bits) {
    std::vector<LabelSet> out;
    out.reserve(bits.size());
    for (const auto &b : bits) {
        out.push_back(LabelSet::from_string(b));
    }
    return out;
}

std::vector<std::string> to_strings(const std::vector<LabelSet> &sets) {
    std::vector<std::string> out;
    out.reserve(sets.size());
    for (const auto &s : sets) {
        out.push_back(s.to_string());
    }
    return out;
}

CvPlan make_plan(std::size_t k, std::size_t reps, std::uint64_t seed, std::size_t threads) {
    CvPlan plan;
    plan.k = k;
    plan.repetitions = reps;
    plan.seed = seed;
    plan.threads = threads;
    return plan;
}

ExperimentOptions make_options(std::size_t k, std::size_t reps, std::uint64_t seed, std::size_t threads,
                               bool include_folds) {
    ExperimentOptions o;
    o.plan = make_plan(k, reps, seed, threads);
    o.include_folds = include_folds;
    return o;
}

py::tuple report_tuple(const ExperimentReport &r) { return py::make_tuple(to_python(r.json), r.text); }

/// Owns the data a ClassProblem refers to.
struct TrainingData {
    FeatureMatrix x;
    std::vector<int> y;
    int n_classes = 2;
};

TrainingData training_data(const Array &features, const std::vector<int> &y) {
    TrainingData d{to_matrix(features), y, 2};
    for (int v : y) {
        if (v < 0) {
            throw SchemaError("class indices must be non-negative");
        }
        d.n_classes = std::max(d.n_classes, v + 1);
    }
    return d;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Code smell datasets: disparity detection, multilabel construction and evaluation";

    auto base_error = py::register_exception<Error>(m, "CsdError", PyExc_RuntimeError);
    py::register_exception<ParseError>(m, "ParseError", base_error.ptr());
    py::register_exception<SchemaError>(m, "SchemaError", base_error.ptr());
    py::register_exception<ConfigError>(m, "ConfigError", base_error.ptr());
    py::register_exception<EmptyDataError>(m, "EmptyDataError", base_error.ptr());
    py::register_exception<MissingValueError>(m, "MissingValueError", base_error.ptr());
    py::register_exception<DegenerateLabelError>(m, "DegenerateLabelError", base_error.ptr());

    py::class_<TabularDataset>(m, "Dataset")
        .def(py::init([](std::string name, std::vector<std::string> feature_names, const Array &features,
                         std::vector<std::string> label_names, std::vector<std::vector<std::uint8_t>> labels) {
                 return TabularDataset(std::move(name), std::move(feature_names), to_matrix(features),
                                       std::move(label_names), std::move(labels));
             }),
             py::arg("name"), py::arg("feature_names"), py::arg("features"), py::arg("label_names"),
             py::arg("labels"))
        .def_property_readonly("name", &TabularDataset::name)
        .def_property_readonly("n_instances", &TabularDataset::n_instances)
        .def_property_readonly("n_features", &TabularDataset::n_features)
        .def_property_readonly("n_labels", &TabularDataset::n_labels)
        .def_property_readonly("feature_names", &TabularDataset::feature_names)
        .def_property_readonly("label_names", &TabularDataset::label_names)
        .def_property_readonly("features", [](const TabularDataset &d) { return to_array(d.features()); })
        .def_property_readonly("labels", &TabularDataset::labels)
        .def("positives", &TabularDataset::positives, py::arg("label") = 0)
        .def("select_rows", [](const TabularDataset &d, const std::vector<std::size_t> &rows) {
            return d.select_rows(rows);
        })
        .def("__eq__", [](const TabularDataset &a, const TabularDataset &b) { return a == b; })
        .def("__len__", &TabularDataset::n_instances)
        .def("__repr__", [](const TabularDataset &d) {
            return "<Dataset '" + d.name() + "' " + std::to_string(d.n_instances()) + "x" +
                   std::to_string(d.n_features()) + ", " + std::to_string(d.n_labels()) + " label(s)>";
        });

    py::class_<MultiLabelDataset>(m, "MultiLabelDataset")
        .def_property_readonly("name", &MultiLabelDataset::name)
        .def_property_readonly("n_instances", &MultiLabelDataset::n_instances)
        .def_property_readonly("n_features", &MultiLabelDataset::n_features)
        .def_property_readonly("n_labels", &MultiLabelDataset::n_labels)
        .def_property_readonly("feature_names", &MultiLabelDataset::feature_names)
        .def_property_readonly("label_names", &MultiLabelDataset::label_names)
        .def_property_readonly("features", [](const MultiLabelDataset &d) { return to_array(d.features()); })
        .def_property_readonly("label_rows", [](const MultiLabelDataset &d) { return to_strings(d.label_rows()); })
        .def("to_tabular", &MultiLabelDataset::to_tabular)
        .def("__len__", &MultiLabelDataset::n_instances)
        .def("__repr__", [](const MultiLabelDataset &d) {
            return "<MultiLabelDataset '" + d.name() + "' " + std::to_string(d.n_instances()) + "x" +
                   std::to_string(d.n_features()) + ", " + std::to_string(d.n_labels()) + " labels>";
        });

    // io
    m.def(
        "parse_arff",
        [](const std::string &text, std::vector<std::string> labels, std::optional<std::string> positive_value) {
            // As with files: without explicit labels every nominal attribute is one.
            if (labels.empty()) {
                labels = arff_nominal_attributes(text);
            }
            return parse_arff(text, ParseOptions{std::move(labels), std::move(positive_value), {}});
        },
        py::arg("text"), py::arg("labels") = std::vector<std::string>{}, py::arg("positive_value") = py::none());
    m.def(
        "parse_csv",
        [](const std::string &text, std::vector<std::string> labels, bool has_header, std::string name) {
            return parse_csv(text, ParseOptions{std::move(labels), std::nullopt, std::move(name)}, has_header);
        },
        py::arg("text"), py::arg("labels"), py::arg("has_header") = true, py::arg("name") = "");
    m.def("write_arff", &write_arff, py::arg("dataset"));
    m.def("write_csv", &write_csv, py::arg("dataset"));
    m.def(
        "load_dataset",
        [](const std::filesystem::path &path, std::vector<std::string> labels,
           std::optional<std::string> positive_value) {
            return load_dataset(path, ParseOptions{std::move(labels), std::move(positive_value), {}});
        },
        py::arg("path"), py::arg("labels") = std::vector<std::string>{}, py::arg("positive_value") = py::none());
    m.def("save_dataset", &save_dataset, py::arg("path"), py::arg("dataset"));

    // dataset operations
    m.def("find_common_instances", &find_common_instances, py::arg("a"), py::arg("b"));
    m.def("merge_single_label", &merge_single_label, py::arg("target"), py::arg("other"));
    m.def(
        "detect_disparity",
        [](const TabularDataset &d) {
            const auto r = detect_disparity(d);
            py::list groups;
            for (const auto &g : r.groups) {
                py::dict item;
                item["rows"] = g.rows;
                item["labels"] = std::vector<int>(g.labels.begin(), g.labels.end());
                groups.append(item);
            }
            py::dict out;
            out["groups"] = groups;
            out["conflicting_rows"] = r.total_conflicting_rows;
            out["conflicting_smelly"] = r.positive_conflicting_rows;
            return out;
        },
        py::arg("dataset"));
    m.def("remove_disparity", &remove_disparity, py::arg("dataset"));
    m.def("build_multilabel", &build_multilabel, py::arg("a"), py::arg("b"));
    m.def("to_multilabel", &to_multilabel, py::arg("dataset"));

    // statistics and metrics
    m.def(
        "compute_stats", [](const MultiLabelDataset &d) { return to_python(to_json(compute_stats(d))); },
        py::arg("mld"));
    m.def(
        "example_based",
        [](const std::vector<std::string> &predicted, const std::vector<std::string> &truth) {
            return to_python(to_json(example_based(to_sets(predicted), to_sets(truth))));
        },
        py::arg("predicted"), py::arg("truth"));
    m.def(
        "label_based",
        [](const std::vector<std::string> &predicted, const std::vector<std::string> &truth) {
            return to_python(to_json(label_based(to_sets(predicted), to_sets(truth))));
        },
        py::arg("predicted"), py::arg("truth"));
    m.def(
        "roc_area",
        [](const std::vector<double> &scores, const std::vector<int> &truth) { return roc_area(scores, truth); },
        py::arg("scores"), py::arg("truth"));
    m.def(
        "binary_metrics",
        [](const std::vector<double> &scores, const std::vector<int> &predicted, const std::vector<int> &truth) {
            return to_python(to_json(binary_metrics(scores, predicted, truth)));
        },
        py::arg("scores"), py::arg("predicted"), py::arg("truth"));

    // learners
    py::class_<ClassifierModel>(m, "Classifier")
        .def_property_readonly("n_classes", &ClassifierModel::n_classes)
        .def_property_readonly("n_features", &ClassifierModel::n_features)
        .def("predict", [](const ClassifierModel &c, const std::vector<double> &x) { return c.predict(x); })
        .def("predict_proba",
             [](const ClassifierModel &c, const std::vector<double> &x) { return c.predict_proba(x); })
        .def("to_json", [](const ClassifierModel &c) { return to_python(c.to_json()); })
        .def_static("from_json", [](const py::object &j) {
            return ClassifierModel::from_json(
                nlohmann::json::parse(py::str(py::module_::import("json").attr("dumps")(j)).cast<std::string>()));
        });
    m.def(
        "train_classifier",
        [](const Array &features, const std::vector<int> &y, const std::string &base, std::uint64_t seed) {
            const auto d = training_data(features, y);
            return train_classifier(ClassProblem{d.x, d.y, d.n_classes}, learner_preset(base), seed);
        },
        py::arg("features"), py::arg("y"), py::arg("base") = "j48p", py::arg("seed") = 1);

    py::class_<MultiLabelModel>(m, "MultiLabelModel")
        .def_property_readonly("method", [](const MultiLabelModel &mm) { return method_name(mm.method()); })
        .def_property_readonly("label_names", &MultiLabelModel::label_names)
        .def("predict",
             [](const MultiLabelModel &mm, const std::vector<double> &x) { return mm.predict_labels(x).to_string(); })
        .def("to_json", [](const MultiLabelModel &mm) { return to_python(mm.to_json()); });
    m.def(
        "train_multilabel",
        [](const MultiLabelDataset &d, const std::string &method, const std::string &base, std::uint64_t seed,
           std::vector<std::size_t> chain_order) {
            return train_multilabel(d, parse_method(method), make_trainer(learner_preset(base)), seed,
                                    std::move(chain_order));
        },
        py::arg("mld"), py::arg("method") = "cc", py::arg("base") = "rf", py::arg("seed") = 1,
        py::arg("chain_order") = std::vector<std::size_t>{});
    m.def("learner_display_name", &learner_display_name, py::arg("preset"));

    // evaluation
    m.def(
        "cross_validate",
        [](const TabularDataset &d, const std::string &method, const std::string &base, std::size_t k,
           std::size_t reps, std::uint64_t seed, std::size_t threads, std::vector<std::size_t> chain_order,
           bool include_folds) {
            auto plan = make_plan(k, reps, seed, threads);
            const auto spec = learner_preset(base);
            ExperimentResult r;
            {
                py::gil_scoped_release release;
                if (method == "single") {
                    plan.stratification = Stratification::by_class;
                    r = run_cv(d, spec, plan);
                } else {
                    plan.stratification = Stratification::by_labelset;
                    r = run_cv(to_multilabel(d),
                               MultiLabelSpec{parse_method(method), make_trainer(spec), std::move(chain_order)}, plan);
                }
            }
            return to_python(r.to_json(include_folds));
        },
        py::arg("dataset"), py::arg("method") = "cc", py::arg("base") = "rf", py::arg("k") = 10,
        py::arg("reps") = 10, py::arg("seed") = 1, py::arg("threads") = 0,
        py::arg("chain_order") = std::vector<std::size_t>{}, py::arg("include_folds") = false);

    // experiments
    m.def(
        "run_rq1", [](const TabularDataset &lm, const TabularDataset &fe) { return report_tuple(run_rq1(lm, fe)); },
        py::arg("lm"), py::arg("fe"));
    m.def(
        "run_rq2",
        [](const TabularDataset &lm, const TabularDataset &fe, std::size_t k, std::size_t reps, std::uint64_t seed,
           std::size_t threads, bool include_folds) {
            ExperimentReport r;
            {
                py::gil_scoped_release release;
                r = run_rq2(lm, fe, make_options(k, reps, seed, threads, include_folds));
            }
            return report_tuple(r);
        },
        py::arg("lm"), py::arg("fe"), py::arg("k") = 10, py::arg("reps") = 10, py::arg("seed") = 1,
        py::arg("threads") = 0, py::arg("include_folds") = true);
    m.def(
        "run_rq3",
        [](const TabularDataset &lm, const TabularDataset &fe, std::size_t k, std::size_t reps, std::uint64_t seed,
           std::size_t threads, bool include_folds) {
            ExperimentReport r;
            {
                py::gil_scoped_release release;
                r = run_rq3(lm, fe, make_options(k, reps, seed, threads, include_folds));
            }
            return report_tuple(r);
        },
        py::arg("lm"), py::arg("fe"), py::arg("k") = 10, py::arg("reps") = 10, py::arg("seed") = 1,
        py::arg("threads") = 0, py::arg("include_folds") = true);

    m.def(
        "synthetic_pair",
        [](std::uint64_t seed, double separation) {
            SyntheticOptions o;
            o.seed = seed;
            o.separation = separation;
            auto p = generate_reference_datasets(o);
            return py::make_tuple(std::move(p.long_method), std::move(p.feature_envy));
        },
        py::arg("seed") = 2019, py::arg("separation") = 2.4);
}
