#include "csd/cv.hpp"

#include "csd/error.hpp"
#include "csd/fingerprint.hpp"
#include "csd/metrics.hpp"
#include "csd/parallel.hpp"
#include "csd/rng.hpp"

#include <cmath>
#include <map>

namespace csd {

namespace {

const char *stratification_name(Stratification s) {
    return s == Stratification::by_class ? "by-class" : "by-labelset";
}

nlohmann::json plan_json(const CvPlan &plan) {
    return {{"k", plan.k},
            {"repetitions", plan.repetitions},
            {"seed", plan.seed},
            {"stratification", stratification_name(plan.stratification)}};
}

struct Split {
    std::vector<std::size_t> train;
    std::vector<std::size_t> test;
};

Split split_for(const std::vector<std::size_t> &assignment, std::size_t fold) {
    Split s;
    for (std::size_t i = 0; i < assignment.size(); ++i) {
        (assignment[i] == fold ? s.test : s.train).push_back(i);
    }
    return s;
}

void add_binary_metrics(const BinaryReport &r, const std::string &prefix, std::map<std::string, double> &out) {
    out[prefix + "accuracy"] = r.accuracy;
    out[prefix + "precision"] = r.precision;
    out[prefix + "recall"] = r.recall;
    out[prefix + "f_measure"] = r.f_measure;
    out[prefix + "f_measure_weighted"] = r.f_measure_weighted;
    if (r.roc_area) {
        out[prefix + "roc_area"] = *r.roc_area;
    }
}

void add_multilabel_metrics(const ExampleBasedReport &e, const LabelBasedReport &l, const std::string &prefix,
                            std::map<std::string, double> &out) {
    out[prefix + "accuracy"] = e.accuracy;
    out[prefix + "hamming_loss"] = e.hamming_loss;
    out[prefix + "exact_match"] = e.exact_match;
    out[prefix + "micro_precision"] = l.micro_precision;
    out[prefix + "micro_recall"] = l.micro_recall;
    out[prefix + "micro_f1"] = l.micro_f1;
    out[prefix + "macro_precision"] = l.macro_precision;
    out[prefix + "macro_recall"] = l.macro_recall;
    out[prefix + "macro_f1"] = l.macro_f1;
}

BinaryReport score_binary(const ClassifierModel &model, const TabularDataset &d, std::span<const std::size_t> rows) {
    std::vector<double> scores;
    std::vector<int> predicted;
    std::vector<int> truth;
    for (auto r : rows) {
        const auto x = d.features().row(r);
        const auto p = model.predict_proba(x);
        scores.push_back(p.size() > 1 ? p[1] : 0.0);
        predicted.push_back(detail::argmax(p));
        truth.push_back(d.label(0)[r]);
    }
    return binary_metrics(scores, predicted, truth);
}

void score_multilabel(const MultiLabelModel &model, const MultiLabelDataset &m, std::span<const std::size_t> rows,
                      const std::string &prefix, std::map<std::string, double> &out) {
    std::vector<LabelSet> predicted;
    std::vector<LabelSet> truth;
    for (auto r : rows) {
        predicted.push_back(model.predict_labels(m.features().row(r)));
        truth.push_back(m.labels_of(r));
    }
    add_multilabel_metrics(example_based(predicted, truth), label_based(predicted, truth), prefix, out);
}

std::vector<int> labelset_strata(const MultiLabelDataset &m) {
    std::map<std::string, int> ids;
    for (const auto &row : m.label_rows()) {
        ids.emplace(row.to_string(), 0);
    }
    int next = 0;
    for (auto &[bits, id] : ids) {
        id = next++;
    }
    std::vector<int> strata;
    for (const auto &row : m.label_rows()) {
        strata.push_back(ids.at(row.to_string()));
    }
    return strata;
}

template <typename Task>
std::vector<FoldRecord> run_tasks(const CvPlan &plan, const std::vector<std::vector<std::size_t>> &folds,
                                  Task &&task) {
    std::vector<FoldRecord> records(plan.repetitions * plan.k);
    parallel_for(records.size(), plan.threads, [&](std::size_t t) {
        const std::size_t rep = t / plan.k;
        const std::size_t fold = t % plan.k;
        const auto split = split_for(folds[rep], fold);
        FoldRecord rec;
        rec.repetition = rep;
        rec.fold = fold;
        rec.n_train = split.train.size();
        rec.n_test = split.test.size();
        const auto where = "repetition " + std::to_string(rep) + ", fold " + std::to_string(fold) + ": ";
        try {
            task(split, derive_seed(plan.seed, {rep, fold}), rec.metrics);
        } catch (const ConfigError &e) {
            throw ConfigError(where + e.what());
        } catch (const Error &e) {
            throw Error(where + e.what());
        }
        records[t] = std::move(rec);
    });
    return records;
}

} // namespace

std::vector<std::vector<std::size_t>> make_folds(std::size_t n, std::span<const int> strata, const CvPlan &plan) {
    if (plan.k < 2) {
        throw ConfigError("cross-validation needs k >= 2");
    }
    if (plan.repetitions < 1) {
        throw ConfigError("cross-validation needs at least one repetition");
    }
    if (n < plan.k) {
        throw ConfigError("cannot split " + std::to_string(n) + " instances into " + std::to_string(plan.k) +
                          " folds");
    }
    if (strata.size() != n) {
        throw SchemaError("strata length differs from the number of instances");
    }
    std::map<int, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < n; ++i) {
        groups[strata[i]].push_back(i);
    }
    std::vector<std::vector<std::size_t>> out(plan.repetitions, std::vector<std::size_t>(n, 0));
    for (std::size_t rep = 0; rep < plan.repetitions; ++rep) {
        Rng rng(derive_seed(plan.seed, {rep}));
        std::size_t position = 0;
        for (const auto &[id, members] : groups) {
            auto shuffled = members;
            rng.shuffle(shuffled);
            for (auto i : shuffled) {
                out[rep][i] = position++ % plan.k;
            }
        }
    }
    return out;
}

double ExperimentResult::mean(const std::string &metric) const {
    const auto it = summary.find(metric);
    if (it == summary.end() || it->second.count == 0) {
        return std::nan("");
    }
    return it->second.mean;
}

nlohmann::json ExperimentResult::to_json(bool include_folds) const {
    nlohmann::json sum = nlohmann::json::object();
    for (const auto &[name, s] : summary) {
        sum[name] = {{"mean", s.mean}, {"stddev", s.stddev}, {"count", s.count}};
    }
    nlohmann::json j = {{"task", task}, {"config", config}, {"summary", std::move(sum)}};
    if (include_folds) {
        nlohmann::json folds_json = nlohmann::json::array();
        for (const auto &f : folds) {
            folds_json.push_back({{"repetition", f.repetition},
                                  {"fold", f.fold},
                                  {"n_train", f.n_train},
                                  {"n_test", f.n_test},
                                  {"metrics", f.metrics}});
        }
        j["folds"] = std::move(folds_json);
    }
    return j;
}

std::map<std::string, MetricSummary> summarize(const std::vector<FoldRecord> &folds) {
    std::map<std::string, std::vector<double>> values;
    for (const auto &f : folds) {
        for (const auto &[name, v] : f.metrics) {
            values[name].push_back(v);
        }
    }
    std::map<std::string, MetricSummary> out;
    for (const auto &[name, vs] : values) {
        MetricSummary s;
        s.count = vs.size();
        for (auto v : vs) {
            s.mean += v;
        }
        s.mean /= static_cast<double>(vs.size());
        if (vs.size() > 1) {
            double ss = 0.0;
            for (auto v : vs) {
                ss += (v - s.mean) * (v - s.mean);
            }
            s.stddev = std::sqrt(ss / static_cast<double>(vs.size() - 1));
        }
        out[name] = s;
    }
    return out;
}

ExperimentResult run_cv(const TabularDataset &d, const BaseTrainer &trainer, const CvPlan &plan) {
    if (d.n_labels() != 1) {
        throw SchemaError("single-label cross-validation needs exactly one label column");
    }
    std::vector<int> y(d.label(0).begin(), d.label(0).end());
    const auto folds = make_folds(d.n_instances(), y, plan);

    ExperimentResult result;
    result.task = "binary";
    result.folds = run_tasks(plan, folds, [&](const auto &split, std::uint64_t seed, auto &metrics) {
        const auto train = d.select_rows(split.train);
        const std::vector<int> train_y(train.label(0).begin(), train.label(0).end());
        const auto model = trainer(ClassProblem{train.features(), train_y, 2}, seed);
        add_binary_metrics(score_binary(model, d, split.test), "", metrics);
        if (plan.score_training) {
            add_binary_metrics(score_binary(model, d, split.train), "train_", metrics);
        }
    });
    result.summary = summarize(result.folds);
    result.config = plan_json(plan);
    result.config["dataset"] = {{"name", d.name()},
                                {"n_instances", d.n_instances()},
                                {"n_features", d.n_features()},
                                {"label", d.label_names()[0]},
                                {"positives", d.positives(0)},
                                {"fingerprint", fingerprint(d)}};
    return result;
}

ExperimentResult run_cv(const TabularDataset &d, const LearnerSpec &spec, const CvPlan &plan) {
    return run_cv(d, make_trainer(spec), plan);
}

ExperimentResult run_cv(const MultiLabelDataset &m, const MultiLabelSpec &spec, const CvPlan &plan) {
    if (!spec.trainer) {
        throw ConfigError("multilabel cross-validation needs a base trainer");
    }
    std::vector<int> strata;
    if (plan.stratification == Stratification::by_labelset) {
        strata = labelset_strata(m);
    } else {
        const auto first = m.label_column(0);
        strata.assign(first.begin(), first.end());
    }
    const auto folds = make_folds(m.n_instances(), strata, plan);

    ExperimentResult result;
    result.task = "multilabel";
    result.folds = run_tasks(plan, folds, [&](const auto &split, std::uint64_t seed, auto &metrics) {
        const auto train = m.select_rows(split.train);
        const auto model = train_multilabel(train, spec.method, spec.trainer, seed, spec.chain_order);
        score_multilabel(model, m, split.test, "", metrics);
        if (plan.score_training) {
            score_multilabel(model, m, split.train, "train_", metrics);
        }
    });
    result.summary = summarize(result.folds);
    result.config = plan_json(plan);
    result.config["method"] = method_name(spec.method);
    result.config["chain_order"] = spec.chain_order;
    result.config["dataset"] = {{"name", m.name()},
                                {"n_instances", m.n_instances()},
                                {"n_features", m.n_features()},
                                {"labels", m.label_names()},
                                {"fingerprint", fingerprint(m)}};
    return result;
}

} // namespace csd
