#include "csd/experiments.hpp"

#include "csd/dataset_ops.hpp"
#include "csd/error.hpp"
#include "csd/fingerprint.hpp"
#include "csd/io.hpp"
#include "csd/mld_stats.hpp"
#include "csd/report.hpp"

#include <algorithm>
#include <cmath>

namespace csd {

namespace {

void check_inputs(const TabularDataset &lm, const TabularDataset &fe) {
    if (lm.n_labels() != 1 || fe.n_labels() != 1) {
        throw SchemaError("experiments expect two single-label datasets");
    }
    require_same_features(lm, fe);
}

nlohmann::json describe(const TabularDataset &d) {
    const auto smelly = d.positives(0);
    return {{"name", d.name()},
            {"label", d.label_names()[0]},
            {"n_instances", d.n_instances()},
            {"smelly", smelly},
            {"non_smelly", d.n_instances() - smelly},
            {"fingerprint", fingerprint(d)}};
}

double summary_stddev(const ExperimentResult &r, const std::string &metric) {
    const auto it = r.summary.find(metric);
    return it == r.summary.end() ? std::nan("") : it->second.stddev;
}

nlohmann::json number_or_null(double v) { return std::isnan(v) ? nlohmann::json(nullptr) : nlohmann::json(v); }

struct Pair {
    const char *key;
    const char *title;
    const TabularDataset &target;
    const TabularDataset &other;
};

} // namespace

ExperimentReport run_rq1(const TabularDataset &lm, const TabularDataset &fe) {
    check_inputs(lm, fe);
    ExperimentReport report{"rq1", nlohmann::json::object(), ""};
    auto &j = report.json;
    j["experiment"] = "rq1";
    j["inputs"] = {{"lm", describe(lm)}, {"fe", describe(fe)}};
    const auto common = find_common_instances(lm, fe).size();
    j["common_instances"] = common;

    TextTable sizes({"Dataset", "Instances", "Smelly", "Non-smelly", "Disparity groups", "Conflicting smelly"});
    nlohmann::json merged_json = nlohmann::json::object();
    for (const Pair &p : {Pair{"lm", "Long Method", lm, fe}, Pair{"fe", "Feature Envy", fe, lm}}) {
        const auto merged = merge_single_label(p.target, p.other);
        const auto disparity = detect_disparity(merged);
        auto entry = describe(merged);
        entry["disparity_groups"] = disparity.groups.size();
        entry["conflicting_rows"] = disparity.total_conflicting_rows;
        entry["conflicting_smelly"] = disparity.positive_conflicting_rows;
        merged_json[p.key] = entry;
        const auto smelly = merged.positives(0);
        sizes.add_row({p.title, std::to_string(merged.n_instances()), std::to_string(smelly),
                       std::to_string(merged.n_instances() - smelly), std::to_string(disparity.groups.size()),
                       std::to_string(disparity.positive_conflicting_rows)});
    }
    j["merged"] = std::move(merged_json);

    report.text = "Merged datasets and disparity\n\n" + sizes.str() + "\nInstances common to both inputs: " +
                  std::to_string(common) + "\n";
    return report;
}

ExperimentReport run_rq2(const TabularDataset &lm, const TabularDataset &fe, const ExperimentOptions &options) {
    check_inputs(lm, fe);
    if (options.rq2_classifiers.empty()) {
        throw ConfigError("no classifiers configured");
    }
    auto plan = options.plan;
    plan.stratification = Stratification::by_class;

    ExperimentReport report{"rq2", nlohmann::json::object(), ""};
    auto &j = report.json;
    j["experiment"] = "rq2";
    j["inputs"] = {{"lm", describe(lm)}, {"fe", describe(fe)}};
    j["plan"] = {{"k", plan.k}, {"repetitions", plan.repetitions}, {"seed", plan.seed}};

    nlohmann::json datasets = nlohmann::json::object();
    for (const Pair &p : {Pair{"lm", "Long Method", lm, fe}, Pair{"fe", "Feature Envy", fe, lm}}) {
        const auto cleaned = remove_disparity(merge_single_label(p.target, p.other));
        auto entry = describe(cleaned);
        TextTable table({"Classifier", "Accuracy", "SD", "F-Measure", "F-Measure (weighted)", "ROC Area"});
        nlohmann::json rows = nlohmann::json::array();
        for (const auto &preset : options.rq2_classifiers) {
            const auto result = run_cv(cleaned, learner_preset(preset), plan);
            const auto name = learner_display_name(preset);
            rows.push_back({{"classifier", preset},
                            {"display_name", name},
                            {"accuracy", number_or_null(result.mean("accuracy"))},
                            {"accuracy_stddev", number_or_null(summary_stddev(result, "accuracy"))},
                            {"f_measure", number_or_null(result.mean("f_measure"))},
                            {"f_measure_weighted", number_or_null(result.mean("f_measure_weighted"))},
                            {"roc_area", number_or_null(result.mean("roc_area"))},
                            {"cv", result.to_json(options.include_folds)}});
            table.add_row({name, percent(result.mean("accuracy")),
                           percent(summary_stddev(result, "accuracy")), percent(result.mean("f_measure")),
                           percent(result.mean("f_measure_weighted")),
                           percent(result.mean("roc_area"))});
        }
        entry["results"] = std::move(rows);
        datasets[p.key] = std::move(entry);
        const auto smelly = cleaned.positives(0);
        report.text += std::string(p.title) + " after disparity removal (" + std::to_string(cleaned.n_instances()) +
                       " instances, " + std::to_string(smelly) + " smelly / " +
                       std::to_string(cleaned.n_instances() - smelly) + " non-smelly)\n\n" + table.str() + "\n";
    }
    j["datasets"] = std::move(datasets);
    report.text += "Means over " + std::to_string(plan.k * plan.repetitions) + " folds (" +
                   std::to_string(plan.repetitions) + " x " + std::to_string(plan.k) + "-fold CV, seed " +
                   std::to_string(plan.seed) + ").\n";
    return report;
}

ExperimentReport run_rq3(const TabularDataset &lm, const TabularDataset &fe, const ExperimentOptions &options) {
    check_inputs(lm, fe);
    if (options.rq3_classifiers.empty() || options.rq3_methods.empty()) {
        throw ConfigError("no classifiers or methods configured");
    }
    auto plan = options.plan;
    plan.stratification = Stratification::by_labelset;

    const auto mld = build_multilabel(lm, fe);
    const auto stats = compute_stats(mld);

    ExperimentReport report{"rq3", nlohmann::json::object(), ""};
    auto &j = report.json;
    j["experiment"] = "rq3";
    j["inputs"] = {{"lm", describe(lm)}, {"fe", describe(fe)}};
    j["plan"] = {{"k", plan.k}, {"repetitions", plan.repetitions}, {"seed", plan.seed}};
    j["mld"] = {{"name", mld.name()}, {"fingerprint", fingerprint(mld)}};
    j["stats"] = to_json(stats);

    TextTable stats_table({"Instances", "Features", "Labels", "Label sets", "Cardinality", "Density", "MeanIR"});
    stats_table.add_row({std::to_string(stats.n_instances), std::to_string(stats.n_features),
                         std::to_string(stats.n_labels), std::to_string(stats.n_label_sets),
                         fixed(stats.cardinality), fixed(stats.density), fixed(stats.mean_ir)});
    TextTable sets_table({"Label set", "Instances", "Share"});
    for (auto it = stats.label_set_counts.rbegin(); it != stats.label_set_counts.rend(); ++it) {
        sets_table.add_row({it->first, std::to_string(it->second),
                            percent(static_cast<double>(it->second) / static_cast<double>(stats.n_instances), 2)});
    }
    report.text = "Multilabel dataset (labels: " + stats.label_names[0] + ", " +
                  (stats.n_labels > 1 ? stats.label_names[1] : std::string()) + ")\n\n" + stats_table.str() + "\n" +
                  sets_table.str() + "\n";

    nlohmann::json methods = nlohmann::json::object();
    double grand_total = 0.0;
    std::size_t configs = 0;
    nlohmann::json best = nlohmann::json::object();
    double best_total = 0.0;
    for (const auto method : options.rq3_methods) {
        const auto mname = method_name(method);
        TextTable example({"Classifier", "Accuracy", "SD", "Hamming Loss", "Exact Match"});
        TextTable label({"Classifier", "Micro P", "Micro R", "Micro F1", "Macro P", "Macro R", "Macro F1"});
        nlohmann::json rows = nlohmann::json::array();
        std::string best_name;
        double best_accuracy = -1.0;
        for (const auto &preset : options.rq3_classifiers) {
            const MultiLabelSpec spec{method, make_trainer(learner_preset(preset)), options.chain_order};
            const auto result = run_cv(mld, spec, plan);
            const auto name = learner_display_name(preset);
            const auto acc = result.mean("accuracy");
            nlohmann::json row = {{"classifier", preset}, {"display_name", name}};
            for (const char *metric : {"accuracy", "hamming_loss", "exact_match", "micro_precision", "micro_recall",
                                       "micro_f1", "macro_precision", "macro_recall", "macro_f1"}) {
                row[metric] = number_or_null(result.mean(metric));
            }
            row["accuracy_stddev"] = number_or_null(summary_stddev(result, "accuracy"));
            row["cv"] = result.to_json(options.include_folds);
            rows.push_back(std::move(row));
            example.add_row({name, percent(acc), percent(summary_stddev(result, "accuracy")),
                             fixed(result.mean("hamming_loss")),
                             percent(result.mean("exact_match"))});
            label.add_row({name, percent(result.mean("micro_precision")),
                           percent(result.mean("micro_recall")),
                           percent(result.mean("micro_f1")),
                           percent(result.mean("macro_precision")),
                           percent(result.mean("macro_recall")),
                           percent(result.mean("macro_f1"))});
            grand_total += acc;
            ++configs;
            if (acc > best_accuracy) {
                best_accuracy = acc;
                best_name = preset;
            }
        }
        methods[mname] = std::move(rows);
        best[mname] = {{"classifier", best_name}, {"accuracy", best_accuracy}};
        best_total += best_accuracy;
        const std::string title = method == MultiLabelMethod::cc   ? "Classifier chains"
                                  : method == MultiLabelMethod::lp ? "Label combination (label powerset)"
                                                                   : "Binary relevance";
        report.text += title + ", example-based metrics\n\n" + example.str() + "\n" + title +
                       ", label-based metrics\n\n" + label.str() + "\n";
    }
    j["methods"] = std::move(methods);
    const double mean_all = grand_total / static_cast<double>(configs);
    const double mean_best = best_total / static_cast<double>(options.rq3_methods.size());
    j["aggregate"] = {{"mean_accuracy_all_configurations", mean_all},
                      {"best_per_method", best},
                      {"mean_accuracy_best_per_method", mean_best}};
    report.text += "Mean accuracy over all " + std::to_string(configs) + " configurations: " + percent(mean_all) +
                   "\nMean accuracy of the best configuration per method: " + percent(mean_best) + "\n";
    report.text += "Means over " + std::to_string(plan.k * plan.repetitions) + " folds (" +
                   std::to_string(plan.repetitions) + " x " + std::to_string(plan.k) +
                   "-fold CV stratified by label set, seed " + std::to_string(plan.seed) + ").\n";
    return report;
}

void write_report(const ExperimentReport &report, const std::filesystem::path &dir) {
    std::filesystem::create_directories(dir);
    write_text_file(dir / (report.name + ".json"), report.json.dump(2) + "\n");
    write_text_file(dir / (report.name + ".txt"), report.text);
}

} // namespace csd
