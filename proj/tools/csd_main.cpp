// Command-line front end. Exit codes: 0 success, 1 data error, 2 configuration error.

#include "csd/cv.hpp"
#include "csd/dataset_ops.hpp"
#include "csd/error.hpp"
#include "csd/experiments.hpp"
#include "csd/io.hpp"
#include "csd/mld_stats.hpp"
#include "csd/report.hpp"
#include "csd/synthetic.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <iostream>
#include <map>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

struct LoadFlags {
    std::vector<std::string> labels;
    std::string positive_value;
};

struct PlanFlags {
    std::size_t k = 10;
    std::size_t reps = 10;
    std::uint64_t seed = 1;
    std::size_t threads = 0;
    std::vector<std::size_t> chain_order;
};

void add_load_flags(CLI::App *cmd, LoadFlags &f) {
    cmd->add_option("--labels", f.labels, "Label columns to read (default: nominal ARFF attributes)")
        ->delimiter(',');
    cmd->add_option("--positive-value", f.positive_value, "Nominal value that marks a positive label");
}

void add_plan_flags(CLI::App *cmd, PlanFlags &f) {
    cmd->add_option("--k", f.k, "Number of folds")->capture_default_str();
    cmd->add_option("--reps", f.reps, "Repetitions of the k-fold split")->capture_default_str();
    cmd->add_option("--seed", f.seed, "Random seed")->capture_default_str();
    cmd->add_option("--threads", f.threads, "Worker threads (0 = all cores)")->capture_default_str();
    cmd->add_option("--chain-order", f.chain_order, "Classifier-chain label order, e.g. 1,0")->delimiter(',');
}

csd::CvPlan to_plan(const PlanFlags &f) {
    csd::CvPlan plan;
    plan.k = f.k;
    plan.repetitions = f.reps;
    plan.seed = f.seed;
    plan.threads = f.threads;
    return plan;
}

csd::TabularDataset load(const std::string &path, const LoadFlags &f) {
    csd::ParseOptions options;
    options.name = fs::path(path).stem().string();
    if (!f.positive_value.empty()) {
        options.positive_value = f.positive_value;
    }
    if (!f.labels.empty()) {
        const auto columns = csd::column_names(path);
        for (const auto &l : f.labels) {
            if (std::find(columns.begin(), columns.end(), l) != columns.end()) {
                options.label_names.push_back(l);
            }
        }
        if (options.label_names.empty()) {
            throw csd::SchemaError("'" + path + "' has none of the requested label columns");
        }
    } else if (fs::path(path).extension() == ".csv") {
        throw csd::ConfigError("CSV input '" + path + "' needs --labels");
    }
    return csd::load_dataset(path, options);
}

/// key = value lines; '#' starts a comment.
std::map<std::string, std::string> read_config(const std::string &path) {
    std::map<std::string, std::string> out;
    std::string text;
    try {
        text = csd::read_text_file(path);
    } catch (const csd::Error &e) {
        throw csd::ConfigError(e.what());
    }
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        auto end = text.find('\n', start);
        if (end == std::string::npos) {
            end = text.size();
        }
        std::string line = text.substr(start, end - start);
        start = end + 1;
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) {
            line.erase(hash);
        }
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw csd::ConfigError(path + ":" + std::to_string(line_no) + ": expected key = value");
        }
        auto strip = [](std::string s) {
            const auto a = s.find_first_not_of(" \t\r");
            const auto b = s.find_last_not_of(" \t\r");
            return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
        };
        const auto key = strip(line.substr(0, eq));
        if (key.empty()) {
            throw csd::ConfigError(path + ":" + std::to_string(line_no) + ": empty key");
        }
        out[key] = strip(line.substr(eq + 1));
    }
    return out;
}

/// Fills options the command line left unset. Keys may use '-' or '_'.
void apply_config(CLI::App &app, CLI::App *cmd, const std::map<std::string, std::string> &config) {
    for (const auto &[raw_key, value] : config) {
        auto key = raw_key;
        std::replace(key.begin(), key.end(), '_', '-');
        bool known = false;
        for (const auto *sub : app.get_subcommands({})) {
            known = known || sub->get_option_no_throw("--" + key) != nullptr;
        }
        if (!known) {
            throw csd::ConfigError("unknown configuration key '" + raw_key + "'");
        }
        auto *opt = cmd->get_option_no_throw("--" + key);
        if (opt == nullptr || opt->count() > 0) {
            continue;
        }
        try {
            if (opt->get_delimiter() != '\0') {
                std::size_t pos = 0;
                while (pos <= value.size()) {
                    auto end = value.find(opt->get_delimiter(), pos);
                    if (end == std::string::npos) {
                        end = value.size();
                    }
                    opt->add_result(value.substr(pos, end - pos));
                    pos = end + 1;
                }
            } else {
                opt->add_result(value);
            }
            opt->run_callback();
        } catch (const CLI::Error &e) {
            throw csd::ConfigError("configuration key '" + raw_key + "': " + e.what());
        }
    }
}

void print_stats(const csd::MldStatistics &s) {
    csd::TextTable t({"Instances", "Features", "Labels", "Label sets", "Cardinality", "Density", "MeanIR"});
    t.add_row({std::to_string(s.n_instances), std::to_string(s.n_features), std::to_string(s.n_labels),
               std::to_string(s.n_label_sets), csd::fixed(s.cardinality), csd::fixed(s.density),
               csd::fixed(s.mean_ir)});
    std::cout << t.str() << "\n";
    csd::TextTable labels({"Label", "Positives", "IRLbl"});
    for (std::size_t l = 0; l < s.n_labels; ++l) {
        labels.add_row({s.label_names[l], std::to_string(s.label_counts[l]), csd::fixed(s.irlbl[l])});
    }
    std::cout << labels.str() << "\n";
    csd::TextTable sets({"Label set", "Instances"});
    for (auto it = s.label_set_counts.rbegin(); it != s.label_set_counts.rend(); ++it) {
        sets.add_row({it->first, std::to_string(it->second)});
    }
    std::cout << sets.str() << (csd::is_imbalanced(s) ? "Imbalanced (MeanIR > 1.5)\n" : "Balanced (MeanIR <= 1.5)\n");
}

nlohmann::json disparity_json(const csd::DisparityReport &r) {
    nlohmann::json groups = nlohmann::json::array();
    for (const auto &g : r.groups) {
        groups.push_back({{"rows", g.rows}, {"labels", g.labels}});
    }
    return {{"groups", std::move(groups)},
            {"total_conflicting_rows", r.total_conflicting_rows},
            {"positive_conflicting_rows", r.positive_conflicting_rows}};
}

void print_summary(const csd::ExperimentResult &r) {
    csd::TextTable t({"Metric", "Mean", "SD", "Folds"});
    for (const auto &[name, s] : r.summary) {
        t.add_row({name, csd::fixed(s.mean, 4), csd::fixed(s.stddev, 4), std::to_string(s.count)});
    }
    std::cout << t.str();
}

int run(int argc, char **argv) {
    CLI::App app{"Code smell datasets: disparity, multilabel construction and evaluation"};
    app.require_subcommand(1);
    std::string config_path;
    app.add_option("--config", config_path, "key = value file; command-line flags take precedence");

    LoadFlags load_flags;
    PlanFlags plan_flags;
    std::string input_a;
    std::string input_b;
    std::string output;
    bool as_json = false;

    auto *stats = app.add_subcommand("stats", "Multilabel dataset statistics");
    stats->add_option("mld", input_a, "Dataset file (ARFF or CSV)")->required()->check(CLI::ExistingFile);
    add_load_flags(stats, load_flags);
    stats->add_flag("--json", as_json, "Print JSON instead of tables");

    auto *build = app.add_subcommand("build-mld", "Build a two-label dataset from two single-label datasets");
    build->add_option("a", input_a)->required()->check(CLI::ExistingFile);
    build->add_option("b", input_b)->required()->check(CLI::ExistingFile);
    build->add_option("-o,--output", output, "Output file (.arff or .csv)")->required();
    add_load_flags(build, load_flags);

    auto *detect = app.add_subcommand("detect-disparity", "List feature vectors with conflicting labels");
    detect->add_option("dataset", input_a)->required()->check(CLI::ExistingFile);
    add_load_flags(detect, load_flags);
    detect->add_flag("--json", as_json, "Print JSON instead of a summary");

    auto *remove = app.add_subcommand("remove-disparity", "Drop the non-smelly side of every conflict");
    remove->add_option("dataset", input_a)->required()->check(CLI::ExistingFile);
    remove->add_option("-o,--output", output)->required();
    add_load_flags(remove, load_flags);

    auto *merge = app.add_subcommand("merge", "Merge b into a, keeping a's label");
    merge->add_option("a", input_a)->required()->check(CLI::ExistingFile);
    merge->add_option("b", input_b)->required()->check(CLI::ExistingFile);
    merge->add_option("-o,--output", output)->required();
    add_load_flags(merge, load_flags);

    std::string method = "cc";
    std::string base = "rf";
    bool with_folds = false;
    auto *cv = app.add_subcommand("cv", "Repeated stratified cross-validation");
    cv->add_option("--dataset", input_a)->required()->check(CLI::ExistingFile);
    cv->add_option("--method", method, "br, cc, lp (alias lc) or single")->capture_default_str();
    cv->add_option("--base", base, "j48p, j48u, bj48p, bj48u, rf or brf")->capture_default_str();
    cv->add_option("-o,--output", output, "JSON report file");
    cv->add_flag("--folds", with_folds, "Include the per-fold log in the JSON report");
    add_load_flags(cv, load_flags);
    add_plan_flags(cv, plan_flags);

    std::string out_dir = ".";
    std::vector<CLI::App *> rq_cmds;
    for (const char *name : {"rq1", "rq2", "rq3"}) {
        auto *cmd = app.add_subcommand(name, std::string("Run experiment ") + name);
        cmd->add_option("--lm", input_a, "Long-method dataset")->required()->check(CLI::ExistingFile);
        cmd->add_option("--fe", input_b, "Feature-envy dataset")->required()->check(CLI::ExistingFile);
        cmd->add_option("--out-dir", out_dir, "Directory for <name>.json and <name>.txt")->capture_default_str();
        add_load_flags(cmd, load_flags);
        if (std::string(name) != "rq1") {
            add_plan_flags(cmd, plan_flags);
        }
        rq_cmds.push_back(cmd);
    }

    csd::SyntheticOptions synth_options;
    std::string synth_format = "arff";
    auto *synth = app.add_subcommand("synth", "Write the synthetic long-method and feature-envy datasets");
    synth->add_option("--out-dir", out_dir)->capture_default_str();
    synth->add_option("--seed", synth_options.seed)->capture_default_str();
    synth->add_option("--separation", synth_options.separation)->capture_default_str();
    synth->add_option("--format", synth_format)->check(CLI::IsMember({"arff", "csv"}))->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    CLI::App *cmd = app.get_subcommands().front();
    if (!config_path.empty()) {
        apply_config(app, cmd, read_config(config_path));
    }

    if (cmd == stats) {
        const auto s = csd::compute_stats(csd::to_multilabel(load(input_a, load_flags)));
        if (as_json) {
            std::cout << csd::to_json(s).dump(2) << "\n";
        } else {
            print_stats(s);
        }
    } else if (cmd == build) {
        const auto m = csd::build_multilabel(load(input_a, load_flags), load(input_b, load_flags));
        csd::save_dataset(output, m.to_tabular());
        std::cout << "wrote " << output << " (" << m.n_instances() << " instances, " << m.n_labels() << " labels)\n";
    } else if (cmd == detect) {
        const auto r = csd::detect_disparity(load(input_a, load_flags));
        if (as_json) {
            std::cout << disparity_json(r).dump(2) << "\n";
        } else {
            std::cout << "disparity groups: " << r.groups.size() << "\n"
                      << "conflicting rows: " << r.total_conflicting_rows << "\n"
                      << "conflicting smelly rows: " << r.positive_conflicting_rows << "\n";
        }
    } else if (cmd == remove) {
        const auto d = csd::remove_disparity(load(input_a, load_flags));
        csd::save_dataset(output, d);
        std::cout << "wrote " << output << " (" << d.n_instances() << " instances, " << d.positives(0)
                  << " smelly)\n";
    } else if (cmd == merge) {
        const auto d = csd::merge_single_label(load(input_a, load_flags), load(input_b, load_flags));
        csd::save_dataset(output, d);
        std::cout << "wrote " << output << " (" << d.n_instances() << " instances, " << d.positives(0)
                  << " smelly)\n";
    } else if (cmd == cv) {
        const auto d = load(input_a, load_flags);
        auto plan = to_plan(plan_flags);
        const auto spec = csd::learner_preset(base);
        csd::ExperimentResult result;
        if (method == "single") {
            plan.stratification = csd::Stratification::by_class;
            result = csd::run_cv(d, spec, plan);
        } else {
            plan.stratification = csd::Stratification::by_labelset;
            const csd::MultiLabelSpec ml{csd::parse_method(method), csd::make_trainer(spec), plan_flags.chain_order};
            result = csd::run_cv(csd::to_multilabel(d), ml, plan);
        }
        result.config["base"] = base;
        print_summary(result);
        if (!output.empty()) {
            csd::write_text_file(output, result.to_json(with_folds).dump(2) + "\n");
        }
    } else if (cmd == synth) {
        const auto pair = csd::generate_reference_datasets(synth_options);
        const std::string ext = "." + synth_format;
        csd::save_dataset(fs::path(out_dir) / ("long-method" + ext), pair.long_method);
        csd::save_dataset(fs::path(out_dir) / ("feature-envy" + ext), pair.feature_envy);
        std::cout << "wrote long-method" << ext << " and feature-envy" << ext << " to " << out_dir << "\n";
    } else {
        const auto lm = load(input_a, load_flags);
        const auto fe = load(input_b, load_flags);
        csd::ExperimentOptions options;
        options.plan = to_plan(plan_flags);
        options.chain_order = plan_flags.chain_order;
        csd::ExperimentReport report;
        if (cmd == rq_cmds[0]) {
            report = csd::run_rq1(lm, fe);
        } else if (cmd == rq_cmds[1]) {
            report = csd::run_rq2(lm, fe, options);
        } else {
            report = csd::run_rq3(lm, fe, options);
        }
        csd::write_report(report, out_dir);
        std::cout << report.text;
    }
    return 0;
}

} // namespace

int main(int argc, char **argv) {
    try {
        return run(argc, argv);
    } catch (const csd::ConfigError &e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
