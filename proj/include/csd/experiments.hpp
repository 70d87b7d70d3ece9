#pragma once

#include "csd/cv.hpp"
#include "csd/dataset.hpp"
#include "csd/multilabel.hpp"

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

namespace csd {

struct ExperimentOptions {
    /// k, repetitions, seed and threads. Stratification is chosen per experiment.
    CvPlan plan;
    std::vector<std::string> rq2_classifiers = {"brf", "rf", "bj48u", "bj48p", "j48u"};
    std::vector<std::string> rq3_classifiers = {"j48p", "rf", "bj48p", "bj48u", "brf"};
    std::vector<MultiLabelMethod> rq3_methods = {MultiLabelMethod::cc, MultiLabelMethod::lp};
    std::vector<std::size_t> chain_order;
    /// Keep the per-fold metric log in the JSON report.
    bool include_folds = true;
};

struct ExperimentReport {
    std::string name;
    nlohmann::json json;
    std::string text;
};

/// Disparity census: merges each dataset with the other, counts instances and
/// conflicting smelly rows. `lm` and `fe` must be single-label with equal features.
ExperimentReport run_rq1(const TabularDataset &lm, const TabularDataset &fe);

/// Repeated CV of the single-label classifiers on the merged datasets after
/// disparity removal.
ExperimentReport run_rq2(const TabularDataset &lm, const TabularDataset &fe, const ExperimentOptions &options = {});

/// Builds the multilabel dataset, reports its statistics and cross-validates
/// every (method, base classifier) pair with label-set stratification.
ExperimentReport run_rq3(const TabularDataset &lm, const TabularDataset &fe, const ExperimentOptions &options = {});

/// Writes <dir>/<name>.json and <dir>/<name>.txt, creating dir if needed.
void write_report(const ExperimentReport &report, const std::filesystem::path &dir);

} // namespace csd
