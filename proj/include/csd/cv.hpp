#pragma once

#include "csd/classifier.hpp"
#include "csd/dataset.hpp"
#include "csd/multilabel.hpp"

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

namespace csd {

enum class Stratification { by_class, by_labelset };

struct CvPlan {
    std::size_t k = 10;
    std::size_t repetitions = 10;
    std::uint64_t seed = 1;
    Stratification stratification = Stratification::by_class;
    /// Worker threads for the (repetition, fold) tasks; 0 uses every core.
    std::size_t threads = 0;
    /// Also score each model on its own training fold ("train_" metrics).
    bool score_training = false;
};

/// fold[r][i]: the test fold of instance i in repetition r. Within each
/// stratum (ascending stratum id) instances are shuffled and dealt to folds
/// round-robin; the dealing position carries over between strata.
/// Throws ConfigError when k < 2 or n < k.
std::vector<std::vector<std::size_t>> make_folds(std::size_t n, std::span<const int> strata, const CvPlan &plan);

struct FoldRecord {
    std::size_t repetition = 0;
    std::size_t fold = 0;
    std::size_t n_train = 0;
    std::size_t n_test = 0;
    std::map<std::string, double> metrics;
};

struct MetricSummary {
    double mean = 0.0;
    /// Sample standard deviation over the folds where the metric is defined.
    double stddev = 0.0;
    std::size_t count = 0;
};

struct ExperimentResult {
    /// "binary" or "multilabel".
    std::string task;
    std::vector<FoldRecord> folds;
    std::map<std::string, MetricSummary> summary;
    nlohmann::json config;

    [[nodiscard]] double mean(const std::string &metric) const;
    [[nodiscard]] nlohmann::json to_json(bool include_folds = true) const;
};

/// Single-label CV on label column 0 of `d`; per-fold binary metrics.
ExperimentResult run_cv(const TabularDataset &d, const BaseTrainer &trainer, const CvPlan &plan);
ExperimentResult run_cv(const TabularDataset &d, const LearnerSpec &spec, const CvPlan &plan);

struct MultiLabelSpec {
    MultiLabelMethod method = MultiLabelMethod::cc;
    BaseTrainer trainer;
    std::vector<std::size_t> chain_order;
};

/// Multilabel CV; per-fold example-based and label-based metrics.
ExperimentResult run_cv(const MultiLabelDataset &m, const MultiLabelSpec &spec, const CvPlan &plan);

/// Recomputes the summary from the fold log.
std::map<std::string, MetricSummary> summarize(const std::vector<FoldRecord> &folds);

} // namespace csd
