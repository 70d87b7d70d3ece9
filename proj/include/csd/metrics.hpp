#pragma once

#include "csd/dataset.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include <json.hpp>

namespace csd {

/// Instance-averaged multilabel metrics.
struct ExampleBasedReport {
    /// Mean Jaccard index |Y & Z| / |Y | Z|; an empty prediction of an empty truth scores 1.
    double accuracy = 0.0;
    /// Mean |Y xor Z| / L.
    double hamming_loss = 0.0;
    /// Fraction of instances with Y == Z.
    double exact_match = 0.0;
    std::size_t n_instances = 0;
    std::size_t n_labels = 0;
};

struct Confusion {
    std::size_t tp = 0;
    std::size_t fp = 0;
    std::size_t fn = 0;
    std::size_t tn = 0;

    [[nodiscard]] double precision() const noexcept;
    [[nodiscard]] double recall() const noexcept;
    [[nodiscard]] double f1() const noexcept;
    friend bool operator==(const Confusion &, const Confusion &) = default;
};

/// Label-averaged metrics; a zero denominator gives 0.
struct LabelBasedReport {
    double micro_precision = 0.0;
    double micro_recall = 0.0;
    double micro_f1 = 0.0;
    double macro_precision = 0.0;
    double macro_recall = 0.0;
    double macro_f1 = 0.0;
    std::vector<Confusion> per_label;
};

struct BinaryReport {
    double accuracy = 0.0;
    double precision = 0.0;
    double recall = 0.0;
    /// F1 of the positive (smelly) class.
    double f_measure = 0.0;
    /// Class-frequency weighted mean of both classes' F1.
    double f_measure_weighted = 0.0;
    /// Absent when the truth contains a single class.
    std::optional<double> roc_area;
    Confusion confusion;
};

/// Throws SchemaError on length mismatch, empty input or mixed label widths.
ExampleBasedReport example_based(std::span<const LabelSet> predicted, std::span<const LabelSet> truth);
LabelBasedReport label_based(std::span<const LabelSet> predicted, std::span<const LabelSet> truth);

/// `scores` are probabilities of class 1; classes are 0/1.
BinaryReport binary_metrics(std::span<const double> scores, std::span<const int> predicted,
                            std::span<const int> truth);

/// Mann-Whitney statistic via mid-ranks: P(score+ > score-) + 0.5 P(tie).
std::optional<double> roc_area(std::span<const double> scores, std::span<const int> truth);

nlohmann::json to_json(const ExampleBasedReport &r);
nlohmann::json to_json(const LabelBasedReport &r);
nlohmann::json to_json(const BinaryReport &r);

} // namespace csd
