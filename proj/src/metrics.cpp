#include "csd/metrics.hpp"

#include "csd/error.hpp"

#include <algorithm>
#include <numeric>

namespace csd {

namespace {

double ratio(double num, double den) { return den > 0.0 ? num / den : 0.0; }

double harmonic(double p, double r) { return p + r > 0.0 ? 2.0 * p * r / (p + r) : 0.0; }

std::size_t check_pairs(std::span<const LabelSet> predicted, std::span<const LabelSet> truth) {
    if (predicted.size() != truth.size()) {
        throw SchemaError("predicted and true label lists differ in length");
    }
    if (truth.empty()) {
        throw SchemaError("cannot evaluate an empty prediction list");
    }
    const auto l = truth.front().size();
    for (std::size_t i = 0; i < truth.size(); ++i) {
        if (truth[i].size() != l || predicted[i].size() != l) {
            throw SchemaError("label sets of different widths");
        }
    }
    if (l == 0) {
        throw SchemaError("label sets must have at least one label");
    }
    return l;
}

} // namespace

double Confusion::precision() const noexcept { return ratio(static_cast<double>(tp), static_cast<double>(tp + fp)); }
double Confusion::recall() const noexcept { return ratio(static_cast<double>(tp), static_cast<double>(tp + fn)); }
double Confusion::f1() const noexcept { return harmonic(precision(), recall()); }

ExampleBasedReport example_based(std::span<const LabelSet> predicted, std::span<const LabelSet> truth) {
    const auto l = check_pairs(predicted, truth);
    double jaccard = 0.0;
    double hamming = 0.0;
    std::size_t exact = 0;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        std::size_t inter = 0;
        std::size_t uni = 0;
        for (std::size_t j = 0; j < l; ++j) {
            const bool y = predicted[i][j];
            const bool z = truth[i][j];
            inter += (y && z) ? 1 : 0;
            uni += (y || z) ? 1 : 0;
        }
        jaccard += uni == 0 ? 1.0 : static_cast<double>(inter) / static_cast<double>(uni);
        hamming += static_cast<double>(uni - inter) / static_cast<double>(l);
        exact += predicted[i] == truth[i] ? 1 : 0;
    }
    const auto n = static_cast<double>(truth.size());
    return {jaccard / n, hamming / n, static_cast<double>(exact) / n, truth.size(), l};
}

LabelBasedReport label_based(std::span<const LabelSet> predicted, std::span<const LabelSet> truth) {
    const auto l = check_pairs(predicted, truth);
    LabelBasedReport r;
    r.per_label.resize(l);
    for (std::size_t i = 0; i < truth.size(); ++i) {
        for (std::size_t j = 0; j < l; ++j) {
            auto &c = r.per_label[j];
            const bool y = predicted[i][j];
            const bool z = truth[i][j];
            if (y && z) {
                ++c.tp;
            } else if (y) {
                ++c.fp;
            } else if (z) {
                ++c.fn;
            } else {
                ++c.tn;
            }
        }
    }
    Confusion pooled;
    for (const auto &c : r.per_label) {
        pooled.tp += c.tp;
        pooled.fp += c.fp;
        pooled.fn += c.fn;
        pooled.tn += c.tn;
        r.macro_precision += c.precision();
        r.macro_recall += c.recall();
        r.macro_f1 += c.f1();
    }
    r.macro_precision /= static_cast<double>(l);
    r.macro_recall /= static_cast<double>(l);
    r.macro_f1 /= static_cast<double>(l);
    r.micro_precision = pooled.precision();
    r.micro_recall = pooled.recall();
    r.micro_f1 = harmonic(r.micro_precision, r.micro_recall);
    return r;
}

std::optional<double> roc_area(std::span<const double> scores, std::span<const int> truth) {
    if (scores.size() != truth.size()) {
        throw SchemaError("scores and truth differ in length");
    }
    const auto n = scores.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

    double positive_rank_sum = 0.0;
    std::size_t positives = 0;
    for (std::size_t i = 0; i < n;) {
        std::size_t j = i;
        while (j < n && scores[order[j]] == scores[order[i]]) {
            ++j;
        }
        // Ranks i+1 .. j share their mean.
        const double mid_rank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
        for (std::size_t k = i; k < j; ++k) {
            if (truth[order[k]] == 1) {
                positive_rank_sum += mid_rank;
                ++positives;
            }
        }
        i = j;
    }
    const std::size_t negatives = n - positives;
    if (positives == 0 || negatives == 0) {
        return std::nullopt;
    }
    const auto p = static_cast<double>(positives);
    const auto q = static_cast<double>(negatives);
    return (positive_rank_sum - p * (p + 1.0) / 2.0) / (p * q);
}

BinaryReport binary_metrics(std::span<const double> scores, std::span<const int> predicted,
                            std::span<const int> truth) {
    if (predicted.size() != truth.size() || scores.size() != truth.size()) {
        throw SchemaError("scores, predictions and truth differ in length");
    }
    if (truth.empty()) {
        throw SchemaError("cannot evaluate an empty prediction list");
    }
    BinaryReport r;
    auto &c = r.confusion;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        const bool y = predicted[i] == 1;
        const bool z = truth[i] == 1;
        if (y && z) {
            ++c.tp;
        } else if (y) {
            ++c.fp;
        } else if (z) {
            ++c.fn;
        } else {
            ++c.tn;
        }
    }
    const auto n = static_cast<double>(truth.size());
    r.accuracy = static_cast<double>(c.tp + c.tn) / n;
    r.precision = c.precision();
    r.recall = c.recall();
    r.f_measure = c.f1();
    const Confusion negative{c.tn, c.fn, c.fp, c.tp};
    const auto pos_share = static_cast<double>(c.tp + c.fn) / n;
    r.f_measure_weighted = pos_share * r.f_measure + (1.0 - pos_share) * negative.f1();
    r.roc_area = roc_area(scores, truth);
    return r;
}

nlohmann::json to_json(const ExampleBasedReport &r) {
    return {{"accuracy", r.accuracy},
            {"hamming_loss", r.hamming_loss},
            {"exact_match", r.exact_match},
            {"n_instances", r.n_instances},
            {"n_labels", r.n_labels}};
}

nlohmann::json to_json(const LabelBasedReport &r) {
    nlohmann::json per = nlohmann::json::array();
    for (const auto &c : r.per_label) {
        per.push_back({{"tp", c.tp}, {"fp", c.fp}, {"fn", c.fn}, {"tn", c.tn}});
    }
    return {{"micro_precision", r.micro_precision}, {"micro_recall", r.micro_recall},
            {"micro_f1", r.micro_f1},               {"macro_precision", r.macro_precision},
            {"macro_recall", r.macro_recall},       {"macro_f1", r.macro_f1},
            {"per_label", std::move(per)}};
}

nlohmann::json to_json(const BinaryReport &r) {
    const auto &c = r.confusion;
    return {{"accuracy", r.accuracy},
            {"precision", r.precision},
            {"recall", r.recall},
            {"f_measure", r.f_measure},
            {"f_measure_weighted", r.f_measure_weighted},
            {"roc_area", r.roc_area ? nlohmann::json(*r.roc_area) : nlohmann::json(nullptr)},
            {"confusion", {{"tp", c.tp}, {"fp", c.fp}, {"fn", c.fn}, {"tn", c.tn}}}};
}

} // namespace csd
