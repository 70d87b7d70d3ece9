#pragma once

#include "csd/classifier.hpp"
#include "csd/dataset.hpp"

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

namespace csd {

enum class MultiLabelMethod { br, cc, lp };

MultiLabelMethod parse_method(const std::string &name);
std::string method_name(MultiLabelMethod m);

/// Trains one single-label model. The multilabel transformations only see
/// learners through this signature, which lets tests substitute recording doubles.
using BaseTrainer = std::function<ClassifierModel(const ClassProblem &, std::uint64_t seed)>;

BaseTrainer make_trainer(LearnerSpec spec);

class MultiLabelModel {
  public:
    MultiLabelModel() = default;
    MultiLabelModel(MultiLabelMethod method, std::vector<std::string> label_names, std::size_t n_features,
                    std::vector<ClassifierModel> members, std::vector<std::size_t> chain_order,
                    std::vector<std::string> lp_classes);

    [[nodiscard]] MultiLabelMethod method() const noexcept { return method_; }
    [[nodiscard]] std::size_t n_labels() const noexcept { return label_names_.size(); }
    [[nodiscard]] std::size_t n_features() const noexcept { return n_features_; }
    [[nodiscard]] const std::vector<std::string> &label_names() const noexcept { return label_names_; }
    /// BR: one per label. CC: one per chain position. LP: exactly one.
    [[nodiscard]] const std::vector<ClassifierModel> &members() const noexcept { return members_; }
    /// CC only: label index trained at each chain position.
    [[nodiscard]] const std::vector<std::size_t> &chain_order() const noexcept { return chain_order_; }
    /// LP only: label-set bit string of each class index, sorted.
    [[nodiscard]] const std::vector<std::string> &lp_classes() const noexcept { return lp_classes_; }

    /// Throws SchemaError when x has the wrong dimension.
    [[nodiscard]] LabelSet predict_labels(std::span<const double> x) const;

    [[nodiscard]] nlohmann::json to_json() const;
    static MultiLabelModel from_json(const nlohmann::json &j);

  private:
    MultiLabelMethod method_ = MultiLabelMethod::br;
    std::vector<std::string> label_names_;
    std::size_t n_features_ = 0;
    std::vector<ClassifierModel> members_;
    std::vector<std::size_t> chain_order_;
    std::vector<std::string> lp_classes_;
};

/// Binary relevance: member l is trained on (features, label l) with seed + l.
MultiLabelModel train_br(const MultiLabelDataset &m, const BaseTrainer &base, std::uint64_t seed);

/// Classifier chain. Member k is trained on the features plus the true values
/// of labels order[0..k), and predicts with the chain's own earlier predictions.
/// An empty order means dataset label order. Throws SchemaError for a bad permutation.
MultiLabelModel train_cc(const MultiLabelDataset &m, const BaseTrainer &base, std::vector<std::size_t> order,
                         std::uint64_t seed);

/// Label powerset: every distinct label row is one class of a single model.
MultiLabelModel train_lp(const MultiLabelDataset &m, const BaseTrainer &base, std::uint64_t seed);

MultiLabelModel train_multilabel(const MultiLabelDataset &m, MultiLabelMethod method, const BaseTrainer &base,
                                 std::uint64_t seed, std::vector<std::size_t> chain_order = {});

} // namespace csd
