#pragma once

#include "csd/dataset.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <json.hpp>

namespace csd {

/// Training view: feature matrix plus one class index per row, in [0, n_classes).
struct ClassProblem {
    const FeatureMatrix &x;
    std::span<const int> y;
    int n_classes = 2;
};

struct TreeParams {
    bool pruned = true;
    /// Confidence factor of the pessimistic error estimate.
    double confidence = 0.25;
    std::size_t min_instances = 2;
    bool subtree_raising = true;
    /// Features examined per node; 0 examines all of them. Random forests set this.
    std::size_t random_features = 0;
};

struct TreeNode {
    /// -1 for a leaf.
    std::int32_t feature = -1;
    /// Rows with value <= threshold go left.
    double threshold = 0.0;
    std::int32_t left = -1;
    std::int32_t right = -1;
    /// Training class counts that reached the node.
    std::vector<std::uint32_t> counts;

    [[nodiscard]] bool is_leaf() const noexcept { return feature < 0; }

    friend bool operator==(const TreeNode &, const TreeNode &) = default;
};

class TreeModel {
  public:
    TreeModel() = default;
    TreeModel(int n_classes, std::size_t n_features, std::vector<TreeNode> nodes);

    [[nodiscard]] int n_classes() const noexcept { return n_classes_; }
    [[nodiscard]] std::size_t n_features() const noexcept { return n_features_; }
    [[nodiscard]] const std::vector<TreeNode> &nodes() const noexcept { return nodes_; }
    [[nodiscard]] const TreeNode &root() const { return nodes_.front(); }

    [[nodiscard]] std::size_t node_count() const noexcept { return nodes_.size(); }
    [[nodiscard]] std::size_t leaf_count() const noexcept;
    [[nodiscard]] std::size_t depth() const;

    /// Index of the leaf reached by x. Does not check the dimension.
    [[nodiscard]] std::size_t leaf_for(std::span<const double> x) const;
    /// Laplace-smoothed leaf distribution: (count + 1) / (total + n_classes).
    [[nodiscard]] std::vector<double> predict_proba(std::span<const double> x) const;
    [[nodiscard]] int predict(std::span<const double> x) const;

    [[nodiscard]] nlohmann::json to_json() const;
    static TreeModel from_json(const nlohmann::json &j);

    friend bool operator==(const TreeModel &, const TreeModel &) = default;

  private:
    int n_classes_ = 0;
    std::size_t n_features_ = 0;
    std::vector<TreeNode> nodes_;
};

/// Dense per-feature ranks of a matrix's rows: equal values share a rank and
/// ranks follow value order. Computed once and shared by the trees of an ensemble.
class FeatureRanks {
  public:
    explicit FeatureRanks(const FeatureMatrix &x);

    [[nodiscard]] std::uint32_t rank(std::size_t feature, std::size_t row) const { return ranks_[feature][row]; }
    /// The value holding `rank` in `feature`.
    [[nodiscard]] double value(std::size_t feature, std::uint32_t rank) const { return values_[feature][rank]; }
    [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
    [[nodiscard]] std::size_t cols() const noexcept { return ranks_.size(); }

  private:
    std::size_t rows_ = 0;
    std::vector<std::vector<std::uint32_t>> ranks_;
    std::vector<std::vector<double>> values_;
};

/// C4.5-style induction with binary threshold splits chosen by gain ratio.
/// Throws EmptyDataError on an empty problem.
TreeModel train_tree(const ClassProblem &problem, const TreeParams &params = {}, std::uint64_t seed = 0);

/// Same, restricted to `rows` (repetitions allowed, as in a bootstrap sample).
TreeModel train_tree(const ClassProblem &problem, std::span<const std::size_t> rows, const TreeParams &params,
                     std::uint64_t seed = 0);

/// Same, reusing ranks precomputed for problem.x.
TreeModel train_tree(const ClassProblem &problem, std::span<const std::size_t> rows, const TreeParams &params,
                     std::uint64_t seed, const FeatureRanks &ranks);

/// Upper confidence bound on the number of errors among `n` instances with
/// `e` observed errors, minus `e` (C4.5's added errors).
double added_errors(double n, double e, double confidence);

namespace detail {
/// Index of the largest probability, lowest index on ties.
int argmax(std::span<const double> p);
} // namespace detail

} // namespace csd
