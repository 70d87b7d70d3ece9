#pragma once

#include "csd/tree.hpp"

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

namespace csd {

struct LearnerSpec;

enum class EnsembleKind { bagging, random_forest };

struct EnsembleParams {
    EnsembleKind kind = EnsembleKind::bagging;
    std::size_t n_members = 10;
    /// Bagging: the learner trained on every bootstrap sample.
    std::shared_ptr<const LearnerSpec> base;
    /// Random forest: parameters of each member tree (always grown unpruned).
    TreeParams tree{.pruned = false, .min_instances = 1};
    /// Random forest: features drawn per node; 0 means floor(log2 F) + 1.
    std::size_t features_per_split = 0;
    /// Test hook: train every member on the full sample.
    bool bootstrap = true;
};

/// What to train: a single tree or an ensemble.
struct LearnerSpec {
    std::variant<TreeParams, EnsembleParams> params;

    static LearnerSpec tree(TreeParams p) { return {p}; }
    static LearnerSpec bagging(LearnerSpec base, std::size_t members = 10);
    static LearnerSpec random_forest(std::size_t trees = 100, std::size_t features_per_split = 0);
};

/// Named configurations used in the experiments:
/// j48p, j48u, bj48p, bj48u, rf, brf. Throws ConfigError for other names.
LearnerSpec learner_preset(const std::string &name);
/// Human-readable name of a preset ("B-J48 Pruned", ...).
std::string learner_display_name(const std::string &preset);

/// A trained single-label classifier: a tree or an averaging ensemble.
class ClassifierModel {
  public:
    struct Ensemble {
        EnsembleKind kind = EnsembleKind::bagging;
        std::vector<ClassifierModel> members;
        friend bool operator==(const Ensemble &, const Ensemble &) = default;
    };

    ClassifierModel() = default;
    explicit ClassifierModel(TreeModel tree);
    ClassifierModel(EnsembleKind kind, std::vector<ClassifierModel> members);

    [[nodiscard]] int n_classes() const noexcept { return n_classes_; }
    [[nodiscard]] std::size_t n_features() const noexcept { return n_features_; }
    [[nodiscard]] bool is_tree() const noexcept { return std::holds_alternative<TreeModel>(impl_); }
    [[nodiscard]] const TreeModel &tree() const { return std::get<TreeModel>(impl_); }
    [[nodiscard]] const Ensemble &ensemble() const { return std::get<Ensemble>(impl_); }

    /// Class distribution; ensembles average their members' distributions.
    /// Throws SchemaError when x has the wrong dimension.
    [[nodiscard]] std::vector<double> predict_proba(std::span<const double> x) const;
    /// Most probable class, lowest index on ties.
    [[nodiscard]] int predict(std::span<const double> x) const;

    /// Versioned JSON ({"format": "csd.classifier", "version": 1, ...}).
    [[nodiscard]] nlohmann::json to_json() const;
    static ClassifierModel from_json(const nlohmann::json &j);

    friend bool operator==(const ClassifierModel &, const ClassifierModel &) = default;

  private:
    [[nodiscard]] nlohmann::json body_json() const;
    static ClassifierModel from_body(const nlohmann::json &j);
    void accumulate(std::span<const double> x, std::vector<double> &sum) const;

    std::variant<TreeModel, Ensemble> impl_;
    int n_classes_ = 0;
    std::size_t n_features_ = 0;
};

/// Trains `spec` on every row of the problem. Ensemble member i draws its
/// randomness from seed + i, so results do not depend on scheduling.
ClassifierModel train_classifier(const ClassProblem &problem, const LearnerSpec &spec, std::uint64_t seed);
ClassifierModel train_classifier(const ClassProblem &problem, std::span<const std::size_t> rows,
                                 const LearnerSpec &spec, std::uint64_t seed);

} // namespace csd
