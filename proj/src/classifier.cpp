#include "csd/classifier.hpp"

#include "csd/error.hpp"
#include "csd/rng.hpp"

#include <cmath>

namespace csd {

namespace {

constexpr int kModelFormatVersion = 1;

std::size_t default_features_per_split(std::size_t n_features) {
    return static_cast<std::size_t>(std::floor(std::log2(static_cast<double>(n_features)))) + 1;
}

std::vector<std::size_t> draw_rows(Rng &rng, std::span<const std::size_t> rows, bool bootstrap) {
    std::vector<std::size_t> out(rows.begin(), rows.end());
    if (bootstrap) {
        for (auto &r : out) {
            r = rows[rng.uniform_index(rows.size())];
        }
    }
    return out;
}

const char *kind_name(EnsembleKind kind) { return kind == EnsembleKind::bagging ? "bagging" : "random_forest"; }

} // namespace

LearnerSpec LearnerSpec::bagging(LearnerSpec base, std::size_t members) {
    EnsembleParams p;
    p.kind = EnsembleKind::bagging;
    p.n_members = members;
    p.base = std::make_shared<const LearnerSpec>(std::move(base));
    return {p};
}

LearnerSpec LearnerSpec::random_forest(std::size_t trees, std::size_t features_per_split) {
    EnsembleParams p;
    p.kind = EnsembleKind::random_forest;
    p.n_members = trees;
    p.features_per_split = features_per_split;
    return {p};
}

LearnerSpec learner_preset(const std::string &name) {
    const TreeParams pruned{.pruned = true};
    const TreeParams unpruned{.pruned = false};
    if (name == "j48p") {
        return LearnerSpec::tree(pruned);
    }
    if (name == "j48u") {
        return LearnerSpec::tree(unpruned);
    }
    if (name == "bj48p") {
        return LearnerSpec::bagging(LearnerSpec::tree(pruned));
    }
    if (name == "bj48u") {
        return LearnerSpec::bagging(LearnerSpec::tree(unpruned));
    }
    if (name == "rf") {
        return LearnerSpec::random_forest();
    }
    if (name == "brf") {
        return LearnerSpec::bagging(LearnerSpec::random_forest());
    }
    throw ConfigError("unknown base classifier '" + name + "' (expected j48p, j48u, bj48p, bj48u, rf or brf)");
}

std::string learner_display_name(const std::string &preset) {
    if (preset == "j48p") {
        return "J48 Pruned";
    }
    if (preset == "j48u") {
        return "J48 Unpruned";
    }
    if (preset == "bj48p") {
        return "B-J48 Pruned";
    }
    if (preset == "bj48u") {
        return "B-J48 Unpruned";
    }
    if (preset == "rf") {
        return "Random Forest";
    }
    if (preset == "brf") {
        return "B-Random Forest";
    }
    throw ConfigError("unknown base classifier '" + preset + "'");
}

ClassifierModel::ClassifierModel(TreeModel tree)
    : impl_(std::move(tree)), n_classes_(std::get<TreeModel>(impl_).n_classes()),
      n_features_(std::get<TreeModel>(impl_).n_features()) {}

ClassifierModel::ClassifierModel(EnsembleKind kind, std::vector<ClassifierModel> members) {
    if (members.empty()) {
        throw SchemaError("an ensemble needs at least one member");
    }
    n_classes_ = members.front().n_classes();
    n_features_ = members.front().n_features();
    for (const auto &m : members) {
        if (m.n_classes() != n_classes_ || m.n_features() != n_features_) {
            throw SchemaError("ensemble members disagree on classes or features");
        }
    }
    impl_ = Ensemble{kind, std::move(members)};
}

void ClassifierModel::accumulate(std::span<const double> x, std::vector<double> &sum) const {
    if (const auto *tree = std::get_if<TreeModel>(&impl_)) {
        const auto p = tree->predict_proba(x);
        for (std::size_t k = 0; k < p.size(); ++k) {
            sum[k] += p[k];
        }
        return;
    }
    const auto &members = std::get<Ensemble>(impl_).members;
    std::vector<double> inner(sum.size());
    for (const auto &m : members) {
        std::fill(inner.begin(), inner.end(), 0.0);
        m.accumulate(x, inner);
        for (std::size_t k = 0; k < inner.size(); ++k) {
            sum[k] += inner[k] / static_cast<double>(members.size());
        }
    }
}

std::vector<double> ClassifierModel::predict_proba(std::span<const double> x) const {
    if (x.size() != n_features_) {
        throw SchemaError("expected " + std::to_string(n_features_) + " features, got " + std::to_string(x.size()));
    }
    std::vector<double> p(static_cast<std::size_t>(n_classes_), 0.0);
    accumulate(x, p);
    return p;
}

int ClassifierModel::predict(std::span<const double> x) const { return detail::argmax(predict_proba(x)); }

nlohmann::json ClassifierModel::body_json() const {
    if (const auto *tree = std::get_if<TreeModel>(&impl_)) {
        return tree->to_json();
    }
    const auto &e = std::get<Ensemble>(impl_);
    nlohmann::json members = nlohmann::json::array();
    for (const auto &m : e.members) {
        members.push_back(m.body_json());
    }
    return {{"kind", kind_name(e.kind)},
            {"n_classes", n_classes_},
            {"n_features", n_features_},
            {"members", std::move(members)}};
}

nlohmann::json ClassifierModel::to_json() const {
    auto j = body_json();
    j["format"] = "csd.classifier";
    j["version"] = kModelFormatVersion;
    return j;
}

ClassifierModel ClassifierModel::from_body(const nlohmann::json &j) {
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "tree") {
        return ClassifierModel(TreeModel::from_json(j));
    }
    if (kind != "bagging" && kind != "random_forest") {
        throw SchemaError("unknown model kind '" + kind + "'");
    }
    std::vector<ClassifierModel> members;
    for (const auto &m : j.at("members")) {
        members.push_back(from_body(m));
    }
    return {kind == "bagging" ? EnsembleKind::bagging : EnsembleKind::random_forest, std::move(members)};
}

ClassifierModel ClassifierModel::from_json(const nlohmann::json &j) {
    if (j.value("format", "") != "csd.classifier") {
        throw SchemaError("not a classifier model document");
    }
    if (j.value("version", 0) != kModelFormatVersion) {
        throw SchemaError("unsupported model format version");
    }
    return from_body(j);
}

ClassifierModel train_classifier(const ClassProblem &problem, const LearnerSpec &spec, std::uint64_t seed) {
    std::vector<std::size_t> rows(problem.x.rows());
    for (std::size_t r = 0; r < rows.size(); ++r) {
        rows[r] = r;
    }
    return train_classifier(problem, rows, spec, seed);
}

namespace {

ClassifierModel train_with_ranks(const ClassProblem &problem, std::span<const std::size_t> rows,
                                 const LearnerSpec &spec, std::uint64_t seed, const FeatureRanks &ranks) {
    if (const auto *tree = std::get_if<TreeParams>(&spec.params)) {
        return ClassifierModel(train_tree(problem, rows, *tree, seed, ranks));
    }
    const auto &p = std::get<EnsembleParams>(spec.params);
    if (p.n_members == 0) {
        throw ConfigError("an ensemble needs at least one member");
    }
    if (p.kind == EnsembleKind::bagging && !p.base) {
        throw ConfigError("bagging needs a base learner");
    }
    std::vector<ClassifierModel> members;
    members.reserve(p.n_members);
    for (std::size_t i = 0; i < p.n_members; ++i) {
        Rng rng(seed + i);
        const auto sample = draw_rows(rng, rows, p.bootstrap);
        const auto member_seed = rng.next();
        if (p.kind == EnsembleKind::bagging) {
            members.push_back(train_with_ranks(problem, sample, *p.base, member_seed, ranks));
        } else {
            TreeParams tree = p.tree;
            tree.pruned = false;
            tree.random_features =
                p.features_per_split > 0 ? p.features_per_split : default_features_per_split(problem.x.cols());
            members.emplace_back(train_tree(problem, sample, tree, member_seed, ranks));
        }
    }
    return {p.kind, std::move(members)};
}

} // namespace

ClassifierModel train_classifier(const ClassProblem &problem, std::span<const std::size_t> rows,
                                 const LearnerSpec &spec, std::uint64_t seed) {
    if (rows.empty() || problem.x.rows() == 0) {
        throw EmptyDataError();
    }
    return train_with_ranks(problem, rows, spec, seed, FeatureRanks(problem.x));
}

} // namespace csd
