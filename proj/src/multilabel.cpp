#include "csd/multilabel.hpp"

#include "csd/error.hpp"

#include <algorithm>
#include <map>

namespace csd {

namespace {

constexpr int kFormatVersion = 1;

std::vector<int> as_classes(const std::vector<std::uint8_t> &bits) { return {bits.begin(), bits.end()}; }

} // namespace

MultiLabelMethod parse_method(const std::string &name) {
    if (name == "br") {
        return MultiLabelMethod::br;
    }
    if (name == "cc") {
        return MultiLabelMethod::cc;
    }
    if (name == "lp" || name == "lc") {
        return MultiLabelMethod::lp;
    }
    throw ConfigError("unknown multilabel method '" + name + "' (expected br, cc or lp)");
}

std::string method_name(MultiLabelMethod m) {
    switch (m) {
    case MultiLabelMethod::br:
        return "br";
    case MultiLabelMethod::cc:
        return "cc";
    case MultiLabelMethod::lp:
        return "lp";
    }
    return "?";
}

BaseTrainer make_trainer(LearnerSpec spec) {
    return [spec = std::move(spec)](const ClassProblem &problem, std::uint64_t seed) {
        return train_classifier(problem, spec, seed);
    };
}

MultiLabelModel::MultiLabelModel(MultiLabelMethod method, std::vector<std::string> label_names,
                                 std::size_t n_features, std::vector<ClassifierModel> members,
                                 std::vector<std::size_t> chain_order, std::vector<std::string> lp_classes)
    : method_(method), label_names_(std::move(label_names)), n_features_(n_features), members_(std::move(members)),
      chain_order_(std::move(chain_order)), lp_classes_(std::move(lp_classes)) {
    const auto l = label_names_.size();
    switch (method_) {
    case MultiLabelMethod::br:
        if (members_.size() != l) {
            throw SchemaError("binary relevance needs one member per label");
        }
        break;
    case MultiLabelMethod::cc:
        if (members_.size() != l || chain_order_.size() != l) {
            throw SchemaError("a classifier chain needs one member per label and a full order");
        }
        break;
    case MultiLabelMethod::lp:
        if (members_.size() != 1 || lp_classes_.empty() ||
            static_cast<std::size_t>(members_[0].n_classes()) != lp_classes_.size()) {
            throw SchemaError("label powerset needs one member whose classes match the class map");
        }
        break;
    }
}

LabelSet MultiLabelModel::predict_labels(std::span<const double> x) const {
    if (x.size() != n_features_) {
        throw SchemaError("expected " + std::to_string(n_features_) + " features, got " + std::to_string(x.size()));
    }
    const auto l = n_labels();
    switch (method_) {
    case MultiLabelMethod::br: {
        std::vector<std::uint8_t> bits(l);
        for (std::size_t i = 0; i < l; ++i) {
            bits[i] = members_[i].predict(x) == 1 ? 1 : 0;
        }
        return LabelSet(std::move(bits));
    }
    case MultiLabelMethod::cc: {
        std::vector<std::uint8_t> bits(l);
        std::vector<double> augmented(x.begin(), x.end());
        for (std::size_t k = 0; k < l; ++k) {
            const auto bit = members_[k].predict(augmented) == 1 ? 1 : 0;
            bits[chain_order_[k]] = static_cast<std::uint8_t>(bit);
            augmented.push_back(bit);
        }
        return LabelSet(std::move(bits));
    }
    case MultiLabelMethod::lp:
        return LabelSet::from_string(lp_classes_[static_cast<std::size_t>(members_[0].predict(x))]);
    }
    return {};
}

nlohmann::json MultiLabelModel::to_json() const {
    nlohmann::json members = nlohmann::json::array();
    for (const auto &m : members_) {
        members.push_back(m.to_json());
    }
    return {{"format", "csd.multilabel"},
            {"version", kFormatVersion},
            {"method", method_name(method_)},
            {"label_names", label_names_},
            {"n_features", n_features_},
            {"chain_order", chain_order_},
            {"lp_classes", lp_classes_},
            {"members", std::move(members)}};
}

MultiLabelModel MultiLabelModel::from_json(const nlohmann::json &j) {
    if (j.value("format", "") != "csd.multilabel" || j.value("version", 0) != kFormatVersion) {
        throw SchemaError("not a version-1 multilabel model document");
    }
    std::vector<ClassifierModel> members;
    for (const auto &m : j.at("members")) {
        members.push_back(ClassifierModel::from_json(m));
    }
    return {parse_method(j.at("method").get<std::string>()),
            j.at("label_names").get<std::vector<std::string>>(),
            j.at("n_features").get<std::size_t>(),
            std::move(members),
            j.at("chain_order").get<std::vector<std::size_t>>(),
            j.at("lp_classes").get<std::vector<std::string>>()};
}

MultiLabelModel train_br(const MultiLabelDataset &m, const BaseTrainer &base, std::uint64_t seed) {
    std::vector<ClassifierModel> members;
    for (std::size_t l = 0; l < m.n_labels(); ++l) {
        const auto y = as_classes(m.label_column(l));
        members.push_back(base(ClassProblem{m.features(), y, 2}, seed + l));
    }
    return {MultiLabelMethod::br, m.label_names(), m.n_features(), std::move(members), {}, {}};
}

MultiLabelModel train_cc(const MultiLabelDataset &m, const BaseTrainer &base, std::vector<std::size_t> order,
                         std::uint64_t seed) {
    const auto l = m.n_labels();
    if (order.empty()) {
        order.resize(l);
        for (std::size_t i = 0; i < l; ++i) {
            order[i] = i;
        }
    }
    auto sorted = order;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        if (sorted.size() != l || sorted[i] != i) {
            throw SchemaError("chain order must be a permutation of 0.." + std::to_string(l - 1));
        }
    }
    std::vector<ClassifierModel> members;
    std::vector<std::vector<double>> preceding;
    for (std::size_t k = 0; k < l; ++k) {
        const auto label = m.label_column(order[k]);
        const auto x = m.features().with_columns(preceding);
        const auto y = as_classes(label);
        members.push_back(base(ClassProblem{x, y, 2}, seed + k));
        preceding.emplace_back(label.begin(), label.end());
    }
    return {MultiLabelMethod::cc, m.label_names(), m.n_features(), std::move(members), std::move(order), {}};
}

MultiLabelModel train_lp(const MultiLabelDataset &m, const BaseTrainer &base, std::uint64_t seed) {
    std::map<std::string, int> classes;
    for (const auto &row : m.label_rows()) {
        classes.emplace(row.to_string(), 0);
    }
    std::vector<std::string> names;
    for (auto &[bits, id] : classes) {
        id = static_cast<int>(names.size());
        names.push_back(bits);
    }
    std::vector<int> y;
    y.reserve(m.n_instances());
    for (const auto &row : m.label_rows()) {
        y.push_back(classes.at(row.to_string()));
    }
    std::vector<ClassifierModel> members;
    members.push_back(base(ClassProblem{m.features(), y, static_cast<int>(names.size())}, seed));
    return {MultiLabelMethod::lp, m.label_names(), m.n_features(), std::move(members), {}, std::move(names)};
}

MultiLabelModel train_multilabel(const MultiLabelDataset &m, MultiLabelMethod method, const BaseTrainer &base,
                                 std::uint64_t seed, std::vector<std::size_t> chain_order) {
    switch (method) {
    case MultiLabelMethod::br:
        return train_br(m, base, seed);
    case MultiLabelMethod::cc:
        return train_cc(m, base, std::move(chain_order), seed);
    case MultiLabelMethod::lp:
        return train_lp(m, base, seed);
    }
    throw ConfigError("unknown multilabel method");
}

} // namespace csd
