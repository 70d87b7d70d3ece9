#include "csd/tree.hpp"

#include "csd/error.hpp"
#include "csd/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>

#include <boost/math/distributions/normal.hpp>

namespace csd {

namespace {

constexpr double kGainEpsilon = 1e-12;

/// n * log2(n), with 0 log 0 = 0.
double nlogn(double n) { return n > 0.0 ? n * std::log2(n) : 0.0; }

/// n log2 n for every count up to the sample size; the split search would
/// otherwise spend most of its time in log2.
class NLogNTable {
  public:
    explicit NLogNTable(std::size_t n) : table_(n + 1) {
        for (std::size_t i = 0; i <= n; ++i) {
            table_[i] = nlogn(static_cast<double>(i));
        }
    }
    double operator()(std::uint32_t n) const { return table_[n]; }

    /// total * entropy(counts).
    double weighted_entropy(std::span<const std::uint32_t> counts, std::uint32_t total) const {
        double s = table_[total];
        for (auto c : counts) {
            s -= table_[c];
        }
        return s;
    }

  private:
    std::vector<double> table_;
};

struct Split {
    std::int32_t feature = -1;
    double threshold = 0.0;
    double gain = 0.0;
    double gain_ratio = 0.0;
    std::uint32_t left_size = 0;
};

struct BuildNode {
    std::int32_t feature = -1;
    double threshold = 0.0;
    std::unique_ptr<BuildNode> left;
    std::unique_ptr<BuildNode> right;
    std::vector<std::size_t> rows;
    std::vector<std::uint32_t> counts;

    [[nodiscard]] bool is_leaf() const noexcept { return feature < 0; }
    void make_leaf() {
        feature = -1;
        left.reset();
        right.reset();
    }
};

class TreeBuilder {
  public:
    TreeBuilder(const ClassProblem &problem, const FeatureRanks &ranks, const TreeParams &params, std::uint64_t seed,
                std::size_t sample_size)
        : problem_(problem), ranks_(ranks), params_(params), rng_(seed), nlogn_(sample_size),
          min_(static_cast<std::uint32_t>(std::max<std::size_t>(params.min_instances, 1))) {}

    std::unique_ptr<BuildNode> build(std::vector<std::size_t> rows) {
        auto node = std::make_unique<BuildNode>();
        node->counts = count(rows);
        node->rows = std::move(rows);

        const auto total = node->rows.size();
        const bool pure = std::count_if(node->counts.begin(), node->counts.end(),
                                        [](std::uint32_t c) { return c > 0; }) <= 1;
        if (pure || total < 2 * min_) {
            return node;
        }
        const auto split = best_split(node->rows, node->counts);
        if (split.feature < 0) {
            return node;
        }
        std::vector<std::size_t> left;
        std::vector<std::size_t> right;
        const auto col = problem_.x.column(static_cast<std::size_t>(split.feature));
        for (auto r : node->rows) {
            (col[r] <= split.threshold ? left : right).push_back(r);
        }
        node->feature = split.feature;
        node->threshold = split.threshold;
        node->left = build(std::move(left));
        node->right = build(std::move(right));
        if (!params_.pruned) {
            node->rows.clear();
            node->rows.shrink_to_fit();
        }
        return node;
    }

    void prune(BuildNode &node) {
        if (node.is_leaf()) {
            return;
        }
        prune(*node.left);
        prune(*node.right);

        BuildNode &largest = node.left->rows.size() >= node.right->rows.size() ? *node.left : *node.right;
        const double errors_largest = params_.subtree_raising ? branch_errors(largest, node.rows)
                                                              : std::numeric_limits<double>::max();
        const double errors_leaf = distribution_errors(node.counts);
        const double errors_tree = tree_errors(node);

        if (errors_leaf <= errors_tree + 0.1 + 1e-6 && errors_leaf <= errors_largest + 0.1 + 1e-6) {
            node.make_leaf();
            return;
        }
        if (errors_largest <= errors_tree + 0.1 + 1e-6) {
            // Subtree raising: the largest branch replaces this node and all of
            // this node's instances are routed through it.
            std::unique_ptr<BuildNode> keep = std::move(&largest == node.left.get() ? node.left : node.right);
            node.feature = keep->feature;
            node.threshold = keep->threshold;
            node.left = std::move(keep->left);
            node.right = std::move(keep->right);
            redistribute(node, std::vector<std::size_t>(node.rows));
            prune(node);
        }
    }

    std::vector<std::uint32_t> count(std::span<const std::size_t> rows) const {
        std::vector<std::uint32_t> c(static_cast<std::size_t>(problem_.n_classes), 0);
        for (auto r : rows) {
            ++c[static_cast<std::size_t>(problem_.y[r])];
        }
        return c;
    }

  private:
    Split best_split(std::span<const std::size_t> rows, const std::vector<std::uint32_t> &parent) {
        const auto n_features = problem_.x.cols();
        std::vector<std::size_t> features;
        if (params_.random_features > 0 && params_.random_features < n_features) {
            features = rng_.sample_without_replacement(n_features, params_.random_features);
            std::sort(features.begin(), features.end());
        } else {
            features.resize(n_features);
            for (std::size_t f = 0; f < n_features; ++f) {
                features[f] = f;
            }
        }

        const auto m = static_cast<std::uint32_t>(rows.size());
        const double parent_info = nlogn_.weighted_entropy(parent, m);
        const double md = static_cast<double>(m);
        std::vector<Split> candidates;
        // (rank << 32 | class) sorts like (value, class) but compares as one integer.
        std::vector<std::uint64_t> keys(rows.size());
        std::vector<std::uint32_t> left(parent.size());
        std::vector<std::uint32_t> right(parent.size());

        for (auto f : features) {
            for (std::size_t i = 0; i < rows.size(); ++i) {
                keys[i] = (std::uint64_t{ranks_.rank(f, rows[i])} << 32) |
                          static_cast<std::uint32_t>(problem_.y[rows[i]]);
            }
            std::sort(keys.begin(), keys.end());
            if (keys.front() >> 32 == keys.back() >> 32) {
                continue;
            }
            std::fill(left.begin(), left.end(), 0);
            Split best;
            bool found = false;
            for (std::size_t i = 0; i + 1 < keys.size(); ++i) {
                ++left[keys[i] & 0xffffffffU];
                const auto rank = static_cast<std::uint32_t>(keys[i] >> 32);
                const auto next = static_cast<std::uint32_t>(keys[i + 1] >> 32);
                if (rank == next) {
                    continue;
                }
                const auto nl = static_cast<std::uint32_t>(i + 1);
                const auto nr = m - nl;
                if (nl < min_ || nr < min_) {
                    continue;
                }
                for (std::size_t k = 0; k < parent.size(); ++k) {
                    right[k] = parent[k] - left[k];
                }
                const double gain =
                    (parent_info - nlogn_.weighted_entropy(left, nl) - nlogn_.weighted_entropy(right, nr)) / md;
                if (!found || gain > best.gain) {
                    found = true;
                    best.gain = gain;
                    best.feature = static_cast<std::int32_t>(f);
                    const double a = ranks_.value(f, rank);
                    const double b = ranks_.value(f, next);
                    double mid = a / 2.0 + b / 2.0;
                    if (!(mid >= a && mid < b)) {
                        mid = a;
                    }
                    best.threshold = mid;
                    best.left_size = nl;
                }
            }
            if (found) {
                const auto nl = best.left_size;
                const double split_info = (nlogn_(m) - nlogn_(nl) - nlogn_(m - nl)) / md;
                best.gain_ratio = split_info > 0.0 ? best.gain / split_info : 0.0;
                candidates.push_back(best);
            }
        }

        Split chosen;
        if (candidates.empty()) {
            return chosen;
        }
        double mean_gain = 0.0;
        for (const auto &c : candidates) {
            mean_gain += c.gain;
        }
        mean_gain /= static_cast<double>(candidates.size());
        for (const auto &c : candidates) {
            if (c.gain <= kGainEpsilon || c.gain < mean_gain - kGainEpsilon) {
                continue;
            }
            if (chosen.feature < 0 || c.gain_ratio > chosen.gain_ratio) {
                chosen = c;
            }
        }
        return chosen;
    }

    double distribution_errors(std::span<const std::uint32_t> counts) const {
        std::uint32_t total = 0;
        std::uint32_t most = 0;
        for (auto c : counts) {
            total += c;
            most = std::max(most, c);
        }
        if (total == 0) {
            return 0.0;
        }
        const double wrong = static_cast<double>(total - most);
        return wrong + added_errors(static_cast<double>(total), wrong, params_.confidence);
    }

    double tree_errors(const BuildNode &node) const {
        if (node.is_leaf()) {
            return distribution_errors(node.counts);
        }
        return tree_errors(*node.left) + tree_errors(*node.right);
    }

    /// Estimated errors if `rows` were classified by the subtree `node`.
    double branch_errors(const BuildNode &node, std::span<const std::size_t> rows) const {
        if (node.is_leaf()) {
            return distribution_errors(count(rows));
        }
        std::vector<std::size_t> left;
        std::vector<std::size_t> right;
        split_rows(node, rows, left, right);
        return branch_errors(*node.left, left) + branch_errors(*node.right, right);
    }

    void split_rows(const BuildNode &node, std::span<const std::size_t> rows, std::vector<std::size_t> &left,
                    std::vector<std::size_t> &right) const {
        const auto col = problem_.x.column(static_cast<std::size_t>(node.feature));
        for (auto r : rows) {
            (col[r] <= node.threshold ? left : right).push_back(r);
        }
    }

    void redistribute(BuildNode &node, std::vector<std::size_t> rows) {
        node.counts = count(rows);
        if (!node.is_leaf()) {
            std::vector<std::size_t> left;
            std::vector<std::size_t> right;
            split_rows(node, rows, left, right);
            redistribute(*node.left, std::move(left));
            redistribute(*node.right, std::move(right));
        }
        node.rows = std::move(rows);
    }

    const ClassProblem &problem_;
    const FeatureRanks &ranks_;
    const TreeParams &params_;
    Rng rng_;
    NLogNTable nlogn_;
    std::uint32_t min_;
};

void flatten(const BuildNode &node, const std::vector<std::uint32_t> &parent_counts, std::vector<TreeNode> &out) {
    const auto index = out.size();
    out.emplace_back();
    std::uint32_t total = 0;
    for (auto c : node.counts) {
        total += c;
    }
    // An empty leaf predicts with its parent's distribution.
    out[index].counts = total == 0 ? parent_counts : node.counts;
    if (node.is_leaf()) {
        return;
    }
    out[index].feature = node.feature;
    out[index].threshold = node.threshold;
    const auto counts = out[index].counts;
    out[index].left = static_cast<std::int32_t>(out.size());
    flatten(*node.left, counts, out);
    out[index].right = static_cast<std::int32_t>(out.size());
    flatten(*node.right, counts, out);
}

} // namespace

FeatureRanks::FeatureRanks(const FeatureMatrix &x) : rows_(x.rows()), ranks_(x.cols()), values_(x.cols()) {
    std::vector<std::size_t> order(x.rows());
    for (std::size_t c = 0; c < x.cols(); ++c) {
        const auto col = x.column(c);
        for (std::size_t r = 0; r < order.size(); ++r) {
            order[r] = r;
        }
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return col[a] < col[b]; });
        auto &rank = ranks_[c];
        auto &values = values_[c];
        rank.resize(order.size());
        for (auto r : order) {
            if (values.empty() || values.back() < col[r]) {
                values.push_back(col[r]);
            }
            rank[r] = static_cast<std::uint32_t>(values.size() - 1);
        }
    }
}

double added_errors(double n, double e, double confidence) {
    confidence = std::clamp(confidence, 1e-9, 0.5);
    if (e < 1.0) {
        const double base = n * (1.0 - std::pow(confidence, 1.0 / n));
        if (e == 0.0) {
            return base;
        }
        return base + e * (added_errors(n, 1.0, confidence) - base);
    }
    if (e + 0.5 >= n) {
        return std::max(n - e, 0.0);
    }
    static const boost::math::normal standard;
    const double z = boost::math::quantile(standard, 1.0 - confidence);
    const double f = (e + 0.5) / n;
    const double r = (f + z * z / (2.0 * n) + z * std::sqrt(f / n - f * f / n + z * z / (4.0 * n * n))) /
                     (1.0 + z * z / n);
    return r * n - e;
}

namespace detail {
int argmax(std::span<const double> p) {
    int best = 0;
    for (std::size_t k = 1; k < p.size(); ++k) {
        if (p[k] > p[static_cast<std::size_t>(best)]) {
            best = static_cast<int>(k);
        }
    }
    return best;
}
} // namespace detail

TreeModel::TreeModel(int n_classes, std::size_t n_features, std::vector<TreeNode> nodes)
    : n_classes_(n_classes), n_features_(n_features), nodes_(std::move(nodes)) {
    if (nodes_.empty()) {
        throw SchemaError("a tree needs at least one node");
    }
    const auto n = static_cast<std::int32_t>(nodes_.size());
    for (const auto &node : nodes_) {
        if (node.counts.size() != static_cast<std::size_t>(n_classes_)) {
            throw SchemaError("tree node class counts do not match the number of classes");
        }
        if (!node.is_leaf() && (node.feature >= static_cast<std::int32_t>(n_features_) || node.left <= 0 ||
                                node.right <= 0 || node.left >= n || node.right >= n)) {
            throw SchemaError("malformed tree node");
        }
    }
}

std::size_t TreeModel::leaf_count() const noexcept {
    return static_cast<std::size_t>(
        std::count_if(nodes_.begin(), nodes_.end(), [](const TreeNode &n) { return n.is_leaf(); }));
}

std::size_t TreeModel::depth() const {
    std::vector<std::size_t> d(nodes_.size(), 0);
    std::size_t best = 0;
    // Children always come after their parent in the flattened order.
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        best = std::max(best, d[i]);
        if (!nodes_[i].is_leaf()) {
            d[static_cast<std::size_t>(nodes_[i].left)] = d[i] + 1;
            d[static_cast<std::size_t>(nodes_[i].right)] = d[i] + 1;
        }
    }
    return best;
}

std::size_t TreeModel::leaf_for(std::span<const double> x) const {
    std::size_t i = 0;
    while (!nodes_[i].is_leaf()) {
        const auto &n = nodes_[i];
        i = static_cast<std::size_t>(x[static_cast<std::size_t>(n.feature)] <= n.threshold ? n.left : n.right);
    }
    return i;
}

std::vector<double> TreeModel::predict_proba(std::span<const double> x) const {
    if (x.size() != n_features_) {
        throw SchemaError("expected " + std::to_string(n_features_) + " features, got " + std::to_string(x.size()));
    }
    const auto &counts = nodes_[leaf_for(x)].counts;
    double total = 0.0;
    for (auto c : counts) {
        total += c;
    }
    std::vector<double> p(counts.size());
    const double denom = total + static_cast<double>(n_classes_);
    for (std::size_t k = 0; k < counts.size(); ++k) {
        p[k] = (static_cast<double>(counts[k]) + 1.0) / denom;
    }
    return p;
}

int TreeModel::predict(std::span<const double> x) const { return detail::argmax(predict_proba(x)); }

nlohmann::json TreeModel::to_json() const {
    nlohmann::json nodes = nlohmann::json::array();
    for (const auto &n : nodes_) {
        if (n.is_leaf()) {
            nodes.push_back({{"kind", "leaf"}, {"counts", n.counts}});
        } else {
            nodes.push_back({{"kind", "split"},
                             {"feature", n.feature},
                             {"threshold", n.threshold},
                             {"left", n.left},
                             {"right", n.right},
                             {"counts", n.counts}});
        }
    }
    return {{"kind", "tree"}, {"n_classes", n_classes_}, {"n_features", n_features_}, {"nodes", std::move(nodes)}};
}

TreeModel TreeModel::from_json(const nlohmann::json &j) {
    if (j.at("kind") != "tree") {
        throw SchemaError("not a tree model");
    }
    std::vector<TreeNode> nodes;
    for (const auto &jn : j.at("nodes")) {
        TreeNode n;
        n.counts = jn.at("counts").get<std::vector<std::uint32_t>>();
        if (jn.at("kind") == "split") {
            n.feature = jn.at("feature").get<std::int32_t>();
            n.threshold = jn.at("threshold").get<double>();
            n.left = jn.at("left").get<std::int32_t>();
            n.right = jn.at("right").get<std::int32_t>();
        }
        nodes.push_back(std::move(n));
    }
    return {j.at("n_classes").get<int>(), j.at("n_features").get<std::size_t>(), std::move(nodes)};
}

TreeModel train_tree(const ClassProblem &problem, const TreeParams &params, std::uint64_t seed) {
    std::vector<std::size_t> rows(problem.x.rows());
    for (std::size_t r = 0; r < rows.size(); ++r) {
        rows[r] = r;
    }
    return train_tree(problem, rows, params, seed);
}

TreeModel train_tree(const ClassProblem &problem, std::span<const std::size_t> rows, const TreeParams &params,
                     std::uint64_t seed) {
    if (problem.x.rows() == 0) {
        throw EmptyDataError();
    }
    return train_tree(problem, rows, params, seed, FeatureRanks(problem.x));
}

TreeModel train_tree(const ClassProblem &problem, std::span<const std::size_t> rows, const TreeParams &params,
                     std::uint64_t seed, const FeatureRanks &ranks) {
    if (ranks.rows() != problem.x.rows() || ranks.cols() != problem.x.cols()) {
        throw SchemaError("feature ranks were computed for a different matrix");
    }
    if (rows.empty() || problem.x.rows() == 0) {
        throw EmptyDataError();
    }
    if (problem.y.size() != problem.x.rows()) {
        throw SchemaError("class column length differs from the number of rows");
    }
    if (problem.x.cols() == 0) {
        throw SchemaError("cannot train a tree without features");
    }
    if (problem.n_classes < 1) {
        throw SchemaError("a classification problem needs at least one class");
    }
    for (auto r : rows) {
        if (r >= problem.x.rows()) {
            throw SchemaError("training row index out of range");
        }
        if (problem.y[r] < 0 || problem.y[r] >= problem.n_classes) {
            throw SchemaError("class index out of range");
        }
    }
    TreeBuilder builder(problem, ranks, params, seed, rows.size());
    auto root = builder.build(std::vector<std::size_t>(rows.begin(), rows.end()));
    if (params.pruned) {
        builder.prune(*root);
    }
    std::vector<TreeNode> nodes;
    flatten(*root, root->counts, nodes);
    return {problem.n_classes, problem.x.cols(), std::move(nodes)};
}

} // namespace csd
