#include "csd/dataset_ops.hpp"

#include "csd/error.hpp"

#include <algorithm>
#include <bit>
#include <deque>
#include <unordered_map>
#include <unordered_set>

namespace csd {

namespace {

void require_single_label(const TabularDataset &d) {
    if (d.n_labels() != 1) {
        throw SchemaError("dataset '" + d.name() + "' must have exactly one label column, found " +
                          std::to_string(d.n_labels()));
    }
}

/// Row indices of `d` grouped by key, in order of first occurrence.
struct KeyIndex {
    std::unordered_map<InstanceKey, std::size_t, InstanceKeyHash> slot;
    std::vector<std::vector<std::size_t>> rows;

    explicit KeyIndex(const FeatureMatrix &x) {
        slot.reserve(x.rows());
        for (std::size_t r = 0; r < x.rows(); ++r) {
            auto [it, inserted] = slot.try_emplace(InstanceKey::of(x, r), rows.size());
            if (inserted) {
                rows.emplace_back();
            }
            rows[it->second].push_back(r);
        }
    }
};

} // namespace

InstanceKey InstanceKey::of(const FeatureMatrix &x, std::size_t row) {
    InstanceKey key;
    key.values = x.row(row);
    for (auto &v : key.values) {
        if (v == 0.0) {
            v = 0.0;
        }
    }
    return key;
}

std::size_t InstanceKeyHash::operator()(const InstanceKey &key) const noexcept {
    std::uint64_t h = 1469598103934665603ULL;
    for (double v : key.values) {
        h ^= std::bit_cast<std::uint64_t>(v);
        h *= 1099511628211ULL;
        h ^= h >> 29;
    }
    return static_cast<std::size_t>(h);
}

void require_same_features(const TabularDataset &a, const TabularDataset &b) {
    if (a.feature_names() != b.feature_names()) {
        throw SchemaError("datasets '" + a.name() + "' and '" + b.name() + "' have different feature schemas");
    }
}

std::vector<std::pair<std::size_t, std::size_t>> find_common_instances(const TabularDataset &a,
                                                                        const TabularDataset &b) {
    require_same_features(a, b);
    std::unordered_map<InstanceKey, std::deque<std::size_t>, InstanceKeyHash> unused;
    unused.reserve(b.n_instances());
    for (std::size_t r = 0; r < b.n_instances(); ++r) {
        unused[InstanceKey::of(b.features(), r)].push_back(r);
    }
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t r = 0; r < a.n_instances(); ++r) {
        auto it = unused.find(InstanceKey::of(a.features(), r));
        if (it == unused.end() || it->second.empty()) {
            continue;
        }
        pairs.emplace_back(r, it->second.front());
        it->second.pop_front();
    }
    return pairs;
}

TabularDataset merge_single_label(const TabularDataset &target, const TabularDataset &other) {
    require_single_label(target);
    require_single_label(other);
    require_same_features(target, other);

    const bool same_label = target.label_names() == other.label_names();
    std::vector<std::size_t> appended;
    if (same_label) {
        // Union: a row is new unless the same features already appear with the same label.
        std::unordered_set<InstanceKey, InstanceKeyHash> seen[2];
        for (std::size_t r = 0; r < target.n_instances(); ++r) {
            seen[target.label(0)[r]].insert(InstanceKey::of(target.features(), r));
        }
        for (std::size_t r = 0; r < other.n_instances(); ++r) {
            if (seen[other.label(0)[r]].insert(InstanceKey::of(other.features(), r)).second) {
                appended.push_back(r);
            }
        }
    } else {
        appended.resize(other.n_instances());
        for (std::size_t r = 0; r < appended.size(); ++r) {
            appended[r] = r;
        }
    }

    const std::size_t n = target.n_instances() + appended.size();
    const std::size_t f = target.n_features();
    std::vector<double> data(n * f);
    for (std::size_t c = 0; c < f; ++c) {
        const auto tcol = target.features().column(c);
        const auto ocol = other.features().column(c);
        auto *dst = data.data() + c * n;
        std::copy(tcol.begin(), tcol.end(), dst);
        for (std::size_t i = 0; i < appended.size(); ++i) {
            dst[tcol.size() + i] = ocol[appended[i]];
        }
    }
    std::vector<std::uint8_t> label = target.label(0);
    for (auto r : appended) {
        label.push_back(same_label ? other.label(0)[r] : 0);
    }
    return {target.name(), target.feature_names(), FeatureMatrix(n, f, std::move(data)), target.label_names(),
            {std::move(label)}};
}

DisparityReport detect_disparity(const TabularDataset &d) {
    require_single_label(d);
    const KeyIndex index(d.features());
    const auto &label = d.label(0);
    DisparityReport report;
    // index.rows is already in first-occurrence order.
    std::vector<const InstanceKey *> keys(index.rows.size());
    for (const auto &[key, slot] : index.slot) {
        keys[slot] = &key;
    }
    for (std::size_t g = 0; g < index.rows.size(); ++g) {
        const auto &rows = index.rows[g];
        if (rows.size() < 2) {
            continue;
        }
        bool seen[2] = {false, false};
        for (auto r : rows) {
            seen[label[r]] = true;
        }
        if (!(seen[0] && seen[1])) {
            continue;
        }
        DisparityGroup group{*keys[g], rows, {0, 1}};
        report.total_conflicting_rows += rows.size();
        for (auto r : rows) {
            report.positive_conflicting_rows += label[r];
        }
        report.groups.push_back(std::move(group));
    }
    return report;
}

TabularDataset remove_disparity(const TabularDataset &d) {
    const auto report = detect_disparity(d);
    std::vector<bool> drop(d.n_instances(), false);
    for (const auto &g : report.groups) {
        for (auto r : g.rows) {
            if (d.label(0)[r] == 0) {
                drop[r] = true;
            }
        }
    }
    std::vector<std::size_t> keep;
    keep.reserve(d.n_instances());
    for (std::size_t r = 0; r < d.n_instances(); ++r) {
        if (!drop[r]) {
            keep.push_back(r);
        }
    }
    return d.select_rows(keep);
}

MultiLabelDataset build_multilabel(const TabularDataset &a, const TabularDataset &b) {
    require_single_label(a);
    require_single_label(b);
    require_same_features(a, b);
    if (a.label_names()[0] == b.label_names()[0]) {
        throw SchemaError("both datasets carry the label '" + a.label_names()[0] + "'");
    }
    const auto pairs = find_common_instances(a, b);
    std::vector<std::ptrdiff_t> partner(a.n_instances(), -1);
    std::vector<bool> b_used(b.n_instances(), false);
    for (auto [ra, rb] : pairs) {
        partner[ra] = static_cast<std::ptrdiff_t>(rb);
        b_used[rb] = true;
    }

    std::vector<std::size_t> b_only;
    for (std::size_t r = 0; r < b.n_instances(); ++r) {
        if (!b_used[r]) {
            b_only.push_back(r);
        }
    }

    const std::size_t n = a.n_instances() + b_only.size();
    const std::size_t f = a.n_features();
    std::vector<double> data(n * f);
    for (std::size_t c = 0; c < f; ++c) {
        const auto acol = a.features().column(c);
        const auto bcol = b.features().column(c);
        auto *dst = data.data() + c * n;
        std::copy(acol.begin(), acol.end(), dst);
        for (std::size_t i = 0; i < b_only.size(); ++i) {
            dst[acol.size() + i] = bcol[b_only[i]];
        }
    }

    std::vector<LabelSet> rows;
    rows.reserve(n);
    for (std::size_t r = 0; r < a.n_instances(); ++r) {
        const std::uint8_t lb = partner[r] >= 0 ? b.label(0)[static_cast<std::size_t>(partner[r])] : 0;
        rows.emplace_back(std::vector<std::uint8_t>{a.label(0)[r], lb});
    }
    for (auto r : b_only) {
        rows.emplace_back(std::vector<std::uint8_t>{0, b.label(0)[r]});
    }
    std::string name = a.name().empty() || b.name().empty() ? "multilabel" : a.name() + "+" + b.name();
    return {std::move(name), a.feature_names(), FeatureMatrix(n, f, std::move(data)),
            {a.label_names()[0], b.label_names()[0]}, std::move(rows)};
}

} // namespace csd
