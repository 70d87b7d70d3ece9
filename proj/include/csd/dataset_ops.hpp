#pragma once

#include "csd/dataset.hpp"

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

namespace csd {

/// Identity of an instance: its full feature vector, compared exactly.
/// Negative zero is folded into positive zero.
struct InstanceKey {
    std::vector<double> values;

    static InstanceKey of(const FeatureMatrix &x, std::size_t row);
    friend bool operator==(const InstanceKey &, const InstanceKey &) = default;
};

struct InstanceKeyHash {
    std::size_t operator()(const InstanceKey &key) const noexcept;
};

struct DisparityGroup {
    InstanceKey key;
    std::vector<std::size_t> rows;
    /// Distinct label values seen in the group, ascending.
    std::vector<std::uint8_t> labels;
};

struct DisparityReport {
    std::vector<DisparityGroup> groups;
    std::size_t total_conflicting_rows = 0;
    /// Rows labelled 1 inside conflicting groups ("conflicting smelly instances").
    std::size_t positive_conflicting_rows = 0;

    [[nodiscard]] bool empty() const noexcept { return groups.empty(); }
};

/// Pairs (row in a, row in b) with equal keys. Each row is used at most once;
/// rows of a are visited in order and take the first unused match in b.
std::vector<std::pair<std::size_t, std::size_t>> find_common_instances(const TabularDataset &a,
                                                                        const TabularDataset &b);

/// Merges `other` into `target` keeping target's single label.
///
/// When the two datasets carry different labels, every row of `other` is
/// appended with target label 0, the construction that yields the 840-row
/// merged datasets. When they carry the same label the result is the union:
/// rows whose features and label already occur in target are skipped.
TabularDataset merge_single_label(const TabularDataset &target, const TabularDataset &other);

/// Groups of identical feature vectors that carry more than one label value,
/// in order of first occurrence. Requires exactly one label column.
DisparityReport detect_disparity(const TabularDataset &d);

/// Drops the label-0 rows of every conflicting group; smelly rows are kept.
TabularDataset remove_disparity(const TabularDataset &d);

/// Two-step construction: common rows carry both labels, rows only in a get
/// b's label = 0 and vice versa. Row order: a's rows, then b's unmatched rows.
MultiLabelDataset build_multilabel(const TabularDataset &a, const TabularDataset &b);

/// Throws SchemaError unless both datasets have the same feature names in the same order.
void require_same_features(const TabularDataset &a, const TabularDataset &b);

} // namespace csd
