#pragma once

#include "csd/dataset.hpp"

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

namespace csd {

struct MldStatistics {
    std::size_t n_instances = 0;
    std::size_t n_features = 0;
    std::size_t n_labels = 0;
    std::size_t n_label_sets = 0;
    double cardinality = 0.0;
    double density = 0.0;
    std::vector<std::string> label_names;
    std::vector<std::size_t> label_counts;
    /// Per-label imbalance ratio: most frequent label count over this label's count.
    std::vector<double> irlbl;
    double mean_ir = 1.0;
    /// Instances per distinct label row, keyed by bit string ("10" = first label only).
    std::map<std::string, std::size_t> label_set_counts;
};

/// Throws DegenerateLabelError naming the first label without positives, and
/// SchemaError for an empty dataset.
MldStatistics compute_stats(const MultiLabelDataset &m);

/// MeanIR strictly above 1.5.
bool is_imbalanced(const MldStatistics &s);

/// Flat object, one key per field.
nlohmann::json to_json(const MldStatistics &s);

} // namespace csd
