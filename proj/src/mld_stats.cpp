#include "csd/mld_stats.hpp"

#include "csd/error.hpp"

#include <algorithm>

namespace csd {

MldStatistics compute_stats(const MultiLabelDataset &m) {
    if (m.n_instances() == 0) {
        throw SchemaError("statistics need at least one instance");
    }
    MldStatistics s;
    s.n_instances = m.n_instances();
    s.n_features = m.n_features();
    s.n_labels = m.n_labels();
    s.label_names = m.label_names();
    s.label_counts.assign(s.n_labels, 0);

    std::size_t active = 0;
    for (const auto &row : m.label_rows()) {
        for (std::size_t l = 0; l < s.n_labels; ++l) {
            s.label_counts[l] += row[l] ? 1 : 0;
        }
        active += row.count();
        ++s.label_set_counts[row.to_string()];
    }
    s.n_label_sets = s.label_set_counts.size();
    s.cardinality = static_cast<double>(active) / static_cast<double>(s.n_instances);
    s.density = s.cardinality / static_cast<double>(s.n_labels);

    const auto most = *std::max_element(s.label_counts.begin(), s.label_counts.end());
    double sum = 0.0;
    for (std::size_t l = 0; l < s.n_labels; ++l) {
        if (s.label_counts[l] == 0) {
            throw DegenerateLabelError(s.label_names[l]);
        }
        s.irlbl.push_back(static_cast<double>(most) / static_cast<double>(s.label_counts[l]));
        sum += s.irlbl.back();
    }
    s.mean_ir = sum / static_cast<double>(s.n_labels);
    return s;
}

bool is_imbalanced(const MldStatistics &s) { return s.mean_ir > 1.5; }

nlohmann::json to_json(const MldStatistics &s) {
    return {
        {"n_instances", s.n_instances},
        {"n_features", s.n_features},
        {"n_labels", s.n_labels},
        {"n_label_sets", s.n_label_sets},
        {"cardinality", s.cardinality},
        {"density", s.density},
        {"label_names", s.label_names},
        {"label_counts", s.label_counts},
        {"irlbl", s.irlbl},
        {"mean_ir", s.mean_ir},
        {"imbalanced", is_imbalanced(s)},
        {"label_set_counts", s.label_set_counts},
    };
}

} // namespace csd
