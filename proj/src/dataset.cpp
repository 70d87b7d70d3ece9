#include "csd/dataset.hpp"

#include "csd/error.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

namespace csd {

namespace {

void check_unique(const std::vector<std::string> &names, const char *what) {
    std::unordered_set<std::string> seen;
    for (const auto &n : names) {
        if (!seen.insert(n).second) {
            throw SchemaError(std::string("duplicate ") + what + " name '" + n + "'");
        }
    }
}

void check_finite(const FeatureMatrix &m, const std::vector<std::string> &names) {
    for (std::size_t c = 0; c < m.cols(); ++c) {
        const auto col = m.column(c);
        for (std::size_t r = 0; r < col.size(); ++r) {
            if (!std::isfinite(col[r])) {
                throw MissingValueError(r, names[c]);
            }
        }
    }
}

} // namespace

FeatureMatrix::FeatureMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

FeatureMatrix::FeatureMatrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows_ * cols_) {
        throw SchemaError("feature matrix storage does not match its shape");
    }
}

std::vector<double> FeatureMatrix::row(std::size_t r) const {
    std::vector<double> out(cols_);
    for (std::size_t c = 0; c < cols_; ++c) {
        out[c] = (*this)(r, c);
    }
    return out;
}

FeatureMatrix FeatureMatrix::select_rows(std::span<const std::size_t> rows) const {
    FeatureMatrix out(rows.size(), cols_);
    for (std::size_t c = 0; c < cols_; ++c) {
        const double *src = data_.data() + c * rows_;
        double *dst = out.data_.data() + c * rows.size();
        for (std::size_t i = 0; i < rows.size(); ++i) {
            dst[i] = src[rows[i]];
        }
    }
    return out;
}

FeatureMatrix FeatureMatrix::with_columns(const std::vector<std::vector<double>> &extra) const {
    std::vector<double> data = data_;
    data.reserve(rows_ * (cols_ + extra.size()));
    for (const auto &col : extra) {
        if (col.size() != rows_) {
            throw SchemaError("appended column has the wrong length");
        }
        data.insert(data.end(), col.begin(), col.end());
    }
    return FeatureMatrix(rows_, cols_ + extra.size(), std::move(data));
}

LabelSet::LabelSet(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {
    for (auto &b : bits_) {
        if (b > 1) {
            throw SchemaError("label values must be 0 or 1");
        }
    }
}

LabelSet LabelSet::from_string(const std::string &bits) {
    std::vector<std::uint8_t> out;
    out.reserve(bits.size());
    for (char ch : bits) {
        if (ch != '0' && ch != '1') {
            throw SchemaError("label set string must contain only 0 and 1: '" + bits + "'");
        }
        out.push_back(ch == '1' ? 1 : 0);
    }
    return LabelSet(std::move(out));
}

std::size_t LabelSet::count() const noexcept {
    return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

std::string LabelSet::to_string() const {
    std::string s;
    s.reserve(bits_.size());
    for (auto b : bits_) {
        s.push_back(b ? '1' : '0');
    }
    return s;
}

TabularDataset::TabularDataset(std::string name, std::vector<std::string> feature_names, FeatureMatrix features,
                               std::vector<std::string> label_names,
                               std::vector<std::vector<std::uint8_t>> labels)
    : name_(std::move(name)), feature_names_(std::move(feature_names)), features_(std::move(features)),
      label_names_(std::move(label_names)), labels_(std::move(labels)) {
    if (feature_names_.size() != features_.cols()) {
        throw SchemaError("feature name count does not match feature columns");
    }
    if (label_names_.size() != labels_.size()) {
        throw SchemaError("label name count does not match label columns");
    }
    std::vector<std::string> all = feature_names_;
    all.insert(all.end(), label_names_.begin(), label_names_.end());
    check_unique(all, "column");
    for (std::size_t l = 0; l < labels_.size(); ++l) {
        if (labels_[l].size() != features_.rows()) {
            throw SchemaError("label column '" + label_names_[l] + "' has the wrong length");
        }
        for (auto v : labels_[l]) {
            if (v > 1) {
                throw SchemaError("label column '" + label_names_[l] + "' contains a value other than 0/1");
            }
        }
    }
    check_finite(features_, feature_names_);
}

std::size_t TabularDataset::positives(std::size_t i) const {
    const auto &col = labels_.at(i);
    return static_cast<std::size_t>(std::count(col.begin(), col.end(), std::uint8_t{1}));
}

TabularDataset TabularDataset::select_rows(std::span<const std::size_t> rows) const {
    std::vector<std::vector<std::uint8_t>> labels(labels_.size());
    for (std::size_t l = 0; l < labels_.size(); ++l) {
        labels[l].reserve(rows.size());
        for (auto r : rows) {
            labels[l].push_back(labels_[l].at(r));
        }
    }
    return {name_, feature_names_, features_.select_rows(rows), label_names_, std::move(labels)};
}

MultiLabelDataset::MultiLabelDataset(std::string name, std::vector<std::string> feature_names,
                                     FeatureMatrix features, std::vector<std::string> label_names,
                                     std::vector<LabelSet> label_rows)
    : name_(std::move(name)), feature_names_(std::move(feature_names)), features_(std::move(features)),
      label_names_(std::move(label_names)), label_rows_(std::move(label_rows)) {
    if (label_names_.empty()) {
        throw SchemaError("a multilabel dataset needs at least one label");
    }
    if (feature_names_.size() != features_.cols()) {
        throw SchemaError("feature name count does not match feature columns");
    }
    if (label_rows_.size() != features_.rows()) {
        throw SchemaError("label matrix row count does not match feature rows");
    }
    std::vector<std::string> all = feature_names_;
    all.insert(all.end(), label_names_.begin(), label_names_.end());
    check_unique(all, "column");
    for (const auto &row : label_rows_) {
        if (row.size() != label_names_.size()) {
            throw SchemaError("label row width differs from the number of labels");
        }
    }
    check_finite(features_, feature_names_);
}

std::vector<std::uint8_t> MultiLabelDataset::label_column(std::size_t l) const {
    if (l >= n_labels()) {
        throw SchemaError("label index out of range");
    }
    std::vector<std::uint8_t> out;
    out.reserve(label_rows_.size());
    for (const auto &row : label_rows_) {
        out.push_back(row[l] ? 1 : 0);
    }
    return out;
}

MultiLabelDataset MultiLabelDataset::select_rows(std::span<const std::size_t> rows) const {
    std::vector<LabelSet> labels;
    labels.reserve(rows.size());
    for (auto r : rows) {
        labels.push_back(label_rows_.at(r));
    }
    return {name_, feature_names_, features_.select_rows(rows), label_names_, std::move(labels)};
}

TabularDataset MultiLabelDataset::to_tabular() const {
    std::vector<std::vector<std::uint8_t>> cols;
    for (std::size_t l = 0; l < n_labels(); ++l) {
        cols.push_back(label_column(l));
    }
    return {name_, feature_names_, features_, label_names_, std::move(cols)};
}

MultiLabelDataset to_multilabel(const TabularDataset &d) {
    if (d.n_labels() == 0) {
        throw SchemaError("dataset '" + d.name() + "' has no label column");
    }
    std::vector<LabelSet> rows;
    rows.reserve(d.n_instances());
    for (std::size_t r = 0; r < d.n_instances(); ++r) {
        std::vector<std::uint8_t> bits(d.n_labels());
        for (std::size_t l = 0; l < d.n_labels(); ++l) {
            bits[l] = d.label(l)[r];
        }
        rows.emplace_back(std::move(bits));
    }
    return {d.name(), d.feature_names(), d.features(), d.label_names(), std::move(rows)};
}

} // namespace csd
