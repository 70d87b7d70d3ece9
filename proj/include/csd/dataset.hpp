#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace csd {

/// Dense column-major matrix of real-valued features.
class FeatureMatrix {
  public:
    FeatureMatrix() = default;
    FeatureMatrix(std::size_t rows, std::size_t cols);
    /// Takes ownership of column-major storage; `data.size()` must equal rows * cols.
    FeatureMatrix(std::size_t rows, std::size_t cols, std::vector<double> data);

    [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
    [[nodiscard]] std::size_t cols() const noexcept { return cols_; }

    [[nodiscard]] double operator()(std::size_t row, std::size_t col) const noexcept {
        return data_[col * rows_ + row];
    }
    double &operator()(std::size_t row, std::size_t col) noexcept { return data_[col * rows_ + row]; }

    [[nodiscard]] std::span<const double> column(std::size_t col) const noexcept {
        return {data_.data() + col * rows_, rows_};
    }
    [[nodiscard]] std::vector<double> row(std::size_t r) const;

    /// Rows selected (with repetition allowed) in the given order.
    [[nodiscard]] FeatureMatrix select_rows(std::span<const std::size_t> rows) const;
    /// Copy with extra columns appended on the right.
    [[nodiscard]] FeatureMatrix with_columns(const std::vector<std::vector<double>> &extra) const;

    friend bool operator==(const FeatureMatrix &, const FeatureMatrix &) = default;

  private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

/// Binary label vector of one instance. Bit i corresponds to the owning
/// dataset's label i.
class LabelSet {
  public:
    LabelSet() = default;
    explicit LabelSet(std::vector<std::uint8_t> bits);
    static LabelSet from_string(const std::string &bits);

    [[nodiscard]] std::size_t size() const noexcept { return bits_.size(); }
    [[nodiscard]] bool operator[](std::size_t i) const noexcept { return bits_[i] != 0; }
    [[nodiscard]] std::size_t count() const noexcept;
    [[nodiscard]] const std::vector<std::uint8_t> &bits() const noexcept { return bits_; }
    /// "10" for {label0}, "01" for {label1}, ...
    [[nodiscard]] std::string to_string() const;

    friend bool operator==(const LabelSet &, const LabelSet &) = default;
    friend auto operator<=>(const LabelSet &, const LabelSet &) = default;

  private:
    std::vector<std::uint8_t> bits_;
};

/// Named numeric feature columns plus any number of binary label columns.
/// Immutable once constructed; the constructor enforces the invariants.
class TabularDataset {
  public:
    TabularDataset() = default;
    TabularDataset(std::string name, std::vector<std::string> feature_names, FeatureMatrix features,
                   std::vector<std::string> label_names, std::vector<std::vector<std::uint8_t>> labels);

    [[nodiscard]] const std::string &name() const noexcept { return name_; }
    [[nodiscard]] std::size_t n_instances() const noexcept { return features_.rows(); }
    [[nodiscard]] std::size_t n_features() const noexcept { return features_.cols(); }
    [[nodiscard]] std::size_t n_labels() const noexcept { return labels_.size(); }

    [[nodiscard]] const std::vector<std::string> &feature_names() const noexcept { return feature_names_; }
    [[nodiscard]] const std::vector<std::string> &label_names() const noexcept { return label_names_; }
    [[nodiscard]] const FeatureMatrix &features() const noexcept { return features_; }
    [[nodiscard]] const std::vector<std::uint8_t> &label(std::size_t i) const { return labels_.at(i); }
    [[nodiscard]] const std::vector<std::vector<std::uint8_t>> &labels() const noexcept { return labels_; }

    /// Number of rows whose label `i` is 1.
    [[nodiscard]] std::size_t positives(std::size_t i = 0) const;

    /// New dataset made of the given rows, in the given order.
    [[nodiscard]] TabularDataset select_rows(std::span<const std::size_t> rows) const;

    friend bool operator==(const TabularDataset &, const TabularDataset &) = default;

  private:
    std::string name_;
    std::vector<std::string> feature_names_;
    FeatureMatrix features_;
    std::vector<std::string> label_names_;
    std::vector<std::vector<std::uint8_t>> labels_;
};

/// Features plus an n x L binary label matrix.
class MultiLabelDataset {
  public:
    MultiLabelDataset() = default;
    MultiLabelDataset(std::string name, std::vector<std::string> feature_names, FeatureMatrix features,
                      std::vector<std::string> label_names, std::vector<LabelSet> label_rows);

    [[nodiscard]] const std::string &name() const noexcept { return name_; }
    [[nodiscard]] std::size_t n_instances() const noexcept { return features_.rows(); }
    [[nodiscard]] std::size_t n_features() const noexcept { return features_.cols(); }
    [[nodiscard]] std::size_t n_labels() const noexcept { return label_names_.size(); }

    [[nodiscard]] const std::vector<std::string> &feature_names() const noexcept { return feature_names_; }
    [[nodiscard]] const std::vector<std::string> &label_names() const noexcept { return label_names_; }
    [[nodiscard]] const FeatureMatrix &features() const noexcept { return features_; }
    [[nodiscard]] const std::vector<LabelSet> &label_rows() const noexcept { return label_rows_; }
    [[nodiscard]] const LabelSet &labels_of(std::size_t row) const { return label_rows_.at(row); }

    /// Column `l` of the label matrix as 0/1 values.
    [[nodiscard]] std::vector<std::uint8_t> label_column(std::size_t l) const;

    [[nodiscard]] MultiLabelDataset select_rows(std::span<const std::size_t> rows) const;

    /// Back to the tabular form (one label column per label).
    [[nodiscard]] TabularDataset to_tabular() const;

    friend bool operator==(const MultiLabelDataset &, const MultiLabelDataset &) = default;

  private:
    std::string name_;
    std::vector<std::string> feature_names_;
    FeatureMatrix features_;
    std::vector<std::string> label_names_;
    std::vector<LabelSet> label_rows_;
};

/// Label columns become label-matrix columns in order. Throws SchemaError
/// when the dataset has no label column.
MultiLabelDataset to_multilabel(const TabularDataset &d);

} // namespace csd
