#pragma once

#include "csd/dataset.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace csd {

struct ParseOptions {
    /// Attributes to read as binary label columns; every other attribute is a feature.
    std::vector<std::string> label_names;
    /// Nominal value mapped to 1 when it is not one of true/yes/1.
    std::optional<std::string> positive_value;
    /// Dataset name for formats that do not carry one (CSV).
    std::string name;
};

/// ARFF: @relation, @attribute (numeric or {v1,v2}), @data. Keywords are
/// case-insensitive and lines starting with '%' are comments.
TabularDataset parse_arff(std::string_view text, const ParseOptions &options);
TabularDataset parse_arff(std::string_view text, const std::vector<std::string> &label_names);

/// Comma-separated numbers. Without a header the columns are named f1..fN.
TabularDataset parse_csv(std::string_view text, const ParseOptions &options, bool has_header = true);
TabularDataset parse_csv(std::string_view text, const std::vector<std::string> &label_names,
                         bool has_header = true);

/// Features first, then labels as nominal {0,1}. Values use the shortest
/// representation that parses back to the same double.
std::string write_arff(const TabularDataset &d);
std::string write_csv(const TabularDataset &d);

/// Names of the nominal attributes declared in an ARFF header.
std::vector<std::string> arff_nominal_attributes(std::string_view text);

/// Attribute names of an ARFF file, or the header fields of a .csv file.
std::vector<std::string> column_names(const std::filesystem::path &path);

std::string read_text_file(const std::filesystem::path &path);
void write_text_file(const std::filesystem::path &path, std::string_view text);

/// Picks the parser by extension (.csv is CSV with header, anything else ARFF).
/// For ARFF with no label names given, every nominal attribute is a label.
TabularDataset load_dataset(const std::filesystem::path &path, ParseOptions options);
void save_dataset(const std::filesystem::path &path, const TabularDataset &d);

/// Shortest round-trip decimal form of a double.
std::string format_double(double v);

} // namespace csd
