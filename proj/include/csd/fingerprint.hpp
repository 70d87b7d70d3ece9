#pragma once

#include "csd/dataset.hpp"

#include <string>
#include <string_view>

namespace csd {

/// Lower-case hex SHA-256.
std::string sha256_hex(std::string_view bytes);

/// "sha256:<hex>" of the dataset's CSV serialization (names and values, not the dataset name).
std::string fingerprint(const TabularDataset &d);
std::string fingerprint(const MultiLabelDataset &m);

} // namespace csd
