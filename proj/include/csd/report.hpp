#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace csd {

/// Plain-text table with columns padded to their widest cell. The first
/// column is left-aligned, the rest right-aligned.
class TextTable {
  public:
    explicit TextTable(std::vector<std::string> header);

    void add_row(std::vector<std::string> cells);
    [[nodiscard]] std::size_t n_rows() const noexcept { return rows_.size(); }
    [[nodiscard]] std::string str() const;

  private:
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

/// 0.9587 -> "95.9%".
std::string percent(double v, int decimals = 1);
/// Fixed-point formatting.
std::string fixed(double v, int decimals = 3);

} // namespace csd
