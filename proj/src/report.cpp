#include "csd/report.hpp"

#include "csd/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace csd {

TextTable::TextTable(std::vector<std::string> header) : header_(std::move(header)) {}

void TextTable::add_row(std::vector<std::string> cells) {
    if (cells.size() != header_.size()) {
        throw SchemaError("table row has " + std::to_string(cells.size()) + " cells, expected " +
                          std::to_string(header_.size()));
    }
    rows_.push_back(std::move(cells));
}

std::string TextTable::str() const {
    std::vector<std::size_t> width(header_.size());
    for (std::size_t c = 0; c < header_.size(); ++c) {
        width[c] = header_[c].size();
        for (const auto &row : rows_) {
            width[c] = std::max(width[c], row[c].size());
        }
    }
    auto line = [&](const std::vector<std::string> &cells) {
        std::string out;
        for (std::size_t c = 0; c < cells.size(); ++c) {
            const std::string pad(width[c] - cells[c].size(), ' ');
            if (c > 0) {
                out += "  ";
            }
            out += c == 0 ? cells[c] + pad : pad + cells[c];
        }
        while (!out.empty() && out.back() == ' ') {
            out.pop_back();
        }
        return out + "\n";
    };
    std::string out = line(header_);
    std::size_t total = 0;
    for (auto w : width) {
        total += w;
    }
    out += std::string(total + 2 * (width.size() - 1), '-') + "\n";
    for (const auto &row : rows_) {
        out += line(row);
    }
    return out;
}

std::string fixed(double v, int decimals) {
    if (std::isnan(v)) {
        return "n/a";
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
    std::string s = buf;
    // Avoid "-0.000".
    if (s.find_first_not_of("-0.") == std::string::npos && s.front() == '-') {
        s.erase(0, 1);
    }
    return s;
}

std::string percent(double v, int decimals) {
    if (std::isnan(v)) {
        return "n/a";
    }
    return fixed(100.0 * v, decimals) + "%";
}

} // namespace csd
