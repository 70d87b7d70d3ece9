#pragma once

// Random datasets and brute-force reference implementations shared by the
// unit tests and the acceptance runner. The oracles are written from the
// definitions, deliberately without reusing library code.

#include "csd/dataset.hpp"
#include "csd/rng.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace csd::testing {

inline std::vector<std::string> names(const std::string &prefix, std::size_t n) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < n; ++i) {
        out.push_back(prefix + std::to_string(i + 1));
    }
    return out;
}

/// Features drawn from {0, ..., levels-1}; small `levels` produces duplicate rows.
inline FeatureMatrix random_matrix(Rng &rng, std::size_t rows, std::size_t cols, std::size_t levels) {
    FeatureMatrix x(rows, cols);
    for (std::size_t c = 0; c < cols; ++c) {
        for (std::size_t r = 0; r < rows; ++r) {
            x(r, c) = static_cast<double>(rng.uniform_index(levels));
        }
    }
    return x;
}

/// Distinct rows: column 0 holds a shuffled row id, the rest is noise.
inline FeatureMatrix distinct_matrix(Rng &rng, std::size_t rows, std::size_t cols) {
    FeatureMatrix x(rows, cols);
    std::vector<std::size_t> ids(rows);
    for (std::size_t r = 0; r < rows; ++r) {
        ids[r] = r;
    }
    rng.shuffle(ids);
    for (std::size_t r = 0; r < rows; ++r) {
        x(r, 0) = static_cast<double>(ids[r]) * 0.5;
        for (std::size_t c = 1; c < cols; ++c) {
            x(r, c) = rng.uniform(-3.0, 3.0);
        }
    }
    return x;
}

inline std::vector<std::uint8_t> random_bits(Rng &rng, std::size_t n, double p_one) {
    std::vector<std::uint8_t> out(n);
    for (auto &b : out) {
        b = rng.uniform01() < p_one ? 1 : 0;
    }
    return out;
}

inline TabularDataset single_label(const FeatureMatrix &x, std::vector<std::uint8_t> y,
                                   const std::string &label = "smelly") {
    return {"random", names("f", x.cols()), x, {label}, {std::move(y)}};
}

inline MultiLabelDataset multilabel(const FeatureMatrix &x, const std::vector<std::vector<std::uint8_t>> &cols) {
    std::vector<LabelSet> rows;
    for (std::size_t r = 0; r < x.rows(); ++r) {
        std::vector<std::uint8_t> bits;
        for (const auto &c : cols) {
            bits.push_back(c[r]);
        }
        rows.emplace_back(std::move(bits));
    }
    return {"random", names("f", x.cols()), x, names("l", cols.size()), std::move(rows)};
}

inline LabelSet random_labelset(Rng &rng, std::size_t l) {
    std::vector<std::uint8_t> bits(l);
    for (auto &b : bits) {
        b = static_cast<std::uint8_t>(rng.uniform_index(2));
    }
    return LabelSet(std::move(bits));
}

namespace oracle {

struct ExampleBased {
    double accuracy = 0.0;
    double hamming_loss = 0.0;
    double exact_match = 0.0;
};

/// Label sets as index sets, evaluated with std::set algebra.
inline ExampleBased example_based(const std::vector<LabelSet> &y, const std::vector<LabelSet> &z) {
    ExampleBased out;
    const std::size_t l = z.front().size();
    for (std::size_t i = 0; i < z.size(); ++i) {
        std::set<std::size_t> ys;
        std::set<std::size_t> zs;
        for (std::size_t j = 0; j < l; ++j) {
            if (y[i][j]) {
                ys.insert(j);
            }
            if (z[i][j]) {
                zs.insert(j);
            }
        }
        std::set<std::size_t> uni = ys;
        uni.insert(zs.begin(), zs.end());
        std::size_t inter = 0;
        for (auto v : ys) {
            inter += zs.count(v);
        }
        out.accuracy += uni.empty() ? 1.0 : static_cast<double>(inter) / static_cast<double>(uni.size());
        out.hamming_loss += static_cast<double>(uni.size() - inter) / static_cast<double>(l);
        out.exact_match += ys == zs ? 1.0 : 0.0;
    }
    const auto n = static_cast<double>(z.size());
    out.accuracy /= n;
    out.hamming_loss /= n;
    out.exact_match /= n;
    return out;
}

struct LabelBased {
    double micro_precision = 0.0;
    double micro_recall = 0.0;
    double micro_f1 = 0.0;
    double macro_precision = 0.0;
    double macro_recall = 0.0;
    double macro_f1 = 0.0;
};

inline double safe_div(double a, double b) { return b == 0.0 ? 0.0 : a / b; }

inline LabelBased label_based(const std::vector<LabelSet> &y, const std::vector<LabelSet> &z) {
    const std::size_t l = z.front().size();
    LabelBased out;
    double tp_all = 0.0;
    double fp_all = 0.0;
    double fn_all = 0.0;
    for (std::size_t j = 0; j < l; ++j) {
        double tp = 0.0;
        double fp = 0.0;
        double fn = 0.0;
        for (std::size_t i = 0; i < z.size(); ++i) {
            tp += (y[i][j] && z[i][j]) ? 1.0 : 0.0;
            fp += (y[i][j] && !z[i][j]) ? 1.0 : 0.0;
            fn += (!y[i][j] && z[i][j]) ? 1.0 : 0.0;
        }
        const double p = safe_div(tp, tp + fp);
        const double r = safe_div(tp, tp + fn);
        out.macro_precision += p / static_cast<double>(l);
        out.macro_recall += r / static_cast<double>(l);
        out.macro_f1 += safe_div(2.0 * p * r, p + r) / static_cast<double>(l);
        tp_all += tp;
        fp_all += fp;
        fn_all += fn;
    }
    out.micro_precision = safe_div(tp_all, tp_all + fp_all);
    out.micro_recall = safe_div(tp_all, tp_all + fn_all);
    out.micro_f1 = safe_div(2.0 * out.micro_precision * out.micro_recall, out.micro_precision + out.micro_recall);
    return out;
}

/// Pairwise Mann-Whitney: P(score+ > score-) with ties worth one half.
inline std::optional<double> roc_area(const std::vector<double> &scores, const std::vector<int> &truth) {
    double wins = 0.0;
    double pairs = 0.0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        if (truth[i] != 1) {
            continue;
        }
        for (std::size_t j = 0; j < scores.size(); ++j) {
            if (truth[j] == 1) {
                continue;
            }
            pairs += 1.0;
            wins += scores[i] > scores[j] ? 1.0 : scores[i] == scores[j] ? 0.5 : 0.0;
        }
    }
    if (pairs == 0.0) {
        return std::nullopt;
    }
    return wins / pairs;
}

struct Disparity {
    std::size_t groups = 0;
    std::size_t conflicting_rows = 0;
    std::size_t positive_conflicting_rows = 0;
};

/// O(n^2): a row conflicts when some row with an identical feature vector
/// carries the other label; a group is counted once, at its first row.
inline Disparity disparity(const TabularDataset &d) {
    const auto &x = d.features();
    const auto &y = d.label(0);
    const auto n = d.n_instances();
    auto same = [&](std::size_t a, std::size_t b) {
        for (std::size_t c = 0; c < x.cols(); ++c) {
            if (x(a, c) != x(b, c)) {
                return false;
            }
        }
        return true;
    };
    Disparity out;
    for (std::size_t i = 0; i < n; ++i) {
        bool conflict = false;
        bool first = true;
        for (std::size_t j = 0; j < n; ++j) {
            if (j != i && same(i, j)) {
                conflict = conflict || y[i] != y[j];
                first = first && j > i;
            }
        }
        if (conflict) {
            ++out.conflicting_rows;
            out.positive_conflicting_rows += y[i];
            out.groups += first ? 1 : 0;
        }
    }
    return out;
}

} // namespace oracle

} // namespace csd::testing
