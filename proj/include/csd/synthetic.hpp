#pragma once

#include "csd/dataset.hpp"

#include <cstddef>
#include <cstdint>
#include <string>

namespace csd {

/// Label-row composition of the two single-smell datasets. The defaults give
/// two 420-row datasets (140 smelly each) sharing 395 feature vectors, whose
/// multilabel union has label sets 11:85, 10:55, 01:55, 00:250 and whose
/// merged forms carry 132 and 125 conflicting smelly rows.
struct ReferenceLayout {
    std::size_t common_both = 85;
    std::size_t common_lm_only = 47;
    std::size_t common_fe_only = 40;
    std::size_t common_neither = 223;
    std::size_t lm_extra_smelly = 8;
    std::size_t lm_extra_clean = 17;
    std::size_t fe_extra_smelly = 15;
    std::size_t fe_extra_clean = 10;
};

struct SyntheticOptions {
    std::uint64_t seed = 2019;
    std::size_t n_features = 82;
    /// Shift of the smell-driving latent factors between clean and smelly methods.
    double separation = 2.4;
    std::string lm_label = "is_long_method";
    std::string fe_label = "is_feature_envy";
    ReferenceLayout layout;
};

struct ReferencePair {
    TabularDataset long_method;
    TabularDataset feature_envy;
};

/// Metric-like synthetic data (count metrics and ratios named M1..Mn driven by
/// size, envy, complexity and coupling factors) with the layout above.
/// Feature vectors are unique across distinct instances.
ReferencePair generate_reference_datasets(const SyntheticOptions &options = {});

} // namespace csd
