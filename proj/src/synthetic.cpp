#include "csd/synthetic.hpp"

#include "csd/dataset_ops.hpp"
#include "csd/error.hpp"
#include "csd/rng.hpp"

#include <cmath>
#include <unordered_set>

namespace csd {

namespace {

enum class Driver { size, envy, complexity, coupling, noise };

struct FeatureProfile {
    Driver driver = Driver::noise;
    bool ratio = false;
    double offset = 0.0;
    double loading = 0.0;
    double noise = 0.0;
};

struct Instance {
    std::uint8_t lm = 0;
    std::uint8_t fe = 0;
    std::vector<double> values;
};

std::vector<FeatureProfile> make_profiles(std::size_t n, Rng &rng) {
    std::vector<FeatureProfile> out(n);
    for (std::size_t j = 0; j < n; ++j) {
        auto &p = out[j];
        p.driver = static_cast<Driver>(j % 5);
        // Every seventh metric is a ratio in [0, 1]; the last one too, which keeps rows distinct.
        p.ratio = j % 7 == 6 || j + 1 == n;
        p.offset = rng.uniform(0.5, 3.0);
        p.loading = rng.uniform(0.35, 0.9);
        p.noise = rng.uniform(0.25, 0.7);
    }
    return out;
}

std::vector<double> draw_metrics(std::uint8_t lm, std::uint8_t fe, const std::vector<FeatureProfile> &profiles,
                                 double separation, Rng &rng) {
    const double size = rng.normal() + separation * lm;
    const double envy = rng.normal() + separation * fe;
    const double complexity = 0.75 * size + 0.65 * rng.normal();
    const double coupling = 0.7 * envy + 0.7 * rng.normal();
    std::vector<double> values(profiles.size());
    for (std::size_t j = 0; j < profiles.size(); ++j) {
        const auto &p = profiles[j];
        double latent = 0.0;
        switch (p.driver) {
        case Driver::size:
            latent = size;
            break;
        case Driver::envy:
            latent = envy;
            break;
        case Driver::complexity:
            latent = complexity;
            break;
        case Driver::coupling:
            latent = coupling;
            break;
        case Driver::noise:
            latent = rng.normal();
            break;
        }
        const double z = p.loading * latent + p.noise * rng.normal();
        if (p.ratio) {
            const double share = 1.0 / (1.0 + std::exp(-z));
            values[j] = std::round(share * 1e6) / 1e6;
        } else {
            values[j] = std::round(std::exp(p.offset + 0.6 * z));
        }
    }
    return values;
}

TabularDataset assemble(const std::string &name, const std::vector<const Instance *> &rows, bool take_lm,
                        const std::string &label, std::size_t n_features) {
    std::vector<double> data(rows.size() * n_features);
    std::vector<std::uint8_t> labels(rows.size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
        for (std::size_t c = 0; c < n_features; ++c) {
            data[c * rows.size() + r] = rows[r]->values[c];
        }
        labels[r] = take_lm ? rows[r]->lm : rows[r]->fe;
    }
    std::vector<std::string> names;
    for (std::size_t c = 0; c < n_features; ++c) {
        names.push_back("M" + std::to_string(c + 1));
    }
    return {name, std::move(names), FeatureMatrix(rows.size(), n_features, std::move(data)), {label},
            {std::move(labels)}};
}

} // namespace

ReferencePair generate_reference_datasets(const SyntheticOptions &options) {
    if (options.n_features == 0) {
        throw ConfigError("synthetic data needs at least one feature");
    }
    if (options.lm_label == options.fe_label) {
        throw ConfigError("the two smell labels must differ");
    }
    Rng rng(options.seed);
    const auto profiles = make_profiles(options.n_features, rng);
    const auto &lay = options.layout;

    std::vector<Instance> common;
    std::vector<Instance> lm_extra;
    std::vector<Instance> fe_extra;
    auto add = [](std::vector<Instance> &to, std::size_t count, std::uint8_t lm, std::uint8_t fe) {
        for (std::size_t i = 0; i < count; ++i) {
            to.push_back({lm, fe, {}});
        }
    };
    add(common, lay.common_both, 1, 1);
    add(common, lay.common_lm_only, 1, 0);
    add(common, lay.common_fe_only, 0, 1);
    add(common, lay.common_neither, 0, 0);
    add(lm_extra, lay.lm_extra_smelly, 1, 0);
    add(lm_extra, lay.lm_extra_clean, 0, 0);
    add(fe_extra, lay.fe_extra_smelly, 0, 1);
    add(fe_extra, lay.fe_extra_clean, 0, 0);

    // Rejection keeps every instance's feature vector distinct.
    std::unordered_set<InstanceKey, InstanceKeyHash> seen;
    for (auto *group : {&common, &lm_extra, &fe_extra}) {
        for (auto &inst : *group) {
            for (;;) {
                inst.values = draw_metrics(inst.lm, inst.fe, profiles, options.separation, rng);
                if (seen.insert(InstanceKey{inst.values}).second) {
                    break;
                }
            }
        }
    }

    std::vector<const Instance *> lm_rows;
    std::vector<const Instance *> fe_rows;
    for (const auto &i : common) {
        lm_rows.push_back(&i);
        fe_rows.push_back(&i);
    }
    for (const auto &i : lm_extra) {
        lm_rows.push_back(&i);
    }
    for (const auto &i : fe_extra) {
        fe_rows.push_back(&i);
    }
    rng.shuffle(lm_rows);
    rng.shuffle(fe_rows);

    return {assemble("long-method", lm_rows, true, options.lm_label, options.n_features),
            assemble("feature-envy", fe_rows, false, options.fe_label, options.n_features)};
}

} // namespace csd
