#include "csd/dataset_ops.hpp"
#include "csd/error.hpp"
#include "csd/experiments.hpp"
#include "csd/mld_stats.hpp"
#include "csd/report.hpp"
#include "csd/synthetic.hpp"
#include "support.hpp"

#include <doctest.h>

#include <unordered_set>

using namespace csd;

TEST_CASE("synthetic pair reproduces the reference layout") {
    const auto pair = generate_reference_datasets();
    const auto &lm = pair.long_method;
    const auto &fe = pair.feature_envy;
    CHECK(lm.n_instances() == 420);
    CHECK(fe.n_instances() == 420);
    CHECK(lm.n_features() == 82);
    CHECK(lm.positives(0) == 140);
    CHECK(fe.positives(0) == 140);
    CHECK(lm.label_names() == std::vector<std::string>{"is_long_method"});
    CHECK(find_common_instances(lm, fe).size() == 395);

    // Unique rows inside each dataset.
    for (const auto *d : {&lm, &fe}) {
        std::unordered_set<InstanceKey, InstanceKeyHash> keys;
        for (std::size_t r = 0; r < d->n_instances(); ++r) {
            keys.insert(InstanceKey::of(d->features(), r));
        }
        CHECK(keys.size() == d->n_instances());
    }

    const auto stats = compute_stats(build_multilabel(lm, fe));
    CHECK(stats.label_set_counts ==
          std::map<std::string, std::size_t>{{"11", 85}, {"10", 55}, {"01", 55}, {"00", 250}});

    // Deterministic per seed, different across seeds.
    CHECK(generate_reference_datasets().long_method == lm);
    SyntheticOptions other;
    other.seed = 7;
    CHECK_FALSE(generate_reference_datasets(other).long_method == lm);
    other.fe_label = other.lm_label;
    CHECK_THROWS_AS(generate_reference_datasets(other), ConfigError);
}

TEST_CASE("rq1 on identical and disjoint inputs") {
    Rng rng(20);
    const auto x = testing::distinct_matrix(rng, 30, 3);
    const auto d = testing::single_label(x, testing::random_bits(rng, 30, 0.3), "lm");
    const auto same = run_rq1(d, d);
    CHECK(same.json.at("merged").at("lm").at("conflicting_smelly") == 0);
    CHECK(same.json.at("merged").at("lm").at("n_instances") == 30);

    FeatureMatrix shifted(30, 3);
    for (std::size_t r = 0; r < 30; ++r) {
        for (std::size_t c = 0; c < 3; ++c) {
            shifted(r, c) = x(r, c) + 1000.0;
        }
    }
    const auto other = testing::single_label(shifted, testing::random_bits(rng, 30, 0.3), "fe");
    const auto disjoint = run_rq1(d, other);
    CHECK(disjoint.json.at("merged").at("lm").at("n_instances") == 60);
    CHECK(disjoint.json.at("merged").at("fe").at("conflicting_rows") == 0);
    CHECK(disjoint.json.at("common_instances") == 0);
}

TEST_CASE("rq1 on the synthetic pair") {
    const auto pair = generate_reference_datasets();
    const auto r = run_rq1(pair.long_method, pair.feature_envy);
    const auto &m = r.json.at("merged");
    CHECK(m.at("lm").at("n_instances") == 840);
    CHECK(m.at("fe").at("n_instances") == 840);
    CHECK(m.at("lm").at("smelly") == 140);
    CHECK(m.at("lm").at("non_smelly") == 700);
    CHECK(m.at("lm").at("conflicting_smelly") == 132);
    CHECK(m.at("fe").at("conflicting_smelly") == 125);
    CHECK(r.text.find("Long Method") != std::string::npos);
}

TEST_CASE("rq2 and rq3 report shapes on a short plan") {
    const auto pair = generate_reference_datasets();
    ExperimentOptions options;
    options.plan.k = 2;
    options.plan.repetitions = 1;
    options.rq2_classifiers = {"j48p", "j48u"};
    options.rq3_classifiers = {"j48p", "j48u"};

    const auto rq2 = run_rq2(pair.long_method, pair.feature_envy, options);
    CHECK(rq2.json.at("datasets").at("lm").at("n_instances") == 708);
    CHECK(rq2.json.at("datasets").at("lm").at("non_smelly") == 568);
    CHECK(rq2.json.at("datasets").at("fe").at("n_instances") == 715);
    CHECK(rq2.json.at("datasets").at("fe").at("non_smelly") == 575);
    CHECK(rq2.json.at("datasets").at("lm").at("results").size() == 2);

    const auto rq3 = run_rq3(pair.long_method, pair.feature_envy, options);
    const auto &s = rq3.json.at("stats");
    CHECK(s.at("n_instances") == 445);
    CHECK(s.at("n_label_sets") == 4);
    CHECK(rq3.json.at("methods").at("cc").size() == 2);
    CHECK(rq3.json.at("methods").at("lp").size() == 2);
    const auto &row = rq3.json.at("methods").at("cc").at(0);
    double sum = 0.0;
    for (const auto &f : row.at("cv").at("folds")) {
        sum += f.at("metrics").at("accuracy").get<double>();
    }
    CHECK(std::abs(sum / 2.0 - row.at("accuracy").get<double>()) < 1e-12);

    ExperimentOptions none = options;
    none.rq2_classifiers.clear();
    CHECK_THROWS_AS(run_rq2(pair.long_method, pair.feature_envy, none), ConfigError);
}

TEST_CASE("text tables") {
    TextTable t({"Name", "Value"});
    t.add_row({"a", "1"});
    t.add_row({"longer", "22"});
    CHECK(t.str() == "Name    Value\n-------------\na           1\nlonger     22\n");
    CHECK_THROWS_AS(t.add_row({"x"}), SchemaError);
    CHECK(percent(0.9587) == "95.9%");
    CHECK(fixed(0.31461, 3) == "0.315");
    CHECK(fixed(-0.0001, 3) == "0.000");
}
