#include "csd/error.hpp"
#include "csd/multilabel.hpp"
#include "support.hpp"

#include <doctest.h>

#include <set>

using namespace csd;

namespace {

const TreeParams kMemorize{.pruned = false, .min_instances = 1};

MultiLabelDataset dependent_toy(Rng &rng, std::size_t n) {
    // Label 2 copies label 1; label 1 depends on feature 0.
    const auto x = testing::distinct_matrix(rng, n, 3);
    std::vector<std::uint8_t> first(n);
    for (std::size_t r = 0; r < n; ++r) {
        first[r] = x(r, 0) > static_cast<double>(n) / 4.0 ? 1 : 0;
    }
    return testing::multilabel(x, {first, first});
}

} // namespace

TEST_CASE("method names") {
    CHECK(parse_method("br") == MultiLabelMethod::br);
    CHECK(parse_method("cc") == MultiLabelMethod::cc);
    CHECK(parse_method("lp") == MultiLabelMethod::lp);
    CHECK(parse_method("lc") == MultiLabelMethod::lp);
    CHECK(method_name(MultiLabelMethod::lp) == "lp");
    CHECK_THROWS_AS(parse_method("rakel"), ConfigError);
}

TEST_CASE("BR members equal trees trained on each projection") {
    Rng rng(2);
    const auto x = testing::distinct_matrix(rng, 8, 2);
    const auto m = testing::multilabel(x, {{1, 0, 1, 0, 1, 1, 0, 0}, {0, 0, 1, 1, 0, 1, 1, 0}});
    const auto model = train_br(m, make_trainer(LearnerSpec::tree(kMemorize)), 0);
    REQUIRE(model.members().size() == 2);
    for (std::size_t l = 0; l < 2; ++l) {
        const auto col = m.label_column(l);
        const std::vector<int> y(col.begin(), col.end());
        CHECK(model.members()[l].tree() == train_tree(ClassProblem{x, y, 2}, kMemorize));
    }
}

TEST_CASE("BR over constant labels predicts the constant") {
    Rng rng(3);
    const auto x = testing::distinct_matrix(rng, 12, 2);
    const auto m = testing::multilabel(x, {std::vector<std::uint8_t>(12, 0), std::vector<std::uint8_t>(12, 1)});
    const auto model = train_br(m, make_trainer(LearnerSpec::tree(TreeParams{})), 0);
    for (std::size_t r = 0; r < 12; ++r) {
        CHECK(model.predict_labels(x.row(r)).to_string() == "01");
    }
}

TEST_CASE("BR is equivariant under label permutation with a deterministic base") {
    Rng rng(10);
    const auto x = testing::distinct_matrix(rng, 60, 3);
    const auto a = testing::random_bits(rng, 60, 0.4);
    const auto b = testing::random_bits(rng, 60, 0.5);
    const auto trainer = make_trainer(LearnerSpec::tree(TreeParams{}));
    const auto ab = train_br(testing::multilabel(x, {a, b}), trainer, 0);
    const auto ba = train_br(testing::multilabel(x, {b, a}), trainer, 0);
    for (std::size_t r = 0; r < 60; ++r) {
        const auto p = ab.predict_labels(x.row(r));
        const auto q = ba.predict_labels(x.row(r));
        CHECK(p[0] == q[1]);
        CHECK(p[1] == q[0]);
    }
}

TEST_CASE("CC: second member sees the features plus the first label") {
    Rng rng(4);
    const auto m = dependent_toy(rng, 40);
    std::vector<std::size_t> widths;
    const BaseTrainer spy = [&](const ClassProblem &p, std::uint64_t seed) {
        widths.push_back(p.x.cols());
        return train_classifier(p, LearnerSpec::tree(kMemorize), seed);
    };
    const auto model = train_cc(m, spy, {}, 0);
    CHECK(widths == std::vector<std::size_t>{3, 4});
    CHECK(model.chain_order() == std::vector<std::size_t>{0, 1});
    CHECK(model.members()[1].n_features() == 4);

    // The 82-metric case: the chained member trains on 83 columns.
    const auto wide = testing::multilabel(testing::distinct_matrix(rng, 30, 82),
                                          {testing::random_bits(rng, 30, 0.5), testing::random_bits(rng, 30, 0.5)});
    widths.clear();
    train_cc(wide, spy, {}, 0);
    CHECK(widths == std::vector<std::size_t>{82, 83});
}

TEST_CASE("CC: a copied label is always predicted equal to the first") {
    Rng rng(5);
    const auto m = dependent_toy(rng, 50);
    const auto model = train_cc(m, make_trainer(LearnerSpec::tree(kMemorize)), {}, 0);
    std::size_t exact = 0;
    for (std::size_t r = 0; r < m.n_instances(); ++r) {
        const auto p = model.predict_labels(m.features().row(r));
        CHECK(p[0] == p[1]);
        exact += p == m.labels_of(r) ? 1 : 0;
    }
    CHECK(exact == m.n_instances());
    // Off the training data as well.
    for (int probe = 0; probe < 200; ++probe) {
        const std::vector<double> x{rng.uniform(-5, 40), rng.uniform(-3, 3), rng.uniform(-3, 3)};
        const auto p = model.predict_labels(x);
        CHECK(p[0] == p[1]);
    }
}

TEST_CASE("CC: chain order validation and reversed order") {
    Rng rng(6);
    const auto m = dependent_toy(rng, 20);
    const auto trainer = make_trainer(LearnerSpec::tree(kMemorize));
    CHECK_THROWS_AS(train_cc(m, trainer, {0, 0}, 0), SchemaError);
    CHECK_THROWS_AS(train_cc(m, trainer, {0}, 0), SchemaError);
    const auto reversed = train_cc(m, trainer, {1, 0}, 0);
    CHECK(reversed.chain_order() == std::vector<std::size_t>{1, 0});
    for (std::size_t r = 0; r < m.n_instances(); ++r) {
        CHECK(reversed.predict_labels(m.features().row(r)) == m.labels_of(r));
    }
}

TEST_CASE("LP: classes are the training label sets and nothing else") {
    Rng rng(7);
    const std::size_t n = 60;
    const auto x = testing::distinct_matrix(rng, n, 3);
    std::vector<std::uint8_t> both(n);
    for (auto &b : both) {
        b = static_cast<std::uint8_t>(rng.uniform_index(2));
    }
    const auto m = testing::multilabel(x, {both, both});
    const auto model = train_lp(m, make_trainer(LearnerSpec::random_forest(20)), 3);
    CHECK(model.lp_classes() == std::vector<std::string>{"00", "11"});
    for (int probe = 0; probe < 300; ++probe) {
        const std::vector<double> q{rng.uniform(-10, 40), rng.uniform(-4, 4), rng.uniform(-4, 4)};
        const auto s = model.predict_labels(q).to_string();
        CHECK((s == "00" || s == "11"));
    }
}

TEST_CASE("LP: four label sets become four classes") {
    Rng rng(8);
    const auto x = testing::distinct_matrix(rng, 40, 2);
    std::vector<std::uint8_t> a(40);
    std::vector<std::uint8_t> b(40);
    for (std::size_t r = 0; r < 40; ++r) {
        a[r] = r % 2;
        b[r] = (r / 2) % 2;
    }
    const auto model = train_lp(testing::multilabel(x, {a, b}), make_trainer(LearnerSpec::tree(kMemorize)), 0);
    CHECK(model.lp_classes() == std::vector<std::string>{"00", "01", "10", "11"});
    CHECK(model.members().front().n_classes() == 4);
}

TEST_CASE("all methods memorize duplicate-free training data") {
    Rng rng(9);
    const auto trainer = make_trainer(LearnerSpec::tree(kMemorize));
    for (int trial = 0; trial < 5; ++trial) {
        const auto n = 30 + rng.uniform_index(100);
        const auto l = 1 + rng.uniform_index(3);
        std::vector<std::vector<std::uint8_t>> cols;
        for (std::size_t j = 0; j < l; ++j) {
            cols.push_back(testing::random_bits(rng, n, 0.4));
        }
        const auto m = testing::multilabel(testing::distinct_matrix(rng, n, 4), cols);
        for (const auto method : {MultiLabelMethod::br, MultiLabelMethod::cc, MultiLabelMethod::lp}) {
            const auto model = train_multilabel(m, method, trainer, 1);
            for (std::size_t r = 0; r < n; ++r) {
                CHECK(model.predict_labels(m.features().row(r)) == m.labels_of(r));
            }
        }
    }
}

TEST_CASE("multilabel models serialize") {
    Rng rng(12);
    const auto m = dependent_toy(rng, 30);
    for (const auto method : {MultiLabelMethod::br, MultiLabelMethod::cc, MultiLabelMethod::lp}) {
        const auto model = train_multilabel(m, method, make_trainer(LearnerSpec::tree(TreeParams{})), 1);
        const auto back = MultiLabelModel::from_json(model.to_json());
        CHECK(back.to_json().dump() == model.to_json().dump());
        for (std::size_t r = 0; r < m.n_instances(); ++r) {
            CHECK(back.predict_labels(m.features().row(r)) == model.predict_labels(m.features().row(r)));
        }
        CHECK_THROWS_AS(model.predict_labels(std::vector<double>{1.0}), SchemaError);
    }
}
