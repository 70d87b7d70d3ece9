#include "csd/classifier.hpp"
#include "csd/error.hpp"
#include "csd/tree.hpp"
#include "support.hpp"

#include <doctest.h>

#include <cmath>

using namespace csd;

namespace {

struct Problem {
    FeatureMatrix x;
    std::vector<int> y;
    [[nodiscard]] ClassProblem view(int classes = 2) const { return {x, y, classes}; }
};

Problem random_problem(Rng &rng, std::size_t n, std::size_t f, bool distinct) {
    Problem p{distinct ? testing::distinct_matrix(rng, n, f) : testing::random_matrix(rng, n, f, 4), {}};
    for (std::size_t r = 0; r < n; ++r) {
        // Depends on two features plus noise, so trees have something to find.
        const double score = p.x(r, 0) * 0.1 + p.x(r, f > 1 ? 1 : 0) + rng.normal();
        p.y.push_back(score > 1.0 ? 1 : 0);
    }
    return p;
}

double training_accuracy(const ClassifierModel &m, const Problem &p) {
    std::size_t ok = 0;
    for (std::size_t r = 0; r < p.x.rows(); ++r) {
        ok += m.predict(p.x.row(r)) == p.y[r] ? 1 : 0;
    }
    return static_cast<double>(ok) / static_cast<double>(p.x.rows());
}

} // namespace

TEST_CASE("tree: 1-D example splits at 2.5") {
    const Problem p{FeatureMatrix(4, 1, {1, 2, 3, 4}), {0, 0, 1, 1}};
    const auto t = train_tree(p.view(), TreeParams{.pruned = false, .min_instances = 1});
    REQUIRE_FALSE(t.root().is_leaf());
    CHECK(t.root().feature == 0);
    CHECK(t.root().threshold == 2.5);
    for (std::size_t r = 0; r < 4; ++r) {
        CHECK(t.predict(p.x.row(r)) == p.y[r]);
    }
    CHECK(t.predict(std::vector<double>{1.7}) == 0);
    CHECK(t.predict(std::vector<double>{2.5}) == 0);
    CHECK(t.predict(std::vector<double>{2.5000001}) == 1);
}

TEST_CASE("tree: pure data gives one leaf with probability 1 for that class") {
    const Problem p{FeatureMatrix(3, 2, {1, 2, 3, 4, 5, 6}), {1, 1, 1}};
    const auto t = train_tree(p.view());
    CHECK(t.node_count() == 1);
    CHECK(t.predict(std::vector<double>{0, 0}) == 1);
    // Laplace smoothing keeps the other class above zero, the argmax is unchanged.
    const auto proba = t.predict_proba(std::vector<double>{0, 0});
    CHECK(proba[1] > proba[0]);
}

TEST_CASE("tree: dimension check and input validation") {
    const Problem p{FeatureMatrix(4, 1, {1, 2, 3, 4}), {0, 0, 1, 1}};
    const auto t = train_tree(p.view());
    CHECK_THROWS_AS(t.predict_proba(std::vector<double>{1, 2}), SchemaError);
    const Problem empty{FeatureMatrix(0, 1), {}};
    CHECK_THROWS_AS(train_tree(empty.view()), EmptyDataError);
    const Problem bad{FeatureMatrix(2, 1, {1, 2}), {0, 3}};
    CHECK_THROWS_AS(train_tree(bad.view()), SchemaError);
}

TEST_CASE("tree: ties pick the lowest feature index") {
    // Features 0 and 1 are identical, so every split is tied.
    const Problem p{FeatureMatrix(4, 2, {1, 2, 3, 4, 1, 2, 3, 4}), {0, 0, 1, 1}};
    const auto t = train_tree(p.view(), TreeParams{.pruned = false, .min_instances = 1});
    CHECK(t.root().feature == 0);
}

TEST_CASE("tree: properties on random data") {
    Rng rng(21);
    for (int trial = 0; trial < 25; ++trial) {
        const auto n = 20 + rng.uniform_index(150);
        const auto f = 1 + rng.uniform_index(6);
        const auto p = random_problem(rng, n, f, trial % 2 == 0);

        const auto unpruned = train_tree(p.view(), TreeParams{.pruned = false});
        const auto pruned = train_tree(p.view(), TreeParams{.pruned = true});
        CHECK(pruned.node_count() <= unpruned.node_count());

        // Probabilities are distributions.
        for (std::size_t r = 0; r < n; r += 7) {
            double sum = 0.0;
            for (auto v : pruned.predict_proba(p.x.row(r))) {
                CHECK(v >= 0.0);
                CHECK(v <= 1.0);
                sum += v;
            }
            CHECK(std::abs(sum - 1.0) < 1e-9);
        }

        // Row order does not matter.
        std::vector<std::size_t> perm(n);
        for (std::size_t i = 0; i < n; ++i) {
            perm[i] = i;
        }
        rng.shuffle(perm);
        const auto px = p.x.select_rows(perm);
        std::vector<int> py;
        for (auto i : perm) {
            py.push_back(p.y[i]);
        }
        CHECK(train_tree(ClassProblem{px, py, 2}, TreeParams{}) == pruned);

        // Same inputs, same model, down to the serialized bytes.
        CHECK(train_tree(p.view(), TreeParams{}).to_json().dump() == pruned.to_json().dump());
        CHECK(TreeModel::from_json(pruned.to_json()) == pruned);
    }
}

TEST_CASE("tree: memorizes duplicate-free data when unpruned with min_instances 1") {
    Rng rng(8);
    for (int trial = 0; trial < 10; ++trial) {
        const auto p = random_problem(rng, 30 + rng.uniform_index(200), 1 + rng.uniform_index(5), true);
        const ClassifierModel m(train_tree(p.view(), TreeParams{.pruned = false, .min_instances = 1}));
        CHECK(training_accuracy(m, p) == 1.0);
    }
}

TEST_CASE("tree: pruning collapses a noise-only problem") {
    Rng rng(3);
    Problem p{testing::distinct_matrix(rng, 200, 3), {}};
    for (std::size_t r = 0; r < 200; ++r) {
        p.y.push_back(rng.uniform01() < 0.1 ? 1 : 0);
    }
    const auto pruned = train_tree(p.view());
    const auto unpruned = train_tree(p.view(), TreeParams{.pruned = false, .min_instances = 1});
    CHECK(pruned.node_count() < unpruned.node_count());
}

TEST_CASE("added errors follow the pessimistic bound") {
    CHECK(added_errors(10, 0, 0.25) == doctest::Approx(10 * (1 - std::pow(0.25, 0.1))));
    CHECK(added_errors(1, 1, 0.25) == 0.0);
    // Upper bound grows with the observed errors but stays within n.
    CHECK(added_errors(100, 5, 0.25) > 0.0);
    CHECK(5 + added_errors(100, 5, 0.25) < 100.0);
}

TEST_CASE("feature ranks follow value order") {
    const FeatureMatrix x(5, 1, {3.0, -0.0, 1.5, 0.0, 3.0});
    const FeatureRanks ranks(x);
    CHECK(ranks.rank(0, 1) == ranks.rank(0, 3));
    CHECK(ranks.rank(0, 0) == ranks.rank(0, 4));
    CHECK(ranks.rank(0, 1) < ranks.rank(0, 2));
    CHECK(ranks.rank(0, 2) < ranks.rank(0, 0));
    CHECK(ranks.value(0, ranks.rank(0, 2)) == 1.5);
}

TEST_CASE("ensembles: degenerate configurations reduce to one tree") {
    Rng rng(4);
    const auto p = random_problem(rng, 80, 4, true);
    const TreeParams unpruned{.pruned = false, .min_instances = 1};
    const auto single = train_tree(p.view(), unpruned);

    auto forest = LearnerSpec::random_forest(3, 4);
    std::get<EnsembleParams>(forest.params).bootstrap = false;
    const auto rf = train_classifier(p.view(), forest, 9);
    REQUIRE(rf.ensemble().members.size() == 3);
    for (const auto &m : rf.ensemble().members) {
        CHECK(m.tree() == single);
    }

    auto bag = LearnerSpec::bagging(LearnerSpec::tree(TreeParams{}), 1);
    std::get<EnsembleParams>(bag.params).bootstrap = false;
    const auto bagged = train_classifier(p.view(), bag, 9);
    CHECK(bagged.ensemble().members.front().tree() == train_tree(p.view(), TreeParams{}));
    for (std::size_t r = 0; r < p.x.rows(); ++r) {
        CHECK(bagged.predict_proba(p.x.row(r)) == train_tree(p.view(), TreeParams{}).predict_proba(p.x.row(r)));
    }
}

TEST_CASE("ensembles: presets, determinism, serialization") {
    Rng rng(6);
    const auto p = random_problem(rng, 120, 8, false);
    for (const std::string name : {"j48p", "j48u", "bj48p", "bj48u", "rf", "brf"}) {
        CAPTURE(name);
        const auto spec = learner_preset(name);
        const auto a = train_classifier(p.view(), spec, 17);
        const auto b = train_classifier(p.view(), spec, 17);
        CHECK(a == b);
        CHECK(a.to_json().dump() == b.to_json().dump());
        CHECK(ClassifierModel::from_json(a.to_json()) == a);
        CHECK(training_accuracy(a, p) > 0.6);
        CHECK_FALSE(learner_display_name(name).empty());
    }
    CHECK(learner_display_name("brf") == "B-Random Forest");
    CHECK(learner_display_name("bj48p") == "B-J48 Pruned");
    CHECK_THROWS_AS(learner_preset("svm"), ConfigError);

    const auto rf = train_classifier(p.view(), learner_preset("rf"), 1);
    CHECK(rf.ensemble().members.size() == 100);
    const auto brf = train_classifier(p.view(), learner_preset("brf"), 1);
    CHECK(brf.ensemble().members.size() == 10);
    CHECK(brf.ensemble().members.front().ensemble().members.size() == 100);
    CHECK(train_classifier(p.view(), learner_preset("rf"), 2) != rf);
}

TEST_CASE("serialization rejects foreign documents") {
    CHECK_THROWS_AS(ClassifierModel::from_json(nlohmann::json{{"format", "other"}}), SchemaError);
    CHECK_THROWS_AS(ClassifierModel::from_json(nlohmann::json{{"format", "csd.classifier"}, {"version", 99}}),
                    SchemaError);
}
