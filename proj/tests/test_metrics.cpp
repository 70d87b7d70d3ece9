#include "csd/error.hpp"
#include "csd/metrics.hpp"
#include "support.hpp"

#include <doctest.h>

#include <cmath>

using namespace csd;

namespace {

std::vector<LabelSet> sets(std::initializer_list<const char *> bits) {
    std::vector<LabelSet> out;
    for (const auto *b : bits) {
        out.push_back(LabelSet::from_string(b));
    }
    return out;
}

} // namespace

TEST_CASE("example-based: worked examples") {
    const auto perfect = example_based(sets({"10", "01", "00"}), sets({"10", "01", "00"}));
    CHECK(perfect.accuracy == 1.0);
    CHECK(perfect.hamming_loss == 0.0);
    CHECK(perfect.exact_match == 1.0);

    // ({1} vs {1,2}) and (empty vs empty).
    const auto mixed = example_based(sets({"10", "00"}), sets({"11", "00"}));
    CHECK(mixed.accuracy == 0.75);
    CHECK(mixed.hamming_loss == 0.25);
    CHECK(mixed.exact_match == 0.5);

    const auto opposite = example_based(sets({"10", "01"}), sets({"01", "10"}));
    CHECK(opposite.accuracy == 0.0);
    CHECK(opposite.hamming_loss == 1.0);
    CHECK(opposite.exact_match == 0.0);

    CHECK_THROWS_AS(example_based(sets({"10"}), sets({"10", "01"})), SchemaError);
}

TEST_CASE("label-based: worked examples") {
    // Label 1: TP 1, FP 1, FN 0. Label 2: TP 1, FP 0, FN 1.
    const auto hand = label_based(sets({"11", "10", "00"}), sets({"11", "00", "01"}));
    CHECK(hand.per_label[0].tp == 1);
    CHECK(hand.per_label[0].fp == 1);
    CHECK(hand.per_label[0].fn == 0);
    CHECK(hand.per_label[1].tp == 1);
    CHECK(hand.per_label[1].fp == 0);
    CHECK(hand.per_label[1].fn == 1);
    CHECK(hand.micro_precision == doctest::Approx(2.0 / 3.0));
    CHECK(hand.micro_recall == doctest::Approx(2.0 / 3.0));
    CHECK(hand.micro_f1 == doctest::Approx(2.0 / 3.0));
    CHECK(hand.macro_precision == doctest::Approx(0.75));
    CHECK(hand.macro_recall == doctest::Approx(0.75));

    const auto none = label_based(sets({"00", "00"}), sets({"10", "01"}));
    CHECK(none.micro_precision == 0.0);
    CHECK(none.micro_recall == 0.0);
    CHECK(none.macro_f1 == 0.0);

    const auto perfect = label_based(sets({"10", "11"}), sets({"10", "11"}));
    CHECK(perfect.macro_precision == 1.0);
    CHECK(perfect.macro_recall == 1.0);
    CHECK(perfect.macro_f1 == 1.0);
    CHECK(perfect.micro_f1 == 1.0);
}

TEST_CASE("ROC area") {
    const std::vector<int> truth{1, 0, 1, 0};
    CHECK(roc_area(std::vector<double>{0.9, 0.8, 0.4, 0.3}, truth) == 0.75);
    CHECK(roc_area(std::vector<double>{0.9, 0.1, 0.8, 0.2}, truth) == 1.0);
    CHECK(roc_area(std::vector<double>{0.5, 0.5, 0.5, 0.5}, truth) == 0.5);
    CHECK_FALSE(roc_area(std::vector<double>{0.1, 0.2}, std::vector<int>{1, 1}).has_value());

    Rng rng(31);
    for (int trial = 0; trial < 50; ++trial) {
        const auto n = 2 + rng.uniform_index(300);
        std::vector<double> scores(n);
        std::vector<int> y(n);
        for (std::size_t i = 0; i < n; ++i) {
            scores[i] = static_cast<double>(rng.uniform_index(20)) / 20.0;
            y[i] = static_cast<int>(rng.uniform_index(2));
        }
        const auto fast = roc_area(scores, y);
        const auto slow = testing::oracle::roc_area(scores, y);
        REQUIRE(fast.has_value() == slow.has_value());
        if (fast) {
            CHECK(std::abs(*fast - *slow) < 1e-12);
            // Strictly monotone transform.
            std::vector<double> moved(n);
            for (std::size_t i = 0; i < n; ++i) {
                moved[i] = std::exp(3.0 * scores[i]) - 7.0;
            }
            CHECK(std::abs(*roc_area(moved, y) - *fast) < 1e-12);
        }
    }
}

TEST_CASE("binary metrics") {
    const std::vector<double> scores{0.9, 0.8, 0.4, 0.3};
    const std::vector<int> predicted{1, 1, 0, 0};
    const std::vector<int> truth{1, 0, 1, 0};
    const auto r = binary_metrics(scores, predicted, truth);
    CHECK(r.accuracy == 0.5);
    CHECK(r.precision == 0.5);
    CHECK(r.recall == 0.5);
    CHECK(r.f_measure == 0.5);
    CHECK(r.f_measure_weighted == 0.5);
    CHECK(*r.roc_area == 0.75);
    const auto &c = r.confusion;
    CHECK(c.tp + c.fp + c.fn + c.tn == 4);

    const auto single = binary_metrics(std::vector<double>{0.2, 0.3}, std::vector<int>{0, 0},
                                       std::vector<int>{0, 0});
    CHECK(single.accuracy == 1.0);
    CHECK_FALSE(single.roc_area.has_value());
    CHECK(to_json(single).at("roc_area").is_null());
}

TEST_CASE("metric invariants on random inputs") {
    Rng rng(13);
    for (int trial = 0; trial < 100; ++trial) {
        const auto n = 1 + rng.uniform_index(60);
        const auto l = 1 + rng.uniform_index(4);
        std::vector<LabelSet> y;
        std::vector<LabelSet> z;
        for (std::size_t i = 0; i < n; ++i) {
            y.push_back(testing::random_labelset(rng, l));
            z.push_back(testing::random_labelset(rng, l));
        }
        const auto e = example_based(y, z);
        CHECK(e.accuracy >= e.exact_match);
        CHECK((e.hamming_loss == 0.0) == (e.exact_match == 1.0));
        const auto swapped = example_based(z, y);
        CHECK(swapped.hamming_loss == e.hamming_loss);
        CHECK(swapped.exact_match == e.exact_match);
        const auto lb = label_based(y, z);
        CHECK(std::abs(lb.micro_f1 - testing::oracle::label_based(y, z).micro_f1) < 1e-12);
        if (l == 1) {
            std::vector<int> p;
            std::vector<int> t;
            for (std::size_t i = 0; i < n; ++i) {
                p.push_back(y[i][0]);
                t.push_back(z[i][0]);
            }
            const auto b = binary_metrics(std::vector<double>(n, 0.5), p, t);
            CHECK(e.accuracy == doctest::Approx(b.accuracy));
            CHECK(e.exact_match == doctest::Approx(b.accuracy));
            CHECK(1.0 - e.hamming_loss == doctest::Approx(b.accuracy));
        }
    }
}
