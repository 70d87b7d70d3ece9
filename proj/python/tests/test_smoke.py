import math

import numpy as np
import pytest

import csd


@pytest.fixture(scope="module")
def pair():
    return csd.synthetic_pair()


def test_reference_counts(pair):
    lm, fe = pair
    assert len(lm) == 420 and lm.positives() == 140
    assert len(csd.find_common_instances(lm, fe)) == 395
    merged = csd.merge_single_label(lm, fe)
    assert len(merged) == 840
    assert csd.detect_disparity(merged)["conflicting_smelly"] == 132
    clean = csd.remove_disparity(merged)
    assert (len(clean), clean.positives()) == (708, 140)


def test_stats(pair):
    stats = csd.compute_stats(csd.build_multilabel(*pair))
    assert stats["n_instances"] == 445
    assert stats["label_set_counts"] == {"11": 85, "10": 55, "01": 55, "00": 250}
    assert abs(stats["density"] - 0.314) <= 0.001


def test_dataset_round_trip():
    x = np.array([[1.0, 2.5], [3.0, -0.0], [1e-300, 7.0]])
    d = csd.Dataset("t", ["a", "b"], x, ["smell"], [[1, 0, 1]])
    back = csd.parse_arff(csd.write_arff(d))
    assert back == d
    assert np.array_equal(back.features, x)
    csv = csd.parse_csv(csd.write_csv(d), ["smell"], name="t")
    assert csv.labels == [[1, 0, 1]]


def test_metrics():
    e = csd.example_based(["10", "00"], ["11", "00"])
    assert (e["accuracy"], e["hamming_loss"], e["exact_match"]) == (0.75, 0.25, 0.5)
    assert csd.roc_area([0.9, 0.8, 0.4, 0.3], [1, 0, 1, 0]) == 0.75
    assert csd.roc_area([0.1, 0.2], [1, 1]) is None
    with pytest.raises(csd.SchemaError):
        csd.example_based(["10"], ["10", "01"])


def test_learners_memorize():
    rng = np.random.default_rng(3)
    x = rng.permutation(60).reshape(30, 2).astype(float)
    y = list(rng.integers(0, 2, 30))
    model = csd.train_classifier(x, y, "j48u")
    assert model.n_features == 2
    p = model.predict_proba(list(x[0]))
    assert math.isclose(sum(p), 1.0)
    restored = csd.Classifier.from_json(model.to_json())
    assert [restored.predict(list(r)) for r in x] == [model.predict(list(r)) for r in x]


def test_multilabel_and_cv(pair):
    mld = csd.build_multilabel(*pair)
    model = csd.train_multilabel(mld, "lp", "j48p")
    assert len(model.predict(list(mld.features[0]))) == 2
    r = csd.cross_validate(mld.to_tabular(), method="cc", base="j48p", k=3, reps=1)
    assert r["task"] == "multilabel"
    assert 0.0 <= r["summary"]["accuracy"]["mean"] <= 1.0
    with pytest.raises(csd.ConfigError):
        csd.cross_validate(mld.to_tabular(), method="nope", k=3, reps=1)


def test_rq_reports(pair):
    report, text = csd.run_rq1(*pair)
    assert report["common_instances"] == 395
    assert "Long Method" in text
    report, text = csd.run_rq3(*pair, k=2, reps=1)
    assert set(report["methods"]) == {"cc", "lp"}
