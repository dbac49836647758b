"""Decision tree: split scoring oracle, pruning arithmetic, determinism."""
from __future__ import annotations

import math
from collections import Counter
from statistics import NormalDist

import numpy as np
import pytest

from rumourstance.features import FeatureVector
from rumourstance.learners import ModelError, TreeParams, fit_tree, predict
from rumourstance.learners.tree import added_errors, info_gain_ratio


def entropy(labels):
    n = len(labels)
    total = 0.0
    for count in Counter(labels).values():
        p = count / n
        total -= p * math.log2(p)
    return total


def oracle_gain_ratio(values, labels, threshold):
    """Straight transcription of the C4.5 gain-ratio definition."""
    left = [l for v, l in zip(values, labels) if v <= threshold]
    right = [l for v, l in zip(values, labels) if v > threshold]
    if not left or not right:
        return 0.0
    n = len(labels)
    wl, wr = len(left) / n, len(right) / n
    gain = entropy(labels) - wl * entropy(left) - wr * entropy(right)
    split_info = -(wl * math.log2(wl) + wr * math.log2(wr))
    if split_info == 0.0:
        return 0.0
    return gain / split_info


def oracle_added_errors(n, e, cf):
    """Pessimistic error count from the normal approximation to the binomial
    upper confidence bound, the same published recipe the pruner uses."""
    if e < 1.0:
        base = n * (1.0 - cf ** (1.0 / n))
        if e == 0.0:
            return base
        return base + e * (oracle_added_errors(n, 1.0, cf) - base)
    if e + 0.5 >= n:
        return max(n - e, 0.0)
    z = NormalDist().inv_cdf(1.0 - cf)
    f = (e + 0.5) / n
    upper = (
        f + z * z / (2 * n) + z * math.sqrt(f / n - f * f / n + z * z / (4 * n * n))
    ) / (1 + z * z / n)
    return upper * n - e


def random_column(rng, n):
    values = rng.normal(size=n).round(3).tolist()
    labels = rng.choice(["support", "deny", "query", "comment"], size=n).tolist()
    return values, labels


def make_vectors(X, labels):
    return [
        FeatureVector(
            tweet_id=str(i),
            schema_fingerprint=0,
            values={j: float(v) for j, v in enumerate(row) if v != 0.0},
            label=lab,
        )
        for i, (row, lab) in enumerate(zip(X, labels))
    ]


def test_gain_ratio_matches_oracle():
    rng = np.random.default_rng(11)
    for _ in range(200):
        n = int(rng.integers(2, 30))
        values, labels = random_column(rng, n)
        threshold = float(rng.choice(values))
        got = info_gain_ratio(values, labels, threshold)
        want = oracle_gain_ratio(values, labels, threshold)
        assert got == pytest.approx(want, abs=1e-12)


def test_gain_ratio_perfect_split():
    assert info_gain_ratio([0.0, 0.1, 0.9, 1.0], ["support"] * 2 + ["deny"] * 2, 0.5) == 1.0


def test_gain_ratio_one_sided_is_zero():
    assert info_gain_ratio([1, 2, 3], ["support", "deny", "query"], 5.0) == 0.0


def test_added_errors_matches_oracle():
    rng = np.random.default_rng(5)
    for _ in range(200):
        n = int(rng.integers(1, 60))
        e = float(rng.integers(0, n + 1))
        got = added_errors(n, e, 0.25)
        want = oracle_added_errors(n, e, 0.25)
        assert got == pytest.approx(want, rel=1e-9, abs=1e-9)


def test_added_errors_fractional_e():
    # e in (0, 1) interpolates between the e=0 and e=1 cases
    lo = added_errors(20, 0.0, 0.25)
    hi = added_errors(20, 1.0, 0.25)
    mid = added_errors(20, 0.5, 0.25)
    assert lo < mid < hi
    assert mid == pytest.approx((lo + hi) / 2, rel=1e-9)


def test_tree_learns_clean_split():
    rng = np.random.default_rng(2)
    X = np.zeros((40, 3))
    labels = []
    for i in range(40):
        if i % 2 == 0:
            X[i, 1] = rng.uniform(2.0, 3.0)
            labels.append("support")
        else:
            X[i, 1] = rng.uniform(-3.0, -2.0)
            labels.append("deny")
        X[i, 0] = rng.normal()
    model = fit_tree(make_vectors(X, labels), n_features=3)
    for vec, lab in zip(make_vectors(X, labels), labels):
        assert predict(model, vec)[0] == lab


def test_tree_deterministic():
    rng = np.random.default_rng(4)
    X = rng.normal(size=(30, 4))
    labels = rng.choice(["support", "deny", "query"], size=30).tolist()
    a = fit_tree(make_vectors(X, labels), n_features=4)
    b = fit_tree(make_vectors(X, labels), n_features=4)
    assert a.payload == b.payload


def count_nodes(node):
    if node["kind"] == "leaf":
        return 1
    return 1 + count_nodes(node["left"]) + count_nodes(node["right"])


def test_pruning_never_grows_the_tree():
    rng = np.random.default_rng(6)
    X = rng.normal(size=(60, 5))
    labels = rng.choice(["support", "deny", "query", "comment"], size=60).tolist()
    vecs = make_vectors(X, labels)
    pruned = fit_tree(vecs, params=TreeParams(pruning=True), n_features=5)
    raw = fit_tree(vecs, params=TreeParams(pruning=False), n_features=5)
    assert count_nodes(pruned.payload["root"]) <= count_nodes(raw.payload["root"])


def min_leaf_ok(node, min_leaf):
    if node["kind"] == "leaf":
        return sum(node["counts"]) >= min_leaf or sum(node["counts"]) == 0
    return min_leaf_ok(node["left"], min_leaf) and min_leaf_ok(node["right"], min_leaf)


def test_min_leaf_respected():
    rng = np.random.default_rng(8)
    X = rng.normal(size=(50, 4))
    labels = rng.choice(["support", "deny"], size=50).tolist()
    model = fit_tree(make_vectors(X, labels), params=TreeParams(min_leaf=5), n_features=4)
    assert min_leaf_ok(model.payload["root"], 5)


def test_single_class_input_gives_constant_tree():
    X = np.arange(12, dtype=float).reshape(6, 2)
    model = fit_tree(make_vectors(X, ["query"] * 6), n_features=2)
    root = model.payload["root"]
    assert root["kind"] == "leaf"
    for row in X:
        vec = FeatureVector(
            tweet_id="p", schema_fingerprint=0, values=dict(enumerate(map(float, row))), label=None
        )
        label, scores = predict(model, vec)
        assert label == "query"
        assert scores["query"] == 1.0


def test_missing_columns_read_as_zero():
    vecs = [
        FeatureVector(tweet_id="a", schema_fingerprint=0, values={0: 5.0}, label="support"),
        FeatureVector(tweet_id="b", schema_fingerprint=0, values={}, label="deny"),
        FeatureVector(tweet_id="c", schema_fingerprint=0, values={0: 5.0}, label="support"),
        FeatureVector(tweet_id="d", schema_fingerprint=0, values={}, label="deny"),
        FeatureVector(tweet_id="e", schema_fingerprint=0, values={0: 5.0}, label="support"),
        FeatureVector(tweet_id="f", schema_fingerprint=0, values={}, label="deny"),
    ]
    model = fit_tree(vecs, params=TreeParams(min_leaf=1), n_features=1)
    dense_zero = FeatureVector(tweet_id="z", schema_fingerprint=0, values={0: 0.0}, label=None)
    sparse_zero = FeatureVector(tweet_id="s", schema_fingerprint=0, values={}, label=None)
    assert predict(model, dense_zero) == predict(model, sparse_zero)
    assert predict(model, sparse_zero)[0] == "deny"


def test_tie_break_prefers_class_order():
    # perfectly balanced leaf: Support wins the argmax by order
    vecs = [
        FeatureVector(tweet_id=str(i), schema_fingerprint=0, values={}, label=lab)
        for i, lab in enumerate(["comment", "support", "comment", "support"])
    ]
    model = fit_tree(vecs, n_features=1)
    probe = FeatureVector(tweet_id="p", schema_fingerprint=0, values={}, label=None)
    assert predict(model, probe)[0] == "support"


def test_fingerprint_guard():
    vecs = [
        FeatureVector(tweet_id=str(i), schema_fingerprint=77, values={0: float(i)}, label="support")
        for i in range(4)
    ]
    model = fit_tree(vecs, n_features=1)
    assert model.schema_fingerprint == 77
    alien = FeatureVector(tweet_id="x", schema_fingerprint=88, values={0: 1.0}, label=None)
    with pytest.raises(ModelError):
        predict(model, alien)
