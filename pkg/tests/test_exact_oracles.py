import math

import numpy as np
import pytest

from bpsmooth.core.errors import EnumerationCapError, InstanceShapeError
from bpsmooth.generators.families import UniformKnn
from bpsmooth.generators.sampling import dense_weights, sample_weights
from bpsmooth.instance.models import BipartiteInstance
from bpsmooth.oracles.matching import (batch_matching_delta, batch_decrease_rate, enumerate_matchings,
                                       matching_delta, matching_table, mwm, rate_bounds, decrease_rate)


def test_enumerate_k22(k22):
    matchings = enumerate_matchings(k22)
    assert len(matchings) == 7
    assert matchings[0].pairs == {(0, 1), (1, 0)}
    assert matchings[0].weight == pytest.approx(1.3)
    assert matchings[1].pairs == {(0, 0), (1, 1)}
    assert matchings[1].weight == pytest.approx(1.25)


def test_enumerate_single_edge():
    instance = BipartiteInstance.create(1, 1, [(0, 0, 0.5)])
    assert [m.pairs for m in enumerate_matchings(instance)] == [{(0, 0)}, frozenset()]


def test_distinct_weights_give_distinct_totals():
    rng = np.random.default_rng(0)
    instance = BipartiteInstance.from_dense(rng.random((3, 3)))
    weights = [m.weight for m in enumerate_matchings(instance)]
    assert len(set(weights)) == len(weights)


def test_enumeration_cap():
    instance = BipartiteInstance.from_dense(np.full((7, 7), 0.5))
    with pytest.raises(EnumerationCapError):
        enumerate_matchings(instance)


def test_mwm_k22(k22):
    best = mwm(k22)
    assert best.pairs == {(0, 1), (1, 0)}
    assert best.weight == pytest.approx(1.3)


def test_mwm_zero_weights():
    best = mwm(BipartiteInstance.from_dense(np.zeros((2, 2))))
    assert best.pairs == frozenset()
    assert best.weight == 0.0


def test_mwm_agrees_with_enumeration():
    family = UniformKnn(n=3)
    weights = sample_weights(family, 3, 0, 50)
    for w in weights:
        instance = BipartiteInstance.from_dense(w.reshape(3, 3))
        assert mwm(instance).weight == pytest.approx(enumerate_matchings(instance)[0].weight)


def test_mwm_sparse_rectangular():
    instance = BipartiteInstance.create(2, 3, [(0, 2, 0.4), (1, 2, 0.9), (1, 0, 0.6)])
    best = mwm(instance)
    assert best.pairs == {(0, 2), (1, 0)}
    assert best.weight == pytest.approx(1.0)


def test_delta_k22(k22):
    report = matching_delta(k22)
    assert report.delta == pytest.approx(0.05)
    assert report.unique_flag
    assert report.second_best.pairs == {(0, 0), (1, 1)}


def test_delta_identity_weights():
    instance = BipartiteInstance.from_dense(np.array([[1.0, 0.0], [0.0, 1.0]]))
    report = matching_delta(instance)
    assert report.best.weight == 2.0
    assert report.delta == 1.0


def test_delta_degenerate():
    instance = BipartiteInstance.from_dense(np.full((2, 2), 0.5))
    report = matching_delta(instance)
    assert report.delta == 0.0
    assert not report.unique_flag


def test_delta_single_matching():
    report = matching_delta(BipartiteInstance.create(1, 1, []))
    assert report.delta is None
    assert report.second_best is None


def test_perfect_only_delta(k22):
    report = matching_delta(k22, perfect_only=True)
    assert report.delta == pytest.approx(0.05)


def test_perfect_only_needs_square():
    with pytest.raises(InstanceShapeError):
        matching_delta(BipartiteInstance.from_dense(np.full((2, 3), 0.5)), perfect_only=True)


def test_sanghavi_c_k22(k22):
    assert decrease_rate(k22) == pytest.approx(0.0125)


def test_sanghavi_c_single_edge():
    assert decrease_rate(BipartiteInstance.create(1, 1, [(0, 0, 0.5)])) == pytest.approx(0.5)


def test_sanghavi_c_without_alternatives():
    assert decrease_rate(BipartiteInstance.create(1, 1, [])) == math.inf


def test_rate_bounds_k22(k22):
    bounds = rate_bounds(k22)
    assert bounds.delta_over_n_side == pytest.approx(0.025)
    assert bounds.delta_over_n_total == pytest.approx(0.0125)
    assert bounds.c >= bounds.delta_over_n_total - 1e-12


def test_c_at_least_delta_over_n():
    family = UniformKnn(n=4)
    weights = sample_weights(family, 21, 0, 100)
    for w in weights:
        bounds = rate_bounds(BipartiteInstance.from_dense(w.reshape(4, 4)))
        assert bounds.c >= bounds.delta_over_n_total - 1e-12


def test_matching_table_k22():
    table = matching_table(2, 2, np.ones((2, 2), dtype=bool))
    assert table.shape == (7, 4)
    assert set(table.sum(1).tolist()) == {0, 1, 2}


def test_batch_oracles_agree_with_single(k22):
    family = UniformKnn(n=3)
    dense, mask = dense_weights(family, sample_weights(family, 17, 0, 60))
    deltas = batch_matching_delta(dense, mask)
    rates = batch_decrease_rate(dense, mask)
    for k in range(60):
        instance = BipartiteInstance.from_dense(dense[k])
        assert deltas[k] == pytest.approx(matching_delta(instance).delta)
        assert rates[k] == pytest.approx(decrease_rate(instance))

    dense = k22.weights[None]
    assert batch_matching_delta(dense, k22.mask)[0] == pytest.approx(0.05)
    assert batch_decrease_rate(dense, k22.mask)[0] == pytest.approx(0.0125)
