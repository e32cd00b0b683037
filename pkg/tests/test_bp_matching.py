import numpy as np
import pytest

from bpsmooth.bp.decode import estimate_matching
from bpsmooth.bp.messages import BeliefSet, beliefs, init_messages, step
from bpsmooth.bp.run import decode_at, run, run_batch
from bpsmooth.bp.trace import write_trace
from bpsmooth.generators.families import GadgetCopies, UniformK22
from bpsmooth.generators.sampling import dense_weights, sample, sample_weights
from bpsmooth.instance.models import BipartiteInstance
from bpsmooth.oracles.matching import mwm


def advance(instance, t, normalized=False):
    state = init_messages(instance, normalized)
    for _ in range(t):
        state = step(state, instance)
    return state


def test_initial_messages(k22):
    state = init_messages(k22)
    np.testing.assert_allclose(state.forward_vector(0, 0), [0.9, 0.0])
    np.testing.assert_allclose(state.forward_vector(1, 0), [0.0, 0.7])


def test_initial_messages_zero_weights():
    instance = BipartiteInstance.from_dense(np.zeros((3, 3)))
    state = init_messages(instance)
    for x in (state.forward_match, state.forward_other, state.backward_match, state.backward_other):
        assert not x.any()


def test_single_edge_messages():
    instance = BipartiteInstance.create(1, 1, [(0, 0, 0.5)])
    assert init_messages(instance).forward_vector(0, 0).tolist() == [0.5]
    state = advance(instance, 1)
    assert state.forward_vector(0, 0).tolist() == [0.5]
    assert np.isneginf(state.forward_other[0, 0])


def test_single_edge_belief():
    instance = BipartiteInstance.create(1, 1, [(0, 0, 0.5)])
    belief_set = beliefs(init_messages(instance), instance)
    assert belief_set.left.tolist() == [[1.0]]


def test_first_step_by_hand(k22):
    state = advance(k22, 1)
    np.testing.assert_allclose(state.forward_vector(0, 0), [0.9, 1.2])


def test_copies_evolve_independently():
    family = GadgetCopies(n=8)
    gadget = sample(family, 2, 0)
    first = BipartiteInstance.from_dense(gadget.weights[:2, :2])
    second = BipartiteInstance.from_dense(gadget.weights[2:, 2:])
    for t in range(6):
        whole = beliefs(advance(gadget, t), gadget).left
        np.testing.assert_allclose(whole[:2, :2], beliefs(advance(first, t), first).left)
        np.testing.assert_allclose(whole[2:, 2:], beliefs(advance(second, t), second).left)
        assert np.isneginf(whole[:2, 2:]).all()


def test_wrong_belief_at_fourth_iteration(k22):
    left = beliefs(advance(k22, 4), k22).left
    np.testing.assert_allclose(left[0], [6.8, 6.4])
    assert decode_at(k22, 4).assignment[0] == 0
    assert mwm(k22).assignment(2)[0] == 1


def test_shift_keeps_argmax(k22):
    raw = beliefs(advance(k22, 5), k22).left.argmax(-1)
    shifted = beliefs(advance(k22, 5, normalized=True), k22).left.argmax(-1)
    np.testing.assert_array_equal(raw, shifted)


def test_estimate_matching():
    estimate = estimate_matching(BeliefSet(0, np.array([[1.2, 0.8], [0.3, 0.9]]), np.empty((2, 2))))
    assert estimate.assignment.tolist() == [0, 1]
    assert estimate.is_matching


def test_estimate_collision():
    estimate = estimate_matching(BeliefSet(0, np.array([[1.0, 0.2], [1.0, 0.2]]), np.empty((2, 2))))
    assert estimate.assignment.tolist() == [0, 0]
    assert not estimate.is_matching


def test_estimate_tie_breaks_to_smaller_index():
    estimate = estimate_matching(BeliefSet(0, np.array([[0.5, 0.5]]), np.empty((2, 1))))
    assert estimate.assignment.tolist() == [0]
    assert estimate.tie_detected


def test_estimate_isolated_node():
    estimate = estimate_matching(BeliefSet(0, np.array([[-np.inf, -np.inf], [0.1, 0.2]]), np.empty((2, 2))))
    assert estimate.assignment.tolist() == [-1, 1]
    assert estimate.is_matching


def test_run_single_edge():
    result = run(BipartiteInstance.create(1, 1, [(0, 0, 0.5)]), t_max=100)
    assert result.converged
    assert result.tau == 0


def test_run_clear_optimum():
    instance = BipartiteInstance.from_dense(np.array([[0.9, 0.1], [0.1, 0.8]]))
    result = run(instance, t_max=1000, oracle_matching=mwm(instance))
    assert result.converged
    assert result.final_assignment.tolist() == [0, 1]
    assert result.matched_oracle


def test_censored_run_reports_t_max(k22):
    result = run(k22, t_max=6, oracle_matching=mwm(k22))
    assert result.censored
    assert result.tau == 6


def test_run_rejects_bad_window(k22):
    with pytest.raises(ValueError):
        run(k22, t_max=10, window=0)


def test_batch_matches_single_runs():
    family = UniformK22()
    dense, mask = dense_weights(family, sample_weights(family, 8, 0, 40))
    batch = run_batch(dense, mask, t_max=300, window=4)
    for k in range(40):
        single = run(BipartiteInstance.from_dense(dense[k]), t_max=300, window=4, normalized=True)
        assert batch.tau[k] == single.tau
        assert batch.converged[k] == single.converged


def test_converged_runs_find_optimum():
    family = UniformK22()
    dense, mask = dense_weights(family, sample_weights(family, 12, 0, 300))
    batch = run_batch(dense, mask, t_max=2000, window=4)
    for k in np.nonzero(batch.converged)[0].tolist():
        instance = BipartiteInstance.from_dense(dense[k])
        expected = mwm(instance).assignment(2)
        picked = np.where(dense[k][np.arange(2), np.maximum(batch.final_assignment[k], 0)] > 0,
                          batch.final_assignment[k], -1)
        np.testing.assert_array_equal(picked, expected)


def test_trace_rows(k22, tmp_path):
    path = tmp_path / 'trace.csv'
    write_trace(k22, path, t_max=2)
    lines = path.read_text(encoding='utf-8').splitlines()
    assert lines[0] == 't,node,r1,r2'
    assert len(lines) == 1 + 3 * 4
    assert lines[1] == '0,u1,1.8,1.2'
