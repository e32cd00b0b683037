import numpy as np
import pytest

from bpsmooth.bp.messages import beliefs, init_messages, step
from bpsmooth.core.errors import FamilyParameterError, TreeSizeError
from bpsmooth.generators.families import SmoothedKnn, UniformK22
from bpsmooth.generators.sampling import sample
from bpsmooth.instance.models import BipartiteInstance
from bpsmooth.tree.build import build_tree, write_dot
from bpsmooth.tree.matching import (TMatching, brute_force_t_matching, k22_root_values, light_edge_audit,
                                    max_t_matching, root_values)


def raw_beliefs(instance, t):
    state = init_messages(instance)
    for _ in range(t):
        state = step(state, instance)
    return beliefs(state, instance).left


def test_k22_depth_zero(k22):
    tree = build_tree(k22, ('u', 0), 0)
    assert tree.node_count == 3
    assert tree.labels[1].tolist() == [0, 1]


def test_k22_is_path_like(k22):
    tree = build_tree(k22, ('u', 0), 4)
    assert [level.size for level in tree.labels] == [1, 2, 2, 2, 2, 2]


def test_k33_node_count():
    instance = BipartiteInstance.from_dense(np.full((3, 3), 0.5))
    assert build_tree(instance, ('u', 0), 1).node_count == 10


def test_tree_cap():
    instance = BipartiteInstance.from_dense(np.full((4, 4), 0.5))
    with pytest.raises(TreeSizeError):
        build_tree(instance, ('u', 0), 6, node_cap=1000)


def test_unknown_root(k22):
    with pytest.raises(ValueError):
        build_tree(k22, ('v', 5), 1)


def test_depth_zero_values(k22):
    tree = build_tree(k22, ('u', 0), 0)
    assert max_t_matching(tree, forced_root_edge=0).weight == pytest.approx(0.9)
    assert max_t_matching(tree, forced_root_edge=1).weight == pytest.approx(0.6)


def test_unconstrained_optimum_uses_e11(k22):
    tree = build_tree(k22, ('u', 0), 4)
    best = max_t_matching(tree)
    assert best.weight == pytest.approx(3.4)
    assert int(tree.offsets[1]) in best.edges
    assert max_t_matching(tree, forced_root_edge=1).weight == pytest.approx(3.2)


def test_closed_form_matches_dp():
    family = UniformK22()
    for trial in range(30):
        instance = sample(family, 4, trial)
        for side in ('u', 'v'):
            for root in (0, 1):
                for k in range(7):
                    tree = build_tree(instance, (side, root), k)
                    np.testing.assert_allclose(root_values(tree), k22_root_values(instance, (side, root), k))


def test_dp_matches_brute_force():
    family = UniformK22()
    for trial in range(20):
        instance = sample(family, 6, trial)
        for k in range(4):
            tree = build_tree(instance, ('u', 0), k)
            for forced in (None, 0, 1):
                dp = max_t_matching(tree, forced_root_edge=forced)
                brute = brute_force_t_matching(tree, forced_root_edge=forced)
                assert dp.weight == pytest.approx(brute.weight)


def test_sparse_dp_matches_brute_force():
    instance = BipartiteInstance.create(3, 2, [(0, 0, 0.3), (1, 0, 0.8), (1, 1, 0.4), (2, 1, 0.6)])
    for k in range(3):
        tree = build_tree(instance, ('u', 1), k)
        assert max_t_matching(tree).weight == pytest.approx(brute_force_t_matching(tree).weight)


def test_infeasible_forced_edge():
    instance = BipartiteInstance.create(2, 2, [(0, 0, 0.5), (0, 1, 0.4), (1, 0, 0.7)])
    tree = build_tree(instance, ('u', 0), 1)
    assert max_t_matching(tree, forced_root_edge=0).weight == -np.inf


def test_beliefs_are_twice_tree_values():
    family = UniformK22()
    for trial in range(50):
        instance = sample(family, 1, trial)
        for t in range(9):
            expected = 2 * k22_root_values(instance, ('u', 0), t)
            np.testing.assert_allclose(raw_beliefs(instance, t)[0], expected)


def test_sparse_beliefs_follow_tree_argmax():
    rng = np.random.default_rng(5)
    checked = 0
    while checked < 30:
        n_left, n_right = rng.integers(1, 4, size=2)
        mask = rng.random((n_left, n_right)) < 0.7
        if not mask.any():
            continue
        instance = BipartiteInstance.from_dense(rng.random((n_left, n_right)), mask)
        for t in range(5):
            left = raw_beliefs(instance, t)
            for i in range(n_left):
                if not mask[i].any():
                    continue
                values = root_values(build_tree(instance, ('u', i), t))
                if np.isfinite(values.max()):
                    assert left[i].argmax() == values.argmax()
        checked += 1


def test_light_edges_never_chosen():
    family = SmoothedKnn(n=4, phi=26)
    for trial in range(5):
        instance = sample(family, 2, trial)
        for side in ('u', 'v'):
            for root in range(4):
                for k in range(5):
                    tree = build_tree(instance, (side, root), k)
                    assert light_edge_audit(tree, max_t_matching(tree), family)


def test_light_edge_detected():
    family = SmoothedKnn(n=4, phi=26)
    tree = build_tree(sample(family, 0, 0), ('u', 0), 1)
    crossing = TMatching((int(tree.offsets[1]) + 2,), 0.0)
    assert not light_edge_audit(tree, crossing, family)


def test_single_subgraph_has_no_light_edges():
    family = SmoothedKnn(n=2, phi=26)
    tree = build_tree(sample(family, 0, 0), ('u', 0), 3)
    assert light_edge_audit(tree, max_t_matching(tree), family)


def test_audit_needs_smoothed_family(k22):
    tree = build_tree(k22, ('u', 0), 1)
    with pytest.raises(FamilyParameterError):
        light_edge_audit(tree, max_t_matching(tree), UniformK22())


def test_dot_marks_chosen_edges(k22):
    tree = build_tree(k22, ('u', 0), 0)
    dot = write_dot(tree, max_t_matching(tree))
    assert dot.startswith('graph comptree {')
    assert 'n0 -- n1 [label="0.9", penwidth=3];' in dot
    assert 'n0 -- n2 [label="0.6"];' in dot
