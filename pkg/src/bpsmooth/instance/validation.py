import math

import numpy as np

from bpsmooth.core.errors import InstanceShapeError
from bpsmooth.instance.models import BipartiteInstance, FlowNetwork, IntegerFlow, Matching

INT_LIMIT = 2 ** 31


def _is_count(value) -> bool:
    return isinstance(value, (int, np.integer)) and not isinstance(value, bool) and value >= 0


def _validate_bipartite(instance: BipartiteInstance) -> str | None:
    if not (_is_count(instance.n_left) and _is_count(instance.n_right)):
        return 'node count must be a non-negative integer'
    seen = set()
    for i, j, w in instance.edges:
        if not (0 <= i < instance.n_left and 0 <= j < instance.n_right):
            return 'index out of range'
        if not 0.0 <= w <= 1.0:
            return 'weight out of [0,1]'
        if (i, j) in seen:
            return 'duplicate edge'
        seen.add((i, j))
    if instance.complete_flag != (len(seen) == instance.n_left * instance.n_right):
        return 'complete flag does not match edge set'
    return None


def _validate_flow_network(network: FlowNetwork) -> str | None:
    n = network.n_nodes
    for b in network.budgets:
        if abs(b) > INT_LIMIT:
            return 'value exceeds 2^31'
    for tail, head, capacity, cost in network.edges:
        if not (0 <= tail < n and 0 <= head < n):
            return 'index out of range'
        if tail == head:
            return 'self-loop'
        if not _is_count(capacity):
            return 'capacity must be a non-negative integer'
        if capacity > INT_LIMIT:
            return 'value exceeds 2^31'
        if not 0.0 <= cost <= 1.0:
            return 'cost out of [0,1]'
    if sum(network.budgets) != 0:
        return 'budgets do not sum to 0'
    return None


def validate(x: BipartiteInstance | FlowNetwork) -> str | None:
    """
    None если все инварианты выполнены,
    иначе описание первого нарушенного
    """
    if isinstance(x, BipartiteInstance):
        return _validate_bipartite(x)
    if isinstance(x, FlowNetwork):
        return _validate_flow_network(x)
    raise TypeError(f'cannot validate {type(x).__name__}')


def validate_flow(network: FlowNetwork, flow: IntegerFlow) -> str | None:
    if len(flow.flow) != network.m:
        return 'flow length does not match edge count'
    for f, edge in zip(flow.flow, network.edges):
        if not _is_count(f):
            return 'flow must be a non-negative integer'
        if f > edge.capacity:
            return 'flow exceeds capacity'
    balance = network.incidence @ np.asarray(flow.flow, dtype=np.int64)
    bad = np.nonzero(balance != np.asarray(network.budgets, dtype=np.int64))[0]
    if bad.size:
        return f'flow conservation violated at node {int(bad[0]) + 1}'
    return None


def validate_matching(instance: BipartiteInstance, matching: Matching) -> str | None:
    mask = instance.mask
    lefts, rights = set(), set()
    for i, j in sorted(matching.pairs):
        if not (0 <= i < instance.n_left and 0 <= j < instance.n_right) or not mask[i, j]:
            return 'pair is not an edge'
        if i in lefts or j in rights:
            return 'node matched twice'
        lefts.add(i)
        rights.add(j)
    expected = math.fsum(instance.weights[i, j] for i, j in matching.pairs)
    if not math.isclose(matching.weight, expected, rel_tol=1e-12, abs_tol=1e-12):
        return 'weight does not equal the sum of edge weights'
    return None


def zero_complete(instance: BipartiteInstance) -> BipartiteInstance:
    """
    Дополняет квадратный экземпляр до полного ребрами веса 0
    """
    if instance.n_left != instance.n_right:
        raise InstanceShapeError(
            f'zero completion needs n_left == n_right, got {instance.n_left}x{instance.n_right}'
        )
    if instance.complete_flag:
        return instance
    return BipartiteInstance.from_dense(instance.weights)
