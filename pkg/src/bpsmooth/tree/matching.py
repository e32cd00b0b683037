from dataclasses import dataclass

import numpy as np

from bpsmooth.core.config import settings
from bpsmooth.core.errors import EnumerationCapError, FamilyParameterError
from bpsmooth.generators.families import SmoothedKnn
from bpsmooth.instance.models import BipartiteInstance
from bpsmooth.tree.build import CompTree

NEG_INF = -np.inf
BRUTE_FORCE_EDGES = 20


@dataclass(frozen=True)
class TMatching:
    """
    Ребра задаются id дочерних вершин дерева
    """
    edges: tuple[int, ...]
    weight: float
    tie_detected: bool = False


@dataclass(frozen=True)
class _Tables:
    taken: tuple[np.ndarray, ...]
    free: tuple[np.ndarray, ...]
    values: tuple[np.ndarray | None, ...]
    choice: tuple[np.ndarray | None, ...]
    tie: tuple[np.ndarray | None, ...]


def _solve(tree: CompTree, tol: float) -> _Tables:
    """
    Динамика снизу вверх с двумя состояниями вершины:
    taken - вершина покрыта ребром к родителю, free - не покрыта им.
    Нижний уровень: оба состояния 0. Вершина выше нижнего уровня
    без детей в состоянии free дает -inf
    """
    depth = tree.depth
    taken = [None] * (depth + 1)
    free = [None] * (depth + 1)
    values = [None] * (depth + 1)
    choice = [None] * (depth + 1)
    tie = [None] * (depth + 1)

    bottom = tree.labels[depth].size
    taken[depth] = np.zeros(bottom)
    free[depth] = np.zeros(bottom)

    for level in range(depth - 1, -1, -1):
        size = tree.labels[level].size
        parent = tree.parents[level + 1]
        child_free = free[level + 1]
        dead = np.isneginf(child_free)
        finite = np.where(dead, 0.0, child_free)
        total = np.bincount(parent, weights=finite, minlength=size)
        n_dead = np.bincount(parent, weights=dead.astype(float), minlength=size)

        taken[level] = np.where(n_dead > 0, NEG_INF, total)

        rest = np.where(n_dead[parent] - dead > 0, NEG_INF, total[parent] - finite)
        value = tree.weights[level + 1] + taken[level + 1] + rest
        best = np.full(size, NEG_INF)
        np.maximum.at(best, parent, value)
        free[level] = best

        is_best = np.isfinite(value) & (value == best[parent])
        picks = np.nonzero(is_best)[0]
        owners, first = np.unique(parent[picks], return_index=True)
        chosen = np.full(size, -1, dtype=np.int64)
        chosen[owners] = picks[first]
        near = np.isfinite(value) & (value >= best[parent] - tol)
        tie[level] = np.bincount(parent, weights=near.astype(float), minlength=size) > 1

        values[level] = value
        choice[level] = chosen

    return _Tables(tuple(taken), tuple(free), tuple(values), tuple(choice), tuple(tie))


def _root_child(tree: CompTree, forced_root_edge) -> int:
    """
    Позиция ребенка корня на уровне 1. forced_root_edge - метка соседа r
    """
    hits = np.nonzero(tree.labels[1] == int(forced_root_edge))[0]
    if not hits.size:
        raise ValueError(f'root has no neighbor {forced_root_edge + 1}')
    return int(hits[0])


def max_t_matching(tree: CompTree,
                   forced_root_edge: int | None = None,
                   tol: float | None = None
                   ) -> TMatching:
    """
    Максимальное по весу T-паросочетание: каждая вершина выше нижнего
    уровня покрыта ровно одним ребром, листья не более чем одним.
    forced_root_edge (метка соседа корня) требует ребро корня к нему.
    Недопустимое ограничение дает вес -inf
    """
    tol = settings.tie_tolerance if tol is None else tol
    tables = _solve(tree, tol)
    if tree.labels[1].size == 0:
        return TMatching((), NEG_INF)

    if forced_root_edge is None:
        root_pick = int(tables.choice[0][0])
        weight = float(tables.free[0][0])
    else:
        root_pick = _root_child(tree, forced_root_edge)
        weight = float(tables.values[0][root_pick])
    if not np.isfinite(weight):
        return TMatching((), NEG_INF)

    edges = [int(tree.offsets[1]) + root_pick]
    tie = forced_root_edge is None and bool(tables.tie[0][0])
    picked = np.array([root_pick])
    for level in range(1, tree.depth + 1):
        covered = np.zeros(tree.labels[level].size, dtype=bool)
        covered[picked[picked >= 0]] = True
        if level == tree.depth:
            break
        free_nodes = np.nonzero(~covered)[0]
        picked = tables.choice[level][free_nodes]
        if free_nodes.size:
            tie = tie or bool(tables.tie[level][free_nodes].any())
        base = int(tree.offsets[level + 1])
        edges.extend((base + picked[picked >= 0]).tolist())
    return TMatching(tuple(sorted(edges)), weight, tie)


def root_values(tree: CompTree, tol: float | None = None) -> np.ndarray:
    """
    t^k(x; r) по всем меткам r другой доли, -inf для не-соседей
    """
    tol = settings.tie_tolerance if tol is None else tol
    tables = _solve(tree, tol)
    out = np.full(tree.n_other, NEG_INF)
    out[tree.labels[1]] = tables.values[0]
    return out


def brute_force_t_matching(tree: CompTree,
                           forced_root_edge: int | None = None,
                           tol: float | None = None
                           ) -> TMatching:
    """
    Перебор всех подмножеств ребер дерева (не более 20 ребер)
    """
    tol = settings.tie_tolerance if tol is None else tol
    n_edges = tree.node_count - 1
    if n_edges > BRUTE_FORCE_EDGES:
        raise EnumerationCapError(f'brute force needs at most {BRUTE_FORCE_EDGES} tree edges, got {n_edges}')

    child = np.arange(1, tree.node_count)
    parent = np.concatenate([
        int(tree.offsets[level - 1]) + tree.parents[level] for level in range(1, tree.depth + 1)
    ]).astype(np.int64) if n_edges else np.zeros(0, dtype=np.int64)
    weight = np.concatenate(tree.weights[1:]) if n_edges else np.zeros(0)

    incidence = np.zeros((n_edges, tree.node_count), dtype=np.int64)
    incidence[np.arange(n_edges), child] = 1
    incidence[np.arange(n_edges), parent] = 1

    subsets = (np.arange(2 ** n_edges)[:, None] >> np.arange(n_edges)) & 1
    cover = subsets @ incidence
    internal = np.arange(tree.node_count) < int(tree.offsets[tree.depth])
    ok = (cover <= 1).all(-1) & (cover[:, internal] == 1).all(-1)
    if forced_root_edge is not None:
        forced = int(tree.offsets[1]) + _root_child(tree, forced_root_edge) - 1
        ok &= subsets[:, forced] == 1
    if not ok.any():
        return TMatching((), NEG_INF)

    totals = np.where(ok, subsets @ weight, NEG_INF)
    best = int(totals.argmax())
    tie = int((totals >= totals[best] - tol).sum()) > 1
    edges = tuple((child[subsets[best] == 1]).tolist())
    return TMatching(edges, float(totals[best]), tie)


def k22_root_values(instance: BipartiteInstance, root: tuple[str, int], k: int) -> np.ndarray:
    """
    t^k(x; r) на полном K2,2 без построения дерева.
    Дерево - две цепочки под корнем, паросочетание на них вынужденное
    """
    if (instance.n_left, instance.n_right) != (2, 2) or not instance.complete_flag:
        raise FamilyParameterError('closed form needs a complete 2x2 instance')
    side, a = root
    w = instance.weights if side == 'u' else instance.weights.T
    p, q = k // 2, (k + 1) // 2
    same = 1 + p // 2 + q // 2
    cross = (p + 1) // 2 + (q + 1) // 2
    out = np.empty(2)
    for r in range(2):
        out[r] = w[a, r] * same + w[1 - a, 1 - r] * cross
    return out


def light_edge_audit(tree: CompTree, tmatching: TMatching, family) -> bool:
    """
    True, если T-паросочетание не содержит легких ребер
    (ребер между разными подграфами H^j)
    """
    if not isinstance(family, SmoothedKnn):
        raise FamilyParameterError(f'light edges are defined only for smoothed_knn, got {family.kind}')
    if not tmatching.edges:
        return True
    lefts, rights = tree.edge_endpoints(tmatching.edges)
    return bool((lefts // 2 == rights // 2).all())
