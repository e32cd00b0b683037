import math
from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple

import numpy as np
from scipy.optimize import linear_sum_assignment

from bpsmooth.core.config import settings
from bpsmooth.core.errors import EnumerationCapError, InstanceShapeError
from bpsmooth.instance.models import BipartiteInstance, IntegerFlow, Matching

TABLE_CELLS = 4_000_000


@dataclass(frozen=True)
class GapReport:
    """
    Лучшее и второе по качеству решения.
    second_best и delta равны None, если допустимое решение единственно
    """
    best: Matching | IntegerFlow
    second_best: Matching | IntegerFlow | None
    delta: float | None
    unique_flag: bool


class RateBounds(NamedTuple):
    c: float
    delta: float
    delta_over_n_side: float
    delta_over_n_total: float


def _check_cap(m: int) -> None:
    cap = settings.matching_edge_cap
    if m > cap:
        raise EnumerationCapError(f'matching enumeration supports at most {cap} edges, got {m}')


def _walk(neighbors: tuple[tuple[int, ...], ...]) -> list[tuple[tuple[int, int], ...]]:
    """
    Все паросочетания: каждая левая вершина либо свободна,
    либо берет еще не занятого правого соседа
    """
    out = []
    used = set()
    chosen = []

    def visit(i: int) -> None:
        if i == len(neighbors):
            out.append(tuple(chosen))
            return
        visit(i + 1)
        for j in neighbors[i]:
            if j not in used:
                used.add(j)
                chosen.append((i, j))
                visit(i + 1)
                chosen.pop()
                used.remove(j)

    visit(0)
    return out


def _neighbors(mask: np.ndarray) -> tuple[tuple[int, ...], ...]:
    return tuple(tuple(np.nonzero(row)[0].tolist()) for row in mask)


def enumerate_matchings(instance: BipartiteInstance) -> list[Matching]:
    """
    Все паросочетания (включая пустое) по убыванию веса
    """
    _check_cap(instance.m)
    matchings = [Matching.of(instance, pairs) for pairs in _walk(_neighbors(instance.mask))]
    matchings.sort(key=lambda x: (-x.weight, sorted(x.pairs)))
    return matchings


def mwm(instance: BipartiteInstance) -> Matching:
    """
    Паросочетание максимального веса (не обязательно совершенное).
    Пары нулевого веса и отсутствующие ребра отбрасываются
    """
    if instance.n_left == 0 or instance.n_right == 0:
        return Matching(frozenset(), 0.0)
    weights = np.where(instance.mask, instance.weights, 0.0)
    rows, cols = linear_sum_assignment(weights, maximize=True)
    keep = instance.mask[rows, cols] & (weights[rows, cols] > 0)
    return Matching.of(instance, zip(rows[keep].tolist(), cols[keep].tolist()))


def _best_perfect(instance: BipartiteInstance, forbidden: tuple[int, int] | None = None) -> Matching | None:
    cost = np.where(instance.mask, -instance.weights, np.inf)
    if forbidden is not None:
        cost[forbidden] = np.inf
    try:
        rows, cols = linear_sum_assignment(cost)
    except ValueError:
        return None
    if not np.isfinite(cost[rows, cols]).all():
        return None
    return Matching.of(instance, zip(rows.tolist(), cols.tolist()))


def _perfect_delta(instance: BipartiteInstance) -> GapReport:
    """
    Второе совершенное паросочетание: для каждого ребра e из M*
    лучшее совершенное паросочетание без e
    """
    if instance.n_left != instance.n_right:
        raise InstanceShapeError(
            f'perfect matchings need n_left == n_right, got {instance.n_left}x{instance.n_right}'
        )
    best = _best_perfect(instance)
    if best is None:
        raise InstanceShapeError('instance has no perfect matching')
    second = None
    for pair in sorted(best.pairs):
        candidate = _best_perfect(instance, pair)
        if candidate is not None and (second is None or candidate.weight > second.weight):
            second = candidate
    if second is None:
        return GapReport(best, None, None, True)
    delta = best.weight - second.weight
    return GapReport(best, second, delta, delta > 0)


def matching_delta(instance: BipartiteInstance, perfect_only: bool = False) -> GapReport:
    """
    δ = w(M*) - w(второго по весу паросочетания)
    """
    if perfect_only:
        return _perfect_delta(instance)
    matchings = enumerate_matchings(instance)
    best = matchings[0]
    if len(matchings) == 1:
        return GapReport(best, None, None, True)
    second = matchings[1]
    delta = best.weight - second.weight
    return GapReport(best, second, delta, delta > 0)


def decrease_rate(instance: BipartiteInstance) -> float:
    """
    c = min по x̂ ≠ x* величины (w·x* - w·x̂) / ||x* - x̂||₁.
    Вершины многогранника паросочетаний - сами паросочетания
    """
    matchings = enumerate_matchings(instance)
    best = matchings[0]
    rates = [
        (best.weight - other.weight) / len(best.pairs ^ other.pairs)
        for other in matchings[1:]
        if best.pairs != other.pairs
    ]
    return min(rates) if rates else math.inf


def rate_bounds(instance: BipartiteInstance) -> RateBounds:
    """
    c вместе с δ/n для двух соглашений о n:
    вершин в доле и вершин всего
    """
    c = decrease_rate(instance)
    report = matching_delta(instance)
    delta = math.inf if report.delta is None else report.delta
    n_side = max(instance.n_left, instance.n_right)
    n_total = instance.n_left + instance.n_right
    return RateBounds(c, delta, delta / n_side, delta / n_total)


@lru_cache(maxsize=32)
def _table(n_left: int, n_right: int, mask: tuple[bool, ...]) -> np.ndarray:
    present = np.array(mask, dtype=bool).reshape(n_left, n_right)
    walks = _walk(_neighbors(present))
    table = np.zeros((len(walks), n_left * n_right), dtype=np.int8)
    for row, pairs in enumerate(walks):
        for i, j in pairs:
            table[row, i * n_right + j] = 1
    table.setflags(write=False)
    return table


def matching_table(n_left: int, n_right: int, mask: np.ndarray) -> np.ndarray:
    """
    Матрица инцидентности всех паросочетаний графа:
    строка - паросочетание, столбец - ячейка (i, j) по строкам
    """
    mask = np.broadcast_to(np.asarray(mask, dtype=bool), (n_left, n_right))
    _check_cap(int(mask.sum()))
    return _table(n_left, n_right, tuple(mask.ravel().tolist()))


def _batches(weights: np.ndarray, mask: np.ndarray):
    weights = np.asarray(weights, dtype=float)
    count, n_left, n_right = weights.shape
    table = matching_table(n_left, n_right, mask).astype(float)
    step = max(1, TABLE_CELLS // max(1, table.shape[0]))
    flat = np.where(mask, weights, 0.0).reshape(count, -1)
    for start in range(0, count, step):
        yield start, flat[start:start + step] @ table.T, table


def batch_matching_delta(weights: np.ndarray, mask: np.ndarray) -> np.ndarray:
    """
    δ для пачки экземпляров одной формы (K, n_left, n_right); inf,
    если паросочетание единственно
    """
    weights = np.asarray(weights, dtype=float)
    out = np.full(weights.shape[0], np.inf)
    for start, totals, _ in _batches(weights, mask):
        if totals.shape[1] < 2:
            continue
        top = np.partition(totals, -2, axis=1)[:, -2:]
        out[start:start + totals.shape[0]] = top[:, 1] - top[:, 0]
    return out


def batch_decrease_rate(weights: np.ndarray, mask: np.ndarray) -> np.ndarray:
    weights = np.asarray(weights, dtype=float)
    out = np.full(weights.shape[0], np.inf)
    for start, totals, table in _batches(weights, mask):
        sizes = table.sum(1)
        best = totals.argmax(1)
        gaps = totals[np.arange(totals.shape[0]), best][:, None] - totals
        distance = sizes[None, :] + sizes[best][:, None] - 2.0 * (table[best] @ table.T)
        with np.errstate(divide='ignore', invalid='ignore'):
            rates = np.where(distance > 0, gaps / distance, np.inf)
        out[start:start + totals.shape[0]] = rates.min(1)
    return out
