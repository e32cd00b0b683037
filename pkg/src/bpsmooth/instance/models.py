import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, NamedTuple

import numpy as np


class Edge(NamedTuple):
    i: int
    j: int
    w: float


@dataclass(frozen=True)
class BipartiteInstance:
    """
    Взвешенный двудольный граф U ∪ V.
    Индексы 0-based, ребра в порядке (i, j) по строкам
    """
    n_left: int
    n_right: int
    edges: tuple[Edge, ...]
    complete_flag: bool

    @classmethod
    def create(cls,
               n_left: int,
               n_right: int,
               edges: Iterable[tuple[int, int, float]]
               ) -> 'BipartiteInstance':
        canonical = tuple(sorted(Edge(int(i), int(j), float(w)) for i, j, w in edges))
        pairs = {(e.i, e.j) for e in canonical}
        complete = len(pairs) == len(canonical) == n_left * n_right
        return cls(int(n_left), int(n_right), canonical, complete)

    @classmethod
    def from_dense(cls,
                   weights: np.ndarray,
                   mask: np.ndarray | None = None
                   ) -> 'BipartiteInstance':
        weights = np.asarray(weights, dtype=float)
        if mask is None:
            mask = np.ones(weights.shape, dtype=bool)
        rows, cols = np.nonzero(mask)
        return cls.create(
            weights.shape[0],
            weights.shape[1],
            zip(rows.tolist(), cols.tolist(), weights[rows, cols].tolist()),
        )

    @property
    def m(self) -> int:
        return len(self.edges)

    @cached_property
    def weights(self) -> np.ndarray:
        dense = np.zeros((self.n_left, self.n_right))
        for i, j, w in self.edges:
            dense[i, j] = w
        return dense

    @cached_property
    def mask(self) -> np.ndarray:
        present = np.zeros((self.n_left, self.n_right), dtype=bool)
        for i, j, _ in self.edges:
            present[i, j] = True
        return present


@dataclass(frozen=True)
class Matching:
    pairs: frozenset[tuple[int, int]]
    weight: float

    @classmethod
    def of(cls, instance: BipartiteInstance, pairs: Iterable[tuple[int, int]]) -> 'Matching':
        pairs = frozenset((int(i), int(j)) for i, j in pairs)
        weights = instance.weights
        return cls(pairs, math.fsum(weights[i, j] for i, j in pairs))

    @classmethod
    def from_assignment(cls, instance: BipartiteInstance, assignment: np.ndarray) -> 'Matching':
        return cls.of(instance, ((i, j) for i, j in enumerate(assignment.tolist()) if j >= 0))

    def assignment(self, n_left: int) -> np.ndarray:
        """
        Правый партнер каждой левой вершины, -1 если не сопоставлена
        """
        out = np.full(n_left, -1, dtype=np.int64)
        for i, j in self.pairs:
            out[i] = j
        return out

    def __len__(self) -> int:
        return len(self.pairs)


class FlowEdge(NamedTuple):
    tail: int
    head: int
    capacity: int
    cost: float


@dataclass(frozen=True)
class FlowNetwork:
    """
    Ориентированная сеть с целыми бюджетами и пропускными способностями.
    Параллельные ребра допустимы
    """
    budgets: tuple[int, ...]
    edges: tuple[FlowEdge, ...]

    @classmethod
    def create(cls,
               budgets: Iterable[int],
               edges: Iterable[tuple[int, int, int, float]]
               ) -> 'FlowNetwork':
        return cls(
            tuple(int(b) for b in budgets),
            tuple(FlowEdge(int(t), int(h), int(u), float(c)) for t, h, u, c in edges),
        )

    @property
    def n_nodes(self) -> int:
        return len(self.budgets)

    @property
    def m(self) -> int:
        return len(self.edges)

    @cached_property
    def incidence(self) -> np.ndarray:
        """
        Матрица Δ(v, e): +1 для хвоста ребра, -1 для головы
        """
        delta = np.zeros((self.n_nodes, self.m), dtype=np.int64)
        for e, (tail, head, _, _) in enumerate(self.edges):
            delta[tail, e] += 1
            delta[head, e] -= 1
        return delta

    @cached_property
    def capacities(self) -> np.ndarray:
        return np.array([e.capacity for e in self.edges], dtype=np.int64)

    @cached_property
    def costs(self) -> np.ndarray:
        return np.array([e.cost for e in self.edges], dtype=float)


@dataclass(frozen=True)
class IntegerFlow:
    flow: tuple[int, ...]

    @classmethod
    def create(cls, flow: Iterable[int]) -> 'IntegerFlow':
        return cls(tuple(int(f) for f in flow))

    def cost(self, network: FlowNetwork) -> float:
        return math.fsum(f * e.cost for f, e in zip(self.flow, network.edges))


def matching_to_flow(instance: BipartiteInstance) -> FlowNetwork:
    """
    Совершенное паросочетание как поток минимальной стоимости:
    левые вершины +1, правые -1, ребра емкости 1 со стоимостью 1 - w
    """
    n = instance.n_left
    budgets = [1] * n + [-1] * instance.n_right
    edges = [(i, n + j, 1, 1.0 - w) for i, j, w in instance.edges]
    return FlowNetwork.create(budgets, edges)
