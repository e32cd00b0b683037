import math
from typing import Annotated, ClassVar, Literal, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, TypeAdapter, model_validator

from bpsmooth.generators.density import DensitySpec

HEAVY_TOP = 23 / 26
HEAVY_LOW = 20 / 26


def _open_low(low: float, high: float, u: np.ndarray) -> np.ndarray:
    """
    U(low, high] из u ∈ [0, 1)
    """
    return np.maximum(low + (high - low) * (1.0 - u), np.nextafter(low, np.inf))


def _closed_low(low: float, high: float, u: np.ndarray) -> np.ndarray:
    """
    U[low, high) из u ∈ [0, 1)
    """
    return low + (high - low) * u


def _complete_layout(n_left: int, n_right: int) -> tuple[np.ndarray, np.ndarray]:
    rows, cols = np.divmod(np.arange(n_left * n_right), n_right)
    return rows, cols


class _Family(BaseModel):
    model_config = ConfigDict(frozen=True, extra='forbid')

    @property
    def draws(self) -> int:
        return self.layout()[0].size

    @property
    def m(self) -> int:
        return self.layout()[0].size

    def layout(self) -> tuple[np.ndarray, np.ndarray]:
        return _complete_layout(self.n_left, self.n_right)

    def mask(self) -> np.ndarray:
        rows, cols = self.layout()
        present = np.zeros((self.n_left, self.n_right), dtype=bool)
        present[rows, cols] = True
        return present


class UniformK22(_Family):
    kind: Literal['uniform_k22'] = 'uniform_k22'

    n_left: ClassVar[int] = 2
    n_right: ClassVar[int] = 2
    phi: ClassVar[float] = 1.0

    def transform(self, u: np.ndarray) -> np.ndarray:
        return u


class UniformKnn(_Family):
    kind: Literal['uniform_knn'] = 'uniform_knn'

    n: int = Field(ge=1)
    phi: ClassVar[float] = 1.0

    @property
    def n_left(self) -> int:
        return self.n

    @property
    def n_right(self) -> int:
        return self.n

    def transform(self, u: np.ndarray) -> np.ndarray:
        return u


class GadgetCopies(_Family):
    """
    n/4 непересекающихся копий K2,2 без ребер между копиями,
    n - общее число вершин
    """
    kind: Literal['gadget_copies'] = 'gadget_copies'

    n: int = Field(ge=4)
    phi: ClassVar[float] = 1.0

    @model_validator(mode='after')
    def _multiple_of_four(self) -> 'GadgetCopies':
        if self.n % 4:
            raise ValueError(f'gadget_copies needs n divisible by 4, got {self.n}')
        return self

    @property
    def n_left(self) -> int:
        return self.n // 2

    @property
    def n_right(self) -> int:
        return self.n // 2

    @property
    def copies(self) -> int:
        return self.n // 4

    def layout(self) -> tuple[np.ndarray, np.ndarray]:
        rows, cols = _complete_layout(self.n_left, self.n_right)
        keep = rows // 2 == cols // 2
        return rows[keep], cols[keep]

    def transform(self, u: np.ndarray) -> np.ndarray:
        return u


class SmoothedKnn(_Family):
    """
    K_{n,n} из n/2 подграфов H^j на вершинах {2j, 2j+1} каждой доли.
    Тяжелые ребра внутри H^j, легкие между подграфами
    """
    kind: Literal['smoothed_knn'] = 'smoothed_knn'

    n: int = Field(ge=2)
    phi: float = Field(ge=26.0)

    @model_validator(mode='after')
    def _even(self) -> 'SmoothedKnn':
        if self.n % 2:
            raise ValueError(f'smoothed_knn needs an even n, got {self.n}')
        return self

    @property
    def n_left(self) -> int:
        return self.n

    @property
    def n_right(self) -> int:
        return self.n

    def heavy(self) -> np.ndarray:
        rows, cols = self.layout()
        return rows // 2 == cols // 2

    def transform(self, u: np.ndarray) -> np.ndarray:
        rows, cols = self.layout()
        position = 2 * (rows % 2) + cols % 2
        heavy = rows // 2 == cols // 2
        inv = 1.0 / self.phi
        w = u * inv
        w11 = _closed_low(1.0 - inv, 1.0, u)
        cross = _open_low(HEAVY_TOP, HEAVY_TOP + inv, u)
        w22 = _closed_low(HEAVY_LOW - inv, HEAVY_LOW + 3 * inv, u)
        w = np.where(heavy & (position == 0), w11, w)
        w = np.where(heavy & ((position == 1) | (position == 2)), cross, w)
        w = np.where(heavy & (position == 3), w22, w)
        return w


class CustomEdge(BaseModel):
    model_config = ConfigDict(frozen=True)

    i: int = Field(ge=0)
    j: int = Field(ge=0)
    density: DensitySpec


class Custom(_Family):
    kind: Literal['custom'] = 'custom'

    n_left: int = Field(ge=1)
    n_right: int = Field(ge=1)
    phi: float = Field(gt=0.0)
    edges: tuple[CustomEdge, ...] = Field(min_length=1)

    @model_validator(mode='after')
    def _check_edges(self) -> 'Custom':
        pairs = [(e.i, e.j) for e in self.edges]
        if pairs != sorted(set(pairs)):
            raise ValueError('custom edges must be distinct and in row-major order')
        for e in self.edges:
            if e.i >= self.n_left or e.j >= self.n_right:
                raise ValueError(f'edge ({e.i}, {e.j}) out of range')
            if e.density.max_density > self.phi:
                raise ValueError(
                    f'density {e.density.max_density} of edge ({e.i}, {e.j}) exceeds phi = {self.phi}'
                )
        return self

    @classmethod
    def complete(cls, n_left: int, n_right: int, phi: float, densities) -> 'Custom':
        rows, cols = _complete_layout(n_left, n_right)
        edges = tuple(
            CustomEdge(i=int(i), j=int(j), density=d)
            for i, j, d in zip(rows, cols, densities, strict=True)
        )
        return cls(n_left=n_left, n_right=n_right, phi=phi, edges=edges)

    def layout(self) -> tuple[np.ndarray, np.ndarray]:
        rows = np.array([e.i for e in self.edges], dtype=np.int64)
        cols = np.array([e.j for e in self.edges], dtype=np.int64)
        return rows, cols

    def transform(self, u: np.ndarray) -> np.ndarray:
        columns = [e.density.quantile(u[..., k]) for k, e in enumerate(self.edges)]
        return np.stack(columns, axis=-1)


class EventK22(_Family):
    """
    K2,2, веса которого сразу лежат в событии E_ε
    """
    kind: Literal['event_k22'] = 'event_k22'

    eps: float = Field(gt=0.0, le=0.125)

    n_left: ClassVar[int] = 2
    n_right: ClassVar[int] = 2
    phi: ClassVar[float] = 1.0

    def transform(self, u: np.ndarray) -> np.ndarray:
        w11 = _closed_low(7 / 8, 1.0, u[..., 0])
        w12 = _open_low(1 / 2, 5 / 8, u[..., 1])
        w21 = _open_low(5 / 8, 3 / 4, u[..., 2])
        top = w12 + w21 - w11
        w22 = top - self.eps + self.eps * u[..., 3]
        weights = np.stack([w11, w12, w21, w22], axis=-1)
        # границы события считаются с точным округлением, как в check_event_E
        for row in weights.reshape(-1, 4):
            high = math.fsum((row[1], row[2], -row[0]))
            low = math.fsum((row[1], row[2], -row[0], -self.eps))
            row[3] = min(max(row[3], low), math.nextafter(high, -math.inf))
        return weights


class RandomFlow(BaseModel):
    """
    Случайная сеть: каждая упорядоченная пара вершин есть с вероятностью
    edge_probability, емкость из {1..max_capacity}, стоимость U[0, 1).
    Бюджеты берутся от случайного допустимого потока
    """
    model_config = ConfigDict(frozen=True, extra='forbid')

    kind: Literal['random_flow'] = 'random_flow'

    n_nodes: int = Field(ge=2)
    max_capacity: int = Field(ge=1)
    edge_probability: float = Field(gt=0.0, le=1.0)

    phi: ClassVar[float] = 1.0

    def pairs(self) -> tuple[np.ndarray, np.ndarray]:
        tails, heads = np.divmod(np.arange(self.n_nodes * self.n_nodes), self.n_nodes)
        keep = tails != heads
        return tails[keep], heads[keep]

    @property
    def draws(self) -> int:
        return 4 * self.pairs()[0].size


BipartiteFamily = Annotated[
    Union[UniformK22, UniformKnn, GadgetCopies, SmoothedKnn, Custom, EventK22],
    Field(discriminator='kind'),
]
FamilySpec = Annotated[
    Union[UniformK22, UniformKnn, GadgetCopies, SmoothedKnn, Custom, EventK22, RandomFlow],
    Field(discriminator='kind'),
]

family_adapter = TypeAdapter(FamilySpec)
