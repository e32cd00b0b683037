from pathlib import Path
from typing import Annotated, Literal

import numpy as np
from pydantic import Field, ValidationError, field_validator, model_validator
from pydantic_settings import BaseSettings, NoDecode, PydanticBaseSettingsSource, SettingsConfigDict

from bpsmooth.core.config import settings
from bpsmooth.core.errors import ExperimentConfigError
from bpsmooth.generators.density import DensityPiece, DensitySpec, event_phi_densities
from bpsmooth.generators.families import (Custom, EventK22, GadgetCopies, RandomFlow, SmoothedKnn,
                                          UniformK22, UniformKnn)

ExperimentKind = Literal[
    'tau_tail', 'tau_growth', 'delta_tail', 'flow_delta_tail', 'event_freq', 'rate_check', 'lemma_checks',
]
FamilyName = Literal[
    'uniform_k22', 'uniform_knn', 'gadget_copies', 'smoothed_knn',
    'event_k22', 'event_phi_k22', 'custom', 'random_flow',
]

GRID_POINTS = 41
EVENT_FAMILIES = ('uniform_k22', 'event_k22', 'event_phi_k22', 'smoothed_knn')
GROWTH_FAMILIES = ('uniform_knn', 'gadget_copies', 'smoothed_knn')


def _split(value):
    if isinstance(value, str):
        return tuple(part.strip() for part in value.split(',') if part.strip())
    return value


def parse_densities(text: str) -> tuple[DensitySpec, ...]:
    """
    Плотности ребер в порядке по строкам: ребра через ';',
    куски через пробел в виде low:high:density
    """
    specs = []
    for chunk in text.split(';'):
        pieces = []
        for token in chunk.split():
            low, high, density = (float(x) for x in token.split(':'))
            pieces.append(DensityPiece(low=low, high=high, density=density))
        specs.append(DensitySpec(pieces=tuple(pieces)))
    return tuple(specs)


class ExperimentConfig(BaseSettings):
    """
    Конфигурация эксперимента. Источники: аргументы конструктора
    (переопределения из CLI) и файл key=value. Переменные окружения
    не читаются
    """
    model_config = SettingsConfigDict(
        env_file_encoding='utf-8',
        extra='forbid',
        case_sensitive=False,
        frozen=True,
    )

    kind: ExperimentKind
    family: FamilyName
    n: int | None = None
    phi: float | None = None
    eps: float | None = None
    n_nodes: int | None = None
    max_capacity: int | None = None
    edge_probability: float | None = None
    n_left: int | None = None
    n_right: int | None = None
    densities: str | None = None

    trials: int = Field(ge=1)
    seed: int = Field(default=0, ge=0, lt=2 ** 64)
    t_max: int = Field(default=10_000, ge=1)
    window: int = Field(default=4, ge=1)
    normalized: bool = True
    use_oracle: bool = True

    eps_grid: Annotated[tuple[float, ...], NoDecode] = ()
    t_grid: Annotated[tuple[int, ...], NoDecode] = ()
    fit_range: Annotated[tuple[int, int], NoDecode] = (100, 1000)
    slope_range: Annotated[tuple[float, float], NoDecode] = (-1.3, -0.7)
    k_max: int = Field(default=4, ge=1)
    n_grid: Annotated[tuple[int, ...], NoDecode] = ()
    growth_t: int | None = Field(default=None, ge=1)
    min_survivors: int = Field(default=100, ge=1)

    out: Path | None = None
    workers: int | None = Field(default=None, ge=1)
    batch_size: int | None = Field(default=None, ge=1)

    @classmethod
    def settings_customise_sources(cls,
                                   settings_cls: type[BaseSettings],
                                   init_settings: PydanticBaseSettingsSource,
                                   env_settings: PydanticBaseSettingsSource,
                                   dotenv_settings: PydanticBaseSettingsSource,
                                   file_secret_settings: PydanticBaseSettingsSource,
                                   ) -> tuple[PydanticBaseSettingsSource, ...]:
        return init_settings, dotenv_settings

    @classmethod
    def from_file(cls, path: str | Path, **overrides) -> 'ExperimentConfig':
        """
        Читает файл key=value; непустые overrides важнее файла
        """
        path = Path(path)
        if not path.is_file():
            raise ExperimentConfigError(f'config file {path} not found')
        overrides = {key: value for key, value in overrides.items() if value is not None}
        try:
            return cls(_env_file=path, **overrides)
        except ValidationError as exc:
            raise ExperimentConfigError(f'invalid config {path}: {exc}') from exc

    @field_validator('eps_grid', 't_grid', 'fit_range', 'slope_range', 'n_grid', mode='before')
    @classmethod
    def _split_grid(cls, value):
        return _split(value)

    @model_validator(mode='after')
    def _check(self) -> 'ExperimentConfig':
        for name in ('eps_grid', 't_grid', 'fit_range', 'slope_range', 'n_grid'):
            grid = getattr(self, name)
            if any(b <= a for a, b in zip(grid, grid[1:])):
                raise ValueError(f'{name} must be strictly increasing')
        if self.t_grid and self.t_grid[-1] > self.t_max:
            raise ValueError(f't_grid exceeds t_max = {self.t_max}')

        if self.kind == 'tau_growth':
            self._check_growth()
        elif self.n_grid:
            raise ValueError('n_grid is used only by tau_growth')
        try:
            family = self.family_spec()
            for n in self.n_grid:
                self.family_spec(n)
        except ValidationError as exc:
            raise ValueError(f'bad {self.family} parameters: {exc}') from exc

        is_flow = isinstance(family, RandomFlow)
        if (self.kind == 'flow_delta_tail') != is_flow:
            raise ValueError(f'{self.kind} cannot run on family {self.family}')
        if self.kind in ('delta_tail', 'flow_delta_tail') and not self.eps_grid:
            raise ValueError(f'{self.kind} needs eps_grid')
        if self.kind in ('event_freq', 'lemma_checks'):
            self._check_event_family(family)
        self._check_caps(family)
        return self

    def _check_event_family(self, family) -> None:
        if self.family not in EVENT_FAMILIES:
            raise ValueError(f'{self.kind} needs one of {", ".join(EVENT_FAMILIES)}, got {self.family}')
        light_edges_only = isinstance(family, SmoothedKnn) and family.n >= 4 and self.kind == 'lemma_checks'
        if self.eps is None:
            if not light_edges_only:
                raise ValueError(f'{self.kind} on {self.family} needs eps')
        elif self.family in ('uniform_k22', 'event_k22'):
            if not 0 < self.eps <= 1 / 8:
                raise ValueError(f'eps must lie in (0, 1/8], got {self.eps}')
        elif not 0 < self.eps <= 1 / family.phi:
            raise ValueError(f'eps must lie in (0, 1/phi], got {self.eps}')
        if self.kind == 'event_freq' and isinstance(family, SmoothedKnn) and family.n != 2:
            raise ValueError('event_freq on smoothed_knn needs n = 2')

    def _check_caps(self, family) -> None:
        if isinstance(family, RandomFlow):
            pairs = family.n_nodes * (family.n_nodes - 1)
            worst = (family.max_capacity + 1) ** pairs
            if worst > settings.flow_enumeration_cap:
                raise ValueError(
                    f'flow enumeration may need {worst} assignments, cap is {settings.flow_enumeration_cap}'
                )
            return
        if self.kind in ('delta_tail', 'rate_check') and family.m > settings.matching_edge_cap:
            raise ValueError(f'{family.m} edges exceed the enumeration cap {settings.matching_edge_cap}')

    def _check_growth(self) -> None:
        if self.family not in GROWTH_FAMILIES:
            raise ValueError(f'tau_growth needs one of {", ".join(GROWTH_FAMILIES)}, got {self.family}')
        if len(self.n_grid) < 2:
            raise ValueError('tau_growth needs at least two sizes in n_grid')
        if self.n is not None:
            raise ValueError('tau_growth takes sizes from n_grid, not n')
        if self.growth_t is not None and self.growth_t > self.t_max:
            raise ValueError(f'growth_t exceeds t_max = {self.t_max}')

    def family_spec(self, n: int | None = None):
        """
        Модель семейства из плоских ключей конфигурации.
        n заменяет размер из конфигурации (для tau_growth - первый из n_grid)
        """
        if n is None:
            n = self.n if self.n is not None else next(iter(self.n_grid), None)
        match self.family:
            case 'uniform_k22':
                return UniformK22()
            case 'uniform_knn':
                return UniformKnn(n=n)
            case 'gadget_copies':
                return GadgetCopies(n=n)
            case 'smoothed_knn':
                return SmoothedKnn(n=n, phi=self.phi)
            case 'event_k22':
                return EventK22(eps=self.eps)
            case 'event_phi_k22':
                if self.phi is None or self.phi < 26:
                    raise ValueError(f'event_phi_k22 needs phi >= 26, got {self.phi}')
                return Custom.complete(2, 2, self.phi, event_phi_densities(self.phi))
            case 'custom':
                if None in (self.n_left, self.n_right, self.phi, self.densities):
                    raise ValueError('custom needs n_left, n_right, phi and densities')
                return Custom.complete(self.n_left, self.n_right, self.phi, parse_densities(self.densities))
            case 'random_flow':
                return RandomFlow(
                    n_nodes=self.n_nodes,
                    max_capacity=self.max_capacity,
                    edge_probability=self.edge_probability,
                )

    @property
    def survival_grid(self) -> tuple[int, ...]:
        """
        t_grid или логарифмическая сетка 1..t_max
        """
        if self.t_grid:
            return self.t_grid
        points = np.unique(np.round(np.geomspace(1, self.t_max, GRID_POINTS)).astype(np.int64))
        return tuple(points.tolist())

    @property
    def effective_phi(self) -> float:
        return float(self.family_spec().phi)
