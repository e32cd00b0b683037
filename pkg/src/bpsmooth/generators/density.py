import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

MASS_TOLERANCE = 1e-12


class DensityPiece(BaseModel):
    model_config = ConfigDict(frozen=True)

    low: float = Field(ge=0.0, le=1.0)
    high: float = Field(ge=0.0, le=1.0)
    density: float = Field(ge=0.0)

    @model_validator(mode='after')
    def _ordered(self) -> 'DensityPiece':
        if not self.low < self.high:
            raise ValueError(f'empty interval [{self.low}, {self.high})')
        return self


class DensitySpec(BaseModel):
    """
    Кусочно-постоянная плотность на [0, 1]
    """
    model_config = ConfigDict(frozen=True)

    pieces: tuple[DensityPiece, ...] = Field(min_length=1)

    @model_validator(mode='after')
    def _check_mass(self) -> 'DensitySpec':
        ordered = sorted(self.pieces, key=lambda p: p.low)
        for left, right in zip(ordered, ordered[1:]):
            if right.low < left.high:
                raise ValueError('density pieces overlap')
        if abs(self.mass - 1.0) > MASS_TOLERANCE:
            raise ValueError(f'total mass {self.mass!r} differs from 1')
        return self

    @classmethod
    def uniform(cls, low: float, high: float) -> 'DensitySpec':
        return cls(pieces=(DensityPiece(low=low, high=high, density=1.0 / (high - low)),))

    @property
    def mass(self) -> float:
        return float(sum((p.high - p.low) * p.density for p in self.pieces))

    @property
    def max_density(self) -> float:
        return max(p.density for p in self.pieces)

    def quantile(self, u: np.ndarray) -> np.ndarray:
        """
        Обратная функция распределения для u из [0, 1)
        """
        pieces = sorted((p for p in self.pieces if p.density > 0), key=lambda p: p.low)
        lows = np.array([p.low for p in pieces])
        highs = np.array([p.high for p in pieces])
        dens = np.array([p.density for p in pieces])
        cum = np.concatenate(([0.0], np.cumsum((highs - lows) * dens)))
        target = np.asarray(u, dtype=float) * cum[-1]
        k = np.clip(np.searchsorted(cum, target, side='right') - 1, 0, len(pieces) - 1)
        x = lows[k] + (target - cum[k]) / dens[k]
        return np.clip(x, lows[k], highs[k])


def event_phi_densities(phi: float) -> tuple[DensitySpec, DensitySpec, DensitySpec, DensitySpec]:
    """
    Плотности весов (w11, w12, w21, w22) одной копии K2,2
    в сглаженной конструкции: φ на трех коротких интервалах
    и φ/4 на интервале длины 4/φ для w22
    """
    top = 23 / 26
    w11 = DensitySpec(pieces=(DensityPiece(low=1 - 1 / phi, high=1.0, density=phi),))
    cross = DensitySpec(pieces=(DensityPiece(low=top, high=top + 1 / phi, density=phi),))
    w22 = DensitySpec(pieces=(DensityPiece(low=20 / 26 - 1 / phi, high=20 / 26 + 3 / phi, density=phi / 4),))
    return w11, cross, cross, w22
