"""
Эмпирические хвосты: P̂(τ ≥ t) с цензурированием на t_max,
P̂(X ≤ ε) и степенная подгонка в логарифмическом масштабе
"""
from dataclasses import dataclass

import numpy as np
from scipy import stats

from bpsmooth.core.errors import SurvivalEstimationError, TailFitError

MIN_AT_RISK = 50
MIN_POINTS = 5
POWER_LAW_R2 = 0.98


def binomial_sigma(p, trials: int):
    p = np.clip(np.asarray(p, dtype=float), 0.0, 1.0)
    return np.sqrt(p * (1.0 - p) / max(trials, 1))


@dataclass(frozen=True, eq=False)
class SurvivalCurve:
    grid: np.ndarray
    survival: np.ndarray
    stderr: np.ndarray
    at_risk: np.ndarray
    censor_rate: float
    trials: int

    def at(self, t: int) -> float:
        hits = np.nonzero(self.grid == t)[0]
        if not hits.size:
            raise SurvivalEstimationError(f't = {t} is not on the grid')
        return float(self.survival[hits[0]])


@dataclass(frozen=True, eq=False)
class LowerTail:
    eps_grid: np.ndarray
    probability: np.ndarray
    stderr: np.ndarray
    trials: int


@dataclass(frozen=True)
class TailFit:
    slope: float
    intercept: float
    constant: float
    r_squared: float
    power_law: bool
    spread: float
    points: int


def estimate_survival(tau, censored, grid, t_max: int) -> SurvivalCurve:
    """
    Цензурированные испытания (tau = t_max) считаются τ ≥ t
    для всех t <= t_max
    """
    tau = np.asarray(tau, dtype=np.int64)
    censored = np.asarray(censored, dtype=bool)
    grid = np.asarray(grid, dtype=np.int64)
    if grid.size and grid.max() > t_max:
        raise SurvivalEstimationError(f'grid point {int(grid.max())} exceeds t_max = {t_max}')
    if np.any(np.diff(grid) <= 0):
        raise SurvivalEstimationError('grid must be strictly increasing')
    trials = tau.size
    if not trials:
        raise SurvivalEstimationError('no trials')

    effective = np.where(censored, t_max, tau)
    at_risk = (effective[:, None] >= grid[None, :]).sum(0)
    survival = at_risk / trials
    return SurvivalCurve(
        grid=grid,
        survival=survival,
        stderr=binomial_sigma(survival, trials),
        at_risk=at_risk,
        censor_rate=float(censored.mean()),
        trials=trials,
    )


def estimate_lower_tail(values, eps_grid) -> LowerTail:
    """
    P̂(X ≤ ε); отсутствующие значения (inf) в хвост не попадают
    """
    values = np.asarray(values, dtype=float)
    eps_grid = np.asarray(eps_grid, dtype=float)
    trials = values.size
    if not trials:
        raise SurvivalEstimationError('no trials')
    probability = (values[:, None] <= eps_grid[None, :]).mean(0)
    return LowerTail(eps_grid, probability, binomial_sigma(probability, trials), trials)


def fit_tail_exponent(curve: SurvivalCurve,
                      t_range: tuple[int, int],
                      min_at_risk: int = MIN_AT_RISK,
                      min_points: int = MIN_POINTS
                      ) -> TailFit:
    """
    Наклон log P̂ от log t по точкам сетки внутри t_range,
    где в хвосте не меньше min_at_risk испытаний.
    ĉ - среднее геометрическое P̂·t, так что P̂ ≈ ĉ/t
    """
    low, high = t_range
    keep = (
        (curve.grid >= low) & (curve.grid <= high)
        & (curve.at_risk >= min_at_risk) & (curve.survival > 0)
    )
    if int(keep.sum()) < min_points:
        raise TailFitError(
            f'need {min_points} grid points in [{low}, {high}] with {min_at_risk} surviving trials, '
            f'got {int(keep.sum())}'
        )
    t = curve.grid[keep].astype(float)
    p = curve.survival[keep]
    fit = stats.linregress(np.log(t), np.log(p))
    scaled = p * t
    r_squared = float(fit.rvalue ** 2)
    return TailFit(
        slope=float(fit.slope),
        intercept=float(fit.intercept),
        constant=float(np.exp(np.mean(np.log(scaled)))),
        r_squared=r_squared,
        power_law=r_squared >= POWER_LAW_R2,
        spread=float(scaled.max() / scaled.min()),
        points=int(keep.sum()),
    )


def growth_ratio(small: SurvivalCurve, large: SurvivalCurve, t: int, min_at_risk: int = 100) -> float | None:
    """
    P̂_large(τ ≥ t) / P̂_small(τ ≥ t), если в обоих хвостах
    достаточно испытаний, иначе None
    """
    k_small = np.nonzero(small.grid == t)[0]
    k_large = np.nonzero(large.grid == t)[0]
    if not (k_small.size and k_large.size):
        raise SurvivalEstimationError(f't = {t} is not on both grids')
    a, b = int(k_small[0]), int(k_large[0])
    if small.at_risk[a] < min_at_risk or large.at_risk[b] < min_at_risk:
        return None
    return float(large.survival[b] / small.survival[a])
