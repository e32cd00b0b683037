import math

import numpy as np

from bpsmooth.core.errors import FamilyParameterError
from bpsmooth.generators.families import HEAVY_TOP
from bpsmooth.instance.models import BipartiteInstance


def _k22_weights(instance: BipartiteInstance) -> tuple[float, float, float, float]:
    if (instance.n_left, instance.n_right) != (2, 2) or not instance.complete_flag:
        raise FamilyParameterError('event check needs a complete 2x2 instance')
    w = instance.weights
    return float(w[0, 0]), float(w[0, 1]), float(w[1, 0]), float(w[1, 1])


def _near_tie(w11: float, w12: float, w21: float, w22: float, eps: float) -> bool:
    """
    w22 ∈ [w12 + w21 - w11 - ε, w12 + w21 - w11)
    """
    low = math.fsum((w12, w21, -w11, -eps))
    high = math.fsum((w12, w21, -w11))
    return low <= w22 < high


def check_event_E(instance: BipartiteInstance, eps: float) -> bool:
    """
    Событие E_ε на K2,2: w11 ∈ [7/8, 1], w12 ∈ (1/2, 5/8],
    w21 ∈ (5/8, 3/4] и w22 на ε ниже w12 + w21 - w11
    """
    if not 0 < eps <= 1 / 8:
        raise FamilyParameterError(f'eps must lie in (0, 1/8], got {eps}')
    w11, w12, w21, w22 = _k22_weights(instance)
    return (
        7 / 8 <= w11 <= 1.0
        and 1 / 2 < w12 <= 5 / 8
        and 5 / 8 < w21 <= 3 / 4
        and _near_tie(w11, w12, w21, w22, eps)
    )


def _check_phi_parameters(eps: float, phi: float) -> None:
    if phi < 26:
        raise FamilyParameterError(f'phi must be at least 26, got {phi}')
    if not 0 < eps <= 1 / phi:
        raise FamilyParameterError(f'eps must lie in (0, 1/phi], got {eps}')


def check_event_E_phi(instance: BipartiteInstance, eps: float, phi: float) -> bool:
    _check_phi_parameters(eps, phi)
    w11, w12, w21, w22 = _k22_weights(instance)
    top = HEAVY_TOP + 1 / phi
    return (
        1 - 1 / phi <= w11 <= 1.0
        and HEAVY_TOP < w12 <= top
        and HEAVY_TOP < w21 <= top
        and _near_tie(w11, w12, w21, w22, eps)
    )


def _slack(w: np.ndarray, others: np.ndarray) -> np.ndarray:
    w11, w12, w21, w22 = (w[..., k] for k in range(4))
    return np.where(others, (w12 + w21) - w11 - w22, np.inf)


def event_slack(weights: np.ndarray) -> np.ndarray:
    """
    Векторная версия для пачки (count, 4) весов в порядке w11, w12, w21, w22:
    w12 + w21 - w11 - w22, если остальные три условия E выполнены, иначе +inf.
    E_ε выполнено тогда и только тогда, когда 0 < slack <= ε
    """
    w11, w12, w21 = weights[..., 0], weights[..., 1], weights[..., 2]
    others = (
        (7 / 8 <= w11) & (w11 <= 1.0)
        & (1 / 2 < w12) & (w12 <= 5 / 8)
        & (5 / 8 < w21) & (w21 <= 3 / 4)
    )
    return _slack(weights, others)


def event_phi_slack(weights: np.ndarray, phi: float) -> np.ndarray:
    if phi < 26:
        raise FamilyParameterError(f'phi must be at least 26, got {phi}')
    w11, w12, w21 = weights[..., 0], weights[..., 1], weights[..., 2]
    top = HEAVY_TOP + 1 / phi
    others = (
        (1 - 1 / phi <= w11) & (w11 <= 1.0)
        & (HEAVY_TOP < w12) & (w12 <= top)
        & (HEAVY_TOP < w21) & (w21 <= top)
    )
    return _slack(weights, others)


def event_hits(slack: np.ndarray, eps: float) -> np.ndarray:
    return (slack > 0) & (slack <= eps)


def subgraph_weights(weights: np.ndarray, j: int) -> np.ndarray:
    """
    Веса (w11, w12, w21, w22) подграфа H^j из плотных матриц (..., n, n)
    """
    a, b = 2 * j, 2 * j + 1
    return np.stack(
        [weights[..., a, a], weights[..., a, b], weights[..., b, a], weights[..., b, b]],
        axis=-1,
    )
