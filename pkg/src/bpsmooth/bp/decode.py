from dataclasses import dataclass

import numpy as np

from bpsmooth.bp.messages import BeliefSet
from bpsmooth.core.config import settings


@dataclass(frozen=True, eq=False)
class Estimate:
    assignment: np.ndarray
    is_matching: np.ndarray | bool
    tie_detected: np.ndarray | bool


def decode_arrays(left_beliefs: np.ndarray, tol: float) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Argmax по каждой левой вершине (меньший индекс при равенстве),
    -1 если все значения -inf. Возвращает (assignment, is_matching, tie)
    """
    best = left_beliefs.argmax(-1)
    top = left_beliefs.max(-1)
    if left_beliefs.shape[-1] >= 2:
        second = np.sort(left_beliefs, axis=-1)[..., -2]
    else:
        second = np.full_like(top, -np.inf)
    finite = np.isfinite(top)
    assignment = np.where(finite, best, -1)
    tie = (finite & (top - second <= tol)).any(-1)

    n_left = left_beliefs.shape[-2]
    keyed = np.where(assignment >= 0, assignment, -1 - np.arange(n_left))
    ordered = np.sort(keyed, axis=-1)
    is_matching = ~(np.diff(ordered, axis=-1) == 0).any(-1)
    return assignment, is_matching, tie


def effective_assignment(assignment: np.ndarray, weights: np.ndarray) -> np.ndarray:
    """
    Пары на ребрах веса 0 считаются несопоставленными
    """
    picked = np.take_along_axis(weights, np.maximum(assignment, 0)[..., None], axis=-1)[..., 0]
    return np.where((assignment >= 0) & (picked > 0), assignment, -1)


def estimate_matching(belief_set: BeliefSet, tol: float | None = None) -> Estimate:
    """
    Каждая u_i выбирает v_j с максимальным убеждением.
    Результат не обязан быть паросочетанием
    """
    tol = settings.tie_tolerance if tol is None else tol
    assignment, is_matching, tie = decode_arrays(belief_set.left, tol)
    if assignment.ndim == 1:
        return Estimate(assignment, bool(is_matching), bool(tie))
    return Estimate(assignment, is_matching, tie)
