from dataclasses import dataclass

import numpy as np

from bpsmooth.bp.decode import Estimate, decode_arrays, effective_assignment
from bpsmooth.bp.messages import belief_arrays, initial_arrays, step_arrays
from bpsmooth.core.config import settings
from bpsmooth.core.logging import get_logger
from bpsmooth.instance.models import BipartiteInstance, Matching

logger = get_logger(__name__)


@dataclass(frozen=True, eq=False)
class RunResult:
    tau: int
    converged: bool
    final_assignment: np.ndarray
    is_matching: bool
    matched_oracle: bool | None
    tie_detected: bool

    @property
    def censored(self) -> bool:
        return not self.converged


@dataclass(frozen=True, eq=False)
class BatchRunResult:
    """
    Результаты run_batch по испытаниям. Для цензурированных tau = t_max
    """
    tau: np.ndarray
    converged: np.ndarray
    final_assignment: np.ndarray
    is_matching: np.ndarray
    matched_oracle: np.ndarray | None
    tie_detected: np.ndarray

    def __len__(self) -> int:
        return self.tau.size

    def result(self, k: int) -> RunResult:
        return RunResult(
            tau=int(self.tau[k]),
            converged=bool(self.converged[k]),
            final_assignment=self.final_assignment[k].copy(),
            is_matching=bool(self.is_matching[k]),
            matched_oracle=None if self.matched_oracle is None else bool(self.matched_oracle[k]),
            tie_detected=bool(self.tie_detected[k]),
        )


def run_batch(weights: np.ndarray,
              mask: np.ndarray,
              t_max: int,
              window: int = 4,
              oracle: np.ndarray | None = None,
              normalized: bool = True,
              tol: float | None = None
              ) -> BatchRunResult:
    """
    Синхронный BP на пачке экземпляров одной формы (K, n_left, n_right).

    tau - наименьшее t, для которого декодированное назначение на итерациях
    t..t+W-1 одно и то же паросочетание (и совпадает с oracle, если он задан).
    Экземпляры, для которых tau найдено, выбывают из активного множества.
    Если такого t <= t_max - W + 1 нет, испытание цензурируется с tau = t_max
    """
    if t_max < 1 or window < 1:
        raise ValueError(f't_max and window must be positive, got {t_max}, {window}')
    tol = settings.tie_tolerance if tol is None else tol
    weights = np.asarray(weights, dtype=float)
    count, n_left, _ = weights.shape
    mask = np.broadcast_to(np.asarray(mask, dtype=bool), weights.shape)

    tau = np.full(count, t_max, dtype=np.int64)
    converged = np.zeros(count, dtype=bool)
    final = np.full((count, n_left), -1, dtype=np.int64)
    matching_flag = np.zeros(count, dtype=bool)
    ties = np.zeros(count, dtype=bool)

    active = np.arange(count)
    w, m = weights, mask
    target = None if oracle is None else np.asarray(oracle, dtype=np.int64)
    state = initial_arrays(w, m)
    previous = np.full((count, n_left), -2, dtype=np.int64)
    streak = np.zeros(count, dtype=np.int64)

    for t in range(t_max + 1):
        if t > 0:
            state = step_arrays(w, m, state, normalized)
        left, _ = belief_arrays(w, m, state)
        assignment, is_matching, tie = decode_arrays(left, tol)
        ties[active] |= tie

        valid = is_matching
        if target is not None:
            valid = valid & (effective_assignment(assignment, w) == target[active]).all(-1)
        same = (assignment == previous).all(-1)
        streak = np.where(valid, np.where(same & (streak > 0), streak + 1, 1), 0)
        previous = assignment

        done = streak >= window
        if t == t_max:
            done = np.ones_like(done)
        if done.any():
            ids = active[done]
            hit = streak[done] >= window
            tau[ids] = np.where(hit, t - window + 1, t_max)
            converged[ids] = hit
            final[ids] = assignment[done]
            matching_flag[ids] = is_matching[done]
            keep = ~done
            active = active[keep]
            w, m = w[keep], m[keep]
            state = tuple(x[keep] for x in state)
            previous, streak = previous[keep], streak[keep]
            if not active.size:
                break

    matched = None
    if target is not None:
        matched = (effective_assignment(final, weights) == target).all(-1)
    if ties.any():
        logger.warning('tie_detected', trials=int(ties.sum()), count=count)
    return BatchRunResult(tau, converged, final, matching_flag, matched, ties)


def run(instance: BipartiteInstance,
        t_max: int,
        window: int = 4,
        oracle_matching: Matching | None = None,
        normalized: bool = False
        ) -> RunResult:
    oracle = None
    if oracle_matching is not None:
        oracle = oracle_matching.assignment(instance.n_left)[None, :]
    batch = run_batch(
        instance.weights[None],
        instance.mask[None],
        t_max,
        window,
        oracle=oracle,
        normalized=normalized,
    )
    return batch.result(0)


def decode_path(weights: np.ndarray,
                mask: np.ndarray,
                iterations,
                normalized: bool = False,
                tol: float | None = None
                ) -> dict[int, Estimate]:
    """
    Декодированные назначения пачки на заданных итерациях
    """
    tol = settings.tie_tolerance if tol is None else tol
    wanted = sorted(set(int(t) for t in iterations))
    mask = np.broadcast_to(np.asarray(mask, dtype=bool), np.shape(weights))
    state = initial_arrays(weights, mask)
    out = {}
    for t in range(wanted[-1] + 1 if wanted else 0):
        if t > 0:
            state = step_arrays(weights, mask, state, normalized)
        if t in wanted:
            left, _ = belief_arrays(weights, mask, state)
            out[t] = Estimate(*decode_arrays(left, tol))
    return out


def decode_at(instance: BipartiteInstance, t: int, normalized: bool = False) -> Estimate:
    estimate = decode_path(instance.weights, instance.mask, [t], normalized)[t]
    return Estimate(
        estimate.assignment,
        bool(estimate.is_matching),
        bool(estimate.tie_detected),
    )
