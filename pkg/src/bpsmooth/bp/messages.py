"""
Max-product BP для взвешенного двудольного паросочетания.

Вектор сообщения по ребру (i, j) имеет одну "собственную" координату
(r равно отправителю) и одинаковые остальные, поэтому состояние хранит
по четыре числа на ребро:

    A[i, j] = m→_ij(i)      B[i, j] = m→_ij(r), r ≠ i     (u_i -> v_j)
    C[i, j] = m←_ji(j)      D[i, j] = m←_ji(r), r ≠ j     (v_j -> u_i)

Максимум по пустому множеству равен -inf. Массивы могут иметь
ведущие размерности пачки: (..., n_left, n_right).
"""
from dataclasses import dataclass, replace

import numpy as np

from bpsmooth.instance.models import BipartiteInstance

NEG_INF = -np.inf


@dataclass(frozen=True, eq=False)
class MessageState:
    t: int
    forward_match: np.ndarray
    forward_other: np.ndarray
    backward_match: np.ndarray
    backward_other: np.ndarray
    mask: np.ndarray
    normalized: bool

    def forward_vector(self, i: int, j: int) -> np.ndarray:
        """
        m→_ij как вектор по левым вершинам r (кандидаты в пару для v_j)
        """
        out = np.where(self.mask[..., :, j], self.forward_other[..., i, j, None], NEG_INF)
        out[..., i] = self.forward_match[..., i, j]
        return out

    def backward_vector(self, j: int, i: int) -> np.ndarray:
        """
        m←_ji как вектор по правым вершинам r (кандидаты в пару для u_i)
        """
        out = np.where(self.mask[..., i, :], self.backward_other[..., i, j, None], NEG_INF)
        out[..., j] = self.backward_match[..., i, j]
        return out


@dataclass(frozen=True, eq=False)
class BeliefSet:
    t: int
    left: np.ndarray
    right: np.ndarray


def _swap(x: np.ndarray) -> np.ndarray:
    return np.swapaxes(x, -1, -2)


def _exclusive(mask: np.ndarray, values: np.ndarray):
    """
    Суммы values[p, k] по соседям k строки p без одного
    и без двух столбцов. -inf учитываются счетчиком, чтобы не вычитать их
    """
    present = np.where(mask, values, 0.0)
    dead = np.isneginf(present)
    finite = np.where(dead, 0.0, present)
    total = finite.sum(-1, keepdims=True)
    n_dead = dead.sum(-1, keepdims=True)

    without_one = np.where(n_dead - dead > 0, NEG_INF, total - finite)

    dead_pairs = n_dead[..., None] - dead[..., :, None] - dead[..., None, :]
    without_two = total[..., None] - finite[..., :, None] - finite[..., None, :]
    without_two = np.where(dead_pairs > 0, NEG_INF, without_two)
    return without_one, without_two


def _outgoing(weights: np.ndarray,
              mask: np.ndarray,
              inc_match: np.ndarray,
              inc_other: np.ndarray
              ) -> tuple[np.ndarray, np.ndarray]:
    """
    Исходящие сообщения от вершин строк (ось -2) к вершинам столбцов (ось -1).
    inc_match/inc_other - входящие сообщения в тех же координатах
    """
    size = mask.shape[-1]
    without_one, without_two = _exclusive(mask, inc_other)
    out_match = weights + without_one

    gain = weights + np.where(mask, inc_match, 0.0)
    candidates = gain[..., None, :] + without_two
    allowed = mask[..., None, :] & ~np.eye(size, dtype=bool)
    out_other = np.where(allowed, candidates, NEG_INF).max(-1, initial=NEG_INF)
    return np.where(mask, out_match, 0.0), np.where(mask, out_other, 0.0)


def _normalize(match: np.ndarray,
               other: np.ndarray,
               mask: np.ndarray,
               receiver_degree: np.ndarray
               ) -> tuple[np.ndarray, np.ndarray]:
    shift = np.where(receiver_degree >= 2, np.maximum(match, other), match)
    shift = np.where(mask & np.isfinite(shift), shift, 0.0)
    return match - shift, other - shift


def step_arrays(weights: np.ndarray,
                mask: np.ndarray,
                state: tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray],
                normalized: bool
                ) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    a, b, c, d = state
    a_new, b_new = _outgoing(weights, mask, c, d)
    c_t, d_t = _outgoing(_swap(weights), _swap(mask), _swap(a), _swap(b))
    c_new, d_new = _swap(c_t), _swap(d_t)
    if normalized:
        right_degree = mask.sum(-2)[..., None, :]
        left_degree = mask.sum(-1)[..., :, None]
        a_new, b_new = _normalize(a_new, b_new, mask, right_degree)
        c_new, d_new = _normalize(c_new, d_new, mask, left_degree)
    return a_new, b_new, c_new, d_new


def initial_arrays(weights: np.ndarray, mask: np.ndarray):
    w = np.where(mask, weights, 0.0)
    zeros = np.zeros_like(w)
    return w, zeros, w.copy(), zeros.copy()


def belief_arrays(weights: np.ndarray,
                  mask: np.ndarray,
                  state: tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]
                  ) -> tuple[np.ndarray, np.ndarray]:
    """
    b_u[i, r] = w_ir + C[i, r] + Σ_{k≠r} D[i, k]
    b_v[j, r] = w_rj + A[r, j] + Σ_{k≠r} B[k, j]
    """
    a, b, c, d = state
    rest_left, _ = _exclusive(mask, d)
    left = np.where(mask, weights + np.where(mask, c, 0.0) + rest_left, NEG_INF)
    mask_t = _swap(mask)
    rest_right, _ = _exclusive(mask_t, _swap(b))
    right = np.where(mask_t, _swap(weights) + np.where(mask_t, _swap(a), 0.0) + rest_right, NEG_INF)
    return left, right


def init_messages(instance: BipartiteInstance, normalized: bool = False) -> MessageState:
    """
    m→⁰_ij(r) = w_ij при r = i, иначе 0; симметрично для m←⁰_ji
    """
    a, b, c, d = initial_arrays(instance.weights, instance.mask)
    return MessageState(0, a, b, c, d, instance.mask, normalized)


def step(state: MessageState, instance: BipartiteInstance) -> MessageState:
    arrays = (state.forward_match, state.forward_other, state.backward_match, state.backward_other)
    a, b, c, d = step_arrays(instance.weights, instance.mask, arrays, state.normalized)
    return replace(state, t=state.t + 1, forward_match=a, forward_other=b,
                   backward_match=c, backward_other=d)


def beliefs(state: MessageState, instance: BipartiteInstance) -> BeliefSet:
    arrays = (state.forward_match, state.forward_other, state.backward_match, state.backward_other)
    left, right = belief_arrays(instance.weights, instance.mask, arrays)
    return BeliefSet(state.t, left, right)
