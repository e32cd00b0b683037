"""
Явные границы для проверок экспериментов
"""
import math


def isolation_bound(eps: float, phi: float, m: int) -> float:
    """
    P(δ ≤ ε) ≤ 2εφm
    """
    return 2.0 * eps * phi * m


def event_e_probability(eps: float) -> float:
    return eps / 8 ** 3


def event_phi_probability(eps: float, phi: float) -> float:
    """
    Нижняя граница вероятности E^φ_ε
    """
    return eps * phi / 4


def wrong_belief_k_max(eps: float) -> int:
    return math.floor(1 / (8 * eps) - 1)


def subgraph_k_max(eps: float) -> int:
    return math.floor(1 / (52 * eps) - 1)


def _blocks(t: int) -> int:
    return -(-int(t) // 4) + 1


def k22_tail_lower(t: int) -> float:
    """
    P(τ ≥ t) на UniformK22 не меньше вероятности E_ε
    с ε = 1/(8(⌈t/4⌉ + 1))
    """
    return 1.0 / (8 ** 4 * _blocks(t))


def gadget_tail_lower(t: int, n: int) -> float:
    """
    Хотя бы одна из n/4 независимых копий K2,2 еще не сошлась
    """
    return 1.0 - (1.0 - k22_tail_lower(t)) ** (n // 4)


def smoothed_tail_valid(t: int, phi: float) -> bool:
    return 52 * _blocks(t) >= phi


def smoothed_tail_lower(t: int, n: int, phi: float) -> float:
    """
    Хотя бы один из n/2 подграфов в событии E^φ_ε
    с ε = 1/(52(⌈t/4⌉ + 1)); nan вне области t, где ε ≤ 1/φ
    """
    if not smoothed_tail_valid(t, phi):
        return math.nan
    p = phi / (208 * _blocks(t))
    return 1.0 - (1.0 - p) ** (n // 2)
