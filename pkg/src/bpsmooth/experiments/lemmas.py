"""
Детерминированные следствия событий E_ε и E^φ_ε, которые
проверяются на каждом экземпляре, где событие выполнено
"""
from dataclasses import dataclass

import numpy as np

from bpsmooth.bp.run import decode_path
from bpsmooth.experiments.bounds import subgraph_k_max, wrong_belief_k_max
from bpsmooth.generators.events import event_hits, event_phi_slack, event_slack, subgraph_weights
from bpsmooth.generators.families import Custom, EventK22, SmoothedKnn, UniformK22
from bpsmooth.generators.sampling import to_instance
from bpsmooth.instance.models import BipartiteInstance
from bpsmooth.tree.build import build_tree
from bpsmooth.tree.matching import k22_root_values, light_edge_audit, max_t_matching

LEMMAS = ('wrong_belief', 'subgraph_belief', 'no_light_edges')


@dataclass(frozen=True)
class LemmaTally:
    checked: int
    violations: int

    @property
    def passed(self) -> bool:
        return self.violations == 0


@dataclass(frozen=True)
class LemmaReport:
    wrong_belief: LemmaTally
    subgraph_belief: LemmaTally
    no_light_edges: LemmaTally

    @property
    def passed(self) -> bool:
        return self.wrong_belief.passed and self.subgraph_belief.passed and self.no_light_edges.passed

    @classmethod
    def from_values(cls, values: dict[str, np.ndarray]) -> 'LemmaReport':
        """
        values: 1 - следствие выполнено, 0 - нарушено, nan - событие не наступило
        """
        tallies = {}
        for name in LEMMAS:
            v = np.asarray(values.get(name, ()), dtype=float)
            checked = v[~np.isnan(v)]
            tallies[name] = LemmaTally(int(checked.size), int((checked == 0).sum()))
        return cls(**tallies)


def _iterations(k_max: int) -> list[int]:
    return [4 * k for k in range(1, k_max + 1)]


def wrong_belief_values(family, dense: np.ndarray, mask: np.ndarray, eps: float, t_max: int,
                  normalized: bool = True) -> np.ndarray:
    """
    На экземплярах из E_ε решение для u1 на итерации 4k
    не совпадает с оптимальным партнером v2 при всех k <= 1/(8ε) - 1.
    Дополнительно максимальное T-паросочетание T^{4k}(u1) берет ребро e11
    """
    count = dense.shape[0]
    out = np.full(count, np.nan)
    k_max = min(wrong_belief_k_max(eps), t_max // 4)
    if k_max < 1 or not isinstance(family, (UniformK22, EventK22)):
        return out
    hits = event_hits(event_slack(dense.reshape(count, 4)), eps)
    if not hits.any():
        return out

    chosen = dense[hits]
    path = decode_path(chosen, mask, _iterations(k_max), normalized)
    wrong = np.ones(chosen.shape[0], dtype=bool)
    for estimate in path.values():
        wrong &= estimate.assignment[:, 0] != 1
    for pos, weights in enumerate(chosen):
        instance = BipartiteInstance.from_dense(weights)
        for t in _iterations(k_max):
            if int(np.argmax(k22_root_values(instance, ('u', 0), t))) != 0:
                wrong[pos] = False
                break
    out[hits] = wrong.astype(float)
    return out


def subgraph_belief_values(family, dense: np.ndarray, mask: np.ndarray, eps: float, phi: float, t_max: int,
                  normalized: bool = True) -> np.ndarray:
    """
    Для каждого подграфа H^j в событии E^φ_ε решение для u_{2j}
    на итерации 4k не равно v_{2j+1} при всех k <= 1/(52ε) - 1
    """
    count = dense.shape[0]
    out = np.full(count, np.nan)
    k_max = min(subgraph_k_max(eps), t_max // 4)
    if k_max < 1 or not isinstance(family, (SmoothedKnn, Custom)):
        return out
    blocks = dense.shape[-1] // 2
    hits = np.stack(
        [event_hits(event_phi_slack(subgraph_weights(dense, j), phi), eps) for j in range(blocks)],
        axis=-1,
    )
    any_hit = hits.any(-1)
    if not any_hit.any():
        return out

    chosen, chosen_hits = dense[any_hit], hits[any_hit]
    path = decode_path(chosen, mask, _iterations(k_max), normalized)
    wrong = np.ones(chosen.shape[0], dtype=bool)
    for estimate in path.values():
        for j in range(blocks):
            picked = estimate.assignment[:, 2 * j]
            wrong &= ~chosen_hits[:, j] | (picked != 2 * j + 1)
    out[any_hit] = wrong.astype(float)
    return out


def light_edge_values(family, weights: np.ndarray, k_max: int) -> np.ndarray:
    """
    Максимальные T-паросочетания T^k для всех корней и 0 <= k <= k_max
    не содержат легких ребер
    """
    count = weights.shape[0]
    out = np.full(count, np.nan)
    if not isinstance(family, SmoothedKnn):
        return out
    for trial in range(count):
        out[trial] = float(_no_light_edges(to_instance(family, weights[trial]), family, k_max))
    return out


def _no_light_edges(instance: BipartiteInstance, family: SmoothedKnn, k_max: int) -> bool:
    for side in ('u', 'v'):
        for root in range(family.n):
            for k in range(k_max + 1):
                tree = build_tree(instance, (side, root), k)
                if not light_edge_audit(tree, max_t_matching(tree), family):
                    return False
    return True
