from dataclasses import dataclass
from functools import cached_property

import numpy as np

from bpsmooth.core.config import settings
from bpsmooth.core.errors import TreeSizeError
from bpsmooth.core.logging import get_logger
from bpsmooth.instance.models import BipartiteInstance

logger = get_logger(__name__)


@dataclass(frozen=True, eq=False)
class CompTree:
    """
    Дерево вычислений T^k(x) высоты k+1, хранится по уровням.
    Уровень d: метки вершин, индекс родителя на уровне d-1
    и вес ребра к родителю. Вершины уровня d лежат в доле корня
    при четном d и в другой доле при нечетном
    """
    root_side: str
    root: int
    k: int
    n_other: int
    labels: tuple[np.ndarray, ...]
    parents: tuple[np.ndarray, ...]
    weights: tuple[np.ndarray, ...]

    @property
    def depth(self) -> int:
        return len(self.labels) - 1

    @cached_property
    def offsets(self) -> np.ndarray:
        return np.concatenate(([0], np.cumsum([lvl.size for lvl in self.labels])))

    @property
    def node_count(self) -> int:
        return int(self.offsets[-1])

    def side(self, level: int) -> str:
        if level % 2 == 0:
            return self.root_side
        return 'v' if self.root_side == 'u' else 'u'

    def edge_endpoints(self, child_ids) -> tuple[np.ndarray, np.ndarray]:
        """
        Метки (левая, правая) концов ребер, заданных id дочерних вершин
        """
        child_ids = np.asarray(child_ids, dtype=np.int64)
        levels = np.searchsorted(self.offsets, child_ids, side='right') - 1
        lefts = np.empty(child_ids.size, dtype=np.int64)
        rights = np.empty(child_ids.size, dtype=np.int64)
        for pos, (node, level) in enumerate(zip(child_ids.tolist(), levels.tolist())):
            idx = node - int(self.offsets[level])
            child = int(self.labels[level][idx])
            parent = int(self.labels[level - 1][self.parents[level][idx]])
            if self.side(level) == 'u':
                lefts[pos], rights[pos] = child, parent
            else:
                lefts[pos], rights[pos] = parent, child
        return lefts, rights


def _side_arrays(instance: BipartiteInstance, side: str) -> tuple[np.ndarray, np.ndarray]:
    if side == 'u':
        return instance.mask, instance.weights
    return instance.mask.T, instance.weights.T


def build_tree(instance: BipartiteInstance,
               root: tuple[str, int],
               k: int,
               node_cap: int | None = None
               ) -> CompTree:
    """
    Разворачивает граф от корня x на k+1 уровней вниз.
    Дети вершины с меткой y - соседи y, кроме метки ее родителя
    """
    node_cap = settings.tree_node_cap if node_cap is None else node_cap
    side, index = root
    if side not in ('u', 'v'):
        raise ValueError(f'root side must be "u" or "v", got {side!r}')
    n_root = instance.n_left if side == 'u' else instance.n_right
    if not 0 <= index < n_root:
        raise ValueError(f'root {side}{index + 1} does not exist')
    if k < 0:
        raise ValueError(f'k must be non-negative, got {k}')

    labels = [np.array([index], dtype=np.int64)]
    parents = [np.array([-1], dtype=np.int64)]
    weights = [np.array([np.nan])]
    total = 1
    for level in range(1, k + 2):
        parent_side = side if (level - 1) % 2 == 0 else ('v' if side == 'u' else 'u')
        adj, w = _side_arrays(instance, parent_side)
        prev = labels[-1]
        rows = adj[prev]
        if level >= 2:
            grand = labels[-2][parents[-1]]
            rows = rows & (np.arange(adj.shape[1]) != grand[:, None])
        size = int(rows.sum())
        if total + size > node_cap:
            raise TreeSizeError(
                f'computation tree T^{k}({side}{index + 1}) exceeds {node_cap} nodes at level {level}'
            )
        parent_idx, child = np.nonzero(rows)
        labels.append(child.astype(np.int64))
        parents.append(parent_idx.astype(np.int64))
        weights.append(w[prev[parent_idx], child])
        total += size

    logger.debug('tree_built', root=f'{side}{index + 1}', k=k, nodes=total)
    n_other = instance.n_right if side == 'u' else instance.n_left
    return CompTree(side, index, k, n_other, tuple(labels), tuple(parents), tuple(weights))


def write_dot(tree: CompTree, tmatching=None) -> str:
    """
    DOT-представление дерева, ребра T-паросочетания выделены
    """
    chosen = set() if tmatching is None else set(tmatching.edges)
    lines = ['graph comptree {']
    for level, level_labels in enumerate(tree.labels):
        side = tree.side(level)
        base = int(tree.offsets[level])
        for idx, label in enumerate(level_labels.tolist()):
            lines.append(f'  n{base + idx} [label="{side}{label + 1}"];')
    for level in range(1, len(tree.labels)):
        base = int(tree.offsets[level])
        parent_base = int(tree.offsets[level - 1])
        for idx, (parent, w) in enumerate(zip(tree.parents[level].tolist(), tree.weights[level].tolist())):
            node = base + idx
            style = ', penwidth=3' if node in chosen else ''
            lines.append(f'  n{parent_base + parent} -- n{node} [label="{w:.4g}"{style}];')
    lines.append('}')
    return '\n'.join(lines) + '\n'
