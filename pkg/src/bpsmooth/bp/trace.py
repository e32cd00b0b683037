import csv
from pathlib import Path

import numpy as np

from bpsmooth.bp.messages import beliefs, init_messages, step
from bpsmooth.core.logging import get_logger
from bpsmooth.instance.models import BipartiteInstance

logger = get_logger(__name__)


def _cell(value: float) -> str:
    return '' if np.isneginf(value) else format(float(value), '.17g')


def write_trace(instance: BipartiteInstance,
                path: str | Path,
                t_max: int,
                normalized: bool = False
                ) -> None:
    """
    Отладочный CSV: t, вершина, убеждения b(r) по кандидатам r.
    Пустая ячейка означает -inf (нет ребра или пустой максимум)
    """
    width = max(instance.n_left, instance.n_right)
    header = ['t', 'node', *(f'r{r + 1}' for r in range(width))]
    state = init_messages(instance, normalized)
    with open(path, 'w', newline='', encoding='utf-8') as fh:
        writer = csv.writer(fh, lineterminator='\n')
        writer.writerow(header)
        for t in range(t_max + 1):
            if t > 0:
                state = step(state, instance)
            belief_set = beliefs(state, instance)
            for side, rows in (('u', belief_set.left), ('v', belief_set.right)):
                for idx, row in enumerate(rows):
                    cells = [_cell(x) for x in row]
                    cells += [''] * (width - len(cells))
                    writer.writerow([t, f'{side}{idx + 1}', *cells])
    logger.info('trace_written', path=str(path), iterations=t_max + 1)
