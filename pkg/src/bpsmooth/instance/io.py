from pathlib import Path

from bpsmooth.core.errors import InstanceFormatError, InstanceValidationError
from bpsmooth.core.logging import get_logger
from bpsmooth.instance.models import BipartiteInstance, FlowNetwork
from bpsmooth.instance.validation import validate

logger = get_logger(__name__)


def _content_lines(text: str):
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if line and not line.startswith('#'):
            yield line_no, line.split()


def _ints(line_no: int, tokens: list[str]) -> list[int]:
    try:
        return [int(tok) for tok in tokens]
    except ValueError:
        raise InstanceFormatError(line_no, f'expected integers, got {" ".join(tokens)!r}') from None


def _float(line_no: int, token: str) -> float:
    try:
        return float(token)
    except ValueError:
        raise InstanceFormatError(line_no, f'expected a number, got {token!r}') from None


def _read_bipartite(header_no: int, header: list[str], lines) -> BipartiteInstance:
    if len(header) != 3:
        raise InstanceFormatError(header_no, 'header must be "bip <n_left> <n_right>"')
    n_left, n_right = _ints(header_no, header[1:])
    edges = []
    for line_no, tokens in lines:
        if len(tokens) != 3:
            raise InstanceFormatError(line_no, 'edge line must be "i j w"')
        i, j = _ints(line_no, tokens[:2])
        edges.append((i - 1, j - 1, _float(line_no, tokens[2])))
    return BipartiteInstance.create(n_left, n_right, edges)


def _read_flow(header_no: int, header: list[str], lines) -> FlowNetwork:
    if len(header) != 3:
        raise InstanceFormatError(header_no, 'header must be "flow <n> <m>"')
    n, m = _ints(header_no, header[1:])
    budgets = [0] * n
    seen_nodes = set()
    edges = []
    last_no = header_no
    for line_no, tokens in lines:
        last_no = line_no
        if tokens[0] == 'node':
            if edges:
                raise InstanceFormatError(line_no, 'node lines must precede edge lines')
            if len(tokens) != 3:
                raise InstanceFormatError(line_no, 'node line must be "node v b"')
            v, b = _ints(line_no, tokens[1:])
            if not 1 <= v <= n:
                raise InstanceValidationError('index out of range')
            if v in seen_nodes:
                raise InstanceFormatError(line_no, f'node {v} listed twice')
            seen_nodes.add(v)
            budgets[v - 1] = b
            continue
        if len(tokens) != 4:
            raise InstanceFormatError(line_no, 'edge line must be "i j u c"')
        tail, head, capacity = _ints(line_no, tokens[:3])
        edges.append((tail - 1, head - 1, capacity, _float(line_no, tokens[3])))
    if len(edges) != m:
        raise InstanceFormatError(last_no, f'header announces {m} edges, found {len(edges)}')
    return FlowNetwork.create(budgets, edges)


def read_instance(text: str) -> BipartiteInstance | FlowNetwork:
    """
    Читает экземпляр в формате списка ребер (индексы 1-based).
    Заголовок "bip <n_left> <n_right>" или "flow <n> <m>",
    строки с # считаются комментариями
    """
    lines = _content_lines(text)
    try:
        header_no, header = next(lines)
    except StopIteration:
        raise InstanceFormatError(1, 'missing header') from None

    match header[0]:
        case 'bip':
            instance = _read_bipartite(header_no, header, lines)
        case 'flow':
            instance = _read_flow(header_no, header, lines)
        case _:
            raise InstanceFormatError(header_no, f'unknown header {header[0]!r}')

    problem = validate(instance)
    if problem is not None:
        raise InstanceValidationError(problem)
    return instance


def write_instance(x: BipartiteInstance | FlowNetwork) -> str:
    if isinstance(x, BipartiteInstance):
        lines = [f'bip {x.n_left} {x.n_right}']
        lines += [f'{i + 1} {j + 1} {w!r}' for i, j, w in x.edges]
    else:
        lines = [f'flow {x.n_nodes} {x.m}']
        lines += [f'node {v + 1} {b}' for v, b in enumerate(x.budgets) if b != 0]
        lines += [f'{t + 1} {h + 1} {u} {c!r}' for t, h, u, c in x.edges]
    return '\n'.join(lines) + '\n'


def read_instance_file(path: str | Path) -> BipartiteInstance | FlowNetwork:
    path = Path(path)
    instance = read_instance(path.read_text(encoding='utf-8'))
    logger.debug('instance_read', path=str(path), kind=type(instance).__name__)
    return instance


def write_instance_file(x: BipartiteInstance | FlowNetwork, path: str | Path) -> None:
    Path(path).write_text(write_instance(x), encoding='utf-8', newline='\n')
