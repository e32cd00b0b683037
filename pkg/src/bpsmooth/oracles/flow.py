"""
Точные оракулы для потока минимальной стоимости: последовательные
кратчайшие пути, остаточная сеть и самый дешевый остаточный цикл Δ.

Дуги хранятся в массивах: дуга 2e - прямая копия ребра e,
дуга 2e + 1 - обратная с отрицательной стоимостью
"""
import math
from collections import deque
from dataclasses import dataclass

import numpy as np

from bpsmooth.core.config import settings
from bpsmooth.core.errors import EnumerationCapError, InfeasibleFlowError, InstanceValidationError, NegativeCycleError
from bpsmooth.core.logging import get_logger
from bpsmooth.instance.models import FlowNetwork, IntegerFlow
from bpsmooth.instance.validation import validate, validate_flow
from bpsmooth.oracles.matching import GapReport

logger = get_logger(__name__)

PATH_TOLERANCE = 1e-12
CYCLE_TOLERANCE = 1e-12


@dataclass(frozen=True, eq=False)
class ResidualNetwork:
    n_nodes: int
    tail: np.ndarray
    head: np.ndarray
    capacity: np.ndarray
    cost: np.ndarray
    edge: np.ndarray
    forward: np.ndarray

    def __len__(self) -> int:
        return self.tail.size


def _require_valid(network: FlowNetwork) -> None:
    problem = validate(network)
    if problem is not None:
        raise InstanceValidationError(problem)


def _shortest_path(n: int,
                   tail: np.ndarray,
                   head: np.ndarray,
                   cost: np.ndarray,
                   residual: np.ndarray,
                   potential: np.ndarray,
                   source: int
                   ) -> tuple[np.ndarray, np.ndarray]:
    """
    Метки расстояний по приведенным стоимостям (label-correcting с очередью).
    Отрицательные приведенные стоимости в пределах ошибки округления допустимы
    """
    outgoing = [[] for _ in range(n)]
    for arc in np.nonzero(residual > 0)[0].tolist():
        outgoing[int(tail[arc])].append(arc)
    dist = np.full(n, np.inf)
    via = np.full(n, -1, dtype=np.int64)
    dist[source] = 0.0
    queue = deque([source])
    queued = np.zeros(n, dtype=bool)
    queued[source] = True
    while queue:
        node = queue.popleft()
        queued[node] = False
        for arc in outgoing[node]:
            nxt = int(head[arc])
            reduced = cost[arc] + potential[node] - potential[nxt]
            if dist[node] + reduced < dist[nxt] - PATH_TOLERANCE:
                dist[nxt] = dist[node] + reduced
                via[nxt] = arc
                if not queued[nxt]:
                    queue.append(nxt)
                    queued[nxt] = True
    return dist, via


def min_cost_flow(network: FlowNetwork) -> IntegerFlow:
    """
    Целочисленный поток минимальной стоимости методом последовательных
    кратчайших путей с потенциалами вершин. Бюджеты подключаются
    через суперисток и суперсток
    """
    _require_valid(network)
    n = network.n_nodes
    source, sink = n, n + 1

    tails, heads, caps, costs = [], [], [], []
    for edge in network.edges:
        tails += [edge.tail, edge.head]
        heads += [edge.head, edge.tail]
        caps += [edge.capacity, 0]
        costs += [edge.cost, -edge.cost]
    supply = 0
    for node, budget in enumerate(network.budgets):
        if budget > 0:
            tails += [source, node]
            heads += [node, source]
            caps += [budget, 0]
            supply += budget
        elif budget < 0:
            tails += [node, sink]
            heads += [sink, node]
            caps += [-budget, 0]
        else:
            continue
        costs += [0.0, 0.0]

    tail = np.array(tails, dtype=np.int64)
    head = np.array(heads, dtype=np.int64)
    remaining = np.array(caps, dtype=np.int64)
    cost = np.array(costs, dtype=float)
    potential = np.zeros(n + 2)

    pushed = 0
    augmentations = 0
    while pushed < supply:
        dist, via = _shortest_path(n + 2, tail, head, cost, remaining, potential, source)
        if not np.isfinite(dist[sink]):
            raise InfeasibleFlowError(f'no augmenting path with {supply - pushed} units of supply left')
        reachable = np.isfinite(dist)
        potential[reachable] += dist[reachable]

        path = []
        node = sink
        while node != source:
            arc = int(via[node])
            path.append(arc)
            node = int(tail[arc])
        amount = min(int(remaining[path].min()), supply - pushed)
        remaining[path] -= amount
        remaining[np.array(path) ^ 1] += amount
        pushed += amount
        augmentations += 1

    flow = remaining[1:2 * network.m:2]
    logger.debug('min_cost_flow_done', nodes=n, edges=network.m, supply=supply, augmentations=augmentations)
    return IntegerFlow.create(flow.tolist())


def residual(network: FlowNetwork, flow: IntegerFlow) -> ResidualNetwork:
    """
    Прямая дуга есть, если f_e < u_e (емкость u_e - f_e),
    обратная - если f_e > 0 (емкость f_e, стоимость -c_e)
    """
    problem = validate_flow(network, flow)
    if problem is not None:
        raise InfeasibleFlowError(problem)
    arcs = []
    for e, (f, edge) in enumerate(zip(flow.flow, network.edges)):
        if f < edge.capacity:
            arcs.append((edge.tail, edge.head, edge.capacity - f, edge.cost, e, True))
        if f > 0:
            arcs.append((edge.head, edge.tail, f, -edge.cost, e, False))
    columns = list(zip(*arcs)) if arcs else [()] * 6
    return ResidualNetwork(
        n_nodes=network.n_nodes,
        tail=np.array(columns[0], dtype=np.int64),
        head=np.array(columns[1], dtype=np.int64),
        capacity=np.array(columns[2], dtype=np.int64),
        cost=np.array(columns[3], dtype=float),
        edge=np.array(columns[4], dtype=np.int64),
        forward=np.array(columns[5], dtype=bool),
    )


def _all_pairs(n: int, tail: np.ndarray, head: np.ndarray, cost: np.ndarray) -> np.ndarray:
    """
    Floyd-Warshall; отрицательные стоимости допустимы
    """
    dist = np.full((n, n), np.inf)
    np.fill_diagonal(dist, 0.0)
    np.minimum.at(dist, (tail, head), cost)
    for k in range(n):
        dist = np.minimum(dist, dist[:, k, None] + dist[None, k, :])
    return dist


def cheapest_residual_cycle(network: FlowNetwork, flow: IntegerFlow) -> float | None:
    """
    Δ - стоимость самого дешевого цикла остаточной сети, меняющего поток.
    Двухдуговой цикл из прямой и обратной копии одного ребра не считается.
    None, если такого цикла нет
    """
    net = residual(network, flow)
    n = net.n_nodes
    full = _all_pairs(n, net.tail, net.head, net.cost)
    if (np.diag(full) < -CYCLE_TOLERANCE).any():
        raise NegativeCycleError('flow not optimal')

    best = math.inf
    for e in np.unique(net.edge).tolist():
        own = net.edge == e
        others = ~own
        dist = _all_pairs(n, net.tail[others], net.head[others], net.cost[others])
        closing = dist[net.head[own], net.tail[own]]
        candidates = net.cost[own] + closing
        best = min(best, float(candidates.min()))
    return best if math.isfinite(best) else None


def flow_delta_enumeration(network: FlowNetwork) -> GapReport:
    """
    Перебор всех целочисленных потоков 0 <= f_e <= u_e:
    лучший и второй по стоимости допустимые потоки
    """
    _require_valid(network)
    caps = network.capacities
    size = math.prod(int(u) + 1 for u in caps.tolist())
    cap = settings.flow_enumeration_cap
    if size > cap:
        raise EnumerationCapError(f'flow enumeration supports at most {cap} assignments, got {size}')

    if network.m == 0:
        grid = np.zeros((1, 0), dtype=np.int64)
    else:
        grid = np.indices(tuple((caps + 1).tolist())).reshape(network.m, -1).T
    budgets = np.asarray(network.budgets, dtype=np.int64)
    feasible = grid[(grid @ network.incidence.T == budgets).all(1)]
    if not feasible.shape[0]:
        raise InfeasibleFlowError('network has no feasible integer flow')

    totals = feasible @ network.costs
    order = np.lexsort(tuple(feasible.T[::-1]) + (totals,))
    best = IntegerFlow.create(feasible[order[0]].tolist())
    if feasible.shape[0] == 1:
        return GapReport(best, None, None, True)
    second = IntegerFlow.create(feasible[order[1]].tolist())
    delta = second.cost(network) - best.cost(network)
    return GapReport(best, second, delta, delta > 0)
