import numpy as np

from bpsmooth.generators.families import Custom, RandomFlow
from bpsmooth.instance.models import BipartiteInstance, FlowNetwork

OUTPUTS_PER_COUNTER = 4


def counter_blocks(draws: int) -> int:
    """
    Число значений счетчика Philox на одно испытание
    """
    return max(1, -(-draws // OUTPUTS_PER_COUNTER))


def derived_seed(draws: int, trial_index: int) -> int:
    return trial_index * counter_blocks(draws)


def uniform_stream(seed: int, start: int, count: int, draws: int) -> np.ndarray:
    """
    Равномерные u ∈ [0, 1) формы (count, draws) для испытаний
    start..start+count-1. Испытание i владеет блоками счетчика
    [i·B, (i+1)·B), так что результат не зависит от разбиения на пачки
    """
    blocks = counter_blocks(draws)
    key = np.random.SeedSequence(seed).generate_state(2, dtype=np.uint64)
    bit_generator = np.random.Philox(key=key, counter=start * blocks)
    generator = np.random.Generator(bit_generator)
    width = blocks * OUTPUTS_PER_COUNTER
    u = generator.random(count * width).reshape(count, width)
    return u[:, :draws]


def sample_weights(family, seed: int, start: int, count: int) -> np.ndarray:
    """
    Веса ребер (в порядке family.layout()) для пачки испытаний
    """
    u = uniform_stream(seed, start, count, family.draws)
    return family.transform(u)


def dense_weights(family, weights: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """
    Пачка весов -> плотные матрицы (count, n_left, n_right) и маска
    """
    rows, cols = family.layout()
    dense = np.zeros((weights.shape[0], family.n_left, family.n_right))
    dense[:, rows, cols] = weights
    return dense, family.mask()


def to_instance(family, weights: np.ndarray) -> BipartiteInstance:
    rows, cols = family.layout()
    return BipartiteInstance.create(
        family.n_left,
        family.n_right,
        zip(rows.tolist(), cols.tolist(), weights.tolist()),
    )


def sample(family, seed: int, trial_index: int) -> BipartiteInstance:
    return to_instance(family, sample_weights(family, seed, trial_index, 1)[0])


def sample_custom(family: Custom, seed: int, trial_index: int) -> BipartiteInstance:
    """
    Каждый вес независимо через обратную функцию распределения
    своей кусочно-постоянной плотности
    """
    if not isinstance(family, Custom):
        raise TypeError(f'sample_custom expects a custom family, got {family.kind}')
    return sample(family, seed, trial_index)


def flow_from_uniforms(family: RandomFlow, u: np.ndarray) -> FlowNetwork:
    tails, heads = family.pairs()
    present, cap_u, cost_u, flow_u = u.reshape(4, -1)
    keep = present < family.edge_probability
    capacity = 1 + np.minimum(np.floor(cap_u * family.max_capacity), family.max_capacity - 1).astype(np.int64)
    flow = np.minimum(np.floor(flow_u * (capacity + 1)), capacity).astype(np.int64)
    tails, heads = tails[keep], heads[keep]
    capacity, cost, flow = capacity[keep], cost_u[keep], flow[keep]
    budgets = np.zeros(family.n_nodes, dtype=np.int64)
    np.add.at(budgets, tails, flow)
    np.add.at(budgets, heads, -flow)
    return FlowNetwork.create(
        budgets.tolist(),
        zip(tails.tolist(), heads.tolist(), capacity.tolist(), cost.tolist()),
    )


def sample_flow(family: RandomFlow, seed: int, trial_index: int) -> FlowNetwork:
    u = uniform_stream(seed, trial_index, 1, family.draws)[0]
    return flow_from_uniforms(family, u)
