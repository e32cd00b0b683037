import numpy as np
import pytest

from bpsmooth.instance.models import BipartiteInstance, FlowNetwork


@pytest.fixture
def k22():
    """
    K2,2 в событии E_ε при ε = 0.05: оптимум {e12, e21} = 1.3
    """
    return BipartiteInstance.from_dense(np.array([[0.9, 0.6], [0.7, 0.35]]))


@pytest.fixture
def parallel_network():
    """
    Два параллельных ребра A -> B со стоимостями 0.2 и 0.5
    """
    return FlowNetwork.create([1, -1], [(0, 1, 1, 0.2), (0, 1, 1, 0.5)])


@pytest.fixture
def config_file(tmp_path):
    def write(**values) -> str:
        path = tmp_path / 'experiment.env'
        path.write_text(''.join(f'{k}={v}\n' for k, v in values.items()), encoding='utf-8')
        return str(path)
    return write
