import numpy as np
import structlog

from bpsmooth.core.log_context import log_context
from bpsmooth.core.logging import _numpy_values


def test_numpy_values_become_python():
    event = _numpy_values(None, 'info', {
        'event': 'chunk_done', 'trials': np.int64(3), 'p': np.float64(0.5),
        'tau': np.array([1, 2]), 'big': np.zeros(100),
    })
    assert type(event['trials']) is int
    assert type(event['p']) is float
    assert event['tau'] == [1, 2]
    assert isinstance(event['big'], np.ndarray)


def test_log_context_binds_and_clears():
    with log_context(kind='tau_tail', seed=5, chunk=None):
        bound = structlog.contextvars.get_contextvars()
        assert bound['kind'] == 'tau_tail'
        assert bound['seed'] == 5
        assert 'chunk' not in bound
    assert 'kind' not in structlog.contextvars.get_contextvars()
