from contextlib import contextmanager
from typing import Any, Iterator

import structlog


@contextmanager
def log_context(**ctx: Any) -> Iterator[None]:
    """
    Добавляет контекст (вид эксперимента, семейство, seed, чанк)
    во все логи structlog внутри блока
    """
    ctx = {key: value for key, value in ctx.items() if value is not None}
    structlog.contextvars.bind_contextvars(**ctx)
    try:
        yield
    finally:
        structlog.contextvars.unbind_contextvars(*ctx)
