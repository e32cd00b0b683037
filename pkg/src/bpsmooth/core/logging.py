import sys
import logging

import numpy as np
import structlog

QUIET_LOGGERS = ('sqlalchemy.engine', 'sqlalchemy.pool')


def _numpy_values(_, __, event_dict: dict) -> dict:
    """
    numpy-скаляры и короткие массивы в обычные типы Python,
    иначе JSONRenderer на них падает
    """
    for key, value in event_dict.items():
        if isinstance(value, np.generic):
            event_dict[key] = value.item()
        elif isinstance(value, np.ndarray) and value.size <= 16:
            event_dict[key] = value.tolist()
    return event_dict


def configure_logging(debug: bool, log_level: str = 'INFO') -> None:
    """
    Настраивает стандартный logging и structlog.
    Логи идут в stderr, stdout остается под результаты команд
    debug=True: консольный вывод
    debug=False: JSON
    """
    level = getattr(logging, log_level.upper(), logging.INFO)

    logging.basicConfig(
        level=level,
        format='%(message)s',
        stream=sys.stderr
    )
    for name in QUIET_LOGGERS:
        logging.getLogger(name).setLevel(max(level, logging.WARNING))

    shared_processors = [
        structlog.contextvars.merge_contextvars,
        structlog.processors.add_log_level,
        structlog.processors.TimeStamper(fmt='iso', utc=True),
        structlog.processors.StackInfoRenderer(),
        structlog.processors.format_exc_info,
        _numpy_values,
    ]

    renderer = (
        structlog.dev.ConsoleRenderer()
        if debug
        else structlog.processors.JSONRenderer()
    )

    structlog.configure(
        processors=[
            *shared_processors,
            structlog.processors.UnicodeDecoder(),
            renderer,
        ],
        wrapper_class=structlog.make_filtering_bound_logger(level),
        logger_factory=structlog.stdlib.LoggerFactory(),
        cache_logger_on_first_use=True,
    )


def configure_worker(debug: bool, log_level: str) -> None:
    """
    Инициализатор процессов пула: при spawn/forkserver
    воркер не наследует настройку structlog
    """
    configure_logging(debug, log_level)


def get_logger(name: str | None = None) -> structlog.stdlib.BoundLogger:
    return structlog.get_logger(name)
