import argparse

from bpsmooth.core.errors import ExperimentConfigError
from bpsmooth.core.logging import get_logger
from bpsmooth.experiments.config import ExperimentConfig
from bpsmooth.experiments.runner import run_experiment
from bpsmooth.handlers.options import add_overrides, overrides, store_result
from bpsmooth.utils.formatting import render_result

logger = get_logger(__name__)


def register(subparsers) -> None:
    parser = subparsers.add_parser('run', help='запустить эксперимент по конфигурации')
    add_overrides(parser)
    parser.set_defaults(handler=run_cmd)


def run_cmd(args: argparse.Namespace) -> int:
    """
    Обрабатывает команду run: 0 - проверки пройдены, 2 - нет
    """
    try:
        config = ExperimentConfig.from_file(args.config, **overrides(args))
    except ExperimentConfigError:
        logger.exception('config_invalid', path=str(args.config))
        return 1
    result = run_experiment(config)
    print(render_result(result))
    store_result(args, result)
    return 0 if result.passed else 2
