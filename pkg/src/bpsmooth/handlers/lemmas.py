import argparse

from bpsmooth.core.errors import ExperimentConfigError
from bpsmooth.core.logging import get_logger
from bpsmooth.experiments.config import ExperimentConfig
from bpsmooth.experiments.runner import lemma_report, run_experiment
from bpsmooth.handlers.options import add_overrides, overrides, store_result
from bpsmooth.utils.formatting import render_lemmas, render_result

logger = get_logger(__name__)


def register(subparsers) -> None:
    parser = subparsers.add_parser('check-lemmas', help='проверить детерминированные следствия событий')
    add_overrides(parser)
    parser.set_defaults(handler=check_lemmas_cmd)


def check_lemmas_cmd(args: argparse.Namespace) -> int:
    try:
        config = ExperimentConfig.from_file(args.config, kind='lemma_checks', **overrides(args))
    except ExperimentConfigError:
        logger.exception('config_invalid', path=str(args.config))
        return 1
    result = run_experiment(config)
    print(render_result(result))
    print(render_lemmas(lemma_report(result.table)))
    store_result(args, result)
    return 0 if result.passed else 2
