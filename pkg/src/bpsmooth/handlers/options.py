import argparse
from pathlib import Path

from bpsmooth.core.config import settings
from bpsmooth.core.logging import get_logger
from bpsmooth.db.queries import create_tables, save_run
from bpsmooth.db.session import SessionLocal, engine
from bpsmooth.experiments.runner import ExperimentResult

logger = get_logger(__name__)


def add_overrides(parser: argparse.ArgumentParser) -> None:
    parser.add_argument('--config', required=True, type=Path, help='файл key=value с конфигурацией')
    parser.add_argument('--seed', type=int, help='переопределить seed')
    parser.add_argument('--trials', type=int, help='переопределить число испытаний')
    parser.add_argument('--out', type=Path, help='путь к CSV')
    parser.add_argument('--db', action='store_true', help='сохранить результат в базу')


def overrides(args: argparse.Namespace) -> dict:
    return {'seed': args.seed, 'trials': args.trials, 'out': args.out}


def store_result(args: argparse.Namespace, result: ExperimentResult) -> None:
    """
    Сохраняет запуск в базу, если это запрошено флагом или настройкой
    """
    if not (args.db or settings.store_results):
        return
    create_tables(engine)
    with SessionLocal() as session:
        run_id = save_run(session, result)
    logger.info('run_stored', run_id=run_id)
