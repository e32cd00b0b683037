import argparse
import sys

from bpsmooth.core.config import settings
from bpsmooth.core.errors import BpSmoothError
from bpsmooth.core.logging import configure_logging, get_logger
from bpsmooth.handlers import commands

logger = get_logger(__name__)


class Parser(argparse.ArgumentParser):
    """
    Ошибка разбора аргументов завершает процесс с кодом 1
    """
    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(1, f'{self.prog}: error: {message}\n')


def build_parser() -> Parser:
    parser = Parser(prog='bpsmooth', description='BP для паросочетаний максимального веса и сглаженный анализ')
    subparsers = parser.add_subparsers(dest='command', required=True, parser_class=Parser)
    for register in commands:
        register(subparsers)
    return parser


def main(argv: list[str] | None = None) -> int:
    configure_logging(
        debug=settings.debug,
        log_level=getattr(settings, 'log_level', 'INFO')
    )
    args = build_parser().parse_args(argv)
    logger.debug('command_started', command=args.command)
    try:
        return args.handler(args)
    except BpSmoothError:
        logger.exception('command_failed', command=args.command)
        return 1
