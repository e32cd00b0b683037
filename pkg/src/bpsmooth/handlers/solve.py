import argparse
from pathlib import Path

from bpsmooth.bp.run import run
from bpsmooth.bp.trace import write_trace
from bpsmooth.core.config import settings
from bpsmooth.core.errors import BpSmoothError
from bpsmooth.core.logging import get_logger
from bpsmooth.instance.io import read_instance_file
from bpsmooth.instance.models import FlowNetwork
from bpsmooth.oracles.flow import cheapest_residual_cycle, flow_delta_enumeration, min_cost_flow
from bpsmooth.oracles.matching import matching_delta, mwm
from bpsmooth.utils.formatting import render_gap, render_matching, render_run

logger = get_logger(__name__)


def register(subparsers) -> None:
    parser = subparsers.add_parser('solve', help='решить один экземпляр из файла')
    parser.add_argument('--instance', required=True, type=Path, help='файл экземпляра')
    parser.add_argument('--oracle', action='store_true', help='сравнить с точным оракулом')
    parser.add_argument('--trace', type=Path, help='CSV с убеждениями по итерациям')
    parser.add_argument('--t-max', type=int, default=10_000, dest='t_max')
    parser.add_argument('--window', type=int, default=4)
    parser.set_defaults(handler=solve_cmd)


def _solve_flow(network: FlowNetwork, args: argparse.Namespace) -> None:
    flow = min_cost_flow(network)
    print(f'Поток минимальной стоимости: {list(flow.flow)} стоимость {flow.cost(network):.6g}')
    cycle = cheapest_residual_cycle(network, flow)
    print('Δ: остаточных циклов нет' if cycle is None else f'Δ = {cycle:.6g}')
    if args.oracle:
        print(render_gap(flow_delta_enumeration(network)))


def solve_cmd(args: argparse.Namespace) -> int:
    """
    Обрабатывает команду solve
    """
    try:
        instance = read_instance_file(args.instance)
        if isinstance(instance, FlowNetwork):
            _solve_flow(instance, args)
            return 0
        oracle = mwm(instance) if args.oracle else None
        result = run(instance, args.t_max, args.window, oracle_matching=oracle, normalized=True)
        print(render_run(result))
        if oracle is not None:
            print(f'Оптимум: {render_matching(oracle)}')
            if instance.m <= settings.matching_edge_cap:
                print(render_gap(matching_delta(instance)))
        if args.trace is not None:
            write_trace(instance, args.trace, args.t_max, normalized=True)
            logger.info('trace_written', path=str(args.trace))
    except (BpSmoothError, OSError):
        logger.exception('solve_failed', path=str(args.instance))
        return 1
    return 0
