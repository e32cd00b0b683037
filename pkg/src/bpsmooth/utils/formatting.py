import math

from bpsmooth.bp.run import RunResult
from bpsmooth.experiments.lemmas import LemmaReport
from bpsmooth.experiments.runner import CheckResult, ExperimentResult
from bpsmooth.instance.models import Matching
from bpsmooth.oracles.matching import GapReport

STATUS = {True: 'OK', False: 'FAIL', None: 'SKIP'}


def _num(x: float | None) -> str:
    if x is None or (isinstance(x, float) and math.isnan(x)):
        return '-'
    return f'{x:.6g}'


def render_matching(matching: Matching) -> str:
    pairs = ', '.join(f'u{i + 1}-v{j + 1}' for i, j in sorted(matching.pairs))
    return f'{{{pairs}}} вес {_num(matching.weight)}'


def render_check(check: CheckResult) -> str:
    line = f'[{STATUS[check.passed]}] {check.name}: {_num(check.observed)} (граница {_num(check.bound)}'
    if check.sigma:
        line += f', σ {_num(check.sigma)}'
    line += ')'
    if check.detail:
        line += f' {check.detail}'
    return line


def render_result(result: ExperimentResult) -> str:
    """
    Итог эксперимента для консоли
    """
    config = result.config
    lines = [
        f'Эксперимент {config.kind} | семейство {config.family} | seed {config.seed}',
        f'Испытаний: {config.trials}, строк: {len(result.table)}',
    ]
    if result.csv_path is not None:
        lines.append(f'CSV: {result.csv_path}')
    lines.extend(render_check(c) for c in result.checks)
    lines.append('Все проверки пройдены' if result.passed else 'Есть непройденные проверки')
    return '\n'.join(lines)


def render_run(result: RunResult) -> str:
    assignment = ', '.join(
        f'u{i + 1}-v{j + 1}' if j >= 0 else f'u{i + 1}-' for i, j in enumerate(result.final_assignment.tolist())
    )
    status = f'сошелся, τ = {result.tau}' if result.converged else f'не сошелся за t_max = {result.tau}'
    lines = [
        f'BP {status}',
        f'Назначение: {assignment}',
        f'Паросочетание: {"да" if result.is_matching else "нет"}',
    ]
    if result.matched_oracle is not None:
        lines.append(f'Совпадает с оптимумом: {"да" if result.matched_oracle else "нет"}')
    if result.tie_detected:
        lines.append('Обнаружены почти равные убеждения')
    return '\n'.join(lines)


def render_gap(report: GapReport, label: str = 'δ') -> str:
    if report.delta is None:
        return f'{label}: решение единственно'
    return f'{label} = {_num(report.delta)} ({"оптимум единственный" if report.unique_flag else "оптимум не единственный"})'


def render_lemmas(report: LemmaReport) -> str:
    lines = []
    for name in ('wrong_belief', 'subgraph_belief', 'no_light_edges'):
        tally = getattr(report, name)
        if not tally.checked:
            lines.append(f'{name}: нет экземпляров с событием')
        else:
            lines.append(f'{name}: проверено {tally.checked}, нарушений {tally.violations}')
    return '\n'.join(lines)
