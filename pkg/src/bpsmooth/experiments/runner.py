"""
Монте-Карло харнесс: испытания режутся на чанки, каждый чанк
сэмплирует свою часть потока Philox, считает наблюдаемые величины
и возвращает таблицу записей. Итог не зависит от расписания чанков
"""
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.optimize import linear_sum_assignment

from bpsmooth.bp.run import run_batch
from bpsmooth.core.config import settings
from bpsmooth.core.errors import TailFitError
from bpsmooth.core.log_context import log_context
from bpsmooth.core.logging import configure_worker, get_logger
from bpsmooth.experiments import bounds
from bpsmooth.experiments.config import ExperimentConfig
from bpsmooth.experiments.lemmas import (LemmaReport, light_edge_values, subgraph_belief_values,
                                         wrong_belief_values)
from bpsmooth.experiments.records import TrialTable, write_csv
from bpsmooth.experiments.survival import (SurvivalCurve, binomial_sigma, estimate_lower_tail,
                                           estimate_survival, fit_tail_exponent, growth_ratio)
from bpsmooth.generators.events import event_hits, event_phi_slack, event_slack
from bpsmooth.generators.families import EventK22, GadgetCopies, SmoothedKnn, UniformK22
from bpsmooth.generators.sampling import (dense_weights, derived_seed, flow_from_uniforms, sample_weights,
                                          uniform_stream)
from bpsmooth.oracles.flow import cheapest_residual_cycle, flow_delta_enumeration, min_cost_flow
from bpsmooth.oracles.matching import batch_matching_delta, batch_decrease_rate

logger = get_logger(__name__)

DELTA_TOLERANCE = 1e-9
RATE_TOLERANCE = 1e-12
BOUND_WINDOW = 4


@dataclass(frozen=True)
class CheckResult:
    """
    passed is None - проверка пропущена (недостаточно данных)
    """
    name: str
    passed: bool | None
    observed: float
    bound: float
    sigma: float = 0.0
    detail: str = ''


@dataclass(frozen=True, eq=False)
class ExperimentResult:
    config: ExperimentConfig
    table: TrialTable
    checks: tuple[CheckResult, ...]
    summary: dict = field(default_factory=dict)
    csv_path: Path | None = None

    @property
    def passed(self) -> bool:
        return all(check.passed is not False for check in self.checks)


def chunks(trials: int, size: int) -> list[tuple[int, int]]:
    return [(start, min(size, trials - start)) for start in range(0, trials, size)]


def oracle_assignments(dense: np.ndarray, mask: np.ndarray) -> np.ndarray:
    """
    Правый партнер каждой левой вершины в паросочетании
    максимального веса, -1 для свободных
    """
    count, n_left, _ = dense.shape
    out = np.full((count, n_left), -1, dtype=np.int64)
    for k in range(count):
        weights = np.where(mask, dense[k], 0.0)
        rows, cols = linear_sum_assignment(weights, maximize=True)
        keep = weights[rows, cols] > 0
        out[k, rows[keep]] = cols[keep]
    return out


def _bipartite_rows(config: ExperimentConfig, family, start: int, count: int) -> TrialTable:
    weights = sample_weights(family, config.seed, start, count)
    dense, mask = dense_weights(family, weights)
    trial = np.arange(start, start + count)
    common = dict(
        trial=trial,
        seed=derived_seed(family.draws, trial),
        n=family.n_left + family.n_right,
        m=family.m,
        phi=float(family.phi),
        family=family.kind,
    )

    match config.kind:
        case 'tau_tail':
            oracle = oracle_assignments(dense, mask) if config.use_oracle else None
            result = run_batch(dense, mask, config.t_max, config.window, oracle, config.normalized)
            return TrialTable.build(observable_kind='tau', value=result.tau, censored=~result.converged, **common)
        case 'delta_tail':
            return TrialTable.build(observable_kind='delta', value=batch_matching_delta(dense, mask), **common)
        case 'rate_check':
            return TrialTable.concat([
                TrialTable.build(observable_kind='c', value=batch_decrease_rate(dense, mask), **common),
                TrialTable.build(observable_kind='delta', value=batch_matching_delta(dense, mask), **common),
            ])
        case 'event_freq':
            if isinstance(family, (UniformK22, EventK22)):
                slack = event_slack(weights)
            else:
                slack = event_phi_slack(weights, family.phi)
            hits = event_hits(slack, config.eps)
            return TrialTable.build(observable_kind='event', value=hits.astype(float), **common)
        case 'lemma_checks':
            eps = config.eps or math.inf
            values = {
                'wrong_belief': wrong_belief_values(family, dense, mask, eps, config.t_max, config.normalized),
                'subgraph_belief': subgraph_belief_values(family, dense, mask, eps, family.phi, config.t_max,
                                                          config.normalized),
                'no_light_edges': light_edge_values(family, weights, config.k_max),
            }
            return TrialTable.concat(
                TrialTable.build(observable_kind=name, value=value, **common) for name, value in values.items()
            )
    raise ValueError(f'unsupported experiment kind {config.kind}')


def _flow_rows(config: ExperimentConfig, family, start: int, count: int) -> TrialTable:
    u = uniform_stream(config.seed, start, count, family.draws)
    tables = []
    for k in range(count):
        network = flow_from_uniforms(family, u[k])
        report = flow_delta_enumeration(network)
        cycle = cheapest_residual_cycle(network, min_cost_flow(network))
        trial = start + k
        common = dict(
            trial=[trial, trial],
            seed=derived_seed(family.draws, trial),
            n=family.n_nodes,
            m=network.m,
            phi=float(family.phi),
            family=family.kind,
        )
        values = [
            math.inf if report.delta is None else report.delta,
            math.inf if cycle is None else cycle,
        ]
        tables.append(TrialTable.build(observable_kind=['delta', 'Delta'], value=values, **common))
    return TrialTable.concat(tables)


def run_chunk(config: ExperimentConfig, start: int, count: int) -> TrialTable:
    family = config.family_spec()
    with log_context(kind=config.kind, family=config.family, seed=config.seed, chunk=start):
        began = time.perf_counter()
        if config.kind == 'flow_delta_tail':
            table = _flow_rows(config, family, start, count)
        else:
            table = _bipartite_rows(config, family, start, count)
        elapsed_ms = (time.perf_counter() - began) * 1000.0
        table.wall_ms[:] = elapsed_ms / count
        logger.info('chunk_done', trials=count, elapsed_ms=round(elapsed_ms, 3))
    return table


def growth_config(config: ExperimentConfig, n: int) -> ExperimentConfig:
    """
    tau_tail для одного размера из n_grid
    """
    return config.model_copy(update={'kind': 'tau_tail', 'n': n, 'n_grid': ()})


def collect(config: ExperimentConfig) -> TrialTable:
    if config.kind == 'tau_growth':
        return TrialTable.concat(collect(growth_config(config, n)) for n in config.n_grid)
    size = config.batch_size or settings.batch_size
    workers = config.workers or settings.workers
    parts = chunks(config.trials, size)
    if workers > 1 and len(parts) > 1:
        with ProcessPoolExecutor(
            max_workers=workers,
            initializer=configure_worker,
            initargs=(settings.debug, settings.log_level),
        ) as pool:
            tables = list(pool.map(run_chunk, [config] * len(parts), *zip(*parts)))
    else:
        tables = [run_chunk(config, start, count) for start, count in parts]
    return TrialTable.concat(tables).sorted()


def _upper(name: str, observed: float, bound: float, trials: int, detail: str = '') -> CheckResult:
    sigma = float(max(binomial_sigma(observed, trials), binomial_sigma(min(bound, 1.0), trials)))
    return CheckResult(name, bool(observed <= bound + 3 * sigma), observed, bound, sigma, detail)


def _lower(name: str, observed: float, bound: float, trials: int, detail: str = '') -> CheckResult:
    sigma = float(max(binomial_sigma(observed, trials), binomial_sigma(bound, trials)))
    return CheckResult(name, bool(observed >= bound - 3 * sigma), observed, bound, sigma, detail)


def _tail_lower_bound(family, t: int) -> float:
    if isinstance(family, UniformK22):
        return bounds.k22_tail_lower(t)
    if isinstance(family, GadgetCopies):
        return bounds.gadget_tail_lower(t, family.n)
    if isinstance(family, SmoothedKnn):
        return bounds.smoothed_tail_lower(t, family.n, family.phi)
    return math.nan


def _tau_checks(config: ExperimentConfig, table: TrialTable, summary: dict) -> list[CheckResult]:
    family = config.family_spec()
    grid = [t for t in config.survival_grid if t <= config.t_max]
    curve = estimate_survival(table.value.astype(np.int64), table.censored, grid, config.t_max)
    summary['censor_rate'] = curve.censor_rate
    summary['survival'] = {int(t): float(p) for t, p in zip(curve.grid, curve.survival)}

    checks = []
    try:
        fit = fit_tail_exponent(curve, config.fit_range)
    except TailFitError as exc:
        checks.append(CheckResult('tail_slope', None, math.nan, math.nan, detail=str(exc)))
        checks.append(CheckResult('tail_spread', None, math.nan, 4.0, detail=str(exc)))
    else:
        low, high = config.slope_range
        summary.update(slope=fit.slope, constant=fit.constant, r_squared=fit.r_squared, power_law=fit.power_law)
        checks.append(CheckResult('tail_slope', low <= fit.slope <= high, fit.slope, high,
                                  detail=f'slope in [{low}, {high}] over {fit.points} points'))
        checks.append(CheckResult('tail_spread', fit.spread <= 4.0, fit.spread, 4.0))

    if config.window < BOUND_WINDOW:
        if isinstance(family, (UniformK22, GadgetCopies, SmoothedKnn)):
            checks.append(CheckResult('tail_lower_bound', None, math.nan, math.nan,
                                      detail=f'window {config.window} < {BOUND_WINDOW}, bound does not apply'))
        return checks

    lower = []
    for t, p in zip(curve.grid.tolist(), curve.survival.tolist()):
        bound = _tail_lower_bound(family, t)
        if not math.isnan(bound):
            lower.append(_lower('tail_lower_bound', p, bound, curve.trials, detail=f't = {t}'))
    if lower:
        checks.append(min(lower, key=lambda c: c.observed - c.bound + 3 * c.sigma))
    return checks


def _growth_point(small: SurvivalCurve, large: SurvivalCurve, min_survivors: int) -> int | None:
    """
    Наибольшее t сетки, где в обоих хвостах хватает выживших
    """
    enough = (small.at_risk >= min_survivors) & (large.at_risk >= min_survivors)
    return int(small.grid[enough][-1]) if enough.any() else None


def _growth_checks(config: ExperimentConfig, table: TrialTable, summary: dict) -> list[CheckResult]:
    """
    P(τ ≥ t) растет пропорционально n: отношение хвостов соседних
    размеров n_grid должно быть в пределах множителя 2 от отношения размеров
    """
    grid = {t for t in config.survival_grid if t <= config.t_max}
    if config.growth_t is not None:
        grid.add(config.growth_t)
    grid = sorted(grid)

    curves = {}
    for n in config.n_grid:
        family = config.family_spec(n)
        rows = table.take(table.n == family.n_left + family.n_right)
        curves[n] = estimate_survival(rows.value.astype(np.int64), rows.censored, grid, config.t_max)
    summary['survival'] = {
        int(n): {int(t): float(p) for t, p in zip(curve.grid, curve.survival)} for n, curve in curves.items()
    }

    checks = []
    for small, large in zip(config.n_grid, config.n_grid[1:]):
        expected = large / small
        name = f'growth n={small}->{large}'
        t = config.growth_t or _growth_point(curves[small], curves[large], config.min_survivors)
        ratio = None if t is None else growth_ratio(curves[small], curves[large], t, config.min_survivors)
        if ratio is None:
            checks.append(CheckResult(name, None, math.nan, expected,
                                      detail=f'fewer than {config.min_survivors} surviving trials'))
            continue
        checks.append(CheckResult(name, expected / 2 <= ratio <= expected * 2, ratio, expected,
                                  detail=f't = {t}, within factor 2'))
    return checks


def evaluate_checks(config: ExperimentConfig, table: TrialTable) -> tuple[tuple[CheckResult, ...], dict]:
    """
    Проверки для вида эксперимента и сводка для отчета
    """
    summary = {'trials': config.trials, 'rows': len(table)}
    checks = []
    family = config.family_spec()

    match config.kind:
        case 'tau_tail':
            checks = _tau_checks(config, table, summary)
        case 'tau_growth':
            checks = _growth_checks(config, table, summary)
        case 'delta_tail':
            tail = estimate_lower_tail(table.value, config.eps_grid)
            for eps, p in zip(config.eps_grid, tail.probability.tolist()):
                bound = bounds.isolation_bound(eps, family.phi, family.m)
                checks.append(_upper(f'isolation eps={eps:g}', p, bound, tail.trials))
        case 'flow_delta_tail':
            delta = table.select('delta').value
            cycle = table.select('Delta').value
            unique = np.isfinite(delta) & (delta > 0)
            broken = int((unique & (cycle < delta - DELTA_TOLERANCE)).sum())
            summary['unique_optimum'] = int(unique.sum())
            checks.append(CheckResult('Delta_ge_delta', broken == 0, float(broken), 0.0,
                                      detail=f'{int(unique.sum())} unique-optimum trials'))
            mean_m = float(table.select('Delta').m.mean())
            tail = estimate_lower_tail(cycle, config.eps_grid)
            for eps, p in zip(config.eps_grid, tail.probability.tolist()):
                bound = bounds.isolation_bound(eps, family.phi, mean_m)
                checks.append(_upper(f'flow isolation eps={eps:g}', p, bound, tail.trials))
        case 'event_freq':
            p = float(table.value.mean())
            trials = len(table)
            if isinstance(family, UniformK22):
                expected = bounds.event_e_probability(config.eps)
                sigma = float(binomial_sigma(expected, trials))
                checks.append(CheckResult('event_frequency', abs(p - expected) <= 4 * sigma, p, expected, sigma,
                                          detail='two-sided, 4 sigma'))
            elif isinstance(family, EventK22):
                checks.append(CheckResult('event_frequency', p == 1.0, p, 1.0))
            else:
                expected = bounds.event_phi_probability(config.eps, family.phi)
                sigma = float(binomial_sigma(expected, trials))
                checks.append(CheckResult('event_frequency', p >= expected - 4 * sigma, p, expected, sigma,
                                          detail='one-sided, 4 sigma'))
            summary['hits'] = int(table.value.sum())
        case 'rate_check':
            c = table.select('c').value
            delta = table.select('delta').value
            n_side = max(family.n_left, family.n_right)
            n_total = family.n_left + family.n_right
            with np.errstate(invalid='ignore'):
                side_ok = c >= delta / n_side - RATE_TOLERANCE
                total_ok = c >= delta / n_total - RATE_TOLERANCE
            summary.update(n_side_rate=float(side_ok.mean()), n_total_rate=float(total_ok.mean()))
            ok = side_ok | total_ok
            checks.append(CheckResult('c_ge_delta_over_n', bool(ok.all()), float(ok.mean()), 1.0,
                                      detail=f'n_side {side_ok.mean():.4f}, n_total {total_ok.mean():.4f}'))
        case 'lemma_checks':
            report = lemma_report(table)
            for name in ('wrong_belief', 'subgraph_belief', 'no_light_edges'):
                tally = getattr(report, name)
                summary[name] = {'checked': tally.checked, 'violations': tally.violations}
                if tally.checked:
                    checks.append(CheckResult(name, tally.passed, float(tally.violations), 0.0,
                                              detail=f'{tally.checked} instances'))
    return tuple(checks), summary


def lemma_report(table: TrialTable) -> LemmaReport:
    return LemmaReport.from_values({
        name: table.select(name).value for name in ('wrong_belief', 'subgraph_belief', 'no_light_edges')
    })


def run_experiment(config: ExperimentConfig) -> ExperimentResult:
    with log_context(kind=config.kind, family=config.family, seed=config.seed):
        logger.info('experiment_started', trials=config.trials)
        began = time.perf_counter()
        table = collect(config)
        checks, summary = evaluate_checks(config, table)
        csv_path = write_csv(table, config.out) if config.out is not None else None
        result = ExperimentResult(config, table, checks, summary, csv_path)
        logger.info(
            'experiment_finished',
            passed=result.passed,
            rows=len(table),
            elapsed_s=round(time.perf_counter() - began, 3),
        )
        for check in checks:
            if check.passed is False:
                logger.warning('check_failed', check=check.name, observed=check.observed, bound=check.bound)
    return result


def lemma_checks(config: ExperimentConfig) -> LemmaReport:
    if config.kind != 'lemma_checks':
        config = config.model_copy(update={'kind': 'lemma_checks'})
    return lemma_report(collect(config))
