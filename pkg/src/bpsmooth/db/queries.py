import math

import sqlalchemy as sq
from sqlalchemy import Engine
from sqlalchemy.orm import Session
from bpsmooth.db.models import Base, ExperimentRun, TrialRow
from bpsmooth.experiments.runner import ExperimentResult


def create_tables(engine: Engine) -> None:
    """
    Создает таблицы результатов, если их нет
    """
    Base.metadata.create_all(engine)


def _json_value(x):
    """
    JSON не допускает inf и nan
    """
    if isinstance(x, dict):
        return {str(k): _json_value(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_json_value(v) for v in x]
    if isinstance(x, float) and not math.isfinite(x):
        return str(x)
    return x


def save_run(session: Session, result: ExperimentResult) -> int:
    """
    Сохраняет запуск и все строки таблицы испытаний.
    Возвращает id запуска
    """
    config = result.config
    run = ExperimentRun(
        kind=config.kind,
        family=config.family,
        seed=str(config.seed),
        trials=config.trials,
        config=_json_value(config.model_dump(mode='json')),
        summary=_json_value({
            **result.summary,
            'checks': [
                {'name': c.name, 'passed': c.passed, 'observed': c.observed, 'bound': c.bound}
                for c in result.checks
            ],
        }),
        passed=result.passed,
    )
    session.add(run)
    session.flush()
    rows = [
        {
            'run_id': run.id,
            'trial': r.trial,
            'seed': r.seed,
            'n': r.n,
            'm': r.m,
            'phi': r.phi,
            'family': r.family,
            'observable_kind': r.observable_kind,
            'value': r.value if math.isfinite(r.value) else None,
            'censored': r.censored,
            'wall_ms': r.wall_ms,
        }
        for r in result.table.records()
    ]
    if rows:
        session.execute(sq.insert(TrialRow), rows)
    session.commit()
    return run.id


def get_runs(session: Session,
             kind: str | None = None,
             limit: int | None = None
             ) -> list[ExperimentRun]:
    """
    Последние запуски, новые первыми
    """
    stmt = sq.select(ExperimentRun).order_by(ExperimentRun.id.desc())
    if kind:
        stmt = stmt.where(ExperimentRun.kind == kind)
    if limit:
        stmt = stmt.limit(limit)
    return list(session.execute(stmt).scalars().all())


def get_trials(session: Session,
               run_id: int,
               observable_kind: str | None = None
               ) -> list[TrialRow]:
    stmt = (
        sq.select(TrialRow)
        .where(TrialRow.run_id == run_id)
        .order_by(TrialRow.trial, TrialRow.id)
    )
    if observable_kind:
        stmt = stmt.where(TrialRow.observable_kind == observable_kind)
    return list(session.execute(stmt).scalars().all())
