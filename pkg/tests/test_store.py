import math

import pytest
from sqlalchemy import create_engine
from sqlalchemy.orm import Session

from bpsmooth.db.queries import create_tables, get_runs, get_trials, save_run
from bpsmooth.experiments.config import ExperimentConfig
from bpsmooth.experiments.records import TrialTable
from bpsmooth.experiments.runner import CheckResult, ExperimentResult


@pytest.fixture
def session():
    engine = create_engine('sqlite://')
    create_tables(engine)
    with Session(engine) as s:
        yield s


@pytest.fixture
def result(config_file):
    config = ExperimentConfig.from_file(config_file(
        kind='flow_delta_tail', family='random_flow', n_nodes=3, max_capacity=1, edge_probability=0.5,
        trials=2, eps_grid='0.01',
    ))
    table = TrialTable.build(trial=[0, 0, 1, 1], seed=[0, 0, 6, 6], n=3, m=[2, 2, 3, 3], phi=1.0,
                             family='random_flow', observable_kind=['delta', 'Delta', 'delta', 'Delta'],
                             value=[0.2, 0.3, math.inf, math.inf])
    checks = (CheckResult('Delta_ge_delta', True, 0.0, 0.0), CheckResult('flow isolation eps=0.01', None, math.nan, 0.05))
    return ExperimentResult(config, table, checks, {'trials': 2, 'unique_optimum': 1})


def test_save_and_load_run(session, result):
    run_id = save_run(session, result)
    runs = get_runs(session)
    assert [r.id for r in runs] == [run_id]
    assert runs[0].passed
    assert runs[0].kind == 'flow_delta_tail'
    assert runs[0].summary['checks'][1]['observed'] == 'nan'
    assert runs[0].config['eps_grid'] == [0.01]


def test_absent_values_stored_as_null(session, result):
    run_id = save_run(session, result)
    rows = get_trials(session, run_id, observable_kind='Delta')
    assert [r.trial for r in rows] == [0, 1]
    assert rows[0].value == pytest.approx(0.3)
    assert rows[1].value is None


def test_runs_newest_first(session, result):
    first = save_run(session, result)
    second = save_run(session, result)
    assert [r.id for r in get_runs(session, kind='flow_delta_tail')] == [second, first]
    assert [r.id for r in get_runs(session, limit=1)] == [second]
    assert get_runs(session, kind='tau_tail') == []
