import sqlalchemy as sq
from sqlalchemy.orm import declarative_base, relationship
from sqlalchemy.sql import func

Base = declarative_base()


class ExperimentRun(Base):
    __tablename__ = 'experiment_runs'
    id = sq.Column(sq.Integer, primary_key=True)
    kind = sq.Column(sq.String(length=32), nullable=False)
    family = sq.Column(sq.String(length=32), nullable=False)
    seed = sq.Column(sq.String(length=24), nullable=False)
    trials = sq.Column(sq.Integer, nullable=False)
    config = sq.Column(sq.JSON, nullable=False)
    summary = sq.Column(sq.JSON, nullable=False)
    passed = sq.Column(sq.Boolean, nullable=False)
    created_at = sq.Column(sq.DateTime(timezone=True), server_default=func.now(), nullable=False)
    rows = relationship('TrialRow', back_populates='run', cascade='all, delete-orphan')

    def __str__(self):
        return f'{self.kind} | {self.family} | seed {self.seed} | {self.trials} испытаний'


class TrialRow(Base):
    __tablename__ = 'trial_rows'
    id = sq.Column(sq.Integer, primary_key=True)
    run_id = sq.Column(
        sq.Integer,
        sq.ForeignKey('experiment_runs.id', ondelete='CASCADE'),
        nullable=False,
    )
    trial = sq.Column(sq.Integer, nullable=False)
    seed = sq.Column(sq.BigInteger, nullable=False)
    n = sq.Column(sq.Integer, nullable=False)
    m = sq.Column(sq.Integer, nullable=False)
    phi = sq.Column(sq.Float, nullable=False)
    family = sq.Column(sq.String(length=32), nullable=False)
    observable_kind = sq.Column(sq.String(length=16), nullable=False)
    value = sq.Column(sq.Float, nullable=True)
    censored = sq.Column(sq.Boolean, nullable=False, server_default=sq.false())
    wall_ms = sq.Column(sq.Float, nullable=False)
    run = relationship('ExperimentRun', back_populates='rows')

    __table_args__ = (
        sq.Index('ix_trial_rows_run_trial', 'run_id', 'trial'),
    )

    def __str__(self):
        return f'Испытание {self.trial} | {self.observable_kind} = {self.value}'
