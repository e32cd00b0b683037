import csv
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Iterator, NamedTuple

import numpy as np

CSV_COLUMNS = ('trial', 'seed', 'n', 'm', 'phi', 'family', 'observable_kind', 'value', 'censored', 'wall_ms')


class TrialRecord(NamedTuple):
    trial: int
    seed: int
    n: int
    m: int
    phi: float
    family: str
    observable_kind: str
    value: float
    censored: bool
    wall_ms: float


def _number(x: float) -> str:
    return format(float(x), '.17g')


@dataclass(frozen=True, eq=False)
class TrialTable:
    """
    Записи испытаний по столбцам. Испытание может давать
    несколько строк с разными observable_kind
    """
    trial: np.ndarray
    seed: np.ndarray
    n: np.ndarray
    m: np.ndarray
    phi: np.ndarray
    family: np.ndarray
    observable_kind: np.ndarray
    value: np.ndarray
    censored: np.ndarray
    wall_ms: np.ndarray

    @classmethod
    def build(cls,
              trial,
              seed,
              n,
              m,
              phi: float,
              family: str,
              observable_kind,
              value,
              censored=False,
              wall_ms=0.0
              ) -> 'TrialTable':
        trial = np.asarray(trial, dtype=np.int64)
        size = trial.size

        def column(x, dtype):
            return np.broadcast_to(np.asarray(x, dtype=dtype), (size,)).copy()

        return cls(
            trial=trial,
            seed=column(seed, np.int64),
            n=column(n, np.int64),
            m=column(m, np.int64),
            phi=column(phi, float),
            family=column(family, object),
            observable_kind=column(observable_kind, object),
            value=column(value, float),
            censored=column(censored, bool),
            wall_ms=column(wall_ms, float),
        )

    @classmethod
    def empty(cls) -> 'TrialTable':
        return cls.build([], 0, 0, 0, 1.0, '', '', [])

    @classmethod
    def concat(cls, tables: Iterable['TrialTable']) -> 'TrialTable':
        tables = list(tables)
        if not tables:
            return cls.empty()
        return cls(**{
            name: np.concatenate([getattr(t, name) for t in tables])
            for name in CSV_COLUMNS
        })

    @classmethod
    def from_records(cls, records: Iterable[TrialRecord]) -> 'TrialTable':
        records = list(records)
        if not records:
            return cls.empty()
        columns = list(zip(*records))
        dtypes = (np.int64, np.int64, np.int64, np.int64, float, object, object, float, bool, float)
        return cls(**{
            name: np.array(col, dtype=dtype)
            for name, col, dtype in zip(CSV_COLUMNS, columns, dtypes)
        })

    def __len__(self) -> int:
        return self.trial.size

    def take(self, index) -> 'TrialTable':
        return TrialTable(**{name: getattr(self, name)[index] for name in CSV_COLUMNS})

    def sorted(self) -> 'TrialTable':
        """
        Устойчивая сортировка по номеру испытания:
        порядок строк не зависит от расписания чанков
        """
        return self.take(np.argsort(self.trial, kind='stable'))

    def select(self, observable_kind: str) -> 'TrialTable':
        return self.take(self.observable_kind == observable_kind)

    def records(self) -> Iterator[TrialRecord]:
        for k in range(len(self)):
            yield TrialRecord(
                int(self.trial[k]),
                int(self.seed[k]),
                int(self.n[k]),
                int(self.m[k]),
                float(self.phi[k]),
                str(self.family[k]),
                str(self.observable_kind[k]),
                float(self.value[k]),
                bool(self.censored[k]),
                float(self.wall_ms[k]),
            )

    def csv_rows(self) -> Iterator[list[str]]:
        for record in self.records():
            yield [
                str(record.trial),
                str(record.seed),
                str(record.n),
                str(record.m),
                _number(record.phi),
                record.family,
                record.observable_kind,
                _number(record.value),
                '1' if record.censored else '0',
                _number(record.wall_ms),
            ]


def write_csv(table: TrialTable, path: str | Path) -> Path:
    """
    Заголовок обязателен, разделитель строк LF,
    числа с 17 значащими цифрами
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open('w', encoding='utf-8', newline='') as fh:
        writer = csv.writer(fh, lineterminator='\n')
        writer.writerow(CSV_COLUMNS)
        writer.writerows(table.csv_rows())
    return path


def read_csv(path: str | Path) -> TrialTable:
    with Path(path).open(encoding='utf-8', newline='') as fh:
        reader = csv.DictReader(fh)
        records = [
            TrialRecord(
                int(row['trial']),
                int(row['seed']),
                int(row['n']),
                int(row['m']),
                float(row['phi']),
                row['family'],
                row['observable_kind'],
                float(row['value']),
                row['censored'] == '1',
                float(row['wall_ms']),
            )
            for row in reader
        ]
    return TrialTable.from_records(records)
