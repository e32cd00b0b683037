from .config import ExperimentConfig
from .records import TrialRecord, TrialTable, read_csv, write_csv
from .survival import (LowerTail, SurvivalCurve, TailFit, estimate_lower_tail, estimate_survival,
                       fit_tail_exponent, growth_ratio)
from .lemmas import LemmaReport, LemmaTally
from .runner import CheckResult, ExperimentResult, evaluate_checks, lemma_checks, run_experiment
