from .run import register as run_register
from .solve import register as solve_register
from .lemmas import register as lemmas_register

commands = (run_register, solve_register, lemmas_register)
