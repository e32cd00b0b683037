from .messages import BeliefSet, MessageState, beliefs, init_messages, step
from .decode import Estimate, estimate_matching
from .run import BatchRunResult, RunResult, decode_at, decode_path, run, run_batch
from .trace import write_trace
