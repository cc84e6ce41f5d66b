import logging
import sys
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Optional

from simulator.settings import (
    DEFAULT_CASE_ID, DEFAULT_MAX_STATES, DEFAULT_MAX_TRACES, DEFAULT_OR_JOIN_BOUND, DEFAULT_STEP_LIMIT, Settings,
)

SEED_MIN = -(2 ** 63)
SEED_MAX = 2 ** 64 - 1


class Command(str, Enum):
    VALIDATE = "validate"
    RUN = "run"
    EXPLORE = "explore"
    DOT = "dot"


@dataclass(frozen=True)
class RunConfig:
    """Everything one command-line invocation needs."""
    input_path: Path
    command: Command
    seed: Optional[int] = None
    decider_script: Optional[Path] = None
    max_states: int = DEFAULT_MAX_STATES
    or_join_bound: int = DEFAULT_OR_JOIN_BOUND
    step_limit: int = DEFAULT_STEP_LIMIT
    max_traces: int = DEFAULT_MAX_TRACES
    case_id: str = DEFAULT_CASE_ID
    output_path: Optional[Path] = None
    graph_json_path: Optional[Path] = None
    graph_dot_path: Optional[Path] = None

    def __post_init__(self):
        if self.seed is not None and self.decider_script is not None:
            raise ValueError("--seed and --script are mutually exclusive")
        if self.seed is not None and not SEED_MIN <= self.seed <= SEED_MAX:
            raise ValueError(f"seed {self.seed} does not fit in 64 bits")
        for name in ("max_states", "or_join_bound", "step_limit", "max_traces"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name.replace('_', '-')} must be a positive integer")
        if not self.case_id:
            raise ValueError("case id must be non-empty")

    @classmethod
    def from_args(cls, args, settings: Settings):
        """Command-line flags win over settings.json values."""

        def pick(flag, setting):
            return flag if flag is not None else setting

        def path(value):
            return Path(value) if value is not None else None

        return cls(
            input_path=Path(args.file),
            command=Command(args.command),
            seed=args.seed,
            decider_script=path(args.script),
            max_states=pick(args.max_states, settings.max_states),
            or_join_bound=pick(args.or_join_bound, settings.or_join_bound),
            step_limit=pick(args.step_limit, settings.step_limit),
            max_traces=pick(args.max_traces, settings.max_traces),
            case_id=pick(args.case_id, settings.case_id),
            output_path=path(args.out),
            graph_json_path=path(args.graph_json),
            graph_dot_path=path(args.graph_dot),
        )


def configure_logging(level_name, verbosity=0):
    """Diagnostics go to standard error; standard output carries only command results."""
    level = getattr(logging, str(level_name).upper(), logging.WARNING)
    if verbosity >= 2:
        level = logging.DEBUG
    elif verbosity == 1:
        level = min(level, logging.INFO)
    logging.basicConfig(level=level, stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s")
