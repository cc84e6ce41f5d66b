"""
The four command-line commands. Each returns its exit status:
0 success, 2 invalid input, 3 unreadable input or unwritable output, 4 improper
completion or otherwise unsound, 5 deadlock, 6 bound or step limit exceeded.
"""
import json
import logging
import sys

from algorithm.deciders import DeterministicDecider, SeededDecider, load_script
from analyzer.explorer import collect_traces, explore, graph_to_dot, graph_to_json
from analyzer.soundness import SoundnessReport, check_soundness
from cli.config import Command, RunConfig
from dsl.dot import export_dot
from dsl.parser import parse
from simulator.errors import (
    BadChoiceError, DslError, OrJoinBoundError, ScriptShortError, StepLimitError, WorkflowError,
)
from simulator.simulator import run_to_completion
from simulator.state import CaseStatus

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_UNREADABLE = 3
EXIT_IMPROPER = 4
EXIT_DEADLOCK = 5
EXIT_BOUND = 6

STATUS_EXITS = {
    CaseStatus.COMPLETED: EXIT_OK,
    CaseStatus.COMPLETED_IMPROPERLY: EXIT_IMPROPER,
    CaseStatus.DEADLOCKED: EXIT_DEADLOCK,
}


def _write(path, default, text, err):
    """Writes text to path, or to default when path is None. Returns an exit status on failure."""
    if path is None:
        default.write(text)
        return None
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as f:
            f.write(text)
    except OSError as error:
        print(f"{path}: cannot write: {error}", file=err)
        return EXIT_UNREADABLE
    return None


def _load(cfg: RunConfig, err):
    """Returns (definition, None) or (None, exit status) after reporting to err."""
    try:
        with open(cfg.input_path, "r", encoding="utf-8") as f:
            text = f.read()
    except (OSError, UnicodeDecodeError) as error:
        print(f"{cfg.input_path}: cannot read: {error}", file=err)
        return None, EXIT_UNREADABLE

    try:
        return parse(text), None
    except DslError as error:
        for parse_error in error.errors:
            print(f"{cfg.input_path}:{parse_error.span.line}:{parse_error.span.column}: error: "
                  f"expected {parse_error.expected}, found {parse_error.found}", file=err)
        if error.report is not None:
            for violation in error.report.violations:
                print(f"{cfg.input_path}: {violation}", file=err)
        return None, EXIT_INVALID


def cmd_validate(cfg: RunConfig, out=None, err=None):
    out, err = out or sys.stdout, err or sys.stderr
    definition, status = _load(cfg, err)
    if definition is None:
        return status
    summary = f"OK: process {definition.name}, {len(definition.nodes)} nodes, {len(definition.edges)} edges\n"
    return _write(cfg.output_path, out, summary, err) or EXIT_OK


def _decider(cfg: RunConfig):
    if cfg.decider_script is not None:
        return load_script(cfg.decider_script), None
    if cfg.seed is not None:
        return SeededDecider(cfg.seed), cfg.seed
    return DeterministicDecider(), None


def cmd_run(cfg: RunConfig, out=None, err=None):
    out, err = out or sys.stdout, err or sys.stderr
    definition, status = _load(cfg, err)
    if definition is None:
        return status

    try:
        decider, scheduler_seed = _decider(cfg)
    except (OSError, UnicodeDecodeError) as error:
        print(f"{cfg.decider_script}: cannot read: {error}", file=err)
        return EXIT_UNREADABLE
    except WorkflowError as error:
        print(f"{cfg.decider_script}: {error}", file=err)
        return EXIT_INVALID

    log, exit_status = None, EXIT_OK
    try:
        state, log = run_to_completion(definition, cfg.case_id, decider, scheduler_seed,
                                       cfg.or_join_bound, cfg.step_limit)
        exit_status = STATUS_EXITS[state.status]
    except (StepLimitError, OrJoinBoundError) as error:
        print(f"{cfg.input_path}: {error}", file=err)
        log, exit_status = error.log, EXIT_BOUND
    except (ScriptShortError, BadChoiceError) as error:
        print(f"{cfg.decider_script}: {error}", file=err)
        log, exit_status = error.log, EXIT_INVALID

    if log is not None:
        return _write(cfg.output_path, out, log.to_jsonl(), err) or exit_status
    return exit_status


def _explore_document(definition, report: SoundnessReport, states=None, transitions=None,
                      traces=0, traces_truncated=True):
    return {
        "process": definition.name,
        "states": states,
        "transitions": transitions,
        "traces": traces,
        "traces_truncated": traces_truncated,
        "soundness": report.to_json(),
    }


def cmd_explore(cfg: RunConfig, out=None, err=None):
    out, err = out or sys.stdout, err or sys.stderr
    definition, status = _load(cfg, err)
    if definition is None:
        return status

    try:
        graph = explore(definition, cfg.max_states, cfg.or_join_bound)
    except OrJoinBoundError as error:
        print(f"{cfg.input_path}: {error}", file=err)
        # no graph to count; the report says only that exploration stopped
        document = _explore_document(definition, SoundnessReport(truncated=True))
        return _write(cfg.output_path, out, json.dumps(document, indent=2) + "\n", err) or EXIT_BOUND

    report = check_soundness(definition, graph=graph)
    traces, traces_truncated = collect_traces(graph, cfg.max_traces)
    document = _explore_document(definition, report, len(graph.states), len(graph.transitions),
                                 len(traces), traces_truncated)
    outputs = [(cfg.output_path, json.dumps(document, indent=2) + "\n")]
    if cfg.graph_json_path is not None:
        outputs.append((cfg.graph_json_path, json.dumps(graph_to_json(definition, graph), indent=2) + "\n"))
    if cfg.graph_dot_path is not None:
        outputs.append((cfg.graph_dot_path, graph_to_dot(definition, graph)))
    for path, text in outputs:
        failed = _write(path, out, text, err)
        if failed is not None:
            return failed

    if report.truncated:
        return EXIT_BOUND
    if report.deadlock_states:
        return EXIT_DEADLOCK
    return EXIT_OK if report.sound else EXIT_IMPROPER


def cmd_dot(cfg: RunConfig, out=None, err=None):
    out, err = out or sys.stdout, err or sys.stderr
    definition, status = _load(cfg, err)
    if definition is None:
        return status
    return _write(cfg.output_path, out, export_dot(definition), err) or EXIT_OK


COMMANDS = {
    Command.VALIDATE: cmd_validate,
    Command.RUN: cmd_run,
    Command.EXPLORE: cmd_explore,
    Command.DOT: cmd_dot,
}


def dispatch(cfg: RunConfig, out=None, err=None):
    logger.info("%s %s", cfg.command.value, cfg.input_path)
    return COMMANDS[cfg.command](cfg, out, err)
