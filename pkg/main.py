import argparse
import sys

from cli.commands import EXIT_INVALID, dispatch
from cli.config import Command, RunConfig, configure_logging
from simulator.settings import load_settings


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("file", help="process definition (.wfp)")
    decision = common.add_mutually_exclusive_group()
    decision.add_argument("--seed", type=int, help="seed for scheduling and branch decisions")
    decision.add_argument("--script", help="file of scripted branch decisions, one per line")
    common.add_argument("--max-states", type=int, help="exploration state cap")
    common.add_argument("--or-join-bound", type=int, help="per-check OR-join search bound")
    common.add_argument("--step-limit", type=int, help="firings allowed per case")
    common.add_argument("--max-traces", type=int, help="trace enumeration cap")
    common.add_argument("--case-id", help="case identifier written to the event log")
    common.add_argument("--out", help="write the result here instead of standard output")
    common.add_argument("--graph-json", help="explore: also write the state graph as JSON")
    common.add_argument("--graph-dot", help="explore: also write the state graph as DOT")
    common.add_argument("--settings", help="settings file (default: settings.json next to main.py)")
    common.add_argument("-v", "--verbose", action="count", default=0, help="more diagnostics on stderr")

    parser = argparse.ArgumentParser(description="Workflow pattern engine and analyzer")
    commands = parser.add_subparsers(dest="command", required=True)
    commands.add_parser(Command.VALIDATE.value, parents=[common], help="parse and validate a process")
    commands.add_parser(Command.RUN.value, parents=[common], help="run one case and print its event log")
    commands.add_parser(Command.EXPLORE.value, parents=[common], help="explore the state space and check soundness")
    commands.add_parser(Command.DOT.value, parents=[common], help="export the process as Graphviz DOT")
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)

    try:
        settings = load_settings(args.settings)
    except (OSError, ValueError, TypeError) as error:
        print(f"settings: {error}", file=sys.stderr)
        return EXIT_INVALID
    configure_logging(settings.log_level, args.verbose)

    try:
        cfg = RunConfig.from_args(args, settings)
    except ValueError as error:
        parser.error(str(error))

    return dispatch(cfg)


if __name__ == "__main__":
    sys.exit(main())
