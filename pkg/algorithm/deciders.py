import logging
import random
from dataclasses import dataclass
from typing import List, Sequence, Tuple

from algorithm.api import Decider
from simulator.errors import BadChoiceError, ScriptShortError, WorkflowError

logger = logging.getLogger(__name__)


class DeterministicDecider(Decider):
    """Always the first choice in canonical order."""

    def choose(self, definition, state, enabled):
        return enabled.choice_domain[0]


class SeededDecider(Decider):
    """Uniform random choices, reproducible from a 64-bit seed."""

    def __init__(self, seed):
        self.seed = seed
        self.rng = random.Random(seed)

    def choose(self, definition, state, enabled):
        return self.rng.choice(enabled.choice_domain)


@dataclass(frozen=True)
class ScriptEntry:
    node: str
    branches: Tuple[str, ...]
    line: int = 0


def resolve_choice(definition, node_id, branches: Sequence[str]):
    """
    Map branch names to a choice over the node's outgoing edges.
    A name matches an edge label first, then a target node id, then a 0-based
    position among the outgoing edges.
    """
    outgoing = definition.outgoing(node_id)
    picked = set()
    for name in branches:
        matches = [e for e in outgoing if definition.edges[e].label == name]
        if not matches:
            matches = [e for e in outgoing if definition.edges[e].target == name]
        if not matches and name.isdigit() and int(name) < len(outgoing):
            matches = [outgoing[int(name)]]
        if not matches:
            raise BadChoiceError(f"{node_id!r} has no outgoing branch {name!r}")
        picked.add(matches[0])
    return tuple(edge for edge in outgoing if edge in picked)


class ScriptedDecider(Decider):
    """
    Replays a fixed list of decisions in order. Every XOR/OR-split firing
    consumes exactly one entry; running out is an error.
    """

    def __init__(self, entries: Sequence[ScriptEntry]):
        self.entries: List[ScriptEntry] = list(entries)
        self.position = 0

    @property
    def remaining(self):
        return len(self.entries) - self.position

    def choose(self, definition, state, enabled):
        if self.position >= len(self.entries):
            raise ScriptShortError(
                f"script exhausted after {len(self.entries)} decision(s); {enabled.node!r} needs a choice"
            )
        entry = self.entries[self.position]
        self.position += 1
        if entry.node != enabled.node:
            raise BadChoiceError(
                f"script line {entry.line} decides {entry.node!r} but {enabled.node!r} is firing"
            )
        choice = resolve_choice(definition, enabled.node, entry.branches)
        if choice not in enabled.choice_domain:
            raise BadChoiceError(
                f"script line {entry.line}: {','.join(entry.branches)} is not a valid choice for {enabled.node!r}"
            )
        logger.debug("script line %d: %s -> %s", entry.line, entry.node, ",".join(entry.branches))
        return choice


def parse_script(text) -> List[ScriptEntry]:
    """One decision per line: `<node> <branch>[,<branch>...]`. `#` starts a comment."""
    entries = []
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split(None, 1)
        if len(parts) != 2:
            raise WorkflowError(f"script line {number}: expected '<node> <branch>[,<branch>...]'", code="BAD_SCRIPT")
        node, rest = parts
        branches = tuple(b.strip() for b in rest.split(","))
        if not all(branches):
            raise WorkflowError(f"script line {number}: empty branch name", code="BAD_SCRIPT")
        entries.append(ScriptEntry(node, branches, number))
    return entries


def load_script(path) -> ScriptedDecider:
    with open(path, "r", encoding="utf-8") as f:
        return ScriptedDecider(parse_script(f.read()))
