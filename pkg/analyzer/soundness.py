"""
Soundness of a process definition: every case can finish, finishes without
leftover tokens, and every node can fire in some run.
"""
import logging
from dataclasses import dataclass
from typing import List, Optional, Tuple

from analyzer.explorer import StateGraph, explore
from simulator.or_join import evaluate_or_join
from simulator.process import GatewayType
from simulator.settings import DEFAULT_MAX_STATES, DEFAULT_OR_JOIN_BOUND
from simulator.state import CaseStatus

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SoundnessReport:
    deadlock_states: Tuple[dict, ...] = ()
    improper_completion_states: Tuple[dict, ...] = ()
    dead_nodes: Tuple[str, ...] = ()
    truncated: bool = False

    @property
    def sound(self):
        return not (self.deadlock_states or self.improper_completion_states or self.dead_nodes or self.truncated)

    def to_json(self):
        return {
            "sound": self.sound,
            "deadlock_states": list(self.deadlock_states),
            "improper_completion_states": list(self.improper_completion_states),
            "dead_nodes": list(self.dead_nodes),
            "truncated": self.truncated,
        }


def _summary(definition, graph, state_id):
    return {"state": state_id, "marking": graph.states[state_id].marking.describe(definition)}


def check_soundness(definition, max_states=DEFAULT_MAX_STATES, or_join_bound=DEFAULT_OR_JOIN_BOUND,
                    graph: Optional[StateGraph] = None) -> SoundnessReport:
    """
    Classify the terminal states of the explored graph. The start node never
    fires a transition and is not counted as dead.
    """
    if graph is None:
        graph = explore(definition, max_states, or_join_bound)
    fired = graph.fired_nodes()
    report = SoundnessReport(
        deadlock_states=tuple(_summary(definition, graph, sid) for sid in graph.deadlock_states()),
        improper_completion_states=tuple(
            _summary(definition, graph, sid) for sid in graph.states_with_status(CaseStatus.COMPLETED_IMPROPERLY)
        ),
        dead_nodes=tuple(
            node_id for node_id in definition.node_ids
            if node_id != definition.start and node_id not in fired
        ),
        truncated=graph.truncated,
    )
    logger.info("%s is %s", definition.name, "sound" if report.sound else "unsound")
    return report


def unsafe_states(graph: StateGraph) -> List[int]:
    """States in which some edge carries more than one token."""
    return [sid for sid, state in enumerate(graph.states) if any(count > 1 for count in state.marking.counts)]


def or_join_waiting_violations(definition, graph: StateGraph, or_join_bound=DEFAULT_OR_JOIN_BOUND) -> List[Tuple[int, str]]:
    """
    (state, join) pairs where an OR-join is waiting (some input marked, not
    enabled) while one of its incoming edges holds more than one token.
    """
    violations = []
    joins = definition.gateways(GatewayType.OR_JOIN)
    for sid, state in enumerate(graph.states):
        if not state.is_running:
            continue
        for join in joins:
            counts = [state.marking.count(edge) for edge in definition.incoming(join)]
            if not any(counts) or max(counts) <= 1:
                continue
            if evaluate_or_join(definition, state, join, or_join_bound) is False:
                violations.append((sid, join))
    return violations
