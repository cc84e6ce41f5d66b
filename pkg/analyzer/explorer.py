"""
Bounded breadth-first exploration of a definition's case state space, and
trace enumeration over the resulting graph.
"""
import logging
from collections import deque
from dataclasses import dataclass, field
from typing import Dict, List, Set, Tuple

from dsl.dot import quote
from simulator.action import Choice, step_name
from simulator.errors import OrJoinBoundError
from simulator.or_join import BoundExceeded, evaluate_or_join
from simulator.process import ProcessDefinition
from simulator.rules import initial_state, successors
from simulator.settings import DEFAULT_MAX_STATES, DEFAULT_MAX_TRACES, DEFAULT_OR_JOIN_BOUND
from simulator.state import CaseState, CaseStatus

logger = logging.getLogger(__name__)

EXPLORATION_CASE_ID = "explore"


@dataclass(frozen=True)
class Transition:
    source: int
    node: str
    choice: Choice
    step: str
    target: int


@dataclass
class StateGraph:
    """
    Reachability graph over canonicalized case states. State ids are BFS
    discovery order; the initial state is 0.
    """
    states: List[CaseState] = field(default_factory=list)
    transitions: List[Transition] = field(default_factory=list)
    initial: int = 0
    truncated: bool = False
    expanded: Set[int] = field(default_factory=set)
    index: Dict[tuple, int] = field(default_factory=dict, repr=False)
    outgoing: Dict[int, List[Transition]] = field(default_factory=dict, repr=False)

    def add_state(self, state: CaseState) -> int:
        state_id = len(self.states)
        self.states.append(state)
        self.index[state.canonical_key()] = state_id
        self.outgoing[state_id] = []
        return state_id

    def add_transition(self, transition: Transition):
        self.transitions.append(transition)
        self.outgoing[transition.source].append(transition)

    def find(self, state: CaseState):
        return self.index.get(state.canonical_key())

    def is_deadlock(self, state_id):
        return (
            self.states[state_id].is_running
            and state_id in self.expanded
            and not self.outgoing[state_id]
        )

    def is_terminal(self, state_id):
        return not self.states[state_id].is_running or self.is_deadlock(state_id)

    def deadlock_states(self):
        return [sid for sid in range(len(self.states)) if self.is_deadlock(sid)]

    def states_with_status(self, status: CaseStatus):
        return [sid for sid, state in enumerate(self.states) if state.status is status]

    def fired_nodes(self):
        return {transition.node for transition in self.transitions}


def explore(definition: ProcessDefinition, max_states=DEFAULT_MAX_STATES,
            or_join_bound=DEFAULT_OR_JOIN_BOUND) -> StateGraph:
    """
    Closure of every enabled firing and every choice from the initial state.

    Stops discovering new states at `max_states` and sets `truncated`.
    A token reaching the end node is consumed by a separate end transition.
    """
    graph = StateGraph()
    graph.add_state(initial_state(definition, EXPLORATION_CASE_ID))
    queue = deque([graph.initial])

    while queue:
        state_id = queue.popleft()
        state = graph.states[state_id]
        complete = True

        def or_join_rule(join):
            verdict = evaluate_or_join(definition, state, join, or_join_bound)
            if isinstance(verdict, BoundExceeded):
                raise OrJoinBoundError(f"or_join {join!r} needs more than {or_join_bound} states to decide")
            return verdict

        for node, choice, nxt, _ in successors(definition, state, or_join_rule):
            target = graph.find(nxt)
            if target is None:
                if len(graph.states) >= max_states:
                    graph.truncated = True
                    complete = False
                    continue
                target = graph.add_state(nxt)
                queue.append(target)
            graph.add_transition(Transition(state_id, node, choice, step_name(definition, node, choice), target))

        if complete:
            graph.expanded.add(state_id)

    if graph.truncated:
        logger.warning("exploration of %s truncated at %d states", definition.name, max_states)
    logger.info("explored %s: %d states, %d transitions", definition.name, len(graph.states), len(graph.transitions))
    return graph


def collect_traces(graph: StateGraph, max_traces=DEFAULT_MAX_TRACES) -> Tuple[List[Tuple[str, ...]], bool]:
    """
    Step sequences of the simple paths from the initial state to terminal
    states, sorted and deduplicated, at most `max_traces` of them. The flag
    is true only when a further distinct trace exists beyond the cap.
    """
    if graph.is_terminal(graph.initial):
        return [()], False

    traces = set()
    truncated = False
    steps: List[str] = []
    on_path = {graph.initial}
    stack = [(graph.initial, iter(graph.outgoing[graph.initial]))]
    while stack:
        state_id, pending = stack[-1]
        transition = next(pending, None)
        if transition is None:
            stack.pop()
            on_path.discard(state_id)
            if stack:
                steps.pop()
            continue
        if transition.target in on_path:
            continue
        if graph.is_terminal(transition.target):
            trace = tuple(steps) + (transition.step,)
            if trace in traces:
                continue
            if len(traces) >= max_traces:
                truncated = True
                break
            traces.add(trace)
            continue
        steps.append(transition.step)
        on_path.add(transition.target)
        stack.append((transition.target, iter(graph.outgoing[transition.target])))

    return sorted(traces), truncated


def traces_of(graph: StateGraph, max_traces=DEFAULT_MAX_TRACES) -> List[Tuple[str, ...]]:
    return collect_traces(graph, max_traces)[0]


def enumerate_traces(definition, max_traces=DEFAULT_MAX_TRACES, max_states=DEFAULT_MAX_STATES,
                     or_join_bound=DEFAULT_OR_JOIN_BOUND) -> List[Tuple[str, ...]]:
    return traces_of(explore(definition, max_states, or_join_bound), max_traces)


def _state_summary(definition, graph, state_id):
    state = graph.states[state_id]
    status = "deadlocked" if graph.is_deadlock(state_id) else state.status.value
    return {
        "id": state_id,
        "status": status,
        "marking": state.marking.describe(definition),
        "joins": {node: [js.fired, js.arrived] for node, js in sorted(state.join_states.items())},
    }


def graph_to_json(definition, graph: StateGraph):
    return {
        "process": definition.name,
        "initial": graph.initial,
        "truncated": graph.truncated,
        "states": [_state_summary(definition, graph, sid) for sid in range(len(graph.states))],
        "transitions": [
            {"source": t.source, "target": t.target, "node": t.node, "step": t.step}
            for t in graph.transitions
        ],
    }


def graph_to_dot(definition, graph: StateGraph) -> str:
    shapes = {"completed": "doublecircle", "completed_improperly": "doubleoctagon", "deadlocked": "octagon"}
    lines = [f"digraph {quote(definition.name + ' states')} {{"]
    for sid in range(len(graph.states)):
        summary = _state_summary(definition, graph, sid)
        marking = "\\n".join(f"{ref}:{count}" for ref, count in summary["marking"].items()) or "empty"
        shape = shapes.get(summary["status"], "ellipse")
        lines.append(f"  S{sid} [shape={shape}, label=\"{marking}\"];")
    for t in graph.transitions:
        lines.append(f"  S{t.source} -> S{t.target} [label={quote(t.step)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"
