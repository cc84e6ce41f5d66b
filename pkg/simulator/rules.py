"""
The token game: which nodes may fire in a case state and what firing them does.

Everything here is a pure function of (definition, state). OR-join enablement
is non-local, so callers pass the rule to use for OR-joins; without one, an
OR-join counts as enabled as soon as one of its inputs is marked.
"""
import logging
from typing import Callable, Iterator, List, Optional, Tuple

from simulator.action import Choice, branch_names, choice_domain
from simulator.logger import Event, EventKind
from simulator.marking import Marking
from simulator.process import GatewayType, NodeType, ProcessDefinition
from simulator.state import CaseState, CaseStatus, JoinState

logger = logging.getLogger(__name__)

OrJoinRule = Callable[[str], bool]

SPLITS = (GatewayType.AND_SPLIT, GatewayType.XOR_SPLIT, GatewayType.OR_SPLIT)
SINGLE_CONSUMERS = (GatewayType.XOR_JOIN, GatewayType.MULTI_MERGE)


def initial_state(definition: ProcessDefinition, case_id) -> CaseState:
    join_states = {node_id: JoinState() for node_id in definition.join_state_nodes()}
    return CaseState(case_id=case_id, marking=Marking.initial(definition), join_states=join_states)


def end_arrived(definition, state):
    return state.marking.is_marked(definition.end_edge)


def is_enabled(definition, state, node_id, or_join_rule: Optional[OrJoinRule] = None):
    kind = definition.kind(node_id)
    marking = state.marking
    incoming = definition.incoming(node_id)
    if kind.type is NodeType.START:
        return False
    if kind.is_(GatewayType.AND_JOIN):
        return all(marking.is_marked(edge) for edge in incoming)
    if not any(marking.is_marked(edge) for edge in incoming):
        return False
    if kind.is_(GatewayType.OR_JOIN) and or_join_rule is not None:
        return or_join_rule(node_id)
    return True


def enabled_nodes(definition, state, or_join_rule: Optional[OrJoinRule] = None, exclude=None) -> List[str]:
    """
    Enabled node ids in ascending order. A token on the end node's incoming
    edge leaves the end node as the only enabled element.
    """
    if not state.is_running:
        return []
    if end_arrived(definition, state):
        return [definition.end]
    candidates = sorted({definition.edges[edge].target for edge in state.marking.marked_edges()})
    return [
        node_id for node_id in candidates
        if node_id != exclude and is_enabled(definition, state, node_id, or_join_rule)
    ]


def _first_marked(marking, edges):
    return next(edge for edge in edges if marking.is_marked(edge))


def apply_firing(definition: ProcessDefinition, state: CaseState, node_id, choice: Choice = ()) -> Tuple[CaseState, List[Event]]:
    """
    Fire one node without checking that it is enabled or that the choice is
    in its domain. Returns the successor state and the emitted events.
    """
    kind = definition.kind(node_id)
    incoming = definition.incoming(node_id)
    outgoing = definition.outgoing(node_id)
    marking = state.marking
    join_states = state.join_states
    events: List[Event] = []
    seq = state.seq

    def emit(event_kind, node=None, detail=None):
        nonlocal seq
        events.append(Event(state.case_id, seq, event_kind, node, detail))
        seq += 1

    if kind.type is NodeType.END:
        marking = marking.remove(incoming[0])
        if marking.is_empty():
            status = CaseStatus.COMPLETED
            emit(EventKind.CASE_COMPLETED)
        else:
            status = CaseStatus.COMPLETED_IMPROPERLY
            emit(EventKind.CASE_COMPLETED_IMPROPERLY, detail=f"{marking.total} token(s) left")
        return state.evolve(marking=marking, seq=seq, status=status), events

    if kind.type is NodeType.TASK:
        marking = marking.remove(incoming[0]).add(outgoing[0])
        emit(EventKind.TASK_COMPLETED, node_id)
        return state.evolve(marking=marking, seq=seq), events

    gateway_type = kind.gateway.type
    if gateway_type in SPLITS:
        marking = marking.remove(incoming[0])
        targets = outgoing if gateway_type is GatewayType.AND_SPLIT else choice
        for edge in targets:
            marking = marking.add(edge)
        emit(EventKind.GATEWAY_FIRED, node_id, ",".join(branch_names(definition, targets)))
    elif gateway_type is GatewayType.AND_JOIN:
        for edge in incoming:
            marking = marking.remove(edge)
        marking = marking.add(outgoing[0])
        emit(EventKind.GATEWAY_FIRED, node_id)
    elif gateway_type is GatewayType.OR_JOIN:
        consumed = [edge for edge in incoming if marking.is_marked(edge)]
        for edge in consumed:
            marking = marking.remove(edge)
        marking = marking.add(outgoing[0])
        emit(EventKind.GATEWAY_FIRED, node_id, ",".join(definition.edges[e].source for e in consumed))
    elif gateway_type in SINGLE_CONSUMERS:
        marking = marking.remove(_first_marked(marking, incoming)).add(outgoing[0])
        emit(EventKind.GATEWAY_FIRED, node_id)
    else:
        # discriminator and n-of-m: consume one token, fire on the threshold arrival, absorb the rest
        marking = marking.remove(_first_marked(marking, incoming))
        current = join_states[node_id]
        updated, fires = current.arrive(kind.gateway.threshold, len(incoming))
        join_states = {**join_states, node_id: updated}
        if fires:
            marking = marking.add(outgoing[0])
            emit(EventKind.GATEWAY_FIRED, node_id, f"round={current.round}")
        else:
            emit(EventKind.TOKEN_ABSORBED, node_id, f"round={current.round}")

    return state.evolve(marking=marking, join_states=join_states, seq=seq), events


def successors(definition, state, or_join_rule: Optional[OrJoinRule] = None, exclude=None) -> Iterator[Tuple[str, Choice, CaseState, List[Event]]]:
    """Every (node, choice, successor, events) reachable in one firing."""
    for node_id in enabled_nodes(definition, state, or_join_rule, exclude):
        for choice in choice_domain(definition, node_id):
            nxt, events = apply_firing(definition, state, node_id, choice)
            yield node_id, choice, nxt, events
