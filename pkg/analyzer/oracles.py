"""Brute-force reference answers used to cross-check the engine."""
import logging

from simulator.errors import NotOrJoinError, OracleCapError
from simulator.process import GatewayType
from simulator.rules import successors
from simulator.settings import DEFAULT_MAX_STATES

logger = logging.getLogger(__name__)


def oracle_or_join(definition, state, join, max_states=DEFAULT_MAX_STATES):
    """
    Exhaustive reference for OR-join enablement. Walks every state reachable
    without firing `join`, with no early exit and no bound below `max_states`,
    then checks whether any of them marks a currently unmarked input.

    It uses the same successor relation as the engine, so other OR-joins are
    taken as enabled once one of their inputs is marked. It cross-checks the
    bounded search in evaluate_or_join; it is not a second semantics.
    """
    if not definition.kind(join).is_(GatewayType.OR_JOIN):
        raise NotOrJoinError(f"{join!r} is not an or_join")

    incoming = definition.incoming(join)
    unmarked = [edge for edge in incoming if not state.marking.is_marked(edge)]
    if len(unmarked) == len(incoming):
        return False

    seen = {state.canonical_key(): state}
    stack = [state]
    while stack:
        current = stack.pop()
        for _, _, nxt, _ in successors(definition, current, exclude=join):
            key = nxt.canonical_key()
            if key in seen:
                continue
            if len(seen) >= max_states:
                raise OracleCapError(f"state space behind {join!r} exceeds {max_states} states")
            seen[key] = nxt
            stack.append(nxt)

    return not any(
        reached.marking.is_marked(edge)
        for reached in seen.values()
        for edge in unmarked
    )
