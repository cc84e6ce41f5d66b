"""Non-local enablement of the synchronizing merge (OR-join)."""
import logging
from collections import deque
from dataclasses import dataclass

from simulator.errors import NotOrJoinError
from simulator.process import GatewayType
from simulator.rules import successors
from simulator.settings import DEFAULT_OR_JOIN_BOUND

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class BoundExceeded:
    """Verdict of an OR-join evaluation that ran out of exploration budget. Always check with isinstance."""
    join: str
    bound: int


def evaluate_or_join(definition, case, join, bound=DEFAULT_OR_JOIN_BOUND):
    """
    Decide whether an OR-join may fire.

    True iff at least one incoming edge is marked and no state reachable
    without firing this join puts a token on one of its currently unmarked
    incoming edges. Other OR-joins met during the search count as enabled as
    soon as one of their inputs is marked.

    :return: True, False, or BoundExceeded when more than `bound` distinct
             states would have to be visited.
    """
    if not definition.kind(join).is_(GatewayType.OR_JOIN):
        raise NotOrJoinError(f"{join!r} is not an or_join")

    incoming = definition.incoming(join)
    unmarked = [edge for edge in incoming if not case.marking.is_marked(edge)]
    if len(unmarked) == len(incoming):
        return False
    if not unmarked:
        return True

    seen = {case.canonical_key()}
    queue = deque([case])
    while queue:
        state = queue.popleft()
        for _, _, nxt, _ in successors(definition, state, exclude=join):
            if any(nxt.marking.is_marked(edge) for edge in unmarked):
                return False
            key = nxt.canonical_key()
            if key in seen:
                continue
            if len(seen) >= bound:
                logger.warning("or_join %s: reachability bound %d exceeded", join, bound)
                return BoundExceeded(join, bound)
            seen.add(key)
            queue.append(nxt)
    return True
