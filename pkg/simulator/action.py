from dataclasses import dataclass
from typing import Tuple

from simulator.process import GatewayType

# A choice is the tuple of outgoing edge positions that receive a token.
Choice = Tuple[int, ...]
DEFAULT: Choice = ()


@dataclass(frozen=True)
class Enabled:
    """
    Represents an element that may fire in the current case state,
    together with the decisions available to it.
    """
    node: str
    choice_domain: Tuple[Choice, ...] = (DEFAULT,)

    @property
    def needs_decision(self):
        return len(self.choice_domain) > 1


def choice_domain(definition, node_id) -> Tuple[Choice, ...]:
    """
    XOR-split: one entry per outgoing edge. OR-split: every non-empty subset of
    the outgoing edges in binary-counting order (bit 0 = first declared edge).
    Everything else: the single default choice.
    """
    kind = definition.kind(node_id)
    outgoing = definition.outgoing(node_id)
    if kind.is_(GatewayType.XOR_SPLIT):
        return tuple((edge,) for edge in outgoing)
    if kind.is_(GatewayType.OR_SPLIT):
        return tuple(
            tuple(edge for bit, edge in enumerate(outgoing) if mask >> bit & 1)
            for mask in range(1, 1 << len(outgoing))
        )
    return (DEFAULT,)


def branch_names(definition, choice: Choice):
    return [definition.edges[edge].branch for edge in choice]


def step_name(definition, node_id, choice: Choice):
    """Trace token of one firing: the node id, with chosen branches for splits."""
    if not choice:
        return node_id
    return f"{node_id}[{','.join(branch_names(definition, choice))}]"
