"""
Process definitions: the immutable graph of start, end, task and gateway nodes
that every case is executed against, plus its structural validation.
"""
import logging
import re
from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Optional, Tuple, Union

from simulator.errors import UnknownNodeError

logger = logging.getLogger(__name__)

IDENT_RE = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")
LABEL_FORBIDDEN = frozenset("[]#;\r\n")


class NodeType(str, Enum):
    START = "start"
    END = "end"
    TASK = "task"
    GATEWAY = "gateway"


class GatewayType(str, Enum):
    AND_SPLIT = "and_split"
    AND_JOIN = "and_join"
    XOR_SPLIT = "xor_split"
    XOR_JOIN = "xor_join"
    OR_SPLIT = "or_split"
    OR_JOIN = "or_join"
    MULTI_MERGE = "multi_merge"
    DISCRIMINATOR = "discriminator"
    N_OF_M = "n_of_m"


SPLIT_TYPES = frozenset({GatewayType.AND_SPLIT, GatewayType.XOR_SPLIT, GatewayType.OR_SPLIT})


@dataclass(frozen=True)
class GatewayKind:
    type: GatewayType
    n: Optional[int] = None  # only meaningful for N_OF_M

    @property
    def is_split(self):
        return self.type in SPLIT_TYPES

    @property
    def threshold(self):
        """
        Arrivals needed before a discriminator-style join fires downstream.
        None for gateways without join state.
        """
        if self.type is GatewayType.DISCRIMINATOR:
            return 1
        if self.type is GatewayType.N_OF_M:
            return self.n
        return None

    @property
    def keyword(self):
        if self.type is GatewayType.N_OF_M:
            return f"n_of_m({self.n})"
        return self.type.value


@dataclass(frozen=True)
class NodeKind:
    type: NodeType
    gateway: Optional[GatewayKind] = None

    @property
    def is_gateway(self):
        return self.type is NodeType.GATEWAY

    def is_(self, gateway_type):
        return self.gateway is not None and self.gateway.type is gateway_type

    def __str__(self):
        if self.gateway is not None:
            return f"gateway {self.gateway.keyword}"
        return self.type.value


START = NodeKind(NodeType.START)
END = NodeKind(NodeType.END)
TASK = NodeKind(NodeType.TASK)


def gateway(gateway_type, n=None):
    """Build the NodeKind of a gateway; accepts a GatewayType or its DSL keyword."""
    return NodeKind(NodeType.GATEWAY, GatewayKind(GatewayType(gateway_type), n))


@dataclass(frozen=True)
class Node:
    id: str
    kind: NodeKind


@dataclass(frozen=True)
class Edge:
    source: str
    target: str
    label: Optional[str] = None

    @property
    def ref(self):
        return f"{self.source}->{self.target}"

    @property
    def branch(self):
        """Name used by deciders and logs: the label, or the target id when unlabeled."""
        return self.label if self.label is not None else self.target


@dataclass(frozen=True)
class Violation:
    code: str
    ref: Optional[str]
    message: str

    def __str__(self):
        if self.ref is None:
            return f"{self.code}: {self.message}"
        return f"{self.code} {self.ref}: {self.message}"


@dataclass(frozen=True)
class ValidationReport:
    violations: Tuple[Violation, ...] = ()

    @property
    def ok(self):
        return not self.violations

    def codes(self):
        return [v.code for v in self.violations]

    def __str__(self):
        return "\n".join(str(v) for v in self.violations)


@dataclass(frozen=True)
class ProcessDefinition:
    """
    A validated process graph. Only build_process should construct one.

    Node and edge order are the declaration order; edge positions are the
    indices used by markings and choices.
    """
    name: str
    nodes: Tuple[Node, ...]
    edges: Tuple[Edge, ...]
    _kinds: Dict[str, NodeKind] = field(init=False, repr=False, compare=False)
    _incoming: Dict[str, Tuple[int, ...]] = field(init=False, repr=False, compare=False)
    _outgoing: Dict[str, Tuple[int, ...]] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        kinds = {node.id: node.kind for node in self.nodes}
        incoming = {node.id: [] for node in self.nodes}
        outgoing = {node.id: [] for node in self.nodes}
        for index, edge in enumerate(self.edges):
            outgoing[edge.source].append(index)
            incoming[edge.target].append(index)
        object.__setattr__(self, "_kinds", kinds)
        object.__setattr__(self, "_incoming", {k: tuple(v) for k, v in incoming.items()})
        object.__setattr__(self, "_outgoing", {k: tuple(v) for k, v in outgoing.items()})

    def kind(self, node_id):
        try:
            return self._kinds[node_id]
        except KeyError:
            raise UnknownNodeError(f"unknown node {node_id!r} in process {self.name!r}") from None

    @property
    def node_ids(self):
        return [node.id for node in self.nodes]

    def incoming(self, node_id):
        """Indices of the incoming edges of a node, in declaration order."""
        self.kind(node_id)
        return self._incoming[node_id]

    def outgoing(self, node_id):
        self.kind(node_id)
        return self._outgoing[node_id]

    def _only(self, node_type):
        return next(node.id for node in self.nodes if node.kind.type is node_type)

    @property
    def start(self):
        return self._only(NodeType.START)

    @property
    def end(self):
        return self._only(NodeType.END)

    @property
    def start_edge(self):
        return self._outgoing[self.start][0]

    @property
    def end_edge(self):
        return self._incoming[self.end][0]

    def gateways(self, gateway_type):
        return [node.id for node in self.nodes if node.kind.is_(gateway_type)]

    def join_state_nodes(self):
        """Joins that keep per-round state: discriminators and n-of-m joins."""
        return [
            node.id for node in self.nodes
            if node.kind.gateway is not None and node.kind.gateway.threshold is not None
        ]


def _check_arity(node_id, kind, n_in, n_out):
    if kind.type is NodeType.START:
        rules = [("incoming", n_in == 0, "no"), ("outgoing", n_out == 1, "exactly 1")]
    elif kind.type is NodeType.END:
        rules = [("incoming", n_in == 1, "exactly 1"), ("outgoing", n_out == 0, "no")]
    elif kind.type is NodeType.TASK:
        rules = [("incoming", n_in == 1, "exactly 1"), ("outgoing", n_out == 1, "exactly 1")]
    elif kind.gateway.is_split:
        rules = [("incoming", n_in == 1, "exactly 1"), ("outgoing", n_out >= 2, "at least 2")]
    else:
        rules = [("incoming", n_in >= 2, "at least 2"), ("outgoing", n_out == 1, "exactly 1")]

    counts = {"incoming": n_in, "outgoing": n_out}
    return [
        Violation("ARITY", node_id,
                  f"{kind} {node_id!r} needs {wanted} {side} edge(s), has {counts[side]}")
        for side, satisfied, wanted in rules if not satisfied
    ]


def _label_ok(label):
    if label is None:
        return True
    return (
        isinstance(label, str)
        and label != ""
        and label == label.strip()
        and not (set(label) & LABEL_FORBIDDEN)
    )


def _reach(seeds, adjacency):
    seen = set(seeds)
    queue = deque(seeds)
    while queue:
        current = queue.popleft()
        for nxt in adjacency.get(current, ()):
            if nxt not in seen:
                seen.add(nxt)
                queue.append(nxt)
    return seen


def build_process(name, nodes, edges) -> Union[ProcessDefinition, ValidationReport]:
    """
    Validate nodes and edges and assemble a ProcessDefinition.

    Every violated invariant is collected; when there is at least one, the
    ValidationReport is returned instead of a definition.

    :param name: process name.
    :param nodes: sequence of (node id, NodeKind) pairs in declaration order.
    :param edges: sequence of Edge in declaration order.
    """
    violations: List[Violation] = []
    if not isinstance(name, str) or not IDENT_RE.match(name):
        violations.append(Violation("BAD_ID", None, f"process name {name!r} is not an identifier"))

    kinds: Dict[str, NodeKind] = {}
    for node_id, kind in nodes:
        if not isinstance(node_id, str) or not IDENT_RE.match(node_id):
            violations.append(Violation("BAD_ID", str(node_id), f"{node_id!r} is not an identifier"))
            continue
        if node_id in kinds:
            violations.append(Violation("DUP_NODE", node_id, f"node {node_id!r} declared more than once"))
            continue
        kinds[node_id] = kind

    incoming: Dict[str, List[Edge]] = {node_id: [] for node_id in kinds}
    outgoing: Dict[str, List[Edge]] = {node_id: [] for node_id in kinds}
    pairs = set()
    for edge in edges:
        for endpoint in (edge.source, edge.target):
            if endpoint not in kinds:
                violations.append(Violation("BAD_EDGE", edge.ref, f"edge endpoint {endpoint!r} is not a node"))
        if edge.source == edge.target:
            violations.append(Violation("SELF_LOOP", edge.ref, "an edge may not connect a node to itself"))
        if (edge.source, edge.target) in pairs:
            violations.append(Violation("DUP_EDGE", edge.ref, "edge declared more than once"))
        pairs.add((edge.source, edge.target))
        if not _label_ok(edge.label):
            violations.append(Violation("BAD_LABEL", edge.ref, f"label {edge.label!r} cannot be written as a branch name"))
        if edge.source in kinds:
            outgoing[edge.source].append(edge)
        if edge.target in kinds:
            incoming[edge.target].append(edge)

    starts = [nid for nid, kind in kinds.items() if kind.type is NodeType.START]
    ends = [nid for nid, kind in kinds.items() if kind.type is NodeType.END]
    for label, found in (("start", starts), ("end", ends)):
        if not found:
            violations.append(Violation("START_END", None, f"process has no {label} node"))
        for extra in found[1:]:
            violations.append(Violation("START_END", extra, f"process has more than one {label} node"))

    for node_id, kind in kinds.items():
        violations.extend(_check_arity(node_id, kind, len(incoming[node_id]), len(outgoing[node_id])))
        gw = kind.gateway
        if gw is None:
            continue
        if gw.type is GatewayType.N_OF_M:
            if gw.n is None or gw.n < 1 or gw.n > len(incoming[node_id]):
                violations.append(Violation(
                    "BAD_N", node_id,
                    f"n_of_m needs 1 <= n <= {len(incoming[node_id])} (incoming edges), got {gw.n}",
                ))
        elif gw.n is not None:
            violations.append(Violation("BAD_N", node_id, f"{gw.type.value} takes no n"))

    if starts and ends:
        forward = {nid: [e.target for e in outgoing[nid] if e.target in kinds] for nid in kinds}
        backward = {nid: [e.source for e in incoming[nid] if e.source in kinds] for nid in kinds}
        from_start = _reach(starts, forward)
        to_end = _reach(ends, backward)
        for node_id in kinds:
            problems = []
            if node_id not in from_start:
                problems.append("is not reachable from start")
            if node_id not in to_end:
                problems.append("cannot reach end")
            if problems:
                violations.append(Violation("UNREACHABLE", node_id, f"node {node_id!r} " + " and ".join(problems)))

    if violations:
        logger.debug("process %r rejected with %d violation(s)", name, len(violations))
        return ValidationReport(tuple(violations))

    return ProcessDefinition(
        name=name,
        nodes=tuple(Node(node_id, kinds[node_id]) for node_id, _ in nodes),
        edges=tuple(Edge(e.source, e.target, e.label) for e in edges),
    )


def node_edges(definition: ProcessDefinition, node_id) -> Tuple[List[Edge], List[Edge]]:
    """Incoming and outgoing edges of a node, each in declaration order."""
    incoming = [definition.edges[i] for i in definition.incoming(node_id)]
    outgoing = [definition.edges[i] for i in definition.outgoing(node_id)]
    return incoming, outgoing
