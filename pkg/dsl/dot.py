"""Graphviz rendering of process definitions."""
from simulator.process import GatewayType, NodeType, ProcessDefinition

SHAPES = {
    NodeType.START: "circle",
    NodeType.END: "doublecircle",
    NodeType.TASK: "box",
    NodeType.GATEWAY: "diamond",
}

GATEWAY_TAGS = {
    GatewayType.AND_SPLIT: "AND-split",
    GatewayType.AND_JOIN: "AND-join",
    GatewayType.XOR_SPLIT: "XOR-split",
    GatewayType.XOR_JOIN: "XOR-join",
    GatewayType.OR_SPLIT: "OR-split",
    GatewayType.OR_JOIN: "OR-join",
    GatewayType.MULTI_MERGE: "MULTI-MERGE",
    GatewayType.DISCRIMINATOR: "DISC",
}


def quote(text):
    return '"' + str(text).replace("\\", "\\\\").replace('"', '\\"') + '"'


def gateway_tag(definition, node):
    gw = node.kind.gateway
    if gw.type is GatewayType.N_OF_M:
        return f"{gw.n}-of-{len(definition.incoming(node.id))}"
    return GATEWAY_TAGS[gw.type]


def export_dot(definition: ProcessDefinition) -> str:
    """
    One digraph: tasks as boxes, gateways as diamonds labeled with their kind
    (the node id goes to xlabel), start and end as circles.
    """
    lines = [f"digraph {quote(definition.name)} {{", "  rankdir=LR;"]
    for node in definition.nodes:
        shape = SHAPES[node.kind.type]
        if node.kind.is_gateway:
            attrs = f"shape={shape}, label={quote(gateway_tag(definition, node))}, xlabel={quote(node.id)}"
        else:
            attrs = f"shape={shape}, label={quote(node.id)}"
        lines.append(f"  {quote(node.id)} [{attrs}];")
    for edge in definition.edges:
        attrs = f" [label={quote(edge.label)}]" if edge.label is not None else ""
        lines.append(f"  {quote(edge.source)} -> {quote(edge.target)}{attrs};")
    lines.append("}")
    return "\n".join(lines) + "\n"
