from simulator.process import ProcessDefinition

INDENT = "    "


def serialize(definition: ProcessDefinition) -> str:
    """Canonical process text: node declarations, then edges, one per line, LF endings."""
    lines = [f"process {definition.name} {{"]
    for node in definition.nodes:
        lines.append(f"{INDENT}{node.kind} {node.id};")
    for edge in definition.edges:
        label = f" [{edge.label}]" if edge.label is not None else ""
        lines.append(f"{INDENT}{edge.source} -> {edge.target}{label};")
    lines.append("}")
    return "\n".join(lines) + "\n"
