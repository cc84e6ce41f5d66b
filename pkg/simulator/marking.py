from dataclasses import dataclass
from typing import Dict, List, Tuple


@dataclass(frozen=True)
class Marking:
    """Multiset of tokens over edge positions; one token is one thread of control."""
    counts: Tuple[int, ...]

    @classmethod
    def empty(cls, size):
        return cls((0,) * size)

    @classmethod
    def initial(cls, definition):
        """Exactly one token on the start node's outgoing edge."""
        return cls.empty(len(definition.edges)).add(definition.start_edge)

    def count(self, edge):
        return self.counts[edge]

    def is_marked(self, edge):
        return self.counts[edge] > 0

    def add(self, edge, tokens=1):
        counts = list(self.counts)
        counts[edge] += tokens
        return Marking(tuple(counts))

    def remove(self, edge, tokens=1):
        if self.counts[edge] < tokens:
            raise ValueError(f"edge {edge} holds {self.counts[edge]} token(s), cannot remove {tokens}")
        counts = list(self.counts)
        counts[edge] -= tokens
        return Marking(tuple(counts))

    @property
    def total(self):
        return sum(self.counts)

    def is_empty(self):
        return not any(self.counts)

    def marked_edges(self) -> List[int]:
        return [edge for edge, count in enumerate(self.counts) if count]

    def items(self) -> Tuple[Tuple[int, int], ...]:
        """Sorted (edge, count) pairs for the marked edges."""
        return tuple((edge, count) for edge, count in enumerate(self.counts) if count)

    def describe(self, definition) -> Dict[str, int]:
        return {definition.edges[edge].ref: count for edge, count in self.items()}
