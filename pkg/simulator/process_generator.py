"""Random block-structured process definitions, used to exercise the DSL and the engine."""
import random

from simulator.process import END, START, TASK, Edge, GatewayType, ProcessDefinition, build_process, gateway

SPLIT_JOIN_PAIRS = [
    (GatewayType.AND_SPLIT, GatewayType.AND_JOIN),
    (GatewayType.XOR_SPLIT, GatewayType.XOR_JOIN),
    (GatewayType.OR_SPLIT, GatewayType.OR_JOIN),
    (GatewayType.AND_SPLIT, GatewayType.MULTI_MERGE),
    (GatewayType.AND_SPLIT, GatewayType.DISCRIMINATOR),
    (GatewayType.AND_SPLIT, GatewayType.N_OF_M),
]

LABEL_WORDS = ["high", "low", "yes", "no", "retry-1", "fast lane", "v2.0", "ok?"]


class ProcessGenerator:
    """
    Builds valid nets out of nested blocks: single tasks, sequences,
    split/join pairs of every gateway kind and XOR loops.
    """

    def __init__(self, rng=None, max_depth=3, max_branches=3, label_probability=0.3):
        self.rng = rng if rng is not None else random.Random()
        self.max_depth = max_depth
        self.max_branches = max_branches
        self.label_probability = label_probability

    def generate(self, name="P") -> ProcessDefinition:
        self.nodes = [("s", START), ("e", END)]
        self.edges = []
        self.counter = 0
        entry, exit_ = self._block(0)
        self._connect("s", entry, labeled=False)
        self._connect(exit_, "e", labeled=False)
        result = build_process(name, self.nodes, self.edges)
        if not isinstance(result, ProcessDefinition):
            raise RuntimeError(f"generated an invalid net:\n{result}")
        return result

    def _new_id(self, prefix):
        self.counter += 1
        return f"{prefix}{self.counter}"

    def _connect(self, source, target, labeled=True):
        label = None
        if labeled and self.rng.random() < self.label_probability:
            label = self.rng.choice(LABEL_WORDS)
        self.edges.append(Edge(source, target, label))

    def _task(self):
        node_id = self._new_id("T")
        self.nodes.append((node_id, TASK))
        return node_id, node_id

    def _block(self, depth):
        roll = self.rng.random()
        if depth >= self.max_depth or roll < 0.35:
            return self._task()
        if roll < 0.55:
            return self._sequence(depth)
        if roll < 0.9:
            return self._split_join(depth)
        return self._loop(depth)

    def _sequence(self, depth):
        parts = [self._block(depth + 1) for _ in range(self.rng.randint(2, 3))]
        for (_, exit_), (entry, _) in zip(parts, parts[1:]):
            self._connect(exit_, entry, labeled=False)
        return parts[0][0], parts[-1][1]

    def _split_join(self, depth):
        split_type, join_type = self.rng.choice(SPLIT_JOIN_PAIRS)
        branches = [self._block(depth + 1) for _ in range(self.rng.randint(2, self.max_branches))]
        split_id = self._new_id("G")
        join_id = self._new_id("J")
        n = self.rng.randint(1, len(branches)) if join_type is GatewayType.N_OF_M else None
        self.nodes.append((split_id, gateway(split_type)))
        self.nodes.append((join_id, gateway(join_type, n)))
        for entry, exit_ in branches:
            self._connect(split_id, entry)
            self._connect(exit_, join_id)
        return split_id, join_id

    def _loop(self, depth):
        merge_id = self._new_id("M")
        self.nodes.append((merge_id, gateway(GatewayType.XOR_JOIN)))
        entry, exit_ = self._block(depth + 1)
        decide_id = self._new_id("L")
        self.nodes.append((decide_id, gateway(GatewayType.XOR_SPLIT)))
        self._connect(merge_id, entry, labeled=False)
        self._connect(exit_, decide_id, labeled=False)
        self._connect(decide_id, merge_id)
        return merge_id, decide_id


def generate_process(seed, name="P", **options) -> ProcessDefinition:
    return ProcessGenerator(random.Random(seed), **options).generate(name)
