from pathlib import Path

import pytest

from algorithm.deciders import ScriptedDecider, parse_script
from dsl.parser import load_process, parse

DATA_DIR = Path(__file__).resolve().parent.parent / "data"

PATTERN_FIXTURES = [
    "sequence",
    "parallel_split",
    "synchronization",
    "exclusive_choice",
    "simple_merge",
    "multi_choice",
    "synchronizing_merge",
    "multi_merge",
    "discriminator_loop",
    "n_of_m_loop",
]

OR_JOIN_FIXTURES = [
    "multi_choice",
    "synchronizing_merge",
    "or_nested",
    "or_with_and",
    "or_with_xor",
    "or_loop",
]

ALL_FIXTURES = sorted(path.stem for path in DATA_DIR.glob("*.wfp"))


def load_fixture(name):
    return load_process(DATA_DIR / f"{name}.wfp")


def script(text):
    return ScriptedDecider(parse_script(text))


def and_net(k, tasks_per_branch=1):
    """and_split of k branches, each a chain of tasks, into an and_join."""
    lines = ["process And {", "start s;", "end e;", "gateway and_split P;", "gateway and_join J;", "s -> P;", "J -> e;"]
    for branch in range(k):
        chain = [f"B{branch}_{i}" for i in range(tasks_per_branch)]
        lines.extend(f"task {task};" for task in chain)
        lines.append(f"P -> {chain[0]};")
        lines.extend(f"{a} -> {b};" for a, b in zip(chain, chain[1:]))
        lines.append(f"{chain[-1]} -> J;")
    lines.append("}")
    return parse("\n".join(lines))


@pytest.fixture
def sequence():
    return load_fixture("sequence")


@pytest.fixture
def discriminator_loop():
    return load_fixture("discriminator_loop")


@pytest.fixture
def n_of_m_loop():
    return load_fixture("n_of_m_loop")


@pytest.fixture
def two_round_script():
    return (DATA_DIR / "discriminator_loop.script").read_text(encoding="utf-8")
