import pytest

from algorithm.deciders import SeededDecider
from dsl.parser import parse
from simulator.action import Enabled
from simulator.errors import (
    BadChoiceError, NotEnabledError, NotRunningError, OrJoinBoundError, ScriptShortError, StepLimitError,
    UnknownNodeError,
)
from simulator.logger import Event, EventKind, EventLog
from simulator.marking import Marking
from simulator.simulator import CaseSimulation, enabled_elements, fire, run_cases, run_to_completion, start_case
from simulator.state import CaseState, CaseStatus, JoinState
from tests.conftest import ALL_FIXTURES, load_fixture, script

AND_NET = ("process P { start s; end e; task B; task C; gateway and_split G1; gateway and_join G2; "
           "s -> G1; G1 -> B; G1 -> C; B -> G2; C -> G2; G2 -> e; }")


def state_with(definition, *edges, join_states=None):
    marking = Marking.empty(len(definition.edges))
    for edge in edges:
        marking = marking.add(edge)
    return CaseState("c1", marking, join_states if join_states is not None else {}, seq=1)


def trace(log):
    return [(event.kind.value, event.node) for event in log]


class TestStartCase:

    def test_sequence(self, sequence):
        case = start_case(sequence, "c1")
        assert case.marking.describe(sequence) == {"s->A": 1}
        assert case.seq == 1
        assert case.status is CaseStatus.RUNNING

    def test_and_net(self):
        definition = parse(AND_NET)
        assert start_case(definition, "c2").marking.describe(definition) == {"s->G1": 1}

    def test_join_states_zeroed(self, discriminator_loop):
        assert start_case(discriminator_loop, "c3").join_states == {"D": JoinState(fired=False, arrived=0, round=0)}

    def test_empty_case_id(self, sequence):
        with pytest.raises(ValueError):
            start_case(sequence, "")

    def test_start_straight_to_end(self):
        definition = parse("process P { start s; end e; s -> e; }")
        state, log = run_to_completion(definition, "c1")
        assert state.status is CaseStatus.COMPLETED
        assert trace(log) == [("case_started", None), ("case_completed", None)]


class TestEnabledElements:

    def test_sequence(self, sequence):
        assert enabled_elements(sequence, start_case(sequence, "c1")) == [Enabled("A")]

    def test_and_join_waits(self):
        definition = parse(AND_NET)
        assert enabled_elements(definition, state_with(definition, 3)) == []
        assert enabled_elements(definition, state_with(definition, 3, 4)) == [Enabled("G2")]

    def test_sorted_by_node_id(self):
        definition = parse(AND_NET)
        assert [e.node for e in enabled_elements(definition, state_with(definition, 2, 1))] == ["B", "C"]

    def test_choice_domains(self):
        xor = load_fixture("exclusive_choice")
        (element,) = enabled_elements(xor, start_case(xor, "c1"))
        assert element.choice_domain == ((1,), (2,), (3,))
        assert element.needs_decision

        multi = load_fixture("multi_choice")
        (element,) = enabled_elements(multi, start_case(multi, "c1"))
        assert element.choice_domain == ((1,), (2,), (1, 2), (3,), (1, 3), (2, 3), (1, 2, 3))

    def test_not_running(self, sequence):
        state, _ = run_to_completion(sequence, "c1")
        with pytest.raises(NotRunningError) as info:
            enabled_elements(sequence, state)
        assert info.value.code == "NOT_RUNNING"


class TestFire:

    def test_task(self, sequence):
        state, events = fire(sequence, start_case(sequence, "c1"), "A")
        assert state.marking.describe(sequence) == {"A->B": 1}
        assert events == [Event("c1", 1, EventKind.TASK_COMPLETED, "A")]
        assert state.seq == 2

    def test_xor_split_marks_one_edge(self):
        definition = load_fixture("exclusive_choice")
        state, events = fire(definition, start_case(definition, "c1"), "X", (3,))
        assert state.marking.describe(definition) == {"X->C": 1}
        assert events[0].detail == "escalate"

    def test_or_split_marks_chosen_subset(self):
        definition = load_fixture("multi_choice")
        state, events = fire(definition, start_case(definition, "c1"), "O", (1, 3))
        assert state.marking.describe(definition) == {"O->A": 1, "O->C": 1}
        assert events[0].detail == "A,C"

    def test_and_split_and_join(self):
        definition = parse(AND_NET)
        state, _ = fire(definition, start_case(definition, "c1"), "G1")
        assert state.marking.describe(definition) == {"G1->B": 1, "G1->C": 1}
        state, _ = fire(definition, state_with(definition, 3, 4), "G2")
        # the token on G2->e is consumed by the end node in the same step
        assert state.status is CaseStatus.COMPLETED
        assert state.marking.is_empty()

    def test_discriminator_round(self, discriminator_loop):
        definition = discriminator_loop
        state = state_with(definition, 5, 6, 7, join_states={"D": JoinState()})

        state, events = fire(definition, state, "D")
        assert [e.kind for e in events] == [EventKind.GATEWAY_FIRED]
        assert state.marking.describe(definition) == {"B->D": 1, "C->D": 1, "D->T": 1}
        assert state.join_states["D"] == JoinState(fired=True, arrived=1, round=0)

        state, events = fire(definition, state, "D")
        assert [e.kind for e in events] == [EventKind.TOKEN_ABSORBED]
        assert state.marking.describe(definition) == {"C->D": 1, "D->T": 1}
        assert state.join_states["D"] == JoinState(fired=True, arrived=2, round=0)

        state, events = fire(definition, state, "D")
        assert [e.kind for e in events] == [EventKind.TOKEN_ABSORBED]
        assert state.marking.describe(definition) == {"D->T": 1}
        assert state.join_states["D"] == JoinState(fired=False, arrived=0, round=1)

    def test_n_of_m_fires_on_second_arrival(self, n_of_m_loop):
        state = state_with(n_of_m_loop, 5, 6, 7, join_states={"D": JoinState()})
        kinds = []
        for _ in range(3):
            state, events = fire(n_of_m_loop, state, "D")
            kinds.extend(e.kind for e in events)
        assert kinds == [EventKind.TOKEN_ABSORBED, EventKind.GATEWAY_FIRED, EventKind.TOKEN_ABSORBED]
        assert state.join_states["D"].round == 1

    def test_multi_merge_passes_every_token(self):
        definition = load_fixture("multi_merge")
        # A->MM, B->MM, C->MM are edges 4, 5, 6; MM->D is 7
        state = state_with(definition, 4, 5, 6, join_states={"N": JoinState()})
        for _ in range(3):
            state, _ = fire(definition, state, "MM")
        assert state.marking.describe(definition) == {"MM->D": 3}

    def test_not_enabled(self, sequence):
        with pytest.raises(NotEnabledError) as info:
            fire(sequence, start_case(sequence, "c1"), "B")
        assert info.value.code == "NOT_ENABLED"

    def test_bad_choice(self):
        definition = load_fixture("exclusive_choice")
        with pytest.raises(BadChoiceError) as info:
            fire(definition, start_case(definition, "c1"), "X", (1, 2))
        assert info.value.code == "BAD_CHOICE"

    def test_unknown_node(self, sequence):
        with pytest.raises(UnknownNodeError):
            fire(sequence, start_case(sequence, "c1"), "Z")

    def test_improper_completion_detail(self):
        definition = load_fixture("and_xor_mismatch")
        state = state_with(definition, 4, 5, 6)
        state, events = fire(definition, state, "M")
        assert state.status is CaseStatus.COMPLETED_IMPROPERLY
        assert events[-1] == Event("c1", 2, EventKind.CASE_COMPLETED_IMPROPERLY, detail="2 token(s) left")


class TestJoinState:

    @pytest.mark.parametrize("threshold, in_degree, expected", [
        (1, 3, [True, False, False]),
        (2, 3, [False, True, False]),
        (3, 3, [False, False, True]),
        (1, 2, [True, False, True, False]),
    ])
    def test_fires(self, threshold, in_degree, expected):
        join, fired = JoinState(), []
        for _ in expected:
            join, fires = join.arrive(threshold, in_degree)
            fired.append(fires)
            assert join.arrived < in_degree
            assert join.fired == (join.arrived >= threshold)
        assert fired == expected


class TestRunToCompletion:

    def test_sequence_trace(self, sequence):
        state, log = run_to_completion(sequence, "c1")
        assert state.status is CaseStatus.COMPLETED
        assert trace(log) == [
            ("case_started", None),
            ("task_completed", "A"),
            ("task_completed", "B"),
            ("task_completed", "C"),
            ("case_completed", None),
        ]

    def test_xor_into_and_join_deadlocks(self):
        state, log = run_to_completion(load_fixture("xor_and_mismatch"), "c1")
        assert state.status is CaseStatus.DEADLOCKED
        assert log[-1].kind is EventKind.CASE_DEADLOCKED
        assert log[-1].detail == "1 token(s) stuck"

    @pytest.mark.parametrize("seed", [None, 1, 2, 3])
    def test_and_into_xor_join_completes_improperly(self, seed):
        state, log = run_to_completion(load_fixture("and_xor_mismatch"), "c1", scheduler_seed=seed)
        assert state.status is CaseStatus.COMPLETED_IMPROPERLY
        assert log[-1].detail == "2 token(s) left"

    def test_scripted_discriminator_loop(self, discriminator_loop, two_round_script):
        state, log = run_to_completion(discriminator_loop, "c1", script(two_round_script))
        assert state.status is CaseStatus.COMPLETED
        assert len(log.of_kind(EventKind.GATEWAY_FIRED, "D")) == 2
        assert len(log.of_kind(EventKind.TOKEN_ABSORBED, "D")) == 4
        assert [e.detail for e in log.of_kind(EventKind.GATEWAY_FIRED, "L")] == ["again", "done"]

    def test_step_limit(self, discriminator_loop):
        # the deterministic decider always takes the loop edge
        with pytest.raises(StepLimitError) as info:
            run_to_completion(discriminator_loop, "c1", step_limit=50)
        error = info.value
        assert error.code == "STEP_LIMIT"
        assert len(error.log) == 51
        assert error.state.is_running

    def test_script_short(self, discriminator_loop):
        with pytest.raises(ScriptShortError) as info:
            run_to_completion(discriminator_loop, "c1", script("L again\n"))
        assert info.value.code == "SCRIPT_SHORT"
        assert len(info.value.log.of_kind(EventKind.GATEWAY_FIRED, "L")) == 1

    def test_bad_script_choice_keeps_partial_log(self, discriminator_loop):
        with pytest.raises(BadChoiceError) as info:
            run_to_completion(discriminator_loop, "c1", script("L again\nL maybe\n"))
        error = info.value
        assert error.code == "BAD_CHOICE"
        assert len(error.log.of_kind(EventKind.GATEWAY_FIRED, "L")) == 1
        assert error.state.is_running

    def test_or_join_bound(self):
        definition = load_fixture("synchronizing_merge")
        with pytest.raises(OrJoinBoundError) as info:
            run_to_completion(definition, "c1", script("O short,long"), or_join_bound=1)
        assert info.value.code == "ORJOIN_BOUND"

    @pytest.mark.parametrize("name", ALL_FIXTURES)
    def test_seq_gapless(self, name):
        definition = load_fixture(name)
        for seed in range(10):
            _, log = run_to_completion(definition, "c1", SeededDecider(seed), seed)
            assert [event.seq for event in log] == list(range(len(log)))
            assert log[0].kind is EventKind.CASE_STARTED

    def test_same_seed_same_log(self):
        definition = load_fixture("multi_choice")
        first = run_to_completion(definition, "c1", SeededDecider(11), 11)[1].to_jsonl()
        second = run_to_completion(definition, "c1", SeededDecider(11), 11)[1].to_jsonl()
        assert first == second

    def test_step_by_step(self, sequence):
        simulation = CaseSimulation(sequence, "c1")
        assert simulation.step()
        assert simulation.step()
        assert not simulation.step()
        assert simulation.state.status is CaseStatus.COMPLETED


class TestRunCases:

    def test_parallel_cases_match_sequential(self):
        definition = load_fixture("multi_merge")
        case_ids = [f"c{i}" for i in range(8)]
        results = run_cases(definition, case_ids, lambda case_id: SeededDecider(int(case_id[1:])),
                            max_workers=4)
        assert [state.case_id for state, _ in results] == case_ids
        for case_id, (state, log) in zip(case_ids, results):
            _, expected = run_to_completion(definition, case_id, SeededDecider(int(case_id[1:])))
            assert log.to_jsonl() == expected.to_jsonl()
            assert state.status is CaseStatus.COMPLETED


class TestEventLog:

    def test_jsonl_fields(self, sequence):
        _, log = run_to_completion(sequence, "c1")
        lines = log.to_jsonl().splitlines()
        assert lines[0] == '{"case": "c1", "seq": 0, "kind": "case_started"}'
        assert lines[1] == '{"case": "c1", "seq": 1, "kind": "task_completed", "node": "A"}'
        assert EventLog.from_jsonl(log.to_jsonl()).events == log.events

    def test_gap_rejected(self):
        log = EventLog([Event("c1", 0, EventKind.CASE_STARTED)])
        with pytest.raises(ValueError):
            log.append(Event("c1", 2, EventKind.TASK_COMPLETED, "A"))
