"""
Case execution: starting cases, computing enabled elements, firing them and
driving a case to termination under a decider and a scheduler.
"""
import logging
import random
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, List, Optional, Sequence, Tuple

from algorithm.api import Decider
from algorithm.deciders import DeterministicDecider
from simulator.action import DEFAULT, Choice, Enabled, choice_domain
from simulator.errors import (
    BadChoiceError, CaseRunError, NotEnabledError, NotRunningError, OrJoinBoundError, StepLimitError,
)
from simulator.logger import Event, EventKind, EventLog
from simulator.or_join import BoundExceeded, evaluate_or_join
from simulator.process import ProcessDefinition
from simulator.rules import apply_firing, enabled_nodes, end_arrived, initial_state
from simulator.settings import DEFAULT_OR_JOIN_BOUND, DEFAULT_STEP_LIMIT
from simulator.state import CaseState, CaseStatus

logger = logging.getLogger(__name__)


def _open_case(definition, case_id) -> Tuple[CaseState, List[Event]]:
    if not case_id:
        raise ValueError("case_id must be non-empty")
    state = initial_state(definition, case_id).evolve(seq=1)
    events = [Event(case_id, 0, EventKind.CASE_STARTED)]
    if end_arrived(definition, state):
        state, more = apply_firing(definition, state, definition.end)
        events.extend(more)
    return state, events


def start_case(definition: ProcessDefinition, case_id) -> CaseState:
    """
    New case with one token on the start node's outgoing edge and zeroed join
    states. CaseStarted takes seq 0, so the returned state continues at seq 1.
    """
    return _open_case(definition, case_id)[0]


def enabled_elements(definition, case: CaseState, or_join_bound=DEFAULT_OR_JOIN_BOUND) -> List[Enabled]:
    if not case.is_running:
        raise NotRunningError(f"case {case.case_id!r} is {case.status.value}")

    def or_join_rule(join):
        verdict = evaluate_or_join(definition, case, join, or_join_bound)
        if isinstance(verdict, BoundExceeded):
            raise OrJoinBoundError(f"or_join {join!r} needs more than {or_join_bound} states to decide")
        return verdict

    return [Enabled(node, choice_domain(definition, node)) for node in enabled_nodes(definition, case, or_join_rule)]


def _fire_unchecked(definition, case, node, choice):
    state, events = apply_firing(definition, case, node, choice)
    if state.is_running and end_arrived(definition, state):
        # a token reaching the end node is consumed in the same step
        state, more = apply_firing(definition, state, definition.end)
        events = events + more
    return state, events


def fire(definition, case: CaseState, node, choice: Choice = DEFAULT,
         or_join_bound=DEFAULT_OR_JOIN_BOUND) -> Tuple[CaseState, List[Event]]:
    """Fire one enabled node with a choice from its domain; returns the new state and its events."""
    definition.kind(node)
    enabled = {element.node: element for element in enabled_elements(definition, case, or_join_bound)}
    if node not in enabled:
        raise NotEnabledError(f"{node!r} is not enabled in case {case.case_id!r}")
    if tuple(choice) not in enabled[node].choice_domain:
        raise BadChoiceError(f"{tuple(choice)!r} is not a choice of {node!r}")
    return _fire_unchecked(definition, case, node, tuple(choice))


class CaseSimulation:
    """
    Handles the main loop of one case: pick an enabled element, resolve its
    decision, fire it, until the case leaves the running status.
    """

    def __init__(self, definition: ProcessDefinition, case_id, decider: Optional[Decider] = None,
                 scheduler_seed=None, or_join_bound=DEFAULT_OR_JOIN_BOUND, step_limit=DEFAULT_STEP_LIMIT):
        self.definition = definition
        self.decider = decider if decider is not None else DeterministicDecider()
        self.scheduler = random.Random(scheduler_seed) if scheduler_seed is not None else None
        self.or_join_bound = or_join_bound
        self.step_limit = step_limit
        self.steps = 0

        self.state, events = _open_case(definition, case_id)
        self.log = EventLog(events)

    def _pick(self, enabled):
        if self.scheduler is None:
            return enabled[0]
        return self.scheduler.choice(enabled)

    def step(self):
        """
        One firing. Returns whether the case is still running afterwards.
        """
        enabled = enabled_elements(self.definition, self.state, self.or_join_bound)
        if not enabled:
            self.log.append(Event(self.state.case_id, self.state.seq, EventKind.CASE_DEADLOCKED,
                                  detail=f"{self.state.marking.total} token(s) stuck"))
            self.state = self.state.evolve(seq=self.state.seq + 1, status=CaseStatus.DEADLOCKED)
            return False
        if self.steps >= self.step_limit:
            raise StepLimitError(f"case {self.state.case_id!r} still running after {self.step_limit} steps")

        element = self._pick(enabled)
        choice = element.choice_domain[0]
        if element.needs_decision:
            choice = self.decider.choose(self.definition, self.state, element)
        self.state, events = _fire_unchecked(self.definition, self.state, element.node, choice)
        self.log.extend(events)
        self.steps += 1
        logger.debug("case %s: fired %s", self.state.case_id, element.node)
        return self.state.is_running

    def run(self) -> Tuple[CaseState, EventLog]:
        try:
            while self.state.is_running:
                self.step()
        except (CaseRunError, BadChoiceError) as error:
            if error.log is None:
                error.log = self.log
            if error.state is None:
                error.state = self.state
            logger.warning("case %s aborted: %s", self.state.case_id, error)
            raise
        logger.info("case %s %s after %d step(s)", self.state.case_id, self.state.status.value, self.steps)
        return self.state, self.log


def run_to_completion(definition, case_id, decider: Optional[Decider] = None, scheduler_seed=None,
                      or_join_bound=DEFAULT_OR_JOIN_BOUND, step_limit=DEFAULT_STEP_LIMIT) -> Tuple[CaseState, EventLog]:
    """
    Drive one case until it completes, completes improperly or deadlocks.

    The scheduler fires the smallest enabled node id, or picks uniformly with
    random.Random(scheduler_seed) when a seed is given.
    """
    simulation = CaseSimulation(definition, case_id, decider, scheduler_seed, or_join_bound, step_limit)
    return simulation.run()


def run_cases(definition, case_ids: Sequence[str],
              decider_factory: Callable[[str], Decider] = lambda case_id: DeterministicDecider(),
              scheduler_seed=None, or_join_bound=DEFAULT_OR_JOIN_BOUND, step_limit=DEFAULT_STEP_LIMIT,
              max_workers=None) -> List[Tuple[CaseState, EventLog]]:
    """Run several cases of one shared definition in a thread pool; results follow case_ids order."""

    def run_one(case_id):
        return run_to_completion(definition, case_id, decider_factory(case_id), scheduler_seed,
                                 or_join_bound, step_limit)

    with ThreadPoolExecutor(max_workers=max_workers) as executor:
        return list(executor.map(run_one, case_ids))
