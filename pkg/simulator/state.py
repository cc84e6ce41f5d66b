from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Dict

from simulator.marking import Marking


class CaseStatus(str, Enum):
    RUNNING = "running"
    COMPLETED = "completed"
    COMPLETED_IMPROPERLY = "completed_improperly"
    DEADLOCKED = "deadlocked"


@dataclass(frozen=True)
class JoinState:
    """Round bookkeeping of one discriminator or n-of-m join."""
    fired: bool = False
    arrived: int = 0
    round: int = 0

    def arrive(self, threshold, in_degree):
        """
        Account for one consumed token.
        Returns the new state and whether the join fires downstream on this arrival.
        """
        arrived = self.arrived + 1
        fires = not self.fired and arrived == threshold
        if arrived == in_degree:
            return JoinState(fired=False, arrived=0, round=self.round + 1), fires
        return JoinState(fired=self.fired or fires, arrived=arrived, round=self.round), fires


@dataclass(frozen=True)
class CaseState:
    """The instantaneous state of one case: marking, join rounds and event counter."""
    case_id: str
    marking: Marking
    join_states: Dict[str, JoinState] = field(default_factory=dict)
    seq: int = 0
    status: CaseStatus = CaseStatus.RUNNING

    @property
    def is_running(self):
        return self.status is CaseStatus.RUNNING

    def canonical_key(self):
        """
        Identity used for state-space deduplication. Round counters are left
        out so loop nets stay finite; seq and case id are log metadata.
        """
        joins = tuple(sorted((node, js.fired, js.arrived) for node, js in self.join_states.items()))
        return self.marking.counts, joins, self.status

    def evolve(self, **changes):
        return replace(self, **changes)
