"""
Case event log: the ordered record of lifecycle events of one case, and its
JSON-lines encoding.
"""
import json
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Iterator, List, Optional


class EventKind(str, Enum):
    CASE_STARTED = "case_started"
    TASK_COMPLETED = "task_completed"
    GATEWAY_FIRED = "gateway_fired"
    TOKEN_ABSORBED = "token_absorbed"
    CASE_COMPLETED = "case_completed"
    CASE_COMPLETED_IMPROPERLY = "case_completed_improperly"
    CASE_DEADLOCKED = "case_deadlocked"


@dataclass(frozen=True)
class Event:
    case_id: str
    seq: int
    kind: EventKind
    node: Optional[str] = None
    detail: Optional[str] = None

    def to_record(self):
        record = {"case": self.case_id, "seq": self.seq, "kind": self.kind.value}
        if self.node is not None:
            record["node"] = self.node
        if self.detail:
            record["detail"] = self.detail
        return record

    @classmethod
    def from_record(cls, record):
        return cls(
            case_id=record["case"],
            seq=record["seq"],
            kind=EventKind(record["kind"]),
            node=record.get("node"),
            detail=record.get("detail"),
        )


class EventLog:
    """Events of one case in seq order."""

    def __init__(self, events: Iterable[Event] = ()):
        self.events: List[Event] = list(events)

    def append(self, event: Event):
        if self.events and event.seq != self.events[-1].seq + 1:
            raise ValueError(f"event seq {event.seq} does not follow {self.events[-1].seq}")
        self.events.append(event)

    def extend(self, events: Iterable[Event]):
        for event in events:
            self.append(event)

    def __iter__(self) -> Iterator[Event]:
        return iter(self.events)

    def __len__(self):
        return len(self.events)

    def __getitem__(self, index):
        return self.events[index]

    def of_kind(self, kind: EventKind, node=None):
        return [e for e in self.events if e.kind is kind and (node is None or e.node == node)]

    def to_jsonl(self):
        return "".join(json.dumps(event.to_record()) + "\n" for event in self.events)

    def write(self, stream):
        stream.write(self.to_jsonl())

    @classmethod
    def from_jsonl(cls, text):
        return cls(Event.from_record(json.loads(line)) for line in text.splitlines() if line.strip())
