"""Dual-threshold detection with sensing memory.

Each RESI measurement is compared against a pass and a fail threshold,
giving a three-way outcome. The memory of earlier outcomes disambiguates
the below-fail case into LOST (a previously acknowledged target vanished)
versus NOT_FOUND (nothing was being tracked).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, replace


class Outcome(enum.Enum):
    DETECTED = "DETECTED"
    POSSIBLE = "POSSIBLE"
    ABSENT = "ABSENT"


class Feedback(enum.Enum):
    ACK = "ACK"
    NACK = "NACK"
    LOST = "LOST"
    NOT_FOUND = "NOT_FOUND"


@dataclass(frozen=True)
class Thresholds:
    """Pass (ack) and fail (nack) thresholds on the RESI, in dB."""

    ack_db: float
    nack_db: float

    def __post_init__(self) -> None:
        if not self.ack_db > self.nack_db:
            raise ValueError("ack_db must be strictly greater than nack_db")


DEFAULT_THRESHOLDS = Thresholds(ack_db=10.0, nack_db=0.0)

DEFAULT_MEMORY_CAPACITY = 20  # 2 s of history at the 0.1 s sampling rate


@dataclass(frozen=True)
class MemoryEntry:
    time_s: float
    outcome: Outcome
    feedback: Feedback
    rx_beam_index: int
    tx_beam_index: int


@dataclass(frozen=True)
class SensingMemory:
    """Bounded FIFO of past detection results plus tracking status.

    tracked turns on with the first ACK and stays on until a NOT_FOUND is
    issued; a LOST stretch keeps it on so that recovery attempts continue.
    """

    history: tuple[MemoryEntry, ...] = ()
    capacity: int = DEFAULT_MEMORY_CAPACITY
    last_ack_time: float | None = None
    tracked: bool = False

    @classmethod
    def empty(cls, capacity: int = DEFAULT_MEMORY_CAPACITY) -> "SensingMemory":
        if capacity < 1:
            raise ValueError("memory capacity must be >= 1")
        return cls(history=(), capacity=capacity, last_ack_time=None, tracked=False)


def classify(resi_db: float, thresholds: Thresholds) -> Outcome:
    """Three-way detection outcome. Boundary values go to the upper class."""
    if resi_db >= thresholds.ack_db:
        return Outcome.DETECTED
    if resi_db >= thresholds.nack_db:
        return Outcome.POSSIBLE
    return Outcome.ABSENT


def decide_feedback(outcome: Outcome, memory: SensingMemory) -> Feedback:
    """Map the detection outcome to four-level feedback using memory."""
    if outcome is Outcome.DETECTED:
        return Feedback.ACK
    if outcome is Outcome.POSSIBLE:
        return Feedback.NACK
    return Feedback.LOST if memory.tracked else Feedback.NOT_FOUND


def update_memory(
    memory: SensingMemory,
    time_s: float,
    outcome: Outcome,
    feedback: Feedback,
    tx_beam_index: int,
    rx_beam_index: int,
) -> SensingMemory:
    """Append one result, evicting the oldest entry at capacity."""
    if memory.history and time_s <= memory.history[-1].time_s:
        raise ValueError("memory updates require strictly increasing time")
    entry = MemoryEntry(time_s, outcome, feedback, rx_beam_index, tx_beam_index)
    history = (memory.history + (entry,))[-memory.capacity:]
    tracked = memory.tracked
    last_ack = memory.last_ack_time
    if feedback is Feedback.ACK:
        tracked = True
        last_ack = time_s
    elif feedback is Feedback.NOT_FOUND:
        tracked = False
    return replace(
        memory, history=history, tracked=tracked, last_ack_time=last_ack
    )
