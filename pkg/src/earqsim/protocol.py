"""Closed-loop reaction to sensing feedback.

Each feedback level maps to a reconfiguration action: hold on ACK, narrow
beam sweep on NACK, timed power escalation plus a full sweep on LOST, and
wide-beam search on NOT_FOUND. Retransmissions stop at a count limit or
when the target leaves the coverage area.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, replace
from typing import Callable, Sequence

from .detection import Feedback

# Continuous LOST time required before the transmit power steps up.
LOST_POWER_DELAY_S = 0.5

DEFAULT_MAX_RETRANSMISSIONS = 50

ProbeFn = Callable[[int, int], float]


@dataclass(frozen=True)
class PowerSchedule:
    """Strictly increasing transmit power levels in watts."""

    levels_w: tuple[float, ...] = (1e-4, 3e-4)

    def __post_init__(self) -> None:
        if not self.levels_w:
            raise ValueError("power schedule must have at least one level")
        if any(b <= a for a, b in zip(self.levels_w, self.levels_w[1:])):
            raise ValueError("power levels must be strictly increasing")


@dataclass(frozen=True)
class NodeConfig:
    """Joint Tx/Rx configuration: beam indices into each node's unified
    codebook list, the power level, and whether the wide tier is active."""

    tx_beam_index: int
    rx_beam_index: int
    power_level_index: int
    wide_mode: bool


class TerminationReason(enum.Enum):
    MAX_RETRANSMISSIONS = "MAX_RETRANSMISSIONS"
    OUT_OF_COVERAGE = "OUT_OF_COVERAGE"
    RUN_ENDED = "RUN_ENDED"


@dataclass(frozen=True)
class ProtocolState:
    config: NodeConfig
    lost_elapsed_s: float = 0.0
    retransmission_count: int = 0
    terminated: bool = False
    termination_reason: TerminationReason | None = None


@dataclass(frozen=True)
class BeamTiers:
    """Index sets of one node's codebook tiers in the unified beam list."""

    narrow: tuple[int, ...]
    wide: tuple[int, ...]

    @property
    def all(self) -> tuple[int, ...]:
        return self.narrow + self.wide


def beam_sweep(
    probe: ProbeFn,
    tx_candidates: Sequence[int],
    rx_candidates: Sequence[int],
) -> tuple[int, int, float]:
    """Exhaustive search over the candidate cross product.

    Returns the pair with the highest probed RESI; ties go to the lowest
    (tx_index, rx_index) pair.
    """
    if not tx_candidates or not rx_candidates:
        raise ValueError("beam sweep needs non-empty candidate lists")
    best: tuple[int, int] | None = None
    best_resi = -float("inf")
    for tx in tx_candidates:
        for rx in rx_candidates:
            value = probe(tx, rx)
            if best is None or value > best_resi or (
                value == best_resi and (tx, rx) < best
            ):
                best = (tx, rx)
                best_resi = value
    assert best is not None
    return best[0], best[1], best_resi


def react(
    feedback: Feedback,
    state: ProtocolState,
    probe: ProbeFn,
    dt_s: float,
    *,
    tx_tiers: BeamTiers,
    rx_tiers: BeamTiers,
    schedule: PowerSchedule,
    reduce_power_on_ack: bool = False,
) -> ProtocolState:
    """Apply one feedback reaction and return the next protocol state.

    The probe evaluates a candidate beam pair against the current scene and
    is only invoked for feedback that triggers a sweep (never on ACK).
    """
    if state.terminated:
        raise ValueError("cannot react on a terminated protocol state")
    cfg = state.config

    if feedback is Feedback.ACK:
        new_cfg = replace(cfg, wide_mode=False)
        if reduce_power_on_ack:
            new_cfg = replace(new_cfg, power_level_index=0)
        return replace(
            state, config=new_cfg, lost_elapsed_s=0.0, retransmission_count=0
        )

    if feedback is Feedback.NACK:
        tx, rx, _ = beam_sweep(probe, tx_tiers.narrow, rx_tiers.narrow)
        new_cfg = replace(cfg, tx_beam_index=tx, rx_beam_index=rx)
        return replace(
            state,
            config=new_cfg,
            lost_elapsed_s=0.0,
            retransmission_count=state.retransmission_count + 1,
        )

    if feedback is Feedback.LOST:
        elapsed = state.lost_elapsed_s + dt_s
        power = cfg.power_level_index
        if elapsed >= LOST_POWER_DELAY_S and power + 1 < len(schedule.levels_w):
            power += 1
            elapsed = 0.0
        tx, rx, _ = beam_sweep(probe, tx_tiers.all, rx_tiers.all)
        new_cfg = replace(
            cfg, tx_beam_index=tx, rx_beam_index=rx, power_level_index=power
        )
        return replace(
            state,
            config=new_cfg,
            lost_elapsed_s=elapsed,
            retransmission_count=state.retransmission_count + 1,
        )

    # NOT_FOUND: nothing is tracked, so search with the wide tier only
    tx, rx, _ = beam_sweep(probe, tx_tiers.wide, rx_tiers.wide)
    new_cfg = replace(cfg, tx_beam_index=tx, rx_beam_index=rx, wide_mode=True)
    return replace(
        state,
        config=new_cfg,
        lost_elapsed_s=0.0,
        retransmission_count=state.retransmission_count + 1,
    )


def terminated(
    state: ProtocolState,
    max_retransmissions: int,
    target_in_coverage: bool,
) -> TerminationReason | None:
    """Check the stop conditions; the retransmission limit wins when both
    hold."""
    if state.retransmission_count >= max_retransmissions:
        return TerminationReason.MAX_RETRANSMISSIONS
    if not target_in_coverage:
        return TerminationReason.OUT_OF_COVERAGE
    return None
