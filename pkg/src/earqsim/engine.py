"""Time-stepped scenario execution and the Monte Carlo harness.

A scenario advances a straight-moving target at a fixed sampling interval.
Each step measures the echo over the best available physical path (direct,
or a single wall bounce when the direct view is blocked), classifies the
measurement, issues feedback and reacts to it. The Monte Carlo harness
repeats runs over random straight trajectories with per-run seeds derived
from one master seed, so results do not depend on execution order.
"""

from __future__ import annotations

import enum
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from .detection import (
    DEFAULT_MEMORY_CAPACITY,
    Feedback,
    Outcome,
    SensingMemory,
    Thresholds,
    classify,
    decide_feedback,
    update_memory,
)
from .geometry import Obstacle, Vec2, Wall, los_clear, reflected_path
from .link_budget import (
    RESI_FLOOR_DB,
    LinkParams,
    bistatic_echo_power,
    noise_power,
    perturbed_resi,
    resi,
    ue_snr,
)
from .phased_array import ArrayConfig, Codebook, array_gain, make_codebook
from .protocol import (
    DEFAULT_MAX_RETRANSMISSIONS,
    BeamTiers,
    NodeConfig,
    PowerSchedule,
    ProtocolState,
    TerminationReason,
    react,
    terminated,
)

HALF_PI = math.pi / 2.0


class PathKind(enum.Enum):
    DIRECT = "DIRECT"
    WALL_REFLECTED = "WALL_REFLECTED"
    NONE = "NONE"


@dataclass(frozen=True)
class PathInfo:
    """Echo path geometry for one step.

    For a wall bounce, range_target_to_rx is the full bounce length and
    angle_at_rx points from the receiver toward the reflection point.
    Ranges and angles are meaningless when kind is NONE.
    """

    kind: PathKind
    range_tx_to_target: float = 0.0
    range_target_to_rx: float = 0.0
    angle_at_tx: float = 0.0
    angle_at_rx: float = 0.0


NO_PATH = PathInfo(kind=PathKind.NONE)


@dataclass(frozen=True)
class Rect:
    x_min: float
    x_max: float
    y_min: float
    y_max: float

    def __post_init__(self) -> None:
        if not (self.x_max > self.x_min and self.y_max > self.y_min):
            raise ValueError("rectangle must have positive extent")

    def contains(self, p: Vec2) -> bool:
        return self.x_min <= p.x <= self.x_max and self.y_min <= p.y <= self.y_max


# Trajectory sampling region; doubles as the coverage boundary.
DEFAULT_REGION = Rect(-35.0, 25.0, 10.0, 60.0)


@dataclass(frozen=True)
class Scenario:
    """Full description of one run; see docs/scenario_schema.md for units."""

    tx_array: ArrayConfig
    rx_array: ArrayConfig
    obstacles: tuple[Obstacle, ...]
    wall: Wall | None
    target_start: Vec2
    target_velocity: Vec2
    duration_s: float
    dt_s: float
    link: LinkParams
    thresholds: Thresholds
    power_schedule: PowerSchedule
    rng_seed: int
    sector: tuple[float, float] = (-math.pi / 3.0, math.pi / 3.0)
    n_narrow_beams: int = 18
    wide_element_counts: tuple[int, ...] = (4,)
    max_retransmissions: int = DEFAULT_MAX_RETRANSMISSIONS
    memory_capacity: int = DEFAULT_MEMORY_CAPACITY
    coverage_region: Rect = DEFAULT_REGION

    def __post_init__(self) -> None:
        if self.dt_s <= 0:
            raise ValueError("dt_s must be positive")
        if self.duration_s < 0:
            raise ValueError("duration_s must be >= 0")
        if self.target_velocity.norm() <= 0:
            raise ValueError("target speed must be positive")

    def target_position(self, time_s: float) -> Vec2:
        return self.target_start + self.target_velocity.scaled(time_s)


@dataclass(frozen=True)
class StepRecord:
    time_s: float
    target_position: Vec2
    path_kind: PathKind
    nlos: bool
    resi_db: float
    resi_noise_free_db: float
    outcome: Outcome
    feedback: Feedback
    tx_beam_index: int
    rx_beam_index: int
    power_w: float
    ue_snr_db: float


@dataclass(frozen=True)
class Trace:
    records: tuple[StepRecord, ...]
    termination: TerminationReason
    final_state: ProtocolState
    final_memory: SensingMemory


@dataclass(frozen=True)
class StatsTable:
    """Aggregated feedback shares (percent of sensing iterations), blocked
    line-of-sight share, and the share of trajectories that needed a power
    increase at least once."""

    ack_pct: float
    nack_pct: float
    lost_pct: float
    notfound_pct: float
    nlos_pct: float
    additional_resources_pct: float
    run_count: int


class _Node:
    """One gNB: array plus its codebook, with world-frame gain lookups."""

    def __init__(self, array: ArrayConfig, codebook: Codebook) -> None:
        self.array = array
        self.codebook = codebook
        self.beams = codebook.beams
        self.tiers = BeamTiers(
            narrow=codebook.narrow_indices, wide=codebook.wide_indices
        )

    def gain(self, beam_index: int, world_angle: float) -> float:
        """Beam power gain toward a world-frame direction; the back
        half-plane radiates nothing."""
        rel = _wrap(world_angle - self.array.boresight)
        if abs(rel) > HALF_PI:
            return 0.0
        return array_gain(self.array, self.beams[beam_index], rel)

    def in_sector(self, world_angle: float) -> bool:
        rel = _wrap(world_angle - self.array.boresight)
        lo, hi = self.codebook.sector
        return lo <= rel <= hi


@dataclass(frozen=True)
class SimContext:
    """Scenario with derived objects built once per run."""

    scenario: Scenario
    tx: _Node = field(repr=False)
    rx: _Node = field(repr=False)
    noise_w: float = 0.0


def _wrap(angle: float) -> float:
    return (angle + math.pi) % (2.0 * math.pi) - math.pi


def prepare(scenario: Scenario) -> SimContext:
    tx = _Node(
        scenario.tx_array,
        make_codebook(
            scenario.tx_array,
            scenario.sector,
            scenario.n_narrow_beams,
            scenario.wide_element_counts,
        ),
    )
    rx = _Node(
        scenario.rx_array,
        make_codebook(
            scenario.rx_array,
            scenario.sector,
            scenario.n_narrow_beams,
            scenario.wide_element_counts,
        ),
    )
    noise_w = noise_power(scenario.link.bandwidth_hz, scenario.link.noise_figure_db)
    return SimContext(scenario=scenario, tx=tx, rx=rx, noise_w=noise_w)


def initial_state(ctx: SimContext) -> ProtocolState:
    """Start wide: nothing is known about the target yet, so both nodes use
    the middle wide beam at the lowest power level."""

    def mid_wide(node: _Node) -> int:
        wide = node.tiers.wide
        return wide[len(wide) // 2] if wide else node.tiers.narrow[len(node.tiers.narrow) // 2]

    return ProtocolState(
        config=NodeConfig(
            tx_beam_index=mid_wide(ctx.tx),
            rx_beam_index=mid_wide(ctx.rx),
            power_level_index=0,
            wide_mode=True,
        )
    )


def best_physical_path(scenario: Scenario, target: Vec2) -> PathInfo:
    """Pick the echo route for the current target position.

    The transmit leg must be clear; on the receive side a clear direct view
    wins, otherwise a single wall bounce is tried. Anything else means no
    usable echo path.
    """
    tx_pos = scenario.tx_array.position
    rx_pos = scenario.rx_array.position
    if target == tx_pos or target == rx_pos:
        raise ValueError("target coincides with a node position")
    obstacles = scenario.obstacles
    if not los_clear(tx_pos, target, obstacles):
        return NO_PATH
    r_tx = tx_pos.distance_to(target)
    angle_tx = tx_pos.bearing_to(target)
    if los_clear(target, rx_pos, obstacles):
        return PathInfo(
            kind=PathKind.DIRECT,
            range_tx_to_target=r_tx,
            range_target_to_rx=target.distance_to(rx_pos),
            angle_at_tx=angle_tx,
            angle_at_rx=rx_pos.bearing_to(target),
        )
    wall = scenario.wall
    if wall is None:
        return NO_PATH
    side_t = wall.side_of(target)
    side_r = wall.side_of(rx_pos)
    if side_t == 0 or side_r == 0 or (side_t > 0) != (side_r > 0):
        return NO_PATH
    bounce = reflected_path(target, rx_pos, wall, obstacles)
    if bounce is None:
        return NO_PATH
    return PathInfo(
        kind=PathKind.WALL_REFLECTED,
        range_tx_to_target=r_tx,
        range_target_to_rx=bounce.total_length,
        angle_at_tx=angle_tx,
        angle_at_rx=bounce.arrival_angle,
    )


def _noise_free_resi(
    ctx: SimContext, path: PathInfo, tx_beam: int, rx_beam: int, power_w: float
) -> float:
    if path.kind is PathKind.NONE:
        return RESI_FLOOR_DB
    gain_tx = ctx.tx.gain(tx_beam, path.angle_at_tx)
    gain_rx = ctx.rx.gain(rx_beam, path.angle_at_rx)
    params = replace(ctx.scenario.link, tx_power_w=power_w)
    echo = bistatic_echo_power(
        params, gain_tx, gain_rx, path.range_tx_to_target, path.range_target_to_rx
    )
    if path.kind is PathKind.WALL_REFLECTED:
        echo /= 10.0 ** (ctx.scenario.link.wall_loss_db / 10.0)
    return resi(echo, ctx.noise_w)


def target_in_coverage(ctx: SimContext, target: Vec2) -> bool:
    """Inside the trajectory region and within both codebook sectors."""
    if not ctx.scenario.coverage_region.contains(target):
        return False
    for node in (ctx.tx, ctx.rx):
        if target == node.array.position:
            return False
        if not node.in_sector(node.array.position.bearing_to(target)):
            return False
    return True


def step(
    scenario: Scenario,
    state: ProtocolState,
    memory: SensingMemory,
    time_s: float,
    rng: np.random.Generator,
    ctx: SimContext | None = None,
) -> tuple[StepRecord, ProtocolState, SensingMemory]:
    """One sensing iteration: measure, classify, feed back, react.

    The reaction's beam sweep probes the same deterministic geometry as the
    measurement (no extra noise draws), so a step always consumes exactly
    one random draw.
    """
    if state.terminated:
        raise ValueError("cannot step a terminated run")
    if ctx is None:
        ctx = prepare(scenario)
    pos = scenario.target_position(time_s)
    path = best_physical_path(scenario, pos)
    nlos = not los_clear(pos, scenario.rx_array.position, scenario.obstacles)
    power_w = scenario.power_schedule.levels_w[state.config.power_level_index]

    resi_nf = _noise_free_resi(
        ctx, path, state.config.tx_beam_index, state.config.rx_beam_index, power_w
    )
    resi_meas = perturbed_resi(resi_nf, scenario.link.resi_noise_std_db, rng)
    outcome = classify(resi_meas, scenario.thresholds)
    feedback = decide_feedback(outcome, memory)
    new_memory = update_memory(
        memory,
        time_s,
        outcome,
        feedback,
        state.config.tx_beam_index,
        state.config.rx_beam_index,
    )

    ue_gain = ctx.tx.gain(
        state.config.tx_beam_index, scenario.tx_array.position.bearing_to(pos)
    )
    snr = ue_snr(
        replace(scenario.link, tx_power_w=power_w),
        ue_gain,
        scenario.tx_array.position.distance_to(pos),
    )

    record = StepRecord(
        time_s=time_s,
        target_position=pos,
        path_kind=path.kind,
        nlos=nlos,
        resi_db=resi_meas,
        resi_noise_free_db=resi_nf,
        outcome=outcome,
        feedback=feedback,
        tx_beam_index=state.config.tx_beam_index,
        rx_beam_index=state.config.rx_beam_index,
        power_w=power_w,
        ue_snr_db=snr,
    )

    gain_cache_tx: dict[int, float] = {}
    gain_cache_rx: dict[int, float] = {}

    def probe(tx_beam: int, rx_beam: int) -> float:
        if path.kind is PathKind.NONE:
            return RESI_FLOOR_DB
        if tx_beam not in gain_cache_tx:
            gain_cache_tx[tx_beam] = ctx.tx.gain(tx_beam, path.angle_at_tx)
        if rx_beam not in gain_cache_rx:
            gain_cache_rx[rx_beam] = ctx.rx.gain(rx_beam, path.angle_at_rx)
        params = replace(ctx.scenario.link, tx_power_w=power_w)
        echo = bistatic_echo_power(
            params,
            gain_cache_tx[tx_beam],
            gain_cache_rx[rx_beam],
            path.range_tx_to_target,
            path.range_target_to_rx,
        )
        if path.kind is PathKind.WALL_REFLECTED:
            echo /= 10.0 ** (ctx.scenario.link.wall_loss_db / 10.0)
        return resi(echo, ctx.noise_w)

    new_state = react(
        feedback,
        state,
        probe,
        scenario.dt_s,
        tx_tiers=ctx.tx.tiers,
        rx_tiers=ctx.rx.tiers,
        schedule=scenario.power_schedule,
    )
    return record, new_state, new_memory


def run_scenario(scenario: Scenario) -> Trace:
    """Execute one full run; deterministic for a fixed rng_seed."""
    ctx = prepare(scenario)
    rng = np.random.default_rng(scenario.rng_seed)
    state = initial_state(ctx)
    memory = SensingMemory.empty(scenario.memory_capacity)
    records: list[StepRecord] = []
    reason: TerminationReason | None = None
    n_steps = int(round(scenario.duration_s / scenario.dt_s))
    for k in range(n_steps):
        time_s = k * scenario.dt_s
        record, state, memory = step(scenario, state, memory, time_s, rng, ctx)
        records.append(record)
        stop = terminated(
            state,
            scenario.max_retransmissions,
            target_in_coverage(ctx, record.target_position),
        )
        if stop is not None:
            reason = stop
            state = replace(state, terminated=True, termination_reason=stop)
            break
    return Trace(
        records=tuple(records),
        termination=reason if reason is not None else TerminationReason.RUN_ENDED,
        final_state=state,
        final_memory=memory,
    )


def sample_trajectory(
    rng: np.random.Generator, region: Rect, speed_m_s: float
) -> tuple[Vec2, Vec2]:
    """Uniform start inside the region, uniform heading, fixed speed."""
    x = float(rng.uniform(region.x_min, region.x_max))
    y = float(rng.uniform(region.y_min, region.y_max))
    heading = float(rng.uniform(0.0, 2.0 * math.pi))
    velocity = Vec2(speed_m_s * math.cos(heading), speed_m_s * math.sin(heading))
    return Vec2(x, y), velocity


@dataclass(frozen=True)
class _RunTally:
    feedback_counts: tuple[int, int, int, int]  # ack, nack, lost, notfound
    nlos_count: int
    n_records: int
    power_increased: bool


def _tally_trace(trace: Trace, base_power_w: float) -> _RunTally:
    counts = {f: 0 for f in Feedback}
    nlos = 0
    increased = False
    for rec in trace.records:
        counts[rec.feedback] += 1
        nlos += int(rec.nlos)
        increased = increased or rec.power_w > base_power_w
    return _RunTally(
        feedback_counts=(
            counts[Feedback.ACK],
            counts[Feedback.NACK],
            counts[Feedback.LOST],
            counts[Feedback.NOT_FOUND],
        ),
        nlos_count=nlos,
        n_records=len(trace.records),
        power_increased=increased,
    )


def _montecarlo_run(args: tuple[Scenario, int, int, Rect]) -> _RunTally:
    template, master_seed, index, region = args
    seq = np.random.SeedSequence([master_seed, index])
    rng = np.random.default_rng(seq)
    start, velocity = sample_trajectory(rng, region, template.target_velocity.norm())
    run_seed = int(rng.integers(0, 2**63))
    scenario = replace(
        template, target_start=start, target_velocity=velocity, rng_seed=run_seed
    )
    trace = run_scenario(scenario)
    return _tally_trace(trace, template.power_schedule.levels_w[0])


def run_montecarlo(
    scenario_template: Scenario,
    n_runs: int,
    master_seed: int,
    workers: int = 1,
    region: Rect | None = None,
) -> StatsTable:
    """Aggregate feedback statistics over random straight trajectories.

    Run seeds derive from (master_seed, run index) alone, so the result is
    identical for any execution order or degree of parallelism.
    """
    if n_runs < 1:
        raise ValueError("n_runs must be >= 1")
    if region is None:
        region = scenario_template.coverage_region
    jobs = [(scenario_template, master_seed, i, region) for i in range(n_runs)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            tallies = list(pool.map(_montecarlo_run, jobs, chunksize=16))
    else:
        tallies = [_montecarlo_run(job) for job in jobs]

    total = sum(t.n_records for t in tallies)
    if total == 0:
        raise ValueError("monte carlo produced no sensing iterations")
    ack = sum(t.feedback_counts[0] for t in tallies)
    nack = sum(t.feedback_counts[1] for t in tallies)
    lost = sum(t.feedback_counts[2] for t in tallies)
    notfound = sum(t.feedback_counts[3] for t in tallies)
    nlos = sum(t.nlos_count for t in tallies)
    increased = sum(int(t.power_increased) for t in tallies)
    pct = 100.0 / total
    return StatsTable(
        ack_pct=ack * pct,
        nack_pct=nack * pct,
        lost_pct=lost * pct,
        notfound_pct=notfound * pct,
        nlos_pct=nlos * pct,
        additional_resources_pct=100.0 * increased / n_runs,
        run_count=n_runs,
    )
