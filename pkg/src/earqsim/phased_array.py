"""Uniform linear array model and beam codebooks.

Gain follows the uniform-weight array factor, normalized so that the peak
power gain equals the number of active elements. Wide beams are realized
as sub-apertures (fewer active elements), which lowers the peak gain and
widens the main lobe without extra parameters.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .geometry import Vec2

HALF_PI = math.pi / 2.0


@dataclass(frozen=True)
class ArrayConfig:
    """Physical description of one node's linear array.

    boresight is the array normal direction in the world frame (radians);
    steering angles and evaluation angles are measured relative to it.
    """

    num_elements: int
    spacing_wavelengths: float
    carrier_hz: float
    boresight: float
    position: Vec2

    def __post_init__(self) -> None:
        if self.num_elements < 1:
            raise ValueError("num_elements must be >= 1")
        if self.spacing_wavelengths <= 0:
            raise ValueError("spacing_wavelengths must be positive")
        if self.carrier_hz <= 0:
            raise ValueError("carrier_hz must be positive")


@dataclass(frozen=True)
class Beam:
    """One codebook entry: steering angle (relative to boresight) and the
    number of active elements (fewer elements gives a wider, weaker beam)."""

    steer_angle: float
    active_elements: int

    def __post_init__(self) -> None:
        if self.active_elements < 1:
            raise ValueError("active_elements must be >= 1")
        if not abs(self.steer_angle) < HALF_PI:
            raise ValueError("steer_angle must satisfy |angle| < pi/2")


@dataclass(frozen=True)
class Codebook:
    """Narrow tier (full aperture) plus one or more wide tiers."""

    narrow_beams: tuple[Beam, ...]
    wide_beams: tuple[Beam, ...]
    sector: tuple[float, float]

    @property
    def beams(self) -> tuple[Beam, ...]:
        """Unified beam list: narrow beams first, then wide beams."""
        return self.narrow_beams + self.wide_beams

    @property
    def narrow_indices(self) -> tuple[int, ...]:
        return tuple(range(len(self.narrow_beams)))

    @property
    def wide_indices(self) -> tuple[int, ...]:
        n = len(self.narrow_beams)
        return tuple(range(n, n + len(self.wide_beams)))


def array_gain(config: ArrayConfig, beam: Beam, angle: float) -> float:
    """Power gain of the steered beam at `angle` (radians from boresight).

    Closed form of |sum_n exp(j*2*pi*d*n*(sin angle - sin steer))|^2 / M
    for M active elements; the peak (angle == steer_angle) equals M.
    """
    m = beam.active_elements
    if m > config.num_elements:
        raise ValueError("beam uses more elements than the array has")
    if m == 1:
        return 1.0
    u = math.sin(angle) - math.sin(beam.steer_angle)
    x = 2.0 * math.pi * config.spacing_wavelengths * u
    half = math.sin(x / 2.0)
    if abs(half) < 1e-12:
        # main lobe (or grating lobe) limit of the geometric sum
        return float(m)
    num = math.sin(m * x / 2.0)
    return (num * num) / (half * half) / m


def beamwidth_3db(config: ArrayConfig, beam: Beam) -> float:
    """Width of the contiguous interval around the steering angle where the
    gain stays at or above half the peak, found by bisection (1e-9 rad).

    A beam whose gain never drops below half power within the front
    half-plane reports the full front width pi.
    """
    peak = float(beam.active_elements)
    half_power = peak / 2.0

    def above(theta: float) -> bool:
        return array_gain(config, beam, theta) >= half_power

    def edge(direction: float) -> float:
        # march from the steering angle to bracket the half-power crossing
        step = 1e-3
        limit = direction * HALF_PI
        inside = beam.steer_angle
        while True:
            probe = inside + direction * step
            if direction * probe >= HALF_PI:
                return limit
            if not above(probe):
                break
            inside = probe
        outside = probe
        while abs(outside - inside) > 1e-9:
            mid = (inside + outside) / 2.0
            if above(mid):
                inside = mid
            else:
                outside = mid
        return (inside + outside) / 2.0

    return edge(+1.0) - edge(-1.0)


def make_codebook(
    config: ArrayConfig,
    sector: tuple[float, float],
    n_narrow: int,
    wide_element_counts: list[int] | tuple[int, ...],
) -> Codebook:
    """Build the beam grid for one node.

    Narrow beams sit at the centers of n_narrow equal cells in sine space
    over the sector (a single beam lands on the sine midpoint). Each wide
    tier uses the same construction with a coarser cell count scaled by
    its aperture fraction.
    """
    lo, hi = sector
    if not (hi > lo):
        raise ValueError("sector must have positive width")
    if lo < -HALF_PI or hi > HALF_PI:
        raise ValueError("sector must lie within +/- pi/2 of boresight")
    if n_narrow < 1:
        raise ValueError("n_narrow must be >= 1")

    def sine_grid(count: int) -> list[float]:
        u_lo, u_hi = math.sin(lo), math.sin(hi)
        width = (u_hi - u_lo) / count
        return [u_lo + (i + 0.5) * width for i in range(count)]

    narrow = tuple(
        Beam(math.asin(u), config.num_elements) for u in sine_grid(n_narrow)
    )
    wide: list[Beam] = []
    for m_wide in wide_element_counts:
        if not (1 <= m_wide <= config.num_elements):
            raise ValueError("wide tier element count out of range")
        n_wide = max(1, math.ceil(n_narrow * m_wide / config.num_elements))
        wide.extend(Beam(math.asin(u), m_wide) for u in sine_grid(n_wide))
    return Codebook(narrow_beams=narrow, wide_beams=tuple(wide), sector=(lo, hi))
