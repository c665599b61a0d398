"""2-D scene geometry: points, opaque square obstacles and a reflective wall.

Obstacles block line of sight; the wall reflects but never occludes. The
single-bounce reflection path is found with the image method (mirror the
source across the wall line, intersect with the wall segment).
"""

from __future__ import annotations

import math
from dataclasses import dataclass


@dataclass(frozen=True)
class Vec2:
    """A point or displacement in the scene plane, in meters."""

    x: float
    y: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise ValueError(f"Vec2 components must be finite, got ({self.x}, {self.y})")

    def __add__(self, other: "Vec2") -> "Vec2":
        return Vec2(self.x + other.x, self.y + other.y)

    def __sub__(self, other: "Vec2") -> "Vec2":
        return Vec2(self.x - other.x, self.y - other.y)

    def scaled(self, s: float) -> "Vec2":
        return Vec2(self.x * s, self.y * s)

    def dot(self, other: "Vec2") -> float:
        return self.x * other.x + self.y * other.y

    def cross(self, other: "Vec2") -> float:
        return self.x * other.y - self.y * other.x

    def norm(self) -> float:
        return math.hypot(self.x, self.y)

    def distance_to(self, other: "Vec2") -> float:
        return math.hypot(self.x - other.x, self.y - other.y)

    def bearing_to(self, other: "Vec2") -> float:
        """World-frame angle of the direction from self to other, radians."""
        return math.atan2(other.y - self.y, other.x - self.x)


@dataclass(frozen=True)
class Obstacle:
    """Axis-aligned opaque square, defined by its center and side length."""

    center: Vec2
    side: float

    def __post_init__(self) -> None:
        if self.side <= 0:
            raise ValueError(f"obstacle side must be positive, got {self.side}")

    @property
    def half(self) -> float:
        return self.side / 2.0

    def corners(self) -> tuple[Vec2, Vec2, Vec2, Vec2]:
        h, c = self.half, self.center
        return (
            Vec2(c.x - h, c.y - h),
            Vec2(c.x + h, c.y - h),
            Vec2(c.x + h, c.y + h),
            Vec2(c.x - h, c.y + h),
        )

    def edges(self) -> tuple[tuple[Vec2, Vec2], ...]:
        cs = self.corners()
        return tuple((cs[i], cs[(i + 1) % 4]) for i in range(4))

    def contains(self, p: Vec2) -> bool:
        """Closed containment test (boundary counts as inside)."""
        h, c = self.half, self.center
        return abs(p.x - c.x) <= h and abs(p.y - c.y) <= h


@dataclass(frozen=True)
class Wall:
    """Reflective segment, mirror-like on both faces; does not occlude."""

    a: Vec2
    b: Vec2

    def __post_init__(self) -> None:
        if self.a == self.b:
            raise ValueError("wall endpoints must be distinct")

    def side_of(self, p: Vec2) -> float:
        """Signed side of the wall's supporting line (0 means on the line)."""
        return (self.b - self.a).cross(p - self.a)


@dataclass(frozen=True)
class ReflectedPath:
    """Single-bounce path source -> wall -> receiver.

    Angles are world-frame bearings: departure_angle looks from the source
    toward the reflection point, arrival_angle looks from the receiver
    toward the reflection point.
    """

    reflection_point: Vec2
    leg1_length: float
    leg2_length: float
    departure_angle: float
    arrival_angle: float

    @property
    def total_length(self) -> float:
        return self.leg1_length + self.leg2_length


def _orient(a: Vec2, b: Vec2, c: Vec2) -> float:
    return (b - a).cross(c - a)


def _on_segment(a: Vec2, b: Vec2, p: Vec2) -> bool:
    # assumes a, b, p collinear
    return (
        min(a.x, b.x) <= p.x <= max(a.x, b.x)
        and min(a.y, b.y) <= p.y <= max(a.y, b.y)
    )


def segments_intersect(a1: Vec2, a2: Vec2, b1: Vec2, b2: Vec2) -> bool:
    """True iff the closed segments a1-a2 and b1-b2 share at least one point.

    Collinear overlap counts as intersecting. Zero-length segments are
    rejected.
    """
    if a1 == a2 or b1 == b2:
        raise ValueError("degenerate (zero-length) segment")
    o1 = _orient(a1, a2, b1)
    o2 = _orient(a1, a2, b2)
    o3 = _orient(b1, b2, a1)
    o4 = _orient(b1, b2, a2)
    if ((o1 > 0) != (o2 > 0)) and ((o3 > 0) != (o4 > 0)) and o1 != 0 and o2 != 0 and o3 != 0 and o4 != 0:
        return True
    if o1 == 0 and _on_segment(a1, a2, b1):
        return True
    if o2 == 0 and _on_segment(a1, a2, b2):
        return True
    if o3 == 0 and _on_segment(b1, b2, a1):
        return True
    if o4 == 0 and _on_segment(b1, b2, a2):
        return True
    return False


def los_clear(p: Vec2, q: Vec2, obstacles: list[Obstacle] | tuple[Obstacle, ...]) -> bool:
    """True iff the segment p-q neither touches any obstacle edge nor runs
    through an obstacle interior. Grazing contact counts as blocked."""
    if p == q:
        raise ValueError("los_clear requires distinct endpoints")
    mid = Vec2((p.x + q.x) / 2.0, (p.y + q.y) / 2.0)
    for obs in obstacles:
        for e1, e2 in obs.edges():
            if segments_intersect(p, q, e1, e2):
                return False
        # no edge crossing: the segment is entirely inside or entirely outside
        if obs.contains(mid):
            return False
    return True


def mirror_across(wall: Wall, p: Vec2) -> Vec2:
    """Reflect p across the infinite line through the wall."""
    d = wall.b - wall.a
    length = d.norm()
    dist = abs(d.cross(p - wall.a)) / length
    if dist < 1e-12 * max(1.0, length):
        raise ValueError("point lies on the wall line; reflection is degenerate")
    t = d.dot(p - wall.a) / (length * length)
    foot = wall.a + d.scaled(t)
    return foot + (foot - p)


def _segment_line_crossing(p1: Vec2, p2: Vec2, a: Vec2, b: Vec2) -> Vec2 | None:
    """Intersection of segment p1-p2 with segment a-b, or None.

    Returns the crossing point when the two segments properly intersect,
    with inclusive bounds on both parameters.
    """
    r = p2 - p1
    s = b - a
    denom = r.cross(s)
    if denom == 0:
        return None
    t = (a - p1).cross(s) / denom
    u = (a - p1).cross(r) / denom
    if 0.0 <= t <= 1.0 and 0.0 <= u <= 1.0:
        return p1 + r.scaled(t)
    return None


def reflected_path(
    source: Vec2,
    receiver: Vec2,
    wall: Wall,
    obstacles: list[Obstacle] | tuple[Obstacle, ...] = (),
) -> ReflectedPath | None:
    """Image-method single-bounce path from source to receiver via the wall.

    Both endpoints must lie strictly on the same side of the wall's
    supporting line. Returns None when the image ray misses the wall
    segment or either leg is blocked by an obstacle. When returned, the
    path is the shortest single-bounce route off the wall.
    """
    side_s = wall.side_of(source)
    side_r = wall.side_of(receiver)
    if side_s == 0 or side_r == 0:
        raise ValueError("endpoint on the wall line; reflection is degenerate")
    if (side_s > 0) != (side_r > 0):
        raise ValueError("source and receiver must be on the same side of the wall")
    image = mirror_across(wall, source)
    r = _segment_line_crossing(receiver, image, wall.a, wall.b)
    if r is None:
        return None
    if source.distance_to(r) == 0.0 or receiver.distance_to(r) == 0.0:
        return None
    if not los_clear(source, r, obstacles):
        return None
    if not los_clear(r, receiver, obstacles):
        return None
    return ReflectedPath(
        reflection_point=r,
        leg1_length=source.distance_to(r),
        leg2_length=r.distance_to(receiver),
        departure_angle=source.bearing_to(r),
        arrival_angle=receiver.bearing_to(r),
    )
