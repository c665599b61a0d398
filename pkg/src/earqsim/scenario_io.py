"""Scenario JSON loading and saving.

The file format mirrors the Scenario fields one-to-one; units are meters,
seconds, watts, hertz and dB (see docs/scenario_schema.md). The carrier
frequency appears once at the top level and is shared by the arrays and
the link budget, and the first power-schedule level doubles as the base
transmit power.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any

from .detection import DEFAULT_MEMORY_CAPACITY, Thresholds
from .engine import DEFAULT_REGION, Rect, Scenario
from .geometry import Obstacle, Vec2, Wall
from .link_budget import LinkParams
from .phased_array import ArrayConfig
from .protocol import DEFAULT_MAX_RETRANSMISSIONS, PowerSchedule


class ScenarioFormatError(ValueError):
    """Raised when a scenario document is missing or misusing a field."""


def _get(doc: dict, key: str, context: str) -> Any:
    if key not in doc:
        raise ScenarioFormatError(f"scenario field '{context}{key}' is missing")
    return doc[key]


def _vec(values: Any, context: str) -> Vec2:
    if not (isinstance(values, (list, tuple)) and len(values) == 2):
        raise ScenarioFormatError(f"scenario field '{context}' must be [x, y]")
    return Vec2(float(values[0]), float(values[1]))


def _array(doc: dict, key: str, carrier_hz: float) -> ArrayConfig:
    node = _get(doc, key, "")
    return ArrayConfig(
        num_elements=int(_get(node, "num_elements", f"{key}.")),
        spacing_wavelengths=float(_get(node, "spacing_wavelengths", f"{key}.")),
        carrier_hz=carrier_hz,
        boresight=float(_get(node, "boresight_rad", f"{key}.")),
        position=_vec(_get(node, "position", f"{key}."), f"{key}.position"),
    )


def scenario_from_dict(doc: dict) -> Scenario:
    carrier_hz = float(_get(doc, "carrier_hz", ""))
    schedule = PowerSchedule(
        levels_w=tuple(float(p) for p in _get(doc, "power_schedule_w", ""))
    )
    link_doc = _get(doc, "link", "")
    link = LinkParams(
        tx_power_w=schedule.levels_w[0],
        bandwidth_hz=float(_get(link_doc, "bandwidth_hz", "link.")),
        noise_figure_db=float(_get(link_doc, "noise_figure_db", "link.")),
        rcs_m2=float(_get(link_doc, "rcs_m2", "link.")),
        carrier_hz=carrier_hz,
        wall_loss_db=float(link_doc.get("wall_loss_db", 3.0)),
        resi_noise_std_db=float(link_doc.get("resi_noise_std_db", 1.0)),
    )
    thr_doc = _get(doc, "thresholds", "")
    thresholds = Thresholds(
        ack_db=float(_get(thr_doc, "ack_db", "thresholds.")),
        nack_db=float(_get(thr_doc, "nack_db", "thresholds.")),
    )
    obstacles = tuple(
        Obstacle(center=_vec(_get(o, "center", "obstacles."), "obstacles.center"),
                 side=float(_get(o, "side", "obstacles.")))
        for o in doc.get("obstacles", [])
    )
    wall_doc = doc.get("wall")
    wall = None
    if wall_doc is not None:
        wall = Wall(
            a=_vec(_get(wall_doc, "a", "wall."), "wall.a"),
            b=_vec(_get(wall_doc, "b", "wall."), "wall.b"),
        )
    region = DEFAULT_REGION
    if "coverage_region" in doc:
        r = doc["coverage_region"]
        region = Rect(
            x_min=float(_get(r, "x_min", "coverage_region.")),
            x_max=float(_get(r, "x_max", "coverage_region.")),
            y_min=float(_get(r, "y_min", "coverage_region.")),
            y_max=float(_get(r, "y_max", "coverage_region.")),
        )
    codebook = _get(doc, "codebook", "")
    return Scenario(
        tx_array=_array(doc, "tx_array", carrier_hz),
        rx_array=_array(doc, "rx_array", carrier_hz),
        obstacles=obstacles,
        wall=wall,
        target_start=_vec(_get(doc, "target_start", ""), "target_start"),
        target_velocity=_vec(_get(doc, "target_velocity", ""), "target_velocity"),
        duration_s=float(_get(doc, "duration_s", "")),
        dt_s=float(_get(doc, "dt_s", "")),
        link=link,
        thresholds=thresholds,
        power_schedule=schedule,
        rng_seed=int(_get(doc, "rng_seed", "")),
        sector=(
            float(_get(codebook, "sector_min_rad", "codebook.")),
            float(_get(codebook, "sector_max_rad", "codebook.")),
        ),
        n_narrow_beams=int(_get(codebook, "n_narrow", "codebook.")),
        wide_element_counts=tuple(
            int(m) for m in _get(codebook, "wide_element_counts", "codebook.")
        ),
        max_retransmissions=int(
            doc.get("max_retransmissions", DEFAULT_MAX_RETRANSMISSIONS)
        ),
        memory_capacity=int(doc.get("memory_capacity", DEFAULT_MEMORY_CAPACITY)),
        coverage_region=region,
    )


def scenario_to_dict(scenario: Scenario) -> dict:
    def vec(v: Vec2) -> list[float]:
        return [v.x, v.y]

    doc: dict[str, Any] = {
        "carrier_hz": scenario.link.carrier_hz,
        "tx_array": {
            "position": vec(scenario.tx_array.position),
            "num_elements": scenario.tx_array.num_elements,
            "spacing_wavelengths": scenario.tx_array.spacing_wavelengths,
            "boresight_rad": scenario.tx_array.boresight,
        },
        "rx_array": {
            "position": vec(scenario.rx_array.position),
            "num_elements": scenario.rx_array.num_elements,
            "spacing_wavelengths": scenario.rx_array.spacing_wavelengths,
            "boresight_rad": scenario.rx_array.boresight,
        },
        "codebook": {
            "sector_min_rad": scenario.sector[0],
            "sector_max_rad": scenario.sector[1],
            "n_narrow": scenario.n_narrow_beams,
            "wide_element_counts": list(scenario.wide_element_counts),
        },
        "obstacles": [
            {"center": vec(o.center), "side": o.side} for o in scenario.obstacles
        ],
        "wall": None
        if scenario.wall is None
        else {"a": vec(scenario.wall.a), "b": vec(scenario.wall.b)},
        "target_start": vec(scenario.target_start),
        "target_velocity": vec(scenario.target_velocity),
        "duration_s": scenario.duration_s,
        "dt_s": scenario.dt_s,
        "link": {
            "bandwidth_hz": scenario.link.bandwidth_hz,
            "noise_figure_db": scenario.link.noise_figure_db,
            "rcs_m2": scenario.link.rcs_m2,
            "wall_loss_db": scenario.link.wall_loss_db,
            "resi_noise_std_db": scenario.link.resi_noise_std_db,
        },
        "thresholds": {
            "ack_db": scenario.thresholds.ack_db,
            "nack_db": scenario.thresholds.nack_db,
        },
        "power_schedule_w": list(scenario.power_schedule.levels_w),
        "rng_seed": scenario.rng_seed,
        "max_retransmissions": scenario.max_retransmissions,
        "memory_capacity": scenario.memory_capacity,
        "coverage_region": {
            "x_min": scenario.coverage_region.x_min,
            "x_max": scenario.coverage_region.x_max,
            "y_min": scenario.coverage_region.y_min,
            "y_max": scenario.coverage_region.y_max,
        },
    }
    return doc


def load_scenario(path: str | Path) -> Scenario:
    text = Path(path).read_text(encoding="utf-8")
    doc = json.loads(text)
    if not isinstance(doc, dict):
        raise ScenarioFormatError("scenario document must be a JSON object")
    return scenario_from_dict(doc)


def save_scenario(scenario: Scenario, path: str | Path) -> None:
    Path(path).write_text(
        json.dumps(scenario_to_dict(scenario), indent=2, sort_keys=True) + "\n",
        encoding="utf-8",
    )
