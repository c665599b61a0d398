"""Deterministic 2-D bistatic sensing simulator with four-level ARQ
feedback, beam management and a memory-enabled dual-threshold detector."""

from .detection import (
    DEFAULT_THRESHOLDS,
    Feedback,
    Outcome,
    SensingMemory,
    Thresholds,
    classify,
    decide_feedback,
    update_memory,
)
from .engine import (
    PathInfo,
    PathKind,
    Rect,
    Scenario,
    StatsTable,
    StepRecord,
    Trace,
    best_physical_path,
    run_montecarlo,
    run_scenario,
    sample_trajectory,
    step,
)
from .geometry import (
    Obstacle,
    ReflectedPath,
    Vec2,
    Wall,
    los_clear,
    mirror_across,
    reflected_path,
    segments_intersect,
)
from .link_budget import (
    RESI_FLOOR_DB,
    LinkParams,
    bistatic_echo_power,
    noise_power,
    resi,
    ue_snr,
)
from .phased_array import ArrayConfig, Beam, Codebook, array_gain, beamwidth_3db, make_codebook
from .protocol import (
    BeamTiers,
    NodeConfig,
    PowerSchedule,
    ProtocolState,
    TerminationReason,
    beam_sweep,
    react,
    terminated,
)
from .scenario_io import load_scenario, save_scenario

__all__ = [
    "ArrayConfig",
    "Beam",
    "BeamTiers",
    "Codebook",
    "DEFAULT_THRESHOLDS",
    "Feedback",
    "LinkParams",
    "NodeConfig",
    "Obstacle",
    "Outcome",
    "PathInfo",
    "PathKind",
    "PowerSchedule",
    "ProtocolState",
    "RESI_FLOOR_DB",
    "Rect",
    "ReflectedPath",
    "Scenario",
    "SensingMemory",
    "StatsTable",
    "StepRecord",
    "TerminationReason",
    "Thresholds",
    "Trace",
    "Vec2",
    "Wall",
    "array_gain",
    "beam_sweep",
    "beamwidth_3db",
    "best_physical_path",
    "bistatic_echo_power",
    "classify",
    "decide_feedback",
    "load_scenario",
    "los_clear",
    "make_codebook",
    "mirror_across",
    "noise_power",
    "react",
    "reflected_path",
    "resi",
    "run_montecarlo",
    "run_scenario",
    "sample_trajectory",
    "save_scenario",
    "segments_intersect",
    "step",
    "terminated",
    "ue_snr",
    "update_memory",
]
