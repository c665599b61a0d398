"""Command-line front end: single traces, Monte Carlo batches and threshold
sweeps, all emitting deterministic CSV/JSON files."""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import replace
from pathlib import Path

from .detection import Thresholds
from .engine import StatsTable, Trace, run_montecarlo, run_scenario
from .scenario_io import ScenarioFormatError, load_scenario

TRACE_HEADER = (
    "t_s,target_x_m,target_y_m,path_kind,nlos,resi_db,resi_noisefree_db,"
    "outcome,feedback,tx_beam,rx_beam,power_w,ue_snr_db"
)

STATS_FIELDS = (
    "ack_pct",
    "nack_pct",
    "lost_pct",
    "notfound_pct",
    "nlos_pct",
    "additional_resources_pct",
    "run_count",
)


def _write_atomic(path: Path, text: str) -> None:
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(text, encoding="utf-8")
    os.replace(tmp, path)


def _g(x: float) -> str:
    """Floats at 6 significant digits for trace rows."""
    return f"{x:.6g}"


def emit_trace_csv(trace: Trace, path: Path) -> None:
    lines = [TRACE_HEADER]
    for r in trace.records:
        lines.append(
            ",".join(
                (
                    _g(r.time_s),
                    _g(r.target_position.x),
                    _g(r.target_position.y),
                    r.path_kind.value,
                    str(int(r.nlos)),
                    _g(r.resi_db),
                    _g(r.resi_noise_free_db),
                    r.outcome.value,
                    r.feedback.value,
                    str(r.tx_beam_index),
                    str(r.rx_beam_index),
                    _g(r.power_w),
                    _g(r.ue_snr_db),
                )
            )
        )
    _write_atomic(path, "\n".join(lines) + "\n")


def emit_events_json(trace: Trace, path: Path) -> None:
    """Feedback transitions and power increases, in time order."""
    events: list[dict] = []
    prev_feedback = None
    prev_power = None
    for r in trace.records:
        if r.feedback is not prev_feedback:
            events.append({"time_s": r.time_s, "event": r.feedback.value})
            prev_feedback = r.feedback
        if prev_power is not None and r.power_w > prev_power:
            events.append({"time_s": r.time_s, "event": "POWER_INCREASE"})
        prev_power = r.power_w
    doc = {"events": events, "termination": trace.termination.value}
    _write_atomic(path, json.dumps(doc, indent=2, sort_keys=True) + "\n")


def _stats_row(stats: StatsTable) -> list[str]:
    return [repr(getattr(stats, name)) for name in STATS_FIELDS]


def emit_stats(stats: StatsTable, out_dir: Path) -> None:
    doc = {name: getattr(stats, name) for name in STATS_FIELDS}
    _write_atomic(out_dir / "stats.json", json.dumps(doc, indent=2, sort_keys=True) + "\n")
    csv = ",".join(STATS_FIELDS) + "\n" + ",".join(_stats_row(stats)) + "\n"
    _write_atomic(out_dir / "stats.csv", csv)


def _apply_overrides(scenario, args):
    if args.seed is not None:
        scenario = replace(scenario, rng_seed=args.seed)
    if getattr(args, "obstacle_side", None) is not None:
        scenario = replace(
            scenario,
            obstacles=tuple(
                replace(o, side=args.obstacle_side) for o in scenario.obstacles
            ),
        )
    ack = getattr(args, "ack_db", None)
    nack = getattr(args, "nack_db", None)
    if ack is not None or nack is not None:
        thr = scenario.thresholds
        scenario = replace(
            scenario,
            thresholds=Thresholds(
                ack_db=thr.ack_db if ack is None else ack,
                nack_db=thr.nack_db if nack is None else nack,
            ),
        )
    return scenario


def cmd_run(args) -> int:
    scenario = _apply_overrides(load_scenario(args.scenario), args)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    trace = run_scenario(scenario)
    emit_trace_csv(trace, out_dir / "trace.csv")
    emit_events_json(trace, out_dir / "events.json")
    print(f"wrote {out_dir / 'trace.csv'} ({len(trace.records)} steps)")
    return 0


def cmd_montecarlo(args) -> int:
    scenario = _apply_overrides(load_scenario(args.scenario), args)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    master_seed = args.seed if args.seed is not None else scenario.rng_seed
    stats = run_montecarlo(scenario, args.runs, master_seed, workers=args.workers)
    emit_stats(stats, out_dir)
    print(f"wrote {out_dir / 'stats.json'} ({stats.run_count} runs)")
    return 0


def cmd_sweep_thresholds(args) -> int:
    scenario = _apply_overrides(load_scenario(args.scenario), args)
    grid_doc = json.loads(Path(args.thresholds_grid).read_text(encoding="utf-8"))
    pairs = [(float(a), float(n)) for a, n in grid_doc]
    if not pairs:
        raise ScenarioFormatError("thresholds grid is empty")
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    master_seed = args.seed if args.seed is not None else scenario.rng_seed
    rows = []
    results = []
    for ack_db, nack_db in pairs:
        sc = replace(scenario, thresholds=Thresholds(ack_db=ack_db, nack_db=nack_db))
        stats = run_montecarlo(sc, args.runs, master_seed, workers=args.workers)
        rows.append(",".join([repr(ack_db), repr(nack_db)] + _stats_row(stats)))
        doc = {name: getattr(stats, name) for name in STATS_FIELDS}
        results.append({"ack_db": ack_db, "nack_db": nack_db, **doc})
    header = "ack_db,nack_db," + ",".join(STATS_FIELDS)
    _write_atomic(out_dir / "threshold_sweep.csv", header + "\n" + "\n".join(rows) + "\n")
    _write_atomic(
        out_dir / "threshold_sweep.json",
        json.dumps(results, indent=2, sort_keys=True) + "\n",
    )
    print(f"wrote {out_dir / 'threshold_sweep.csv'} ({len(pairs)} threshold pairs)")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="earqsim",
        description="Bistatic sensing simulator with four-level ARQ feedback",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser, runs: bool) -> None:
        p.add_argument("--scenario", required=True, help="scenario JSON path")
        p.add_argument("--out", default="out", help="output directory")
        p.add_argument("--seed", type=int, default=None, help="override RNG seed")
        p.add_argument(
            "--obstacle-side",
            dest="obstacle_side",
            type=float,
            default=None,
            help="override every obstacle's side length, meters",
        )
        p.add_argument("--ack-db", dest="ack_db", type=float, default=None)
        p.add_argument("--nack-db", dest="nack_db", type=float, default=None)
        if runs:
            p.add_argument("--runs", type=int, default=100, help="number of runs")
            p.add_argument(
                "--workers", type=int, default=1, help="parallel worker processes"
            )

    p_run = sub.add_parser("run", help="single trace: trace.csv and events.json")
    common(p_run, runs=False)
    p_run.set_defaults(fn=cmd_run)

    p_mc = sub.add_parser("montecarlo", help="random trajectories: stats.json/csv")
    common(p_mc, runs=True)
    p_mc.set_defaults(fn=cmd_montecarlo)

    p_sw = sub.add_parser(
        "sweep-thresholds", help="one stats row per (ack_db, nack_db) pair"
    )
    common(p_sw, runs=True)
    p_sw.add_argument(
        "--thresholds-grid",
        dest="thresholds_grid",
        required=True,
        help="JSON file with a list of [ack_db, nack_db] pairs",
    )
    p_sw.set_defaults(fn=cmd_sweep_thresholds)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except FileNotFoundError as exc:
        print(f"error: file not found: {exc.filename}", file=sys.stderr)
        return 2
    except json.JSONDecodeError as exc:
        print(
            f"error: invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}",
            file=sys.stderr,
        )
        return 2
    except (ScenarioFormatError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
