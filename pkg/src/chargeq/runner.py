"""Trajectory runs, sweeps and oracle verification behind the command line."""

from __future__ import annotations

import csv
import io
import json
import logging
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Callable, Iterable, Sequence

import numpy as np

from .config import ScenarioConfig, SweepConfig
from .dynamics import ManifoldEngine
from .measures import CorrelationRecord, evaluate_all
from .oracle import deviation_report
from .svgplot import line_chart

log = logging.getLogger(__name__)

CSV_HEADER = (
    "tau", "Tc", "Qc", "Cc", "I_lo", "I_loz", "Q_def", "C_def",
    "S_ab", "trace_err", "min_eig", "opt_evals",
)
RECORD_FIELDS = (
    "tau", "T_c", "Q_c", "C_c", "I_Lo", "I_loz", "Q_def", "C_def",
    "S_ab", "trace_error", "min_eigenvalue", "optimizer_evals",
)

EXIT_OK, EXIT_CONFIG, EXIT_VERIFY, EXIT_WARN = 0, 1, 2, 3

# the eight figure regimes; both initial states for every (delta, nbar) pair
FIGURE_DELTAS = (0.5, 1.0)
FIGURE_NBARS = (10.0, 20.0)
FIGURE_INITIALS = ("ee", "gg")
FIGURE_PANELS = {
    "fig1a": ("d0.5_n10_ee", ("Tc", "Qc", "Cc")),
    "fig1b": ("d1_n10_ee", ("Tc", "Qc", "Cc")),
    "fig1c": ("d0.5_n20_ee", ("Tc", "Qc", "Cc")),
    "fig1d": ("d1_n20_ee", ("Tc", "Qc", "Cc")),
    "fig2a": ("d0.5_n10_gg", ("Tc", "Qc", "Cc")),
    "fig2b": ("d1_n20_gg", ("Tc", "Qc", "Cc")),
    "fig3a_ee": ("d0.5_n10_ee", ("Q_def", "C_def")),
    "fig3b_ee": ("d1_n10_ee", ("Q_def", "C_def")),
    "fig3a_gg": ("d0.5_n10_gg", ("Q_def", "C_def")),
    "fig3b_gg": ("d1_n10_gg", ("Q_def", "C_def")),
    "fig4a": ("d0.5_n10_gg", ("Q_def", "C_def")),
    "fig4b": ("d1_n20_gg", ("Q_def", "C_def")),
}


def worker_count() -> int:
    env = os.environ.get("CHARGEQ_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            log.warning("ignoring non-integer CHARGEQ_THREADS=%r", env)
    return max(1, len(os.sched_getaffinity(0)) if hasattr(os, "sched_getaffinity") else os.cpu_count() or 1)


def parallel_map(fn: Callable, items: Sequence, workers: int | None = None) -> list:
    """Ordered map over a process pool; serial when one worker suffices."""
    workers = worker_count() if workers is None else workers
    if workers <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=min(workers, len(items))) as pool:
        return list(pool.map(fn, items))


def _evaluate_chunk(args) -> list[CorrelationRecord]:
    rhos, taus, opt, deficits = args
    return [evaluate_all(r, t, opt, deficits=deficits) for r, t in zip(rhos, taus)]


def trajectory(cfg: ScenarioConfig, workers: int | None = 1) -> list[CorrelationRecord]:
    """One correlation record per grid point."""
    taus = cfg.taus
    rhos = ManifoldEngine(cfg.params).reduced_states(taus)
    deficits = "deficits" in cfg.measures
    workers = worker_count() if workers is None else workers
    n_chunks = max(1, min(workers, len(taus)))
    bounds = np.linspace(0, len(taus), n_chunks + 1).astype(int)
    chunks = [
        (rhos[a:b], taus[a:b], cfg.optimizer, deficits)
        for a, b in zip(bounds[:-1], bounds[1:])
    ]
    out: list[CorrelationRecord] = []
    for part in parallel_map(_evaluate_chunk, chunks, workers):
        out.extend(part)
    return out


def _cell(v) -> str:
    if isinstance(v, (int, np.integer)) and not isinstance(v, bool):
        return str(int(v))
    v = float(v)
    if math.isnan(v):
        return "nan"
    if v == 0.0:
        v = 0.0  # drop the sign of negative zero
    return f"{v:.12g}"


def records_to_csv(records: Iterable[CorrelationRecord], include_deficits: bool = True) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in records:
        row = []
        for name in RECORD_FIELDS:
            v = getattr(r, name)
            if name in ("I_loz", "Q_def", "C_def") and not include_deficits:
                v = float("nan")
            row.append(_cell(v))
        w.writerow(row)
    return buf.getvalue()


def read_csv(path: str | Path) -> dict[str, list[float]]:
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        raise ValueError(f"{path}: empty CSV")
    header, body = rows[0], rows[1:]
    return {h: [float(r[i]) for r in body] for i, h in enumerate(header)}


@dataclass
class RunResult:
    records: list[CorrelationRecord]
    csv_text: str
    path: Path | None

    @property
    def warnings(self) -> int:
        return sum(1 for r in self.records if not r.ok)

    @property
    def exit_code(self) -> int:
        return EXIT_WARN if self.warnings else EXIT_OK


def run_scenario(cfg: ScenarioConfig, out: str | Path | None = None,
                 workers: int | None = 1) -> RunResult:
    """Simulate ``cfg`` and write the CSV (to ``out`` or ``cfg.out`` if given)."""
    records = trajectory(cfg, workers)
    for r in records:
        if r.errors:
            log.warning("tau=%s: %s", r.tau, "; ".join(r.errors))
    text = records_to_csv(records, "deficits" in cfg.measures)
    path = Path(out or cfg.out) if (out or cfg.out) else None
    if path is not None:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text)
    return RunResult(records, text, path)


def verify(cfg: ScenarioConfig, report_path: str | Path | None = None,
           qubit_order: Sequence[int] = (0, 1, 2, 3)) -> tuple[int, str]:
    """Compare the manifold engine against the dense oracle on the config's grid."""
    rep = deviation_report(cfg.params, cfg.taus, qubit_order=qubit_order)
    text = rep.to_text()
    if report_path:
        Path(report_path).parent.mkdir(parents=True, exist_ok=True)
        Path(report_path).write_text(text)
    return (EXIT_OK if rep.passed else EXIT_VERIFY), text


def _sweep_job(args) -> dict:
    name, cfg, out_dir = args
    path = Path(out_dir) / name
    entry = {"file": name, "config": cfg.to_json_dict(), "config_hash": cfg.digest()}
    try:
        res = run_scenario(cfg, path, workers=1)
        entry.update(status="ok" if res.exit_code == EXIT_OK else "warnings",
                     exit_code=res.exit_code, warnings=res.warnings)
    except Exception as exc:  # recorded in the manifest, sweep continues
        entry.update(status="failed", exit_code=EXIT_CONFIG, error=str(exc))
    entry["config"].pop("out", None)
    return entry


def sweep(cfg: SweepConfig, workers: int | None = None) -> tuple[int, list[dict]]:
    """One CSV per combination plus ``manifest.json``; returns the worst exit code."""
    out_dir = Path(cfg.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    jobs = [(name, c, str(out_dir)) for name, c in cfg.combinations()]
    entries = parallel_map(_sweep_job, jobs, workers)
    manifest = {"outputs": entries}
    (out_dir / "manifest.json").write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    worst = max((e["exit_code"] for e in entries), default=EXIT_OK)
    return worst, entries


def plot_csv(csv_path: str | Path, columns: Sequence[str], out: str | Path,
             title: str = "") -> Path:
    if not columns:
        raise ValueError("no columns requested")
    data = read_csv(csv_path)
    missing = [c for c in columns if c not in data]
    if missing:
        raise ValueError(f"unknown column(s) {missing}; available: {', '.join(data)}")
    svg = line_chart(data["tau"], {c: data[c] for c in columns}, xlabel="lambda t", title=title)
    out = Path(out)
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(svg)
    return out


def figures(out_dir: str | Path, base: ScenarioConfig | None = None,
            workers: int | None = None) -> tuple[int, list[dict]]:
    """Regenerate all eight figure-regime CSVs and the per-panel SVGs."""
    base = base or ScenarioConfig()
    scfg = SweepConfig(FIGURE_DELTAS, FIGURE_NBARS, FIGURE_INITIALS,
                       base=replace(base, field="coherent"), out_dir=str(out_dir))
    code, entries = sweep(scfg, workers)
    for panel, (stem, cols) in FIGURE_PANELS.items():
        csv_path = Path(out_dir) / f"{stem}.csv"
        if csv_path.exists():
            plot_csv(csv_path, cols, Path(out_dir) / f"{panel}.svg", title=f"{panel}: {stem}")
    return code, entries
