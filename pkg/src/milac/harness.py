"""Monte-Carlo experiment runner.

Sweeps (antenna count, SNR) grids over seeded channel realizations, runs
the selected transmitter architectures on identical channels, and writes
plot-ready CSV files plus one JSON record per solver run. Channel seeds
depend only on the trial index, so every architecture and sweep point
sees the same fading for a given trial (paired comparison).
"""

from __future__ import annotations

import json
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from contextlib import ExitStack
from dataclasses import dataclass, field, replace
from functools import partial
from pathlib import Path

import numpy as np

from .baselines import solve_full_dim, zero_forcing
from .channel import generate_rayleigh, reduce_channel
from .errors import DimensionError, MilacError
from .mapping import DigitalBeamformer, map_digital_to_milac
from .optimizer import SolverConfig, report_record, solve_psla, sum_rate

MODES = ("convergence", "snr_sweep", "antenna_sweep", "theorem_check")
ARCHITECTURES = ("digital_full", "digital_reduced", "two_layer", "zero_forcing")
WORKERS_ENV = "MILAC_WORKERS"

RESULT_COLUMNS = ("mode", "L", "K", "snr_db", "trial", "architecture",
                  "sum_rate", "iterations", "wall_time")
RESULT_SCHEMA = "# milac sweep schema v1"
SUMMARY_COLUMNS = ("mode", "L", "K", "snr_db", "architecture", "trials",
                   "mean_sum_rate", "stderr_sum_rate", "mean_wall_time")
SUMMARY_SCHEMA = "# milac summary schema v1"
ITER_COLUMNS = ("mode", "L", "K", "snr_db", "trial", "architecture",
                "iteration", "objective")
ITER_SCHEMA = "# milac convergence schema v1"


def mode_architectures(mode: str):
    """Architectures run per trial for each experiment mode."""
    if mode == "convergence":
        return ("digital_reduced",)
    if mode == "theorem_check":
        return ("digital_reduced", "two_layer")
    return ARCHITECTURES


def snr_to_power(snr_db: float, sigma: float = 1.0) -> float:
    """Transmit power for a given transmit SNR, Pt = sigma^2 10^(SNR/10)."""
    return sigma**2 * 10.0 ** (snr_db / 10.0)


@dataclass(frozen=True)
class ExperimentSpec:
    """One sweep: grid of antenna counts and SNR points times trials.

    The solver config acts as a template; its Pt is replaced per SNR
    point. measure_time=False writes 0.0 wall times so repeated runs
    produce byte-identical output files.
    """

    mode: str
    L_values: tuple = (32,)
    K: int = 4
    snr_db_values: tuple = (10.0,)
    trials: int = 100
    base_seed: int = 0
    solver: SolverConfig = field(default_factory=SolverConfig)
    output_dir: str = "results"
    measure_time: bool = True

    def __post_init__(self):
        if self.mode not in MODES:
            raise DimensionError(f"mode must be one of {MODES}, got {self.mode!r}")
        L_values = tuple(int(L) for L in self.L_values)
        snr_values = tuple(float(s) for s in self.snr_db_values)
        if not L_values or not snr_values:
            raise DimensionError("sweep lists must be non-empty")
        if self.trials < 1:
            raise DimensionError(f"trials must be >= 1, got {self.trials}")
        if self.K < 1:
            raise DimensionError(f"K must be >= 1, got {self.K}")
        for L in L_values:
            if L < self.K:
                raise DimensionError(f"L={L} is smaller than K={self.K}")
        object.__setattr__(self, "L_values", L_values)
        object.__setattr__(self, "snr_db_values", snr_values)


@dataclass(frozen=True)
class SweepRow:
    mode: str
    L: int
    K: int
    snr_db: float
    trial: int
    architecture: str
    sum_rate: float
    iterations: int
    wall_time: float

    def as_csv(self) -> str:
        return ",".join([
            self.mode, str(self.L), str(self.K), repr(self.snr_db),
            str(self.trial), self.architecture, repr(self.sum_rate),
            str(self.iterations), repr(self.wall_time),
        ])


@dataclass(frozen=True)
class SweepResult:
    rows: tuple


@dataclass(frozen=True)
class SummaryRow:
    mode: str
    L: int
    K: int
    snr_db: float
    architecture: str
    trials: int
    mean_sum_rate: float
    stderr_sum_rate: float
    mean_wall_time: float

    def as_csv(self) -> str:
        return ",".join([
            self.mode, str(self.L), str(self.K), repr(self.snr_db),
            self.architecture, str(self.trials), repr(self.mean_sum_rate),
            repr(self.stderr_sum_rate), repr(self.mean_wall_time),
        ])


def _failed_row(spec, L, snr_db, trial, arch, elapsed, exc):
    sys.stderr.write(
        f"warning: {arch} failed at L={L} snr={snr_db} trial={trial}: {exc}\n"
    )
    return SweepRow(mode=spec.mode, L=L, K=spec.K, snr_db=snr_db, trial=trial,
                    architecture=arch, sum_rate=float("nan"), iterations=-1,
                    wall_time=elapsed), {
        "label": arch, "mode": spec.mode, "L": L, "K": spec.K,
        "snr_db": snr_db, "trial": trial, "error": f"{type(exc).__name__}: {exc}",
    }


def run_point(spec: ExperimentSpec, L: int, snr_db: float, trial: int):
    """Run every architecture of the mode on one (L, snr, trial) cell.

    Returns (rows, solver_records, iteration_rows). Failures are recorded
    as rows with sum_rate=nan and iterations=-1 instead of aborting.
    """
    seed = spec.base_seed + trial
    ch = generate_rayleigh(L, spec.K, seed)
    Pt = snr_to_power(snr_db)
    cfg = replace(spec.solver, Pt=Pt)
    archs = mode_architectures(spec.mode)
    rows, records, iter_rows = [], [], []

    def clock(t0):
        return time.perf_counter() - t0 if spec.measure_time else 0.0

    def emit(arch, rate, iterations, wall):
        rows.append(SweepRow(mode=spec.mode, L=L, K=spec.K, snr_db=snr_db,
                             trial=trial, architecture=arch, sum_rate=rate,
                             iterations=iterations, wall_time=wall))

    reduced_report = None
    reduced_wall = 0.0
    for arch in archs:
        t0 = time.perf_counter()
        try:
            if arch == "digital_full":
                rep = solve_full_dim(ch, cfg)
                wall = clock(t0)
                emit(arch, sum_rate(ch.H, rep.Pd, ch.sigma), rep.iterations, wall)
                rec = report_record(rep, cfg, seed=seed, label=arch)
            elif arch == "digital_reduced":
                red = reduce_channel(ch)
                rep = solve_psla(red, cfg)
                reduced_report, reduced_wall = rep, clock(t0)
                emit(arch, sum_rate(ch.H, rep.Pd, ch.sigma), rep.iterations, reduced_wall)
                rec = report_record(rep, cfg, seed=seed, label=arch)
                if spec.mode == "convergence":
                    for i, obj in enumerate(rep.objective_history):
                        iter_rows.append((spec.mode, L, spec.K, snr_db, trial,
                                          arch, i, float(obj)))
            elif arch == "two_layer":
                if reduced_report is None:
                    red = reduce_channel(ch)
                    reduced_report = solve_psla(red, cfg)
                    reduced_wall = clock(t0)
                    t0 = time.perf_counter()
                rep = reduced_report
                sol = map_digital_to_milac(DigitalBeamformer(Pd=rep.Pd, Pt=Pt))
                wall = reduced_wall + clock(t0)
                emit(arch, sum_rate(ch.H, sol.G, ch.sigma), rep.iterations, wall)
                rec = None
            else:
                P = zero_forcing(ch, Pt)
                emit(arch, sum_rate(ch.H, P, ch.sigma), 0, clock(t0))
                rec = None
        except (MilacError, np.linalg.LinAlgError) as exc:
            row, rec = _failed_row(spec, L, snr_db, trial, arch, clock(t0), exc)
            rows.append(row)
        if rec is not None:
            rec.update(mode=spec.mode, L=L, K=spec.K, snr_db=snr_db, trial=trial)
            if not spec.measure_time:
                rec["wall_time"] = 0.0
            records.append(rec)
    return rows, records, iter_rows


def _run_task(spec, task):
    L, snr_db, trial = task
    return run_point(spec, L, snr_db, trial)


def worker_count() -> int:
    raw = os.environ.get(WORKERS_ENV, "").strip()
    if not raw:
        return 1
    n = int(raw)
    if n < 1:
        raise DimensionError(f"{WORKERS_ENV} must be >= 1, got {raw!r}")
    return n


def run_experiment(spec: ExperimentSpec) -> SweepResult:
    """Execute a sweep and write its output files.

    Writes results.csv (one row per architecture per trial per sweep
    point, appended as trials finish), summary.csv (per-point aggregates),
    solves.jsonl (one record per solver run), and for convergence mode
    iterations.csv with the per-iteration objective. Trials run in a
    process pool when the MILAC_WORKERS environment variable asks for more
    than one worker; output order is independent of scheduling.
    """
    out = Path(spec.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    points = [(L, snr) for L in spec.L_values for snr in spec.snr_db_values]
    tasks = [(L, snr, t) for (L, snr) in points for t in range(spec.trials)]
    workers = worker_count()
    all_rows = []
    with ExitStack() as stack:
        fres = stack.enter_context(open(out / "results.csv", "w"))
        fsol = stack.enter_context(open(out / "solves.jsonl", "w"))
        fres.write(RESULT_SCHEMA + "\n" + ",".join(RESULT_COLUMNS) + "\n")
        iters_fh = None
        if spec.mode == "convergence":
            iters_fh = stack.enter_context(open(out / "iterations.csv", "w"))
            iters_fh.write(ITER_SCHEMA + "\n" + ",".join(ITER_COLUMNS) + "\n")
        if workers == 1:
            outputs = map(partial(_run_task, spec), tasks)
            _consume(outputs, fres, fsol, iters_fh, all_rows)
        else:
            with ProcessPoolExecutor(max_workers=workers) as pool:
                outputs = pool.map(partial(_run_task, spec), tasks, chunksize=4)
                _consume(outputs, fres, fsol, iters_fh, all_rows)
    result = SweepResult(rows=tuple(all_rows))
    write_summary(out / "summary.csv", summarize(result))
    return result


def _consume(outputs, fres, fsol, iters_fh, all_rows):
    for rows, records, iter_rows in outputs:
        for row in rows:
            fres.write(row.as_csv() + "\n")
            all_rows.append(row)
        for rec in records:
            fsol.write(json.dumps(rec, sort_keys=True) + "\n")
        if iters_fh is not None:
            for tup in iter_rows:
                mode, L, K, snr_db, trial, arch, i, obj = tup
                iters_fh.write(
                    f"{mode},{L},{K},{snr_db!r},{trial},{arch},{i},{obj!r}\n"
                )
        fres.flush()


def summarize(result: SweepResult):
    """Aggregate rows into per (sweep point, architecture) statistics.

    Mean and standard error of sum_rate plus mean wall time, computed over
    the successful trials of each group; groups keep first-seen order.
    """
    groups = {}
    order = []
    for row in result.rows:
        key = (row.mode, row.L, row.K, row.snr_db, row.architecture)
        if key not in groups:
            groups[key] = []
            order.append(key)
        groups[key].append(row)
    out = []
    for key in order:
        rows = [r for r in groups[key] if np.isfinite(r.sum_rate)]
        n = len(rows)
        rates = np.array([r.sum_rate for r in rows]) if n else np.array([np.nan])
        walls = np.array([r.wall_time for r in rows]) if n else np.array([np.nan])
        stderr = float(np.std(rates, ddof=1) / np.sqrt(n)) if n > 1 else 0.0
        out.append(SummaryRow(
            mode=key[0], L=key[1], K=key[2], snr_db=key[3], architecture=key[4],
            trials=n, mean_sum_rate=float(np.mean(rates)),
            stderr_sum_rate=stderr, mean_wall_time=float(np.mean(walls)),
        ))
    return out


def write_summary(path, summary_rows) -> None:
    with open(path, "w") as fh:
        fh.write(SUMMARY_SCHEMA + "\n" + ",".join(SUMMARY_COLUMNS) + "\n")
        for row in summary_rows:
            fh.write(row.as_csv() + "\n")
