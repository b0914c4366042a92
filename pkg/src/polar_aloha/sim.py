"""Monte Carlo throughput sweeps.

A sweep is a grid over ``epsilon`` and offered load.  Each grid point runs
``trials`` independent slot frames: random payloads, packet-level polar
encoding, slot erasures, pSC/pSCL decoding.  A frame counts as a success when
every information packet is recovered exactly (for pSC additionally no
information bit may remain erased).

Trials are cut into fixed-size chunks and all randomness is keyed by
``(seed, trial)``, so results do not depend on the number of workers.
"""
from __future__ import annotations

import csv
import io
import json
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields
from typing import Iterable, Sequence

import numpy as np

from .analysis import bounds_for_assignment
from .channel import erase_words, polar_transform
from .decoder import decode_words
from .metrics import check_power_of_two
from .packets import MAX_WIDTH
from .rng import erasure_uniforms, random_payloads
from .spa import SpaAssignment, read_spa_table, spa_f, spa_v

CSV_HEADER = (
    "epsilon", "N", "M", "G", "decoder", "L", "spa_mode", "trials", "successes",
    "P_u", "T", "per_user_rate", "T_lower", "T_upper",
)
CHUNK_TRIALS = 512


class ConfigError(ValueError):
    """Invalid simulation configuration."""


@dataclass
class SimConfig:
    N: int
    epsilons: list[float]
    loads: list[float] | None = None
    users: list[int] | None = None
    r: int = 8
    decoder: str = "pSC"
    L: int = 1
    spa_mode: str = "v"
    spa_table: str | None = None
    trials: int = 1000
    seed: int = 0
    output: str | None = None
    workers: int = 1

    def __post_init__(self):
        self.validate()

    @classmethod
    def from_dict(cls, data: dict) -> "SimConfig":
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise ConfigError(f"unknown config field(s): {', '.join(unknown)}")
        missing = [name for name in ("N", "epsilons") if name not in data]
        if missing:
            raise ConfigError(f"missing config field(s): {', '.join(missing)}")
        return cls(**data)

    @classmethod
    def from_json(cls, path: str | os.PathLike) -> "SimConfig":
        try:
            with open(path) as fh:
                data = json.load(fh)
        except OSError as exc:
            raise ConfigError(f"cannot read config {os.fspath(path)!r}: {exc.strerror}") from None
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config {os.fspath(path)!r} is not valid JSON: {exc}") from None
        if not isinstance(data, dict):
            raise ConfigError(f"config {os.fspath(path)!r} must hold a JSON object")
        return cls.from_dict(data)

    def validate(self) -> None:
        def bad(name, why):
            raise ConfigError(f"{name}: {why}")

        try:
            check_power_of_two(self.N)
        except ValueError:
            bad("N", f"must be a power of two, got {self.N!r}")
        if not self.epsilons:
            bad("epsilons", "must not be empty")
        for e in self.epsilons:
            if not 0.0 <= e <= 1.0:
                bad("epsilons", f"{e} outside [0, 1]")
        if (self.loads is None) == (self.users is None):
            bad("loads", "give exactly one of 'loads' (G values) or 'users' (M values)")
        for M in self.user_grid():
            if not 1 <= M <= self.N:
                bad("loads" if self.loads is not None else "users",
                    f"derived M={M} outside [1, N={self.N}]")
        if not 1 <= self.r <= MAX_WIDTH:
            bad("r", f"must be in [1, {MAX_WIDTH}]")
        if self.decoder not in ("pSC", "pSCL"):
            bad("decoder", f"must be 'pSC' or 'pSCL', got {self.decoder!r}")
        if self.L < 1:
            bad("L", "must be >= 1")
        if self.spa_mode not in ("v", "f"):
            bad("spa_mode", f"must be 'v' or 'f', got {self.spa_mode!r}")
        if self.spa_mode == "f" and not self.spa_table:
            bad("spa_table", "required when spa_mode is 'f'")
        if self.trials < 1:
            bad("trials", "must be >= 1")
        if self.workers < 1:
            bad("workers", "must be >= 1")

    def user_grid(self) -> list[int]:
        if self.users is not None:
            return [int(M) for M in self.users]
        return [int(math.floor(G * self.N + 0.5)) for G in self.loads]


@dataclass
class SimResult:
    epsilon: float
    N: int
    M: int
    G: float
    decoder: str
    L: int
    spa_mode: str
    trials: int
    successes: int
    P_u: float
    T: float
    per_user_rate: float
    T_lower: float
    T_upper: float
    wall_clock_seconds: float = field(default=0.0, compare=False)

    def row(self) -> list[str]:
        values = [getattr(self, name) for name in CSV_HEADER]
        return [repr(v) if isinstance(v, float) else str(v) for v in values]


@dataclass(frozen=True)
class _Task:
    N: int
    r: int
    epsilon: float
    decoder: str
    L: int
    seed: int
    order: tuple[int, ...]
    M: int
    first: int
    stop: int


def run_trials(assignment: SpaAssignment, epsilon: float, r: int, decoder: str, L: int,
               seed: int, first: int, stop: int) -> tuple[int, int]:
    """Run trials ``first..stop-1``; returns ``(frame_successes, packets_recovered)``."""
    N, M = assignment.N, assignment.M
    count = stop - first
    rows = assignment.user_rows
    info = np.empty((count, M), dtype=np.uint64)
    erased = np.empty((count, N), dtype=bool)
    for b, trial in enumerate(range(first, stop)):
        info[b] = random_payloads(seed, trial, M, r)
        erased[b] = erasure_uniforms(seed, trial, N) < epsilon
    source = np.zeros((count, N), dtype=np.uint64)
    source[:, rows] = info
    yv, yk = erase_words(polar_transform(source), erased, r)
    uhat, residual = decode_words(yv, yk, assignment.info_mask(), r, decoder, L)
    match = uhat[:, rows] == info
    ok = match.all(axis=1) & (residual == 0)
    return int(ok.sum()), int(match.sum())


def _run_task(task: _Task) -> tuple[int, int]:
    assignment = SpaAssignment(order=task.order, M=task.M, N=task.N)
    return run_trials(assignment, task.epsilon, task.r, task.decoder, task.L, task.seed,
                      task.first, task.stop)


def _assignment(config: SimConfig, M: int, epsilon: float, table) -> SpaAssignment:
    if config.spa_mode == "v":
        return spa_v(M, config.N, epsilon, config.r)
    return spa_f(M, config.N, table)


def load_table(config: SimConfig):
    if config.spa_mode != "f":
        return None
    try:
        N, _, order = read_spa_table(config.spa_table)
    except OSError as exc:
        raise ConfigError(f"spa_table: cannot read {config.spa_table!r}: {exc.strerror}") from None
    if N != config.N:
        raise ConfigError(f"spa_table: table is for N={N}, config has N={config.N}")
    return order


def run_sweep(config: SimConfig) -> list[SimResult]:
    """Simulate every grid point of ``config`` and return one result per point."""
    config.validate()
    table = load_table(config)
    points = []
    tasks: list[_Task] = []
    for epsilon in config.epsilons:
        for M in config.user_grid():
            assignment = _assignment(config, M, epsilon, table)
            first_task = len(tasks)
            for first in range(0, config.trials, CHUNK_TRIALS):
                tasks.append(_Task(config.N, config.r, float(epsilon), config.decoder, config.L,
                                   config.seed, assignment.order, M, first,
                                   min(first + CHUNK_TRIALS, config.trials)))
            points.append((epsilon, assignment, first_task, len(tasks)))

    start = time.perf_counter()
    if config.workers > 1:
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            counts = list(pool.map(_run_task, tasks))
    else:
        counts = [_run_task(t) for t in tasks]
    elapsed = time.perf_counter() - start

    results = []
    for epsilon, assignment, lo, hi in points:
        successes = sum(c[0] for c in counts[lo:hi])
        recovered = sum(c[1] for c in counts[lo:hi])
        M, N = assignment.M, assignment.N
        G = M / N
        P_u = successes / config.trials
        bounds = bounds_for_assignment(assignment, epsilon, config.r)
        results.append(SimResult(
            epsilon=float(epsilon), N=N, M=M, G=G, decoder=config.decoder, L=config.L,
            spa_mode=config.spa_mode, trials=config.trials, successes=successes,
            P_u=P_u, T=G * P_u, per_user_rate=recovered / (M * config.trials),
            T_lower=bounds.lower, T_upper=bounds.upper,
            wall_clock_seconds=elapsed * (hi - lo) / max(1, len(tasks)),
        ))
    return results


def write_csv(results: Iterable[SimResult], out: io.TextIOBase) -> None:
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for res in results:
        writer.writerow(res.row())


def read_csv(path_or_file) -> list[dict]:
    """Parse a sweep CSV back into dicts with numeric fields converted."""
    ints = {"N", "M", "L", "trials", "successes"}
    strs = {"decoder", "spa_mode"}
    if isinstance(path_or_file, (str, os.PathLike)):
        with open(path_or_file) as fh:
            return read_csv(fh)
    rows = []
    for raw in csv.DictReader(path_or_file):
        rows.append({k: (int(v) if k in ints else v if k in strs else float(v))
                     for k, v in raw.items()})
    return rows


def max_throughput(results: Sequence[SimResult]) -> SimResult:
    return max(results, key=lambda res: res.T)


def config_dict(config: SimConfig) -> dict:
    return asdict(config)
