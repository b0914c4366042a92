"""Throughput bounds, asymptotic throughput and an exhaustive small-N oracle."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .channel import erase_words, polar_transform
from .decoder import decode_words
from .metrics import check_power_of_two, compute_metrics
from .packets import width_mask
from .spa import SpaAssignment, spa_v

MAX_ORACLE_N = 16


def offered_load(M: int, N: int) -> float:
    """Offered traffic load in packets per slot."""
    if N < 1:
        raise ValueError(f"N must be >= 1, got {N}")
    return M / N


@dataclass(frozen=True)
class ThroughputBounds:
    lower: float
    upper: float
    G: float


def bounds_for_assignment(assignment: SpaAssignment, epsilon: float, r: int = 1) -> ThroughputBounds:
    """pSC throughput bounds for the information set of ``assignment``.

    The lower bound uses the union bound on the block error, the upper bound
    the least reliable information channel alone.
    """
    metrics = compute_metrics(assignment.N, epsilon, r)
    z = metrics.Z[assignment.user_rows] / r
    G = offered_load(assignment.M, assignment.N)
    lower = max(0.0, G * (1.0 - math.fsum(z)))
    upper = G * (1.0 - float(z.max()))
    return ThroughputBounds(lower=lower, upper=upper, G=G)


def throughput_bounds(M: int, N: int, epsilon: float, r: int = 1) -> ThroughputBounds:
    if M > N:
        raise ValueError(f"M={M} exceeds N={N}")
    return bounds_for_assignment(spa_v(M, N, epsilon, r), epsilon, r)


def asymptotic_throughput(epsilon: float) -> float:
    if not 0.0 <= epsilon <= 1.0:
        raise ValueError(f"epsilon must lie in [0, 1], got {epsilon}")
    return 1.0 - epsilon


def erasure_patterns(N: int) -> np.ndarray:
    """All ``2**N`` slot-erasure patterns as a ``(2**N, N)`` bool array (row = bitmask)."""
    codes = np.arange(1 << N, dtype=np.int64)
    return ((codes[:, None] >> np.arange(N)) & 1).astype(bool)


def pattern_successes(assignment: SpaAssignment, r: int, decoder: str = "pSC", L: int = 1,
                      seed: int = 0) -> np.ndarray:
    """Decode one random payload per erasure pattern; returns a bool success vector."""
    N = assignment.N
    if N > MAX_ORACLE_N:
        raise ValueError(f"exhaustive enumeration limited to N <= {MAX_ORACLE_N}, got {N}")
    patterns = erasure_patterns(N)
    rng = np.random.default_rng(seed)
    info = rng.integers(0, np.iinfo(np.uint64).max, size=(len(patterns), assignment.M),
                        dtype=np.uint64, endpoint=True) & np.uint64(width_mask(r))
    source = np.zeros((len(patterns), N), dtype=np.uint64)
    rows = assignment.user_rows
    source[:, rows] = info
    yv, yk = erase_words(polar_transform(source), patterns, r)
    uhat, residual = decode_words(yv, yk, assignment.info_mask(), r, decoder, L)
    return (residual == 0) & np.all(uhat[:, rows] == info, axis=1)


def exact_success_probability(M: int, N: int, epsilon: float, r: int = 1, decoder: str = "pSC",
                              L: int = 1, assignment: SpaAssignment | None = None) -> float:
    """Exact P_u by weighting every erasure pattern with its probability.

    Success of pSC depends only on the erasure pattern, so a single random
    payload per pattern is enough.  For pSCL that property does not hold in
    general; the value is then the success probability for the drawn payloads.
    """
    check_power_of_two(N)
    if N > MAX_ORACLE_N:
        raise ValueError(f"exhaustive enumeration limited to N <= {MAX_ORACLE_N}, got {N}")
    if assignment is None:
        assignment = spa_v(M, N, epsilon, r)
    ok = pattern_successes(assignment, r, decoder, L)
    n_erased = erasure_patterns(N).sum(axis=1)
    weights = epsilon ** n_erased * (1.0 - epsilon) ** (N - n_erased)
    return math.fsum(weights[ok])
