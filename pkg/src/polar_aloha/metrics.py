"""Capacity and Bhattacharyya metrics of the synthetic slot erasure channels."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np


def check_power_of_two(N: int) -> int:
    """Return ``n = log2(N)`` or raise if ``N`` is not a power of two."""
    if not isinstance(N, (int, np.integer)) or N < 1 or N & (N - 1):
        raise ValueError(f"N must be a power of two, got {N!r}")
    return int(N).bit_length() - 1


def _check_epsilon(epsilon: float) -> None:
    if not 0.0 <= epsilon <= 1.0:
        raise ValueError(f"epsilon must lie in [0, 1], got {epsilon}")


def sec_capacity(epsilon: float, r: int) -> float:
    """Symmetric capacity of the slot erasure channel, in bits per channel use."""
    _check_epsilon(epsilon)
    if r < 1:
        raise ValueError(f"r must be >= 1, got {r}")
    return r * (1.0 - epsilon)


@dataclass(frozen=True)
class ChannelMetrics:
    N: int
    r: int
    epsilon: float
    I: np.ndarray
    Z: np.ndarray

    def capacity(self, index: int) -> float:
        """Capacity of synthetic channel ``index`` (1-based)."""
        return float(self.I[self._slot(index)])

    def bhattacharyya(self, index: int) -> float:
        return float(self.Z[self._slot(index)])

    def _slot(self, index: int) -> int:
        if not 1 <= index <= self.N:
            raise ValueError(f"index {index} outside 1..{self.N}")
        return index - 1


def _interleave(parent: np.ndarray, minus: np.ndarray, plus: np.ndarray) -> np.ndarray:
    out = np.empty(2 * parent.size)
    out[0::2] = minus
    out[1::2] = plus
    return out


def compute_metrics(N: int, epsilon: float, r: int = 1) -> ChannelMetrics:
    """Run the capacity and Bhattacharyya recursions for ``N = 2**n`` slots.

    Index ``2j-1`` is the degraded child and ``2j`` the upgraded child of
    channel ``j`` at the previous level.  This is also the order in which the
    natural-order decoder sees the sources of ``u @ F^{(x)n}``.
    """
    n = check_power_of_two(N)
    sec_capacity(epsilon, r)
    I = np.array([r * (1.0 - epsilon)])
    Z = np.array([r * epsilon])
    for _ in range(n):
        I_sq = I * I / r
        Z_sq = Z * Z / r
        I = _interleave(I, I_sq, 2 * I - I_sq)
        Z = _interleave(Z, 2 * Z - Z_sq, Z_sq)
    I.setflags(write=False)
    Z.setflags(write=False)
    return ChannelMetrics(N=N, r=r, epsilon=float(epsilon), I=I, Z=Z)


def capacity_order(metrics: ChannelMetrics) -> tuple[int, ...]:
    """1-based indices sorted by decreasing capacity; ties go to the larger index."""
    idx = np.arange(metrics.N)
    # lexsort: last key is primary
    order = np.lexsort((-idx, -metrics.I))
    return tuple(int(i) + 1 for i in order)


def polarization_fraction(metrics: ChannelMetrics, gamma: float) -> float:
    """Fraction of synthetic channels whose capacity lies in ``(gamma, r - gamma)``."""
    r = metrics.r
    if not 0 < gamma < r / 2:
        raise ValueError(f"gamma must lie in (0, r/2), got {gamma}")
    I = metrics.I
    return float(np.count_nonzero((I > gamma) & (I < r - gamma))) / metrics.N
