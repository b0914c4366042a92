"""Slot-pattern assignment (SPA-v / SPA-f) and the equivalent source frame."""
from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .metrics import capacity_order, check_power_of_two, compute_metrics
from .packets import Packet


@dataclass(frozen=True)
class SlotPattern:
    """Row ``row_index`` (1-based) of ``F_2^{(x)n}``, i.e. the slots a user transmits in."""

    bits: tuple[int, ...]
    row_index: int

    @property
    def weight(self) -> int:
        return sum(self.bits)

    @property
    def slots(self) -> tuple[int, ...]:
        """1-based slot indices carrying a copy."""
        return tuple(k + 1 for k, b in enumerate(self.bits) if b)


def kernel_row(n: int, row_index: int) -> SlotPattern:
    """Column ``j`` is set iff the bits of ``j-1`` are a subset of those of ``row_index-1``."""
    N = 1 << n
    if not 1 <= row_index <= N:
        raise ValueError(f"row index must be in [1, {N}], got {row_index}")
    row = row_index - 1
    bits = tuple(int((col & ~row) == 0) for col in range(N))
    return SlotPattern(bits=bits, row_index=row_index)


def kernel_matrix(n: int) -> np.ndarray:
    """``F_2^{(x)n}`` as a uint8 matrix (no bit reversal)."""
    F = np.array([[1]], dtype=np.uint8)
    kernel = np.array([[1, 0], [1, 1]], dtype=np.uint8)
    for _ in range(n):
        F = np.kron(F, kernel)
    return F


@dataclass(frozen=True)
class SpaAssignment:
    """Outcome of a slot-pattern assignment.

    ``order`` is the capacity-ordered index sequence; user ``t`` (1..M) holds
    row ``order[M - t]`` so that user ``M`` gets the most reliable row.
    """

    order: tuple[int, ...]
    M: int
    N: int
    epsilon_used: float | None = None

    def __post_init__(self):
        _check_permutation(self.order, self.N)
        if not 0 <= self.M <= self.N:
            raise ValueError(f"M must be in [0, N={self.N}], got {self.M}")

    @property
    def info_set(self) -> frozenset[int]:
        return frozenset(self.order[: self.M])

    @property
    def n(self) -> int:
        return check_power_of_two(self.N)

    def row_of(self, user: int) -> int:
        """1-based kernel row assigned to ``user`` (1..M)."""
        if not 1 <= user <= self.M:
            raise ValueError(f"user must be in [1, {self.M}], got {user}")
        return self.order[self.M - user]

    def pattern(self, user: int) -> SlotPattern:
        return kernel_row(self.n, self.row_of(user))

    @property
    def patterns(self) -> dict[int, SlotPattern]:
        return {t: self.pattern(t) for t in range(1, self.M + 1)}

    @property
    def user_rows(self) -> np.ndarray:
        """0-based source positions of users ``1..M`` as an int array."""
        return np.array([self.row_of(t) - 1 for t in range(1, self.M + 1)], dtype=np.intp)

    def info_mask(self) -> np.ndarray:
        mask = np.zeros(self.N, dtype=bool)
        mask[self.user_rows] = True
        return mask


def _check_permutation(order: Sequence[int], N: int) -> None:
    if len(order) != N or sorted(order) != list(range(1, N + 1)):
        raise ValueError(f"order must be a permutation of 1..{N}")


def spa_v(M: int, N: int, epsilon: float, r: int = 1) -> SpaAssignment:
    """SPA with the capacity order computed online at the current ``epsilon``."""
    if M > N:
        raise ValueError(f"M={M} exceeds the number of slots N={N}")
    if M < 1:
        raise ValueError(f"M must be >= 1, got {M}")
    order = capacity_order(compute_metrics(N, epsilon, r))
    return SpaAssignment(order=order, M=M, N=N, epsilon_used=float(epsilon))


def spa_f(M: int, N: int, stored_order: Sequence[int]) -> SpaAssignment:
    """SPA reading a pre-computed capacity order (look-up table)."""
    stored_order = tuple(int(i) for i in stored_order)
    _check_permutation(stored_order, N)
    if not 1 <= M <= N:
        raise ValueError(f"M must be in [1, N={N}], got {M}")
    return SpaAssignment(order=stored_order, M=M, N=N)


def build_source_frame(info_packets: Sequence[Packet], assignment: SpaAssignment) -> list[Packet]:
    """Place user ``t``'s packet at its assigned row; all other rows carry zeros."""
    if len(info_packets) != assignment.M:
        raise ValueError(f"expected {assignment.M} packets, got {len(info_packets)}")
    if not info_packets:
        raise ValueError("cannot infer packet width from an empty sequence")
    r = info_packets[0].r
    if any(p.r != r for p in info_packets):
        raise ValueError("info packets have different widths")
    frame = [Packet.zeros(r)] * assignment.N
    for t, packet in enumerate(info_packets, start=1):
        frame[assignment.row_of(t) - 1] = packet
    return frame


# -- SPA-f look-up tables ---------------------------------------------------

def design_table(N: int, design_epsilon: float) -> tuple[int, ...]:
    return capacity_order(compute_metrics(N, design_epsilon))


def write_spa_table(path: str | os.PathLike, N: int, design_epsilon: float,
                    order: Sequence[int] | None = None) -> None:
    if order is None:
        order = design_table(N, design_epsilon)
    _check_permutation(list(order), N)
    with open(path, "w") as fh:
        fh.write(f"{N},{design_epsilon!r}\n")
        fh.write(",".join(str(i) for i in order) + "\n")


def read_spa_table(path: str | os.PathLike) -> tuple[int, float, tuple[int, ...]]:
    """Return ``(N, design_epsilon, order)`` from a table file."""
    with open(path) as fh:
        lines = [ln.strip() for ln in fh if ln.strip()]
    if len(lines) != 2:
        raise ValueError(f"{path}: expected a header line and an order line")
    try:
        N_text, eps_text = lines[0].split(",")
        N = int(N_text)
        design_epsilon = float(eps_text)
        order = tuple(int(x) for x in lines[1].split(","))
    except ValueError as exc:
        raise ValueError(f"{path}: malformed SPA table ({exc})") from None
    _check_permutation(order, N)
    return N, design_epsilon, order


def info_packets_by_user(frame: Sequence, assignment: SpaAssignment) -> Mapping[int, object]:
    """Inverse of :func:`build_source_frame`: ``{user: frame[row_of(user)]}``."""
    return {t: frame[assignment.row_of(t) - 1] for t in range(1, assignment.M + 1)}
