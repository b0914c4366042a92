"""Packet-level polar encoding of a slot frame and the slot erasure channel."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .metrics import check_power_of_two
from .packets import Packet, TernaryPacket, width_mask
from .rng import erasure_uniforms
from .spa import SpaAssignment


@dataclass(frozen=True)
class SlotFrame:
    """``N`` slots of ternary packets.  Channel outputs are all-or-nothing per slot."""

    slots: tuple[TernaryPacket, ...]

    @property
    def N(self) -> int:
        return len(self.slots)

    @property
    def r(self) -> int:
        return self.slots[0].r

    @classmethod
    def from_packets(cls, packets: Sequence[Packet]) -> "SlotFrame":
        return cls(tuple(p.ternary() for p in packets))

    @classmethod
    def from_words(cls, values, known, r: int) -> "SlotFrame":
        return cls(tuple(TernaryPacket(int(v), int(k), r) for v, k in zip(values, known)))

    def words(self) -> tuple[np.ndarray, np.ndarray]:
        values = np.array([s.value for s in self.slots], dtype=np.uint64)
        known = np.array([s.known for s in self.slots], dtype=np.uint64)
        return values, known

    def erased_slots(self) -> tuple[int, ...]:
        """1-based indices of erased slots."""
        return tuple(k + 1 for k, s in enumerate(self.slots) if s.is_erased)

    def is_slot_atomic(self) -> bool:
        full = width_mask(self.r)
        return all(s.known in (0, full) for s in self.slots)


def polar_transform(words: np.ndarray) -> np.ndarray:
    """``x = u F^{(x)n}`` over packed packets along the last axis (returns a copy)."""
    x = np.array(words, dtype=np.uint64, copy=True)
    N = x.shape[-1]
    check_power_of_two(N)
    lead = x.shape[:-1]
    h = 1
    while h < N:
        view = x.reshape(*lead, N // (2 * h), 2, h)
        view[..., 0, :] ^= view[..., 1, :]
        h *= 2
    return x


def encode_frame(source: Sequence[Packet], n: int | None = None) -> SlotFrame:
    """Encode a source frame of ``2**n`` packets into the on-air slot frame."""
    N = len(source)
    if n is not None and N != 1 << n:
        raise ValueError(f"source has {N} packets, expected {1 << n}")
    check_power_of_two(N)
    r = source[0].r
    if any(p.r != r for p in source):
        raise ValueError("source packets have different widths")
    x = polar_transform(np.array([p.value for p in source], dtype=np.uint64))
    return SlotFrame(tuple(TernaryPacket(int(v), width_mask(r), r) for v in x))


def superpose(info_words: np.ndarray, assignment: SpaAssignment) -> np.ndarray:
    """Collision view of the encoder: slot ``k`` is the XOR of every user transmitting in it.

    ``info_words`` has shape ``(..., M)`` with user ``t`` in column ``t-1``.
    """
    info_words = np.asarray(info_words, dtype=np.uint64)
    out = np.zeros(info_words.shape[:-1] + (assignment.N,), dtype=np.uint64)
    for t in range(1, assignment.M + 1):
        slots = np.flatnonzero(assignment.pattern(t).bits)
        out[..., slots] ^= info_words[..., t - 1 : t]
    return out


def erase_words(values: np.ndarray, erased: np.ndarray, r: int) -> tuple[np.ndarray, np.ndarray]:
    """Apply a boolean slot-erasure mask to packed slot words; returns ``(values, known)``."""
    full = np.uint64(width_mask(r))
    known = np.where(erased, np.uint64(0), full).astype(np.uint64)
    return values & known, known


def sec_transmit(frame: SlotFrame, epsilon: float, seed: int, trial: int = 0) -> SlotFrame:
    """Erase each slot independently with probability ``epsilon``.

    The erasure draw for slot ``k`` is the ``k``-th uniform of the stream keyed
    by ``(seed, trial)``.
    """
    if not 0.0 <= epsilon <= 1.0:
        raise ValueError(f"epsilon must lie in [0, 1], got {epsilon}")
    if any(not s.is_known for s in frame.slots):
        raise ValueError("sec_transmit expects a transmit-side frame")
    erased = erasure_uniforms(seed, trial, frame.N) < epsilon
    return SlotFrame(tuple(
        TernaryPacket.erased(s.r) if e else s for s, e in zip(frame.slots, erased)
    ))
