"""Fixed-width packet algebra.

Packets are stored as packed integers: bit ``w`` of a packet (0-based) is bit
``w`` of the integer.  The same bitwise kernels (:func:`star_words`,
:func:`g_words`) work on Python ints and on ``uint64`` numpy arrays, which is
what the batched decoder uses.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

MAX_WIDTH = 64


def width_mask(r: int) -> int:
    return (1 << r) - 1


def _check_width(r: int) -> None:
    if not 1 <= r <= MAX_WIDTH:
        raise ValueError(f"packet width must be in [1, {MAX_WIDTH}], got {r}")


def pack_bits(bits: Iterable[int]) -> tuple[int, int]:
    """Pack a bit sequence (first element = bit 0) into ``(value, width)``."""
    value = 0
    r = 0
    for w, b in enumerate(bits):
        if b not in (0, 1):
            raise ValueError(f"bits must be 0/1, got {b!r} at position {w}")
        value |= int(b) << w
        r += 1
    return value, r


def unpack_bits(value: int, r: int) -> tuple[int, ...]:
    return tuple((value >> w) & 1 for w in range(r))


@dataclass(frozen=True)
class Packet:
    """A fully known ``r``-bit packet."""

    value: int
    r: int

    def __post_init__(self):
        _check_width(self.r)
        if not 0 <= self.value <= width_mask(self.r):
            raise ValueError(f"value {self.value:#x} does not fit in {self.r} bits")

    @classmethod
    def from_bits(cls, bits: Sequence[int]) -> "Packet":
        value, r = pack_bits(bits)
        return cls(value, r)

    @classmethod
    def zeros(cls, r: int) -> "Packet":
        return cls(0, r)

    @property
    def bits(self) -> tuple[int, ...]:
        return unpack_bits(self.value, self.r)

    def __len__(self) -> int:
        return self.r

    def __xor__(self, other: "Packet") -> "Packet":
        return xor_packets(self, other)

    def ternary(self) -> "TernaryPacket":
        return TernaryPacket(self.value, width_mask(self.r), self.r)


@dataclass(frozen=True)
class TernaryPacket:
    """Packet over ``{0, 1, e}``: ``known`` marks the positions that are not erased.

    Erased positions always store value 0, so dataclass equality treats two
    erased positions as equal.
    """

    value: int
    known: int
    r: int

    def __post_init__(self):
        _check_width(self.r)
        full = width_mask(self.r)
        if not (0 <= self.known <= full and 0 <= self.value <= full):
            raise ValueError(f"value/known do not fit in {self.r} bits")
        object.__setattr__(self, "value", self.value & self.known)

    @classmethod
    def from_symbols(cls, symbols: Sequence) -> "TernaryPacket":
        """Build from a sequence of ``0``, ``1`` and ``'e'`` (or ``None``) symbols."""
        value = known = 0
        for w, s in enumerate(symbols):
            if s in ("e", None):
                continue
            if s not in (0, 1):
                raise ValueError(f"symbol must be 0, 1 or 'e', got {s!r}")
            known |= 1 << w
            value |= int(s) << w
        return cls(value, known, len(symbols))

    @classmethod
    def erased(cls, r: int) -> "TernaryPacket":
        return cls(0, 0, r)

    @property
    def symbols(self) -> tuple:
        return tuple(
            ((self.value >> w) & 1) if (self.known >> w) & 1 else "e" for w in range(self.r)
        )

    @property
    def is_erased(self) -> bool:
        return self.known == 0

    @property
    def is_known(self) -> bool:
        return self.known == width_mask(self.r)

    def to_packet(self) -> Packet:
        if not self.is_known:
            raise ValueError("packet has erased positions")
        return Packet(self.value, self.r)


def _same_width(a, b) -> None:
    if a.r != b.r:
        raise ValueError(f"packet width mismatch: {a.r} != {b.r}")


def xor_packets(a: Packet, b: Packet) -> Packet:
    """Bitwise mod-2 sum of two equal-width packets."""
    _same_width(a, b)
    return Packet(a.value ^ b.value, a.r)


def star_words(v1, k1, v2, k2):
    """Erasure-aware XOR on packed words; returns ``(value, known)``."""
    known = k1 & k2
    return (v1 ^ v2) & known, known


def g_words(v1, k1, v2, k2, u):
    """Plus-branch combine on packed words.

    ``v1/k1`` is the slot carrying ``u1 + u2``, ``v2/k2`` the slot carrying
    ``u2`` and ``u`` the (fully known) estimate of ``u1``.  Each bit of ``u2`` is
    taken from whichever slot knows it; two known but disagreeing slots give an
    erasure.
    """
    c1 = v1 ^ u
    conflict = k1 & k2 & (c1 ^ v2)
    known = (k1 | k2) & ~conflict
    return ((c1 & k1) | (v2 & k2)) & known, known


def star(a: TernaryPacket, b: TernaryPacket) -> TernaryPacket:
    _same_width(a, b)
    value, known = star_words(a.value, a.known, b.value, b.known)
    return TernaryPacket(value, known, a.r)


def indicator(a: TernaryPacket) -> tuple[int, ...]:
    """Per-position non-erasure indicator, as a 0/1 tuple."""
    return unpack_bits(a.known, a.r)
