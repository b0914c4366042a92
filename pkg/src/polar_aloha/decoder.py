"""Packet-oriented successive cancellation (pSC) and list (pSCL) decoding.

Lattice layout: ``N`` rows and ``n + 1`` columns.  Column ``n`` holds the
received slots, column ``0`` the source estimates.  Going from column ``j + 1``
to column ``j`` the butterflies pair rows ``i`` and ``i + 2**j`` inside blocks of
``2**(j+1)`` rows: the upper row gets the erasure-aware XOR of the pair, the
lower row gets the plus-branch combine, which needs the estimate of the upper
row.  This wiring inverts :func:`polar_aloha.channel.polar_transform` and
visits source indices in natural order.

All packet words are packed into ``uint64``; a known mask travels alongside
every value word.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .metrics import check_power_of_two
from .packets import Packet, TernaryPacket, g_words, star_words, width_mask, _same_width

U64 = np.uint64
# bound on (n+1) * batch * N words held per lattice array
_LATTICE_WORDS = 1 << 21


def f_combine(q1: TernaryPacket, q2: TernaryPacket) -> TernaryPacket:
    _same_width(q1, q2)
    v, k = star_words(q1.value, q1.known, q2.value, q2.known)
    return TernaryPacket(v, k, q1.r)


def g_combine(q1: TernaryPacket, q2: TernaryPacket, uhat: TernaryPacket) -> TernaryPacket:
    _same_width(q1, q2)
    _same_width(q1, uhat)
    if not uhat.is_known:
        raise ValueError("the upper-branch estimate must be fully known")
    v, k = g_words(q1.value, q1.known, q2.value, q2.known, uhat.value)
    return TernaryPacket(v, k, q1.r)


@dataclass
class DecoderLattice:
    """Posterior values/known masks and estimates, each shaped ``(n+1, N)``."""

    Qv: np.ndarray
    Qk: np.ndarray
    Uv: np.ndarray
    info_set: frozenset[int]
    r: int

    def Q(self, i: int, j: int) -> TernaryPacket:
        """Posterior at 1-based row ``i``, column ``j``."""
        return TernaryPacket(int(self.Qv[j, i - 1]), int(self.Qk[j, i - 1]), self.r)

    def Uhat(self, i: int, j: int) -> Packet:
        return Packet(int(self.Uv[j, i - 1]), self.r)

    def plane(self, w: int) -> "DecoderLattice":
        """Bit plane ``w`` (0-based) as a width-1 lattice."""
        one = U64(1)
        sh = U64(w)
        return DecoderLattice(
            (self.Qv >> sh) & one, (self.Qk >> sh) & one, (self.Uv >> sh) & one,
            self.info_set, 1,
        )


@dataclass
class DecodePath:
    metric: np.ndarray
    branch_history: list[tuple[int, int, int]] = field(default_factory=list)


@dataclass
class DecodeResult:
    """``recovered`` maps 1-based info index to the decoded packet."""

    recovered: dict[int, Packet]
    residual_erasures: int
    source_estimate: np.ndarray
    lattice: DecoderLattice | None = None
    path: DecodePath | None = None
    conflicts: int = 0

    def success(self, transmitted: dict[int, Packet] | Iterable[Packet]) -> bool:
        if not isinstance(transmitted, dict):
            transmitted = dict(zip(sorted(self.recovered), transmitted))
        return self.residual_erasures == 0 and self.recovered == transmitted


def _popcount(words: np.ndarray) -> np.ndarray:
    return np.bitwise_count(words).astype(np.int64)


def _info_mask(info_set: Iterable[int], N: int) -> np.ndarray:
    mask = np.zeros(N, dtype=bool)
    for i in info_set:
        if not 1 <= i <= N:
            raise ValueError(f"info index {i} outside 1..{N}")
        mask[i - 1] = True
    return mask


def _check_received(received, r: int):
    values, known = received.words()
    check_power_of_two(len(values))
    if received.r != r:
        raise ValueError(f"frame width {received.r} != r={r}")
    if not received.is_slot_atomic():
        raise ValueError("received frame is not slot-atomic")
    return values, known


# -- pSC over a batch of frames --------------------------------------------

class _BatchSC:
    """Full-lattice pSC on ``B`` frames at once."""

    def __init__(self, yv: np.ndarray, yk: np.ndarray, info_mask: np.ndarray, r: int):
        B, N = yv.shape
        self.n = n = check_power_of_two(N)
        self.N = N
        self.full = U64(width_mask(r))
        self.info_mask = info_mask
        self.Qv = np.zeros((n + 1, B, N), dtype=U64)
        self.Qk = np.zeros((n + 1, B, N), dtype=U64)
        self.Uv = np.zeros((n + 1, B, N), dtype=U64)
        self.Qv[n] = yv
        self.Qk[n] = yk
        self.residual = np.zeros(B, dtype=np.int64)
        self.conflicts = np.zeros(B, dtype=np.int64)

    def run(self) -> "_BatchSC":
        self._node(self.n, 0)
        return self

    def _node(self, j: int, start: int) -> None:
        if j == 0:
            if self.info_mask[start]:
                q = self.Qv[0, :, start]
                self.Uv[0, :, start] = q
                self.residual += _popcount(~self.Qk[0, :, start] & self.full)
            else:
                self.Uv[0, :, start] = 0
            return
        h = 1 << (j - 1)
        a = slice(start, start + h)
        b = slice(start + h, start + 2 * h)
        Qv, Qk, Uv = self.Qv, self.Qk, self.Uv
        v1, k1, v2, k2 = Qv[j, :, a], Qk[j, :, a], Qv[j, :, b], Qk[j, :, b]
        Qv[j - 1, :, a], Qk[j - 1, :, a] = star_words(v1, k1, v2, k2)
        self._node(j - 1, start)
        u = Uv[j - 1, :, a]
        self.conflicts += _popcount(k1 & k2 & (v1 ^ u ^ v2)).sum(axis=1)
        Qv[j - 1, :, b], Qk[j - 1, :, b] = g_words(v1, k1, v2, k2, u)
        self._node(j - 1, start + h)
        Uv[j, :, a] = Uv[j - 1, :, a] ^ Uv[j - 1, :, b]
        Uv[j, :, b] = Uv[j - 1, :, b]


def psc_decode_words(yv: np.ndarray, yk: np.ndarray, info_mask: np.ndarray, r: int):
    """Batched pSC on packed words.

    ``yv``/``yk`` have shape ``(B, N)``.  Returns ``(uhat, residual)`` where
    ``uhat`` is the column-0 estimate ``(B, N)`` (erased bits decided as 0) and
    ``residual`` counts erased info bits per frame.
    """
    yv = np.atleast_2d(np.asarray(yv, dtype=U64))
    yk = np.atleast_2d(np.asarray(yk, dtype=U64))
    B, N = yv.shape
    n = check_power_of_two(N)
    chunk = max(1, _LATTICE_WORDS // ((n + 1) * N))
    uhat = np.empty((B, N), dtype=U64)
    residual = np.empty(B, dtype=np.int64)
    for s in range(0, B, chunk):
        sc = _BatchSC(yv[s:s + chunk], yk[s:s + chunk], info_mask, r).run()
        uhat[s:s + chunk] = sc.Uv[0]
        residual[s:s + chunk] = sc.residual
    return uhat, residual


def psc_decode(received, info_set: Iterable[int], r: int) -> DecodeResult:
    """Decode one received :class:`~polar_aloha.channel.SlotFrame` with pSC."""
    values, known = _check_received(received, r)
    info_set = frozenset(info_set)
    mask = _info_mask(info_set, len(values))
    sc = _BatchSC(values[None], known[None], mask, r).run()
    lattice = DecoderLattice(sc.Qv[:, 0].copy(), sc.Qk[:, 0].copy(), sc.Uv[:, 0].copy(), info_set, r)
    uhat = sc.Uv[0, 0]
    recovered = {i: Packet(int(uhat[i - 1]), r) for i in sorted(info_set)}
    return DecodeResult(
        recovered=recovered,
        residual_erasures=int(sc.residual[0]),
        source_estimate=uhat.copy(),
        lattice=lattice,
        conflicts=int(sc.conflicts[0]),
    )


# -- pSCL --------------------------------------------------------------------

class _ListSC:
    """pSCL for one frame with ``L`` path slots.

    Per path only the nodes on the active root-to-leaf branch are stored:
    ``Qv[j]/Qk[j]`` hold the ``2**j`` posteriors of the current node at column
    ``j`` and ``Ub[j]`` collects the estimates of its two children.
    """

    def __init__(self, yv: np.ndarray, yk: np.ndarray, info_mask: np.ndarray, r: int, L: int):
        if L < 1:
            raise ValueError(f"list size must be >= 1, got {L}")
        N = yv.shape[0]
        self.n = n = check_power_of_two(N)
        self.N, self.r, self.L = N, r, L
        self.info_mask = info_mask
        self.full = U64(width_mask(r))
        self.yv = np.broadcast_to(yv, (L, N))
        self.yk = np.broadcast_to(yk, (L, N))
        self.Qv = [np.zeros((L, 1 << j), dtype=U64) for j in range(n)]
        self.Qk = [np.zeros((L, 1 << j), dtype=U64) for j in range(n)]
        # Ub[j] for j = 1..n+1; Ub[n+1] receives the re-encoded frame
        self.Ub = [None] + [np.zeros((L, 1 << j), dtype=U64) for j in range(1, n + 2)]
        self.uhat = np.zeros((L, N), dtype=U64)
        self.metric = np.zeros((L, r), dtype=np.int64)
        self.active = np.zeros(L, dtype=bool)
        self.active[0] = True
        self.history: list[list[tuple[int, int, int]]] = [[] for _ in range(L)]
        self._bit_shifts = np.arange(r, dtype=U64)

    def _q(self, j):
        if j == self.n:
            return self.yv, self.yk
        return self.Qv[j], self.Qk[j]

    def run(self) -> "_ListSC":
        self._node(self.n, 0, 0)
        return self

    def _node(self, j: int, start: int, side: int) -> None:
        if j == 0:
            self._leaf(start)
            self.Ub[1][:, side] = self.uhat[:, start]
            return
        h = 1 << (j - 1)
        qv, qk = self._q(j)
        v1, k1, v2, k2 = qv[:, :h], qk[:, :h], qv[:, h:], qk[:, h:]
        self.Qv[j - 1][...], self.Qk[j - 1][...] = star_words(v1, k1, v2, k2)
        self._node(j - 1, start, 0)
        # the leaf may have reordered paths: re-read the parent node
        qv, qk = self._q(j)
        ub = self.Ub[j]
        self.Qv[j - 1][...], self.Qk[j - 1][...] = g_words(
            qv[:, :h], qk[:, :h], qv[:, h:], qk[:, h:], ub[:, :h])
        self._node(j - 1, start + h, 1)
        ub = self.Ub[j]
        out = self.Ub[j + 1]
        lo = side << j
        out[:, lo:lo + h] = ub[:, :h] ^ ub[:, h:]
        out[:, lo + h:lo + 2 * h] = ub[:, h:]

    def _leaf(self, i: int) -> None:
        qv = self.Qv[0][:, 0]
        qk = self.Qk[0][:, 0]
        bits = ((qk[:, None] >> self._bit_shifts) & U64(1)).astype(np.int64)
        self.metric += bits * self.active[:, None]
        if not self.info_mask[i]:
            self.uhat[:, i] = 0
            return
        self.uhat[:, i] = qv
        for w in range(self.r):
            bit = U64(1 << w)
            erased = self.active & ((qk & bit) == 0)
            if erased.any():
                self._fork(i, w, erased)

    def _fork(self, i: int, w: int, erased: np.ndarray) -> None:
        L = self.L
        # candidate c = 2*slot + guess, in creation order
        valid = np.empty(2 * L, dtype=bool)
        valid[0::2] = self.active
        valid[1::2] = erased
        score = np.repeat(self.metric.sum(axis=1), 2)
        cand = np.arange(2 * L)
        ranked = np.lexsort((cand, -score, ~valid))[:L]
        kept = np.sort(ranked)
        parents = kept // 2
        self.parents = parents
        guesses = (kept % 2).astype(U64)
        new_active = valid[kept]

        if not (np.array_equal(parents, np.arange(L)) and not guesses.any()):
            for j in range(self.n):
                self.Qv[j] = self.Qv[j][parents]
                self.Qk[j] = self.Qk[j][parents]
            for j in range(1, self.n + 2):
                self.Ub[j] = self.Ub[j][parents]
            self.uhat = self.uhat[parents]
            self.metric = self.metric[parents]
            self.history = [list(self.history[p]) for p in parents]
        bit = U64(1 << w)
        forked = erased[parents]
        self.uhat[forked, i] = (self.uhat[forked, i] & ~bit) | (guesses[forked] * bit)
        for s in range(L):
            if new_active[s] and forked[s]:
                self.history[s].append((i + 1, w + 1, int(guesses[s])))
        self.active = new_active

    def winner(self) -> int:
        score = np.where(self.active, self.metric.sum(axis=1), -1)
        return int(np.argmax(score))  # first maximum = lowest creation index


def pscl_decode_words(yv: np.ndarray, yk: np.ndarray, info_mask: np.ndarray, r: int, L: int):
    """pSCL on one frame of packed words; returns ``(uhat, path)`` of the winning path."""
    sc = _ListSC(np.asarray(yv, dtype=U64), np.asarray(yk, dtype=U64), info_mask, r, L).run()
    best = sc.winner()
    return sc.uhat[best].copy(), DecodePath(sc.metric[best].copy(), sc.history[best])


def pscl_decode(received, info_set: Iterable[int], r: int, L: int) -> DecodeResult:
    """Decode one received :class:`~polar_aloha.channel.SlotFrame` with pSCL."""
    values, known = _check_received(received, r)
    info_set = frozenset(info_set)
    uhat, path = pscl_decode_words(values, known, _info_mask(info_set, len(values)), r, L)
    recovered = {i: Packet(int(uhat[i - 1]), r) for i in sorted(info_set)}
    return DecodeResult(recovered=recovered, residual_erasures=0, source_estimate=uhat, path=path)


def decode_words(yv: np.ndarray, yk: np.ndarray, info_mask: np.ndarray, r: int,
                 decoder: str = "pSC", L: int = 1):
    """Batched front end used by the simulator.

    Returns ``(uhat, residual)``.  For pSCL, frames that pSC already decodes
    without any erased information bit are left as they are: such frames
    never fork, so every list decoder returns the same estimate.
    """
    uhat, residual = psc_decode_words(yv, yk, info_mask, r)
    if decoder == "pSC":
        return uhat, residual
    if decoder != "pSCL":
        raise ValueError(f"unknown decoder {decoder!r}")
    for b in np.flatnonzero(residual):
        uhat[b], _ = pscl_decode_words(yv[b], yk[b], info_mask, r, L)
    return uhat, np.zeros_like(residual)
