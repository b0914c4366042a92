"""Counter-based random streams.

Every draw is keyed by ``(seed, trial)`` through Philox, so a trial's erasure
pattern and payloads do not depend on which worker runs it or in which order.
Slot ``k`` uses the ``k``-th uniform of the erasure stream, which also couples
erasure patterns across different ``epsilon`` values for the same trial.
"""
from __future__ import annotations

import numpy as np

ERASURE_STREAM = 0
PAYLOAD_STREAM = 1
IRSA_STREAM = 2

_U64_MAX = np.iinfo(np.uint64).max


def stream(seed: int, trial: int, which: int) -> np.random.Generator:
    bitgen = np.random.Philox(key=[int(seed) & _U64_MAX, int(trial)], counter=[0, 0, 0, which])
    return np.random.Generator(bitgen)


def erasure_uniforms(seed: int, trial: int, N: int) -> np.ndarray:
    """Uniforms in [0, 1); slot ``k`` is erased iff ``u[k] < epsilon``."""
    return stream(seed, trial, ERASURE_STREAM).random(N)


def random_payloads(seed: int, trial: int, count: int, r: int) -> np.ndarray:
    """``count`` uniform ``r``-bit payloads as uint64."""
    gen = stream(seed, trial, PAYLOAD_STREAM)
    words = gen.integers(0, _U64_MAX, size=count, dtype=np.uint64, endpoint=True)
    return words & np.uint64((1 << r) - 1)
