"""Repetition slotted ALOHA baseline (CRDSA / IRSA) with destructive collisions.

Each user sends copies of its packet in ``d`` distinct slots, with ``d`` drawn from
a degree distribution.  A slot is useful only if it is not erased and holds
exactly one unresolved copy; resolving a user cancels all of its copies
(iterative interference cancellation).
"""
from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .rng import IRSA_STREAM, erasure_uniforms, stream


@dataclass(frozen=True)
class DegreeDistribution:
    weights: Mapping[int, float]

    def __post_init__(self):
        if not self.weights:
            raise ValueError("degree distribution is empty")
        if any(d < 1 for d in self.weights):
            raise ValueError("degrees must be >= 1")
        if any(p < 0 for p in self.weights.values()):
            raise ValueError("probabilities must be non-negative")
        total = math.fsum(self.weights.values())
        if abs(total - 1.0) > 1e-9:
            raise ValueError(f"probabilities sum to {total}, expected 1")

    @classmethod
    def parse(cls, text: str) -> "DegreeDistribution":
        """Parse ``"2:0.5,3:0.28,8:0.22"``."""
        weights: dict[int, float] = {}
        try:
            for item in text.split(","):
                d, p = item.split(":")
                weights[int(d)] = weights.get(int(d), 0.0) + float(p)
        except ValueError:
            raise ValueError(f"bad degree distribution {text!r}; expected 'd:p,d:p,...'") from None
        return cls(weights)

    @property
    def max_degree(self) -> int:
        return max(self.weights)

    def __str__(self) -> str:
        return ",".join(f"{d}:{p!r}" for d, p in sorted(self.weights.items()))


CRDSA = DegreeDistribution({2: 1.0})


def draw_placements(M: int, N: int, dist: DegreeDistribution,
                    gen: np.random.Generator) -> list[np.ndarray]:
    """Slot sets (0-based) of ``M`` users."""
    if dist.max_degree > N:
        raise ValueError(f"degree {dist.max_degree} exceeds N={N}")
    degrees = np.array(sorted(dist.weights))
    probs = np.array([dist.weights[d] for d in degrees])
    drawn = gen.choice(degrees, size=M, p=probs / probs.sum())
    return [gen.choice(N, size=int(d), replace=False) for d in drawn]


def peel(placements: Sequence[np.ndarray], usable: np.ndarray,
         order: np.random.Generator | None = None) -> np.ndarray:
    """Iterative SIC.  Returns a bool array of resolved users.

    ``usable[k]`` is False for erased slots.  With ``order`` given, singleton
    slots are processed in random order (used to check order independence).
    """
    N = len(usable)
    occupants: list[set[int]] = [set() for _ in range(N)]
    for user, slots in enumerate(placements):
        for k in slots:
            occupants[k].add(user)
    resolved = np.zeros(len(placements), dtype=bool)
    ready = [k for k in range(N) if usable[k] and len(occupants[k]) == 1]
    queue = deque(ready)
    while queue:
        if order is not None:
            idx = int(order.integers(len(queue)))
            queue.rotate(-idx)
        k = queue.popleft()
        if len(occupants[k]) != 1:
            continue
        (user,) = occupants[k]
        resolved[user] = True
        for s in placements[user]:
            occupants[s].discard(user)
            if usable[s] and len(occupants[s]) == 1:
                queue.append(s)
    return resolved


def irsa_trial(M: int, N: int, dist: DegreeDistribution, epsilon: float, seed: int,
               trial: int = 0) -> int:
    """Number of users resolved in one frame."""
    gen = stream(seed, trial, IRSA_STREAM)
    placements = draw_placements(M, N, dist, gen)
    usable = erasure_uniforms(seed, trial, N) >= epsilon
    return int(peel(placements, usable).sum())


def irsa_throughput(M: int, N: int, dist: DegreeDistribution, epsilon: float, trials: int,
                    seed: int) -> float:
    """Mean resolved users per slot over ``trials`` frames."""
    total = sum(irsa_trial(M, N, dist, epsilon, seed, t) for t in range(trials))
    return total / (N * trials)
