"""Momentum scalar sequences t_i and theta_i.

Both are produced by the recursion ``s_{i+1} = (1 + sqrt(1 + 4 s_i^2)) / 2``
starting from 1.  The OGM sequence theta replaces the very last step by
``(1 + sqrt(1 + 8 s_{N-1}^2)) / 2``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

STANDARD_T = "standard_t"
OGM_THETA = "ogm_theta"


@dataclass(frozen=True)
class SequenceTable:
    """Immutable table of momentum scalars indexed 0..N."""

    kind: str
    N: int
    values: np.ndarray

    def __post_init__(self):
        values = np.array(self.values, dtype=float)
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    def __getitem__(self, i):
        return self.values[i]

    def __len__(self):
        return len(self.values)

    def __iter__(self):
        return iter(self.values)

    def recursion_residuals(self) -> np.ndarray:
        """Relative residuals of ``s_{i+1}^2 - s_{i+1} - c s_i^2`` for every step.

        ``c`` is 1 for the standard steps and 2 for the final theta step.
        """
        s = self.values
        c = np.ones(len(s) - 1)
        if self.kind == OGM_THETA:
            c[-1] = 2.0
        nxt = s[1:]
        return np.abs(nxt**2 - nxt - c * s[:-1] ** 2) / nxt**2


def _standard_step(s: float) -> float:
    return (1.0 + math.sqrt(1.0 + 4.0 * s * s)) / 2.0


def _final_theta_step(s: float) -> float:
    return (1.0 + math.sqrt(1.0 + 8.0 * s * s)) / 2.0


def t_sequence(N: int) -> SequenceTable:
    """Return t_0..t_N of the standard recursion (t_0 = 1)."""
    if N < 0:
        raise ValueError(f"N must be non-negative, got {N}")
    values = [1.0]
    for _ in range(N):
        values.append(_standard_step(values[-1]))
    return SequenceTable(STANDARD_T, N, values)


def theta_sequence(N: int) -> SequenceTable:
    """Return theta_0..theta_N; identical to t except for the last entry."""
    if N < 1:
        raise ValueError(f"theta sequence needs N >= 1, got {N}")
    values = [1.0]
    for i in range(N):
        step = _final_theta_step if i == N - 1 else _standard_step
        values.append(step(values[-1]))
    return SequenceTable(OGM_THETA, N, values)
