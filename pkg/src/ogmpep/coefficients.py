"""Lower-triangular step coefficients of fixed-step first-order methods.

A method in this class updates

    x_{i+1} = x_i - (1/L) * sum_{k=0..i} h_{k,i+1} grad f(x_k),

so it is fully described by the coefficients h_{k,j} with 0 <= k < j <= N.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .sequences import t_sequence, theta_sequence

OGM = "ogm"
OGM_PRIME = "ogm_prime"
CONSTANT = "constant"
CUSTOM = "custom"

RECURSIVE = "recursive"
SUMMATION = "summation"


@dataclass(frozen=True)
class StepMatrix:
    """Step coefficients stored as ``table[j - 1, k] = h_{k,j}``.

    Row ``j - 1`` holds the weights used to form x_j; only ``k < j`` is
    meaningful and the strict upper part of ``table`` is zero.
    """

    N: int
    table: np.ndarray
    variant: str = CUSTOM

    def __post_init__(self):
        table = np.array(self.table, dtype=float)
        if table.shape != (self.N, self.N):
            raise ValueError(f"table must be {self.N}x{self.N}, got {table.shape}")
        if np.any(np.triu(table, 1) != 0.0):
            raise ValueError("only entries h_{k,j} with k < j may be non-zero")
        table.setflags(write=False)
        object.__setattr__(self, "table", table)

    def h(self, k: int, j: int) -> float:
        """Coefficient h_{k,j} of grad f(x_k) in the update producing x_j."""
        if not 0 <= k < j <= self.N:
            raise IndexError(f"h_{{{k},{j}}} undefined for N={self.N}")
        return float(self.table[j - 1, k])

    def column_sums(self) -> np.ndarray:
        """sum_{j=1..i} sum_{k<j} h_{k,j} for i = 1..N."""
        return np.cumsum(self.table.sum(axis=1))

    def perturbed(self, k: int, j: int, delta: float) -> StepMatrix:
        self.h(k, j)
        table = self.table.copy()
        table[j - 1, k] += delta
        return StepMatrix(self.N, table, CUSTOM)

    def rows(self):
        """Yield (k, j, h_{k,j}) for every defined entry, ordered by j then k."""
        for j in range(1, self.N + 1):
            for k in range(j):
                yield k, j, float(self.table[j - 1, k])


def _recursive_table(s) -> np.ndarray:
    N = len(s) - 1
    table = np.zeros((N, N))
    for i in range(N):
        ratio = (s[i] - 1.0) / s[i + 1]
        for k in range(i - 1):
            table[i, k] = ratio * table[i - 1, k]
        if i >= 1:
            table[i, i - 1] = ratio * (table[i - 1, i - 1] - 1.0)
        table[i, i] = 1.0 + (2.0 * s[i] - 1.0) / s[i + 1]
    return table


def _summation_table(s) -> np.ndarray:
    N = len(s) - 1
    table = np.zeros((N, N))
    for i in range(N):
        for k in range(i):
            # h_{k,k+1} .. h_{k,i} live in rows k..i-1 of column k
            earlier = sum(table[j - 1, k] for j in range(k + 1, i + 1))
            table[i, k] = (2.0 * s[k] - earlier) / s[i + 1]
        table[i, i] = 1.0 + (2.0 * s[i] - 1.0) / s[i + 1]
    return table


def _build(s, rule: str) -> np.ndarray:
    if rule == RECURSIVE:
        return _recursive_table(s)
    if rule == SUMMATION:
        return _summation_table(s)
    raise ValueError(f"unknown rule {rule!r}; expected 'recursive' or 'summation'")


def ogm_step_matrix(N: int, rule: str = RECURSIVE) -> StepMatrix:
    """Coefficients of OGM built from the theta sequence."""
    if N < 1:
        raise ValueError(f"N must be >= 1, got {N}")
    return StepMatrix(N, _build(theta_sequence(N).values, rule), OGM)


def ogm_prime_step_matrix(N: int, rule: str = RECURSIVE) -> StepMatrix:
    """Coefficients of OGM' (t sequence everywhere, no special last step)."""
    if N < 1:
        raise ValueError(f"N must be >= 1, got {N}")
    return StepMatrix(N, _build(t_sequence(N).values, rule), OGM_PRIME)


def constant_step_matrix(h: float, N: int) -> StepMatrix:
    """Plain gradient method with step h/L: diagonal h, nothing else."""
    if N < 1:
        raise ValueError(f"N must be >= 1, got {N}")
    if not h > 0:
        raise ValueError(f"step size must be positive, got {h}")
    return StepMatrix(N, h * np.eye(N), CONSTANT)
