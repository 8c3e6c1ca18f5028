"""Dual certificates for the relaxed performance estimation problem.

A step matrix h together with multipliers (lambda, tau, gamma) in the dual
domain proves the worst-case bound ``f(x_N) - f* <= L R^2 gamma / 2`` as soon
as the block matrix

    [[ S(h, lambda, tau),  tau / 2 ],
     [ tau^T / 2,          gamma / 2]]

is positive semidefinite.  The primary-sequence variant adds ``u_N u_N^T / 2``
to the S block and then bounds ``f(y_{N+1}) - f*`` instead.  The unit vector
used in the primal problem never appears here: the dual side does not
depend on it.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .coefficients import OGM_PRIME, StepMatrix, ogm_prime_step_matrix, ogm_step_matrix
from .sequences import t_sequence, theta_sequence

D = "D"
D_PRIME = "D_prime"

OUTER_PRODUCT_SUM = "outer_product_sum"
CLOSED_FORM = "closed_form_entries"

MEMBERSHIP_TOL = 1e-12
PSD_TOL = 1e-9
RANK_ONE_TOL = 1e-10


class MultiplierError(ValueError):
    """Multipliers lie outside the dual domain (sign or linear constraints)."""


@dataclass(frozen=True)
class Multipliers:
    """lam[i - 1] = lambda_i for i = 1..N, tau[i] = tau_i for i = 0..N, and gamma."""

    lam: np.ndarray
    tau: np.ndarray
    gamma: float
    kind: str = "custom"

    def __post_init__(self):
        lam = np.array(self.lam, dtype=float)
        tau = np.array(self.tau, dtype=float)
        if len(tau) != len(lam) + 1:
            raise ValueError(f"need N lambdas and N+1 taus, got {len(lam)} and {len(tau)}")
        lam.setflags(write=False)
        tau.setflags(write=False)
        object.__setattr__(self, "lam", lam)
        object.__setattr__(self, "tau", tau)
        object.__setattr__(self, "gamma", float(self.gamma))

    @property
    def N(self) -> int:
        return len(self.lam)

    def residuals(self) -> dict:
        """Absolute violation of each defining relation of the dual domain."""
        lam, tau = self.lam, self.tau
        chain = lam[:-1] - lam[1:] + tau[1:-1]
        return {
            "lambda_nonneg": float(max(0.0, -lam.min())),
            "tau_nonneg": float(max(0.0, -tau.min())),
            "tau0_eq_lambda1": float(abs(tau[0] - lam[0])),
            "lambdaN_plus_tauN": float(abs(lam[-1] + tau[-1] - 1.0)),
            "telescoping": float(np.abs(chain).max()) if len(chain) else 0.0,
        }

    def check(self, tol: float = MEMBERSHIP_TOL) -> dict:
        res = self.residuals()
        bad = {k: v for k, v in res.items() if v > tol}
        if bad:
            raise MultiplierError(f"multipliers violate the dual domain: {bad}")
        return res


def _basis(N):
    return np.eye(N + 1)


def _assemble_outer(H: StepMatrix, m: Multipliers) -> np.ndarray:
    N = H.N
    u = _basis(N)
    # direct[i] = sum_k h_{k,i} u_k ; cumulative[i] = sum_{j<=i} sum_k h_{k,j} u_k
    direct = np.zeros((N + 1, N + 1))
    direct[1:, : N] = H.table
    direct[1:] = direct[1:] @ u
    cumulative = np.cumsum(direct, axis=0)
    S = np.zeros((N + 1, N + 1))
    for i in range(1, N + 1):
        diff = u[i - 1] - u[i]
        A = 0.5 * np.outer(diff, diff)
        A += 0.5 * (np.outer(u[i], direct[i]) + np.outer(direct[i], u[i]))
        S += m.lam[i - 1] * A
    for i in range(N + 1):
        Dm = 0.5 * np.outer(u[i], u[i])
        Dm += 0.5 * (np.outer(u[i], cumulative[i]) + np.outer(cumulative[i], u[i]))
        S += m.tau[i] * Dm
    return S


def _assemble_closed(H: StepMatrix, m: Multipliers) -> np.ndarray:
    # entrywise form; valid only for multipliers inside the dual domain
    N = H.N
    lam = lambda i: m.lam[i - 1]
    tau = m.tau
    S = np.zeros((N + 1, N + 1))
    for i in range(1, N + 1):
        for k in range(i - 1):
            inner = sum(H.h(k, j) for j in range(k + 1, i))
            S[i, k] = 0.5 * ((lam(i) + tau[i]) * H.h(k, i) + tau[i] * inner)
        S[i, i - 1] = 0.5 * ((lam(i) + tau[i]) * H.h(i - 1, i) - lam(i))
    for i in range(N):
        S[i, i] = lam(i + 1)
    S[N, N] = 0.5
    return np.tril(S) + np.tril(S, -1).T


def assemble_S(H: StepMatrix, m: Multipliers, provenance: str = OUTER_PRODUCT_SUM) -> np.ndarray:
    """Symmetric (N+1)x(N+1) matrix S(h, lambda, tau).

    ``outer_product_sum`` builds it from the rank-one pieces; ``closed_form_entries``
    writes each entry directly and assumes the multipliers are dual-feasible.
    """
    if H.N != m.N:
        raise ValueError(f"step matrix has N={H.N} but multipliers have N={m.N}")
    if provenance == OUTER_PRODUCT_SUM:
        return _assemble_outer(H, m)
    if provenance == CLOSED_FORM:
        return _assemble_closed(H, m)
    raise ValueError(f"unknown provenance {provenance!r}")


def block_matrix(H: StepMatrix, m: Multipliers, variant: str = D) -> np.ndarray:
    S = assemble_S(H, m)
    if variant == D_PRIME:
        S[H.N, H.N] += 0.5
    elif variant != D:
        raise ValueError(f"unknown variant {variant!r}")
    N = H.N
    B = np.empty((N + 2, N + 2))
    B[: N + 1, : N + 1] = S
    B[: N + 1, N + 1] = 0.5 * m.tau
    B[N + 1, : N + 1] = 0.5 * m.tau
    B[N + 1, N + 1] = 0.5 * m.gamma
    return B


def ogm_multipliers(N: int) -> Multipliers:
    """Dual point paired with the OGM step matrix; gamma = 1/theta_N^2."""
    th = theta_sequence(N).values
    lam = 2.0 * th[:-1] ** 2 / th[N] ** 2
    tau = np.append(2.0 * th[:-1] / th[N] ** 2, 1.0 / th[N])
    return Multipliers(lam, tau, 1.0 / th[N] ** 2, kind="ogm")


def ogm_prime_multipliers(N: int) -> Multipliers:
    """Dual point for the primary-sequence problem; gamma = 1/(2 t_N^2)."""
    t = t_sequence(N).values
    lam = t[:-1] ** 2 / t[N] ** 2
    tau = t / t[N] ** 2
    return Multipliers(lam, tau, 1.0 / (2.0 * t[N] ** 2), kind="ogm_prime")


@dataclass
class DualCertificate:
    H: StepMatrix
    multipliers: Multipliers
    variant: str
    block: np.ndarray
    eigenvalues: np.ndarray
    feasible: bool
    bound: float
    membership: dict
    witness: np.ndarray | None = None
    rank_one_residual: float | None = None

    @property
    def min_eigenvalue(self) -> float:
        return float(self.eigenvalues[0])

    @property
    def verdict(self) -> str:
        return "feasible" if self.feasible else "infeasible"


def verify_certificate(H: StepMatrix, m: Multipliers, variant: str = D, L: float = 1.0,
                       R: float = 1.0) -> DualCertificate:
    """Check PSD-ness of the dual block matrix and report the implied bound.

    Raises MultiplierError when the multipliers are outside the dual domain.
    Infeasible certificates carry an eigenvector ``witness`` with
    ``witness @ block @ witness < 0``.
    """
    if H.N != m.N:
        raise ValueError(f"step matrix has N={H.N} but multipliers have N={m.N}")
    membership = m.check()
    B = block_matrix(H, m, variant)
    evals, evecs = np.linalg.eigh(B)
    scale = float(np.abs(B).max())
    feasible = bool(evals[0] >= -PSD_TOL * scale)
    cert = DualCertificate(
        H=H, multipliers=m, variant=variant, block=B, eigenvalues=evals,
        feasible=feasible, bound=0.5 * L * R**2 * m.gamma, membership=membership,
        witness=None if feasible else evecs[:, 0],
    )
    if variant == D_PRIME and H.variant == OGM_PRIME and m.kind == "ogm_prime":
        t = t_sequence(H.N).values
        v = np.append(t, 0.5)
        cert.rank_one_residual = float(np.abs(B - np.outer(v, v) / t[-1] ** 2).max())
    return cert


def ogm_certificate(N: int, L: float = 1.0, R: float = 1.0) -> DualCertificate:
    return verify_certificate(ogm_step_matrix(N), ogm_multipliers(N), D, L, R)


def ogm_prime_certificate(N: int, L: float = 1.0, R: float = 1.0) -> DualCertificate:
    return verify_certificate(ogm_prime_step_matrix(N), ogm_prime_multipliers(N), D_PRIME, L, R)
