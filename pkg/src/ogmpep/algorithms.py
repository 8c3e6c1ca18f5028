"""Fixed-step first-order methods and their recorded trajectories.

Notation follows the usual two-sequence convention: ``y`` is the primary
sequence produced by plain gradient steps ``y_{i+1} = x_i - grad f(x_i)/L``
and ``x`` is the secondary sequence where gradients are evaluated.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .coefficients import StepMatrix
from .oracles import FunctionOracle
from .sequences import t_sequence, theta_sequence

METHODS = ("gm", "fgm1", "fgm2", "ogm1", "ogm2", "ogm1p", "ogm2p", "nes13", "fo")


@dataclass
class Trajectory:
    """Iterates, values and gradients of one run.

    Arrays are indexed by iteration: ``x[i]`` is x_i for i = 0..N.  ``y``
    (primary sequence, ``y[0] = x[0]``), ``z`` and ``gy`` are ``None`` when
    the method does not produce them.  ``gx[N]`` is evaluated for the record
    only and never feeds an update.
    """

    method: str
    L: float
    x: np.ndarray
    fx: np.ndarray
    gx: np.ndarray
    y: np.ndarray | None = None
    fy: np.ndarray | None = None
    gy: np.ndarray | None = None
    z: np.ndarray | None = None
    weights: np.ndarray | None = None
    f_opt: float = 0.0
    R: float = float("nan")
    grad_evals: int = 0
    meta: dict = field(default_factory=dict)

    @property
    def N(self) -> int:
        return len(self.x) - 1

    @property
    def gap_x(self) -> np.ndarray:
        return self.fx - self.f_opt

    @property
    def gap_y(self) -> np.ndarray | None:
        return None if self.fy is None else self.fy - self.f_opt


class _Recorder:
    """Collects iterates while counting the gradient calls an update consumes."""

    def __init__(self, oracle: FunctionOracle, x0, R):
        self.oracle = oracle
        self.L = oracle.L
        x0 = oracle._check(x0).copy()
        self.x0 = x0
        if R is None:
            R = float(np.linalg.norm(x0 - oracle.x_opt))
        self.R = R
        self.grad_evals = 0
        self.xs, self.fxs, self.gxs = [], [], []
        self.ys, self.fys, self.gys = [x0], [], []

    def add_x(self, x, count=True):
        f, g = self.oracle(x)
        if count:
            self.grad_evals += 1
        self.xs.append(x)
        self.fxs.append(f)
        self.gxs.append(g)
        return g

    def add_y(self, y):
        self.ys.append(y)

    def finish(self, method, *, with_y=True, gy=None, z=None, weights=None, meta=None):
        traj = Trajectory(
            method=method,
            L=self.L,
            x=np.array(self.xs),
            fx=np.array(self.fxs),
            gx=np.array(self.gxs),
            f_opt=self.oracle.f_opt,
            R=self.R,
            grad_evals=self.grad_evals,
            z=None if z is None else np.array(z),
            weights=None if weights is None else np.array(weights),
            meta=meta or {},
        )
        if with_y:
            traj.y = np.array(self.ys)
            traj.fy = np.array([self.oracle.value(y) for y in self.ys])
            if gy is not None:
                traj.gy = np.array(gy)
        return traj


def _check_n(N):
    if N < 1:
        raise ValueError(f"N must be >= 1, got {N}")


def run_fo(H: StepMatrix, oracle: FunctionOracle, x0, with_final_gradient_step=False,
           R=None) -> Trajectory:
    """Replay a fixed-step method from its coefficient matrix.

    Stores every gradient, so the cost is O(N d) memory and O(N^2 d) time.
    With ``with_final_gradient_step`` the primary sequence y_1..y_N is also
    produced by plain gradient steps from x_0..x_{N-1}.
    """
    rec = _Recorder(oracle, x0, R)
    L = rec.L
    x = rec.x0
    for i in range(H.N):
        rec.add_x(x)
        if with_final_gradient_step:
            rec.add_y(x - rec.gxs[i] / L)
        step = H.table[i, : i + 1] @ np.array(rec.gxs)
        x = x - step / L
    rec.add_x(x, count=False)
    return rec.finish("fo", with_y=with_final_gradient_step, meta={"variant": H.variant})


def run_gm(h: float, oracle: FunctionOracle, x0, N: int, R=None) -> Trajectory:
    """Gradient method with constant step h/L."""
    _check_n(N)
    rec = _Recorder(oracle, x0, R)
    x = rec.x0
    for _ in range(N):
        g = rec.add_x(x)
        x = x - (h / rec.L) * g
    rec.add_x(x, count=False)
    return rec.finish("gm", with_y=False, meta={"h": h})


def run_fgm(form: int, oracle: FunctionOracle, x0, N: int, R=None) -> Trajectory:
    """Nesterov's fast gradient method in its momentum (1) or z-sequence (2) form."""
    _check_n(N)
    t = t_sequence(N)
    if form == 1:
        return _momentum_form("fgm1", t, 0.0, oracle, x0, R)
    if form == 2:
        return _zsequence_form("fgm2", t, 1.0, oracle, x0, R)
    raise ValueError(f"form must be 1 or 2, got {form}")


def run_ogm(form: int, oracle: FunctionOracle, x0, N: int, prime=False, R=None) -> Trajectory:
    """Optimized gradient method; ``prime`` swaps theta for t at the last step."""
    _check_n(N)
    s = t_sequence(N) if prime else theta_sequence(N)
    tag = "ogm%d%s" % (form, "p" if prime else "")
    if form == 1:
        return _momentum_form(tag, s, 1.0, oracle, x0, R)
    if form == 2:
        return _zsequence_form(tag, s, 2.0, oracle, x0, R)
    raise ValueError(f"form must be 1 or 2, got {form}")


def _momentum_form(tag, s, extra, oracle, x0, R):
    # extra = 0 gives FGM1, extra = 1 adds the OGM1 term s_i/s_{i+1} (y_{i+1} - x_i)
    rec = _Recorder(oracle, x0, R)
    L = rec.L
    x = rec.x0
    y = rec.x0
    for i in range(s.N):
        g = rec.add_x(x)
        y_next = x - g / L
        rec.add_y(y_next)
        x = (y_next
             + (s[i] - 1.0) / s[i + 1] * (y_next - y)
             + extra * s[i] / s[i + 1] * (y_next - x))
        y = y_next
    rec.add_x(x, count=False)
    return rec.finish(tag, weights=s.values)


def _zsequence_form(tag, s, factor, oracle, x0, R):
    # z_{i+1} = x_0 - (factor/L) sum_k s_k grad f(x_k); factor 1 for FGM2, 2 for OGM2
    rec = _Recorder(oracle, x0, R)
    L = rec.L
    x = rec.x0
    z = rec.x0
    zs = [z]
    for i in range(s.N):
        g = rec.add_x(x)
        y_next = x - g / L
        rec.add_y(y_next)
        z = z - (factor * s[i] / L) * g
        zs.append(z)
        x = (1.0 - 1.0 / s[i + 1]) * y_next + z / s[i + 1]
    rec.add_x(x, count=False)
    return rec.finish(tag, z=zs, weights=s.values)


def run_nes13(oracle: FunctionOracle, x0, N: int, R=None) -> Trajectory:
    """OGM2' variant whose z-update uses the gradient at y_{i+1} instead of x_i.

    Two gradient evaluations per iteration; ``gy[i]`` holds grad f(y_i) for
    i >= 1 (``gy[0]`` is grad f(x_0)).
    """
    _check_n(N)
    t = t_sequence(N)
    rec = _Recorder(oracle, x0, R)
    L = rec.L
    x = rec.x0
    z = rec.x0
    zs = [z]
    gys = []
    for i in range(N):
        g = rec.add_x(x)
        if i == 0:
            gys.append(g)
        y_next = x - g / L
        rec.add_y(y_next)
        gy = oracle.gradient(y_next)
        rec.grad_evals += 1
        gys.append(gy)
        z = z - (2.0 * t[i] / L) * gy
        zs.append(z)
        x = (1.0 - 1.0 / t[i + 1]) * y_next + z / t[i + 1]
    rec.add_x(x, count=False)
    return rec.finish("nes13", gy=gys, z=zs, weights=t.values)


def run_method(name: str, oracle: FunctionOracle, x0, N: int, h: float | None = None,
               H: StepMatrix | None = None) -> Trajectory:
    """Dispatch by the short method names used on the command line."""
    if name == "gm":
        if h is None:
            raise ValueError("gm needs a step size h")
        return run_gm(h, oracle, x0, N)
    if name in ("fgm1", "fgm2"):
        return run_fgm(int(name[-1]), oracle, x0, N)
    if name in ("ogm1", "ogm2", "ogm1p", "ogm2p"):
        return run_ogm(int(name[3]), oracle, x0, N, prime=name.endswith("p"))
    if name == "nes13":
        return run_nes13(oracle, x0, N)
    if name == "fo":
        if H is None:
            raise ValueError("fo needs a step matrix")
        return run_fo(H, oracle, x0, with_final_gradient_step=True)
    raise ValueError(f"unknown method {name!r}")
