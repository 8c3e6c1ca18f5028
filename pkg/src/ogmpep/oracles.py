"""L-smooth convex test functions with value and gradient.

Every oracle minimizes at the origin with optimal value 0, which keeps the
optimality gap ``f(x) - f*`` equal to ``f(x)``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .sequences import t_sequence, theta_sequence


class FunctionOracle:
    """Value/gradient evaluator for an L-smooth convex function on R^d."""

    name = "oracle"

    def __init__(self, L: float, d: int):
        if not L > 0:
            raise ValueError(f"L must be positive, got {L}")
        if d < 1:
            raise ValueError(f"dimension must be >= 1, got {d}")
        self.L = float(L)
        self.d = int(d)
        self.x_opt = np.zeros(self.d)
        self.f_opt = 0.0

    def value(self, x: np.ndarray) -> float:
        raise NotImplementedError

    def gradient(self, x: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def __call__(self, x):
        x = self._check(x)
        return self.value(x), self.gradient(x)

    def _check(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if x.shape != (self.d,):
            raise ValueError(f"expected a point of shape ({self.d},), got {x.shape}")
        return x

    def __repr__(self):
        return f"{type(self).__name__}(L={self.L}, d={self.d})"


class QuadraticOracle(FunctionOracle):
    """f(x) = (L/2) ||x||^2."""

    name = "quadratic"

    def value(self, x):
        return 0.5 * self.L * float(np.dot(x, x))

    def gradient(self, x):
        return self.L * np.asarray(x, dtype=float)


class MatrixQuadraticOracle(FunctionOracle):
    """f(x) = x^T A x / 2 for a symmetric PSD matrix A with top eigenvalue L."""

    name = "random-quadratic"

    def __init__(self, A: np.ndarray):
        A = np.asarray(A, dtype=float)
        if A.ndim != 2 or A.shape[0] != A.shape[1]:
            raise ValueError("A must be square")
        top = float(np.linalg.eigvalsh(A)[-1])
        super().__init__(top, A.shape[0])
        self.A = A

    def value(self, x):
        return 0.5 * float(x @ self.A @ x)

    def gradient(self, x):
        return self.A @ x


@dataclass(frozen=True)
class HuberSpec:
    """Radial piecewise affine-quadratic function and its starting direction.

    ``f(x) = L r ||x|| - L r^2 / 2`` for ``||x|| >= r`` and ``(L/2) ||x||^2``
    inside the ball.  ``direction`` is the unit vector nu used to place the
    worst-case starting point ``x_0 = R nu``.
    """

    L: float
    r: float
    d: int = 1
    direction: tuple | None = None

    def __post_init__(self):
        if not self.r > 0:
            raise ValueError(f"breakpoint radius must be positive, got {self.r}")
        if self.direction is None:
            nu = np.zeros(self.d)
            nu[0] = 1.0
            object.__setattr__(self, "direction", tuple(nu))
        elif len(self.direction) != self.d:
            raise ValueError("direction must have d components")
        if abs(np.linalg.norm(self.direction) - 1.0) > 1e-12:
            raise ValueError("direction must be a unit vector")

    @property
    def nu(self) -> np.ndarray:
        return np.array(self.direction)

    @classmethod
    def for_ogm_last_iterate(cls, N, L=1.0, R=1.0, d=1):
        """Instance attaining the OGM bound on x_N: r = R / theta_N^2."""
        return cls(L, R / theta_sequence(N)[N] ** 2, d)

    @classmethod
    def for_ogm_primary(cls, N, L=1.0, R=1.0, d=1):
        """Instance for the primary iterate y_N of OGM: r = R / (2 t_{N-1}^2 + 1)."""
        return cls(L, R / (2.0 * t_sequence(N - 1)[N - 1] ** 2 + 1.0), d)

    @classmethod
    def for_gm(cls, h, N, L=1.0, R=1.0, d=1):
        """Slow-progress instance for gradient descent with step h/L: r = R / (2Nh + 1)."""
        return cls(L, R / (2.0 * N * h + 1.0), d)


class HuberOracle(FunctionOracle):
    name = "huber"

    def __init__(self, spec: HuberSpec):
        super().__init__(spec.L, spec.d)
        self.spec = spec
        self.r = float(spec.r)

    def value(self, x):
        n = float(np.linalg.norm(x))
        # at exactly n == r both branches agree; take the quadratic one
        if n <= self.r:
            return 0.5 * self.L * n * n
        return self.L * self.r * n - 0.5 * self.L * self.r**2

    def gradient(self, x):
        x = np.asarray(x, dtype=float)
        n = float(np.linalg.norm(x))
        if n <= self.r:
            return self.L * x
        return (self.L * self.r / n) * x

    def __repr__(self):
        return f"HuberOracle(L={self.L}, r={self.r}, d={self.d})"


def quadratic_oracle(L: float = 1.0, d: int = 1) -> QuadraticOracle:
    return QuadraticOracle(L, d)


def huber_oracle(spec: HuberSpec) -> HuberOracle:
    return HuberOracle(spec)


def random_quadratic_oracle(seed: int, L: float = 1.0, d: int = 5) -> MatrixQuadraticOracle:
    """Seeded random convex quadratic whose Hessian has largest eigenvalue exactly L.

    The spectrum is drawn uniformly from [0, 1], its maximum is pinned to 1,
    then everything is scaled by L.
    """
    if not L > 0:
        raise ValueError(f"L must be positive, got {L}")
    if d < 1:
        raise ValueError(f"dimension must be >= 1, got {d}")
    rng = np.random.default_rng(seed)
    Q, _ = np.linalg.qr(rng.standard_normal((d, d)))
    eig = rng.uniform(0.0, 1.0, size=d)
    eig[np.argmax(eig)] = 1.0
    A = (Q * (L * eig)) @ Q.T
    A = 0.5 * (A + A.T)
    oracle = MatrixQuadraticOracle(A)
    # pin the reported constant to the construction, not to eigvalsh round-off
    oracle.L = float(L)
    return oracle


def inequality_violations(oracle: FunctionOracle, pairs: int = 1000, seed: int = 0,
                          scale: float | None = None, slack: float = 1e-9) -> dict:
    """Sample point pairs and return the worst excess of the three class inequalities.

    Checked: gradient Lipschitz continuity, the convexity lower bound and the
    descent-step bound ``f(x - g/L) <= f(x) - ||g||^2 / (2L)``.  A value <= 0
    means the inequality held on every sample (with ``slack``).
    """
    rng = np.random.default_rng(seed)
    if scale is None:
        scale = getattr(oracle, "r", 1.0)
    worst = {"lipschitz": -np.inf, "convexity": -np.inf, "descent": -np.inf}
    L = oracle.L
    for n in range(pairs):
        # alternate between scales so both Huber branches get visited
        s = scale * (0.5, 1.0, 3.0, 20.0)[n % 4]
        x = s * rng.standard_normal(oracle.d)
        y = s * rng.standard_normal(oracle.d)
        fx, gx = oracle(x)
        fy, gy = oracle(y)
        lip = np.linalg.norm(gx - gy) - L * np.linalg.norm(x - y) - slack
        cvx = fx + np.dot(gx, y - x) - fy - slack
        x_plus = x - gx / L
        dsc = oracle.value(x_plus) - fx + np.dot(gx, gx) / (2.0 * L) - slack
        worst["lipschitz"] = max(worst["lipschitz"], lip)
        worst["convexity"] = max(worst["convexity"], cvx)
        worst["descent"] = max(worst["descent"], dsc)
    return worst
