import numpy as np
import pytest

from ogmpep.oracles import (
    HuberSpec, huber_oracle, inequality_violations, quadratic_oracle, random_quadratic_oracle,
)


def power_iteration(A, iters=5000, seed=1):
    v = np.random.default_rng(seed).standard_normal(A.shape[0])
    for _ in range(iters):
        v = A @ v
        v /= np.linalg.norm(v)
    return float(v @ A @ v)


def test_quadratic_values():
    f, g = quadratic_oracle(1.0, 1)(np.zeros(1))
    assert f == 0.0 and np.all(g == 0.0)
    f, g = quadratic_oracle(1.0, 1)(np.array([1.0]))
    assert (f, g[0]) == (0.5, 1.0)
    f, g = quadratic_oracle(2.0, 2)(np.array([3.0, 4.0]))
    assert f == 25.0
    np.testing.assert_array_equal(g, [6.0, 8.0])


def test_dimension_mismatch():
    with pytest.raises(ValueError):
        quadratic_oracle(1.0, 2)(np.ones(3))


def test_huber_quadratic_branch():
    oracle = huber_oracle(HuberSpec(1.0, 0.25, 2))
    x = np.array([0.06, 0.08])
    f, g = oracle(x)
    assert f == pytest.approx(0.005, rel=1e-14)
    np.testing.assert_allclose(g, x)


def test_huber_continuous_at_breakpoint():
    oracle = huber_oracle(HuberSpec(1.0, 0.25))
    x = np.array([0.25])
    assert oracle.value(x) == pytest.approx(0.03125, rel=1e-15)
    affine = 1.0 * 0.25 * 0.25 - 0.5 * 0.25**2
    assert affine == pytest.approx(0.03125, rel=1e-15)
    gap = np.abs(oracle.gradient(x * (1 + 1e-12)) - oracle.gradient(x)).max()
    assert gap < 1e-12


def test_huber_ogm_instance_at_start():
    spec = HuberSpec.for_ogm_last_iterate(1, L=1.0, R=1.0)
    assert spec.r == 0.25
    f, g = huber_oracle(spec)(spec.nu)
    assert f == pytest.approx(0.21875, rel=1e-15)
    np.testing.assert_allclose(g, 0.25 * spec.nu)


def test_huber_instances():
    assert HuberSpec.for_ogm_primary(1).r == pytest.approx(1 / 3)
    assert HuberSpec.for_gm(1.0, 1).r == pytest.approx(1 / 3)
    assert HuberSpec.for_gm(0.5, 2, R=2.0).r == pytest.approx(2 / 3)


@pytest.mark.parametrize("kwargs", [{"r": 0.0}, {"r": 1.0, "d": 2, "direction": (1.0, 1.0)},
                                    {"r": 1.0, "d": 2, "direction": (1.0,)}])
def test_huber_spec_validation(kwargs):
    with pytest.raises(ValueError):
        HuberSpec(1.0, **kwargs)


def test_huber_gradient_norm():
    oracle = huber_oracle(HuberSpec(2.0, 0.3, 3))
    rng = np.random.default_rng(3)
    for _ in range(200):
        x = rng.standard_normal(3) * rng.uniform(0.01, 3)
        n = np.linalg.norm(oracle.gradient(x))
        assert n <= 2.0 * 0.3 + 1e-12
        if np.linalg.norm(x) < 0.3:
            assert n == pytest.approx(2.0 * np.linalg.norm(x))


def test_random_quadratic_one_dimensional():
    oracle = random_quadratic_oracle(7, L=3.0, d=1)
    assert oracle.A[0, 0] == pytest.approx(3.0, rel=1e-14)
    assert oracle.value(np.array([2.0])) == pytest.approx(6.0)


@pytest.mark.parametrize("seed", range(5))
def test_random_quadratic_top_eigenvalue(seed):
    oracle = random_quadratic_oracle(seed, L=2.5, d=6)
    assert abs(power_iteration(oracle.A) - oracle.L) <= 1e-6
    assert np.linalg.eigvalsh(oracle.A)[0] >= -1e-12


def test_random_quadratic_deterministic():
    a = random_quadratic_oracle(11, d=4)
    b = random_quadratic_oracle(11, d=4)
    np.testing.assert_array_equal(a.A, b.A)


@pytest.mark.parametrize("oracle", [
    quadratic_oracle(1.0, 1),
    quadratic_oracle(3.0, 4),
    huber_oracle(HuberSpec(1.0, 0.25)),
    huber_oracle(HuberSpec(2.0, 0.1, 3)),
    random_quadratic_oracle(0, 1.0, 5),
], ids=repr)
def test_class_inequalities(oracle):
    worst = inequality_violations(oracle, pairs=300, seed=5)
    assert all(v <= 0.0 for v in worst.values()), worst
