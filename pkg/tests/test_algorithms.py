import numpy as np
import pytest

from ogmpep.algorithms import run_fgm, run_fo, run_gm, run_method, run_nes13, run_ogm
from ogmpep.coefficients import constant_step_matrix, ogm_prime_step_matrix, ogm_step_matrix
from ogmpep.oracles import HuberSpec, huber_oracle, quadratic_oracle, random_quadratic_oracle
from ogmpep.sequences import t_sequence, theta_sequence


def random_start(seed, d):
    return np.random.default_rng(1000 + seed).standard_normal(d)


def test_fo_constant_one_minimizes_quadratic_in_one_step():
    tr = run_fo(constant_step_matrix(1.0, 4), quadratic_oracle(), np.array([1.0]))
    assert np.all(tr.x[1:] == 0.0)
    assert tr.y is None


@pytest.mark.parametrize("N", [1, 2, 5, 17])
def test_fo_ogm_on_quadratic_alternates(N):
    th = theta_sequence(N).values
    tr = run_fo(ogm_step_matrix(N), quadratic_oracle(), np.array([1.0]))
    expected = (-1.0) ** np.arange(N + 1) / th
    np.testing.assert_allclose(tr.x[:, 0], expected, rtol=0, atol=1e-12)


@pytest.mark.parametrize("N", [1, 2, 5, 17])
def test_fo_ogm_prime_on_quadratic_alternates(N):
    t = t_sequence(N).values
    tr = run_fo(ogm_prime_step_matrix(N), quadratic_oracle(), np.array([1.0]))
    np.testing.assert_allclose(tr.x[:, 0], (-1.0) ** np.arange(N + 1) / t, atol=1e-12)


def test_fo_dimension_mismatch():
    with pytest.raises(ValueError):
        run_fo(ogm_step_matrix(2), quadratic_oracle(1.0, 2), np.ones(3))


@pytest.mark.parametrize("h", [0.3, 1.0, 1.7])
@pytest.mark.parametrize("N", [1, 3, 8])
def test_gm_on_quadratic(h, N):
    tr = run_gm(h, quadratic_oracle(), np.array([1.0]), N)
    assert tr.gap_x[N] == pytest.approx(0.5 * (1 - h) ** (2 * N), rel=1e-12, abs=1e-300)


@pytest.mark.parametrize("h", [0.5, 1.0, 1.5])
@pytest.mark.parametrize("N", [1, 4])
def test_gm_on_huber(h, N):
    tr = run_gm(h, huber_oracle(HuberSpec.for_gm(h, N)), np.array([1.0]), N)
    assert tr.x[N, 0] == pytest.approx((N * h + 1) / (2 * N * h + 1), rel=1e-13)
    assert tr.gap_x[N] == pytest.approx(1 / (2 * (2 * N * h + 1)), rel=1e-12)


def test_gm_one_and_a_half_is_ogm_single_step():
    oracle = random_quadratic_oracle(4, d=3)
    x0 = random_start(4, 3)
    a = run_gm(1.5, oracle, x0, 1)
    b = run_fo(ogm_step_matrix(1), oracle, x0)
    np.testing.assert_allclose(a.x, b.x, atol=1e-15)


@pytest.mark.parametrize("seed", range(5))
def test_fgm_forms_agree(seed):
    oracle = random_quadratic_oracle(seed, d=4)
    x0 = random_start(seed, 4)
    a = run_fgm(1, oracle, x0, 30)
    b = run_fgm(2, oracle, x0, 30)
    assert np.abs(a.x - b.x).max() <= 1e-10
    assert np.abs(a.y - b.y).max() <= 1e-10
    assert b.z is not None and a.z is None


@pytest.mark.parametrize("seed", range(5))
def test_fgm_bounds(seed):
    oracle = random_quadratic_oracle(seed, L=2.0, d=4)
    x0 = random_start(seed, 4)
    N = 25
    tr = run_fgm(1, oracle, x0, N)
    t = t_sequence(N).values
    LR2 = oracle.L * tr.R**2
    i = np.arange(1, N + 1)
    assert np.all(tr.gap_y[1:] <= LR2 / (2 * t[i - 1] ** 2) * (1 + 1e-12))
    assert np.all(tr.gap_x[1:] <= LR2 / (2 * t[i] ** 2) * (1 + 1e-12))


@pytest.mark.parametrize("prime", [False, True])
@pytest.mark.parametrize("seed", range(4))
def test_ogm_forms_agree(prime, seed):
    oracle = random_quadratic_oracle(seed, d=5)
    x0 = random_start(seed, 5)
    a = run_ogm(1, oracle, x0, 20, prime=prime)
    b = run_ogm(2, oracle, x0, 20, prime=prime)
    assert np.abs(a.x - b.x).max() <= 1e-10
    assert np.abs(a.y - b.y).max() <= 1e-10


def test_ogm_and_ogm_prime_differ_only_at_last_secondary_iterate():
    oracle = random_quadratic_oracle(9, d=5)
    x0 = random_start(9, 5)
    a = run_ogm(1, oracle, x0, 12)
    b = run_ogm(1, oracle, x0, 12, prime=True)
    assert np.abs(a.y - b.y).max() <= 1e-10
    assert np.abs(a.x[:-1] - b.x[:-1]).max() <= 1e-10
    assert np.abs(a.x[-1] - b.x[-1]).max() > 1e-6


@pytest.mark.parametrize("N", [1, 2, 9])
def test_fo_prime_driver_matches_ogm_primary(N):
    oracle = random_quadratic_oracle(N, d=3)
    x0 = random_start(N, 3)
    ogm = run_ogm(1, oracle, x0, N)
    fo = run_fo(ogm_prime_step_matrix(N), oracle, x0, with_final_gradient_step=True)
    assert np.abs(ogm.y - fo.y).max() <= 1e-10
    fo_ogm = run_fo(ogm_step_matrix(N), oracle, x0)
    assert np.abs(ogm.x - fo_ogm.x).max() <= 1e-10


def test_primary_step_reconstructs_from_record():
    oracle = random_quadratic_oracle(2, L=3.0, d=4)
    for tr in (run_ogm(1, oracle, random_start(2, 4), 10), run_fgm(2, oracle, random_start(2, 4), 10)):
        recon = tr.x[:-1] - tr.gx[:-1] / tr.L
        assert np.abs(recon - tr.y[1:]).max() <= 1e-12


def test_z_sequence_convex_combination():
    oracle = random_quadratic_oracle(5, d=4)
    for tr in (run_ogm(2, oracle, random_start(5, 4), 10),
               run_ogm(2, oracle, random_start(5, 4), 10, prime=True),
               run_fgm(2, oracle, random_start(5, 4), 10),
               run_nes13(oracle, random_start(5, 4), 10)):
        s = tr.weights[1:, None]
        combo = (1 - 1 / s) * tr.y[1:] + tr.z[1:] / s
        assert np.abs(combo - tr.x[1:]).max() <= 1e-12, tr.method


def test_ogm_on_its_huber_attains_bound():
    N = 6
    spec = HuberSpec.for_ogm_last_iterate(N)
    tr = run_ogm(1, huber_oracle(spec), spec.nu, N)
    assert tr.gap_x[N] == pytest.approx(1 / (2 * theta_sequence(N)[N] ** 2), rel=1e-9)


def test_ogm_primary_on_huber_stays_affine():
    N = 8
    spec = HuberSpec.for_ogm_primary(N)
    tr = run_ogm(2, huber_oracle(spec), spec.nu, N)
    assert np.all(np.linalg.norm(tr.x[:-1], axis=1) >= spec.r)
    assert np.all(np.linalg.norm(tr.y, axis=1) >= spec.r)
    t = t_sequence(N).values
    assert tr.gap_y[N] == pytest.approx(1 / (2 * (2 * t[N - 1] ** 2 + 1)), rel=1e-9)


def test_nes13_matches_ogm2_prime_in_affine_region():
    N = 7
    spec = HuberSpec.for_ogm_primary(N)
    nes = run_nes13(huber_oracle(spec), spec.nu, N)
    ogm = run_ogm(2, huber_oracle(spec), spec.nu, N, prime=True)
    np.testing.assert_allclose(nes.gy[1:], ogm.gx[:-1], atol=1e-15)
    assert np.abs(nes.x - ogm.x).max() <= 1e-12
    assert np.abs(nes.y - ogm.y).max() <= 1e-12


def test_gradient_evaluation_counts():
    oracle = quadratic_oracle()
    assert run_nes13(oracle, np.array([1.0]), 5).grad_evals == 10
    assert run_ogm(1, oracle, np.array([1.0]), 5).grad_evals == 5
    assert run_gm(1.0, oracle, np.array([1.0]), 5).grad_evals == 5


def test_run_method_dispatch():
    oracle = quadratic_oracle()
    x0 = np.array([1.0])
    assert run_method("ogm2p", oracle, x0, 3).method == "ogm2p"
    assert run_method("fo", oracle, x0, 3, H=ogm_step_matrix(3)).y is not None
    with pytest.raises(ValueError):
        run_method("gm", oracle, x0, 3)
    with pytest.raises(ValueError):
        run_method("adam", oracle, x0, 3)


def test_form_validation():
    with pytest.raises(ValueError):
        run_fgm(3, quadratic_oracle(), np.array([1.0]), 2)
    with pytest.raises(ValueError):
        run_ogm(1, quadratic_oracle(), np.array([1.0]), 0)
