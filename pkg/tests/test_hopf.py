import math

import numpy as np
import pytest

from spherepar import hopf
from spherepar.frames import frame_B_s1
from spherepar.geometry import GeometryError, sample_point, sample_points


def random_upstairs(rng, m, lo=0.5, hi=2.0):
    d = rng.standard_normal(m + 1)
    return d / np.linalg.norm(d) * rng.uniform(lo, hi)


def test_project_examples():
    p = hopf.project([2.0, 0.0, 0.0])
    assert np.array_equal(p.x.coords, [1, 0, 0])
    assert np.allclose(p.y.coords, [math.cos(math.log(2)), math.sin(math.log(2))])
    assert hopf.angle([0.0, 1.0, 0.0]) == 0.0
    assert np.allclose(hopf.project([0.0, 1.0]).y.coords, [1, 0])
    with pytest.raises(GeometryError):
        hopf.project([0.0, 0.0])


def test_gamma_invariance():
    rng = np.random.default_rng(1)
    for _ in range(100):
        x = random_upstairs(rng, 3)
        lam = rng.uniform(0.2, 5)
        a, b = hopf.project(lam * x), hopf.project(lam * hopf.PERIOD * x)
        assert np.max(np.abs(a.stacked() - b.stacked())) < 1e-12


def test_pushforward_of_coordinate_at_unit_radius():
    p = sample_point(3, 1, 2)
    x = p.x.coords
    b = frame_B_s1(hopf.project(x))
    for i in range(4):
        e = np.eye(4)[:, i]
        assert np.max(np.abs(hopf.pushforward(x, e).stacked() - b[i + 1].stacked())) < 1e-12


def test_radial_is_pure_theta():
    x = sample_point(2, 1, 5).x.coords
    v = hopf.pushforward(x, x)
    assert np.max(np.abs(v.xpart)) < 1e-15
    assert np.allclose(v.ypart, [0.0, 1.0])  # angle 0 at |x| = 1


def test_finite_difference_jacobian():
    rng = np.random.default_rng(7)
    for m in (1, 2, 4):
        for _ in range(50):
            x = random_upstairs(rng, m)
            err = np.max(np.abs(hopf.finite_difference_jacobian(x, 1e-6) - hopf.pushforward_matrix(x)))
            assert err < 1e-6


def test_pushforward_rank():
    rng = np.random.default_rng(3)
    for _ in range(30):
        x = random_upstairs(rng, 3)
        assert np.linalg.matrix_rank(hopf.pushforward_matrix(x)) == 4


def test_pushed_frame_equals_B_off_unit_radius():
    rng = np.random.default_rng(11)
    for _ in range(200):
        x = random_upstairs(rng, 3, 0.3, 5.0)
        f = hopf.pushed_frame(x)
        assert np.max(np.abs(f.matrix - frame_B_s1(hopf.project(x)).matrix)) < 1e-12
        assert f.orthonormality_residual() < 1e-12


def test_pushed_frame_one_period_up():
    x = sample_point(2, 1, 4).x.coords
    a, b = hopf.pushed_frame(x), hopf.pushed_frame(math.e * x)
    assert np.max(np.abs(a.matrix[:3] - b.matrix[:3])) < 1e-12
    c = hopf.pushed_frame(hopf.PERIOD * x)
    assert np.max(np.abs(a.matrix - c.matrix)) < 1e-12


def test_permutation_identity_and_transposition():
    p = sample_point(2, 1, 3)
    assert hopf.permutation_residual((1, 2, 3), p) == 0.0
    image, moved = hopf.permutation_action((2, 1, 3), p)
    # df(b_2) = b_1 at the image
    assert np.max(np.abs(moved[1].stacked() - frame_B_s1(image)[1].stacked())) < 1e-12
    assert np.allclose(moved.gram(), np.eye(3))


def test_permutation_lemma_random():
    rng = np.random.default_rng(5)
    for m in range(1, 7):
        for p in sample_points(m, 1, 20, m):
            pi = tuple(rng.permutation(m + 1) + 1)
            assert hopf.permutation_residual(pi, p) < 1e-12


def test_invalid_permutation():
    with pytest.raises(GeometryError):
        hopf.permute_point((1, 1, 2), sample_point(2, 1, 0))
    with pytest.raises(GeometryError):
        hopf.permute_point((1, 2), sample_point(2, 1, 0))
