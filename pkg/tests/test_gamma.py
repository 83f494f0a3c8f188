import math

import numpy as np
import pytest

from eqball.errors import (
    DegenerateInput,
    EmptyIntersection,
    OutsideBall,
    PreconditionClearance,
    PreconditionDistance,
)
from eqball.gamma import gamma, gamma1_link, gamma_bruteforce
from eqball.geometry import Frame, orthonormalize, section2d
from eqball.simplex import alpha, beta, random_rotation


def _random_ball_point(rng, n):
    p = rng.standard_normal(n)
    return p * rng.uniform() ** (1.0 / n) / np.linalg.norm(p)


def test_gamma_symmetric_pair_reaches_one():
    res = gamma(np.array([0.5, 0.0]), np.array([-0.5, 0.0]))
    assert res.value == pytest.approx(1.0, abs=1e-12)
    assert np.allclose(res.midpoint, 0.0, atol=1e-12)


def test_gamma_quarter_circle_pair():
    res = gamma(np.array([1.0, 0.0]), np.array([0.0, 1.0]))
    assert res.value == pytest.approx(1.0 - 1.0 / math.sqrt(2.0), abs=1e-12)
    # cross-checked against the grid oracle at its resolution
    brute = gamma_bruteforce(np.array([1.0, 0.0]), np.array([0.0, 1.0]),
                             Frame(np.eye(2)), 1e-4)
    assert abs(res.value - brute) <= 2e-4


def test_gamma_result_invariants():
    rng = np.random.default_rng(4)
    for _ in range(200):
        n = int(rng.integers(2, 7))
        a = _random_ball_point(rng, n)
        b = _random_ball_point(rng, n)
        if np.linalg.norm(a - b) < 1e-3:
            continue
        res = gamma(a, b)
        assert 0.0 < res.value <= 1.0 + 1e-12
        assert abs(res.direction @ (b - a)) < 1e-9
        assert res.direction @ (a + b) >= -1e-9


def test_gamma_rotation_invariance():
    rng = np.random.default_rng(8)
    a = np.array([0.4, 0.1, -0.2])
    b = np.array([-0.3, 0.5, 0.1])
    base = gamma(a, b).value
    for _ in range(500):
        rot = random_rotation(3, rng)
        assert gamma(rot @ a, rot @ b).value == pytest.approx(base, abs=1e-9)


def test_gamma_errors():
    with pytest.raises(DegenerateInput):
        gamma(np.array([0.1, 0.2]), np.array([0.1, 0.2]))
    with pytest.raises(OutsideBall):
        gamma(np.array([1.5, 0.0]), np.array([0.0, 0.5]))


def test_bruteforce_matches_closed_form():
    rng = np.random.default_rng(15)
    for n in (2, 3, 4):
        full = Frame(np.eye(n))
        for _ in range(25):
            a = _random_ball_point(rng, n)
            b = _random_ball_point(rng, n)
            if np.linalg.norm(a - b) < 1e-3:
                continue
            closed = gamma(a, b).value
            brute = gamma_bruteforce(a, b, full, 1e-4)
            assert abs(closed - brute) <= 2e-4


def test_bruteforce_in_2d_section_reproduces_full_value():
    rng = np.random.default_rng(16)
    for _ in range(20):
        a = _random_ball_point(rng, 4)
        b = _random_ball_point(rng, 4)
        if np.linalg.norm(a - b) < 1e-3:
            continue
        section = section2d(a, b)
        closed = gamma(a, b).value
        brute = gamma_bruteforce(a, b, section, 1e-4)
        assert abs(closed - brute) <= 2e-4


def test_bruteforce_symmetric_pair_caps_at_one():
    value = gamma_bruteforce(np.array([0.5, 0.0]), np.array([-0.5, 0.0]),
                             Frame(np.eye(2)), 1e-3)
    assert value == pytest.approx(1.0, abs=2e-3)


def test_bruteforce_subspace_monotonicity():
    rng = np.random.default_rng(23)
    for _ in range(30):
        n = 5
        a = _random_ball_point(rng, n)
        b = _random_ball_point(rng, n)
        if np.linalg.norm(a - b) < 1e-3:
            continue
        big = orthonormalize(rng.standard_normal((4, n)), n)
        if big.shape[0] < 4:
            continue
        small = Frame(big[:2])
        value_small = gamma_bruteforce(a, b, small, 1e-3)
        value_big = gamma_bruteforce(a, b, Frame(big), 1e-3)
        assert value_big <= value_small + 1e-3 + 1e-12


def test_bruteforce_empty_intersection():
    a = np.array([0.2, 0.0, 0.0])
    b = np.array([0.6, 0.0, 0.0])
    direction = Frame(np.array([[1.0, 0.0, 0.0]]))
    with pytest.raises(EmptyIntersection):
        gamma_bruteforce(a, b, direction, 1e-3)


def test_gamma1_link_shared_edge_triangles():
    a3 = alpha(3)
    a = np.array([0.05, -a3])
    b = np.array([0.05, a3])
    set_a, set_b = gamma1_link(a, b)
    for s in (set_a, set_b):
        assert s.k == 3
        assert s.pairwise_distance_error() < 1e-9
        assert s.max_norm() <= 1.0 + 1e-9
    # shared points are bit-for-bit identical and count n, union n+2
    assert np.array_equal(set_a.points[1:], set_b.points[1:])
    union = {tuple(np.round(p, 12)) for p in np.vstack([set_a.points, set_b.points])}
    assert len(union) == 2 + 2


def test_gamma1_link_centered_any_n():
    rng = np.random.default_rng(42)
    for n in (2, 3, 4, 6):
        direction = rng.standard_normal(n)
        direction /= np.linalg.norm(direction)
        a = alpha(n + 1) * direction
        b = -a
        set_a, set_b = gamma1_link(a, b)
        shared = set_a.points[1:]
        assert np.max(np.abs(np.linalg.norm(shared, axis=1) - beta(n))) < 1e-9
        assert np.max(np.abs(shared @ direction)) < 1e-9
        assert set_a.k == n + 1 and set_b.k == n + 1


def test_gamma1_link_preconditions():
    with pytest.raises(PreconditionDistance):
        gamma1_link(np.array([0.0, 0.0]), np.array([1.0, 0.0]))
    # Two boundary points of the 3-ball at hop distance: their midpoint has
    # clearance 1 - beta(3) < beta(3), so the linking move must refuse.
    p = np.array([1.0, 0.0, 0.0])
    q = np.array([-1.0 / 3.0, math.sqrt(8.0) / 3.0, 0.0])
    assert np.linalg.norm(p - q) == pytest.approx(2 * alpha(4), abs=1e-12)
    assert gamma(p, q).value == pytest.approx(1.0 - beta(3), abs=1e-12)
    with pytest.raises(PreconditionClearance):
        gamma1_link(p, q)
