import math

import numpy as np
import pytest

from eqball.certify import (
    Certificate,
    certificate_from_json,
    certificate_to_json,
    check_certificate,
    constant_lemma_relation,
    generate_equality_certificate,
    theorem_step_relation,
)
from eqball.errors import OutsideBall, PreconditionViolation, RadiusSolveFailure
from eqball.gamma import gamma1_link
from eqball.simplex import alpha, beta
from eqball.weights import eta, lambda_shell, mu, nu


def _random_ball_point(rng, n):
    p = rng.standard_normal(n)
    return p * rng.uniform() ** (1.0 / n) / np.linalg.norm(p)


def _feasible_assignments(cert, count, seed):
    """Random solutions of the sum equations, by projecting onto the null space."""
    p = cert.points.shape[0]
    rows = np.zeros((len(cert.sets), p + 1))
    for r, s in enumerate(cert.sets):
        for i in s:
            rows[r, int(i)] += 1.0
        rows[r, p] = -1.0
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((p + 1, count))
    row_part, *_ = np.linalg.lstsq(rows, rows @ g, rcond=None)
    return g - row_part  # columns satisfy rows @ z = 0


# -- step relation ------------------------------------------------------------


def test_step_endpoint_norm_of_v():
    rho0 = 0.85
    rel = theorem_step_relation(np.array([0.85, 0.0]), rho0, 2)
    assert np.allclose(rel.v, [-0.15, 0.0], atol=1e-12)
    assert float(np.linalg.norm(rel.v)) == pytest.approx(1 - rho0, abs=1e-12)


def test_step_compliant_interior_case():
    rho0 = 0.85
    lo = mu(2, rho0)
    u = np.array([0.83, 0.0])
    assert lo <= 0.83 <= rho0
    rel = theorem_step_relation(u, rho0, 2)
    assert np.allclose(rel.v, [-0.17, 0.0], atol=1e-12)
    w = (rel.u + rel.v) / 2
    for x in rel.companions:
        assert float(np.linalg.norm(x - w)) ** 2 == pytest.approx(0.75, abs=1e-12)
        assert float(np.linalg.norm(x)) ** 2 == pytest.approx(0.75 + (0.83 - 0.5) ** 2, abs=1e-12)
        assert float(np.linalg.norm(x)) >= rho0 - 1e-9
    assert rel.set.pairwise_distance_error() < 1e-9
    assert rel.set.max_norm() <= 1 + 1e-9


def test_step_rejects_u_below_window():
    # mu_2(0.85) ~ 0.8214, so ||u|| = 0.8 is outside the admissible window
    assert mu(2, 0.85) > 0.8
    with pytest.raises(PreconditionViolation):
        theorem_step_relation(np.array([0.8, 0.0]), 0.85, 2)


def test_step_companion_window_across_dimensions():
    rng = np.random.default_rng(14)
    for n in (2, 3, 4):
        lam = lambda_shell(n)
        for _ in range(25):
            rho0 = rng.uniform(beta(n + 1), lam)
            s = rng.uniform(mu(n, rho0), rho0)
            direction = rng.standard_normal(n)
            direction /= np.linalg.norm(direction)
            rel = theorem_step_relation(s * direction, rho0, n)
            assert float(np.min(np.linalg.norm(rel.companions, axis=1))) >= rho0 - 1e-7
            assert float(np.linalg.norm(rel.v)) <= eta(n, rho0) + 1e-9
            assert float(np.linalg.norm(rel.v)) >= 1 - rho0 - 1e-9


# -- constant lemma relation ---------------------------------------------------


def test_lemma_relation_origin_companions_on_sphere():
    full, companions = constant_lemma_relation(np.zeros(3), 0.8, 3)
    assert full.k == 4
    assert np.max(np.abs(np.linalg.norm(companions, axis=1) - 1.0)) < 1e-9


def test_lemma_relation_fixed_point_case():
    b3 = beta(3)
    z = np.array([b3, 0.0])
    full, companions = constant_lemma_relation(z, b3, 2)
    assert np.max(np.abs(np.linalg.norm(companions, axis=1) - b3)) < 1e-9
    assert full.pairwise_distance_error() < 1e-9


def test_lemma_relation_generic_bisection():
    z = np.array([0.1, 0.0, 0.0])
    full, companions = constant_lemma_relation(z, 0.8, 3)
    rho = float(np.linalg.norm(companions[0]))
    assert np.max(np.abs(np.linalg.norm(companions, axis=1) - rho)) < 1e-9
    assert rho >= 0.8 - 1e-12
    assert eta(3, rho) == pytest.approx(0.1, abs=1e-10)
    assert full.max_norm() <= 1 + 1e-9


def test_lemma_relation_rejects_far_point():
    with pytest.raises(RadiusSolveFailure):
        constant_lemma_relation(np.array([0.5, 0.0]), 0.95, 2)


# -- checker ------------------------------------------------------------------


def test_checker_accepts_gamma1_pair():
    a3 = alpha(3)
    a = np.array([0.02, -a3])
    b = np.array([0.02, a3])
    set_a, set_b = gamma1_link(a, b)
    points = np.vstack([a, b, set_a.points[1:]])
    cert = Certificate(n=2, points=points, sets=[(0, 2, 3), (1, 2, 3)], claim=(0, 1))
    report = check_certificate(cert)
    assert report.accepted
    assert report.residual < 1e-12


def test_checker_rejects_perturbed_point():
    a3 = alpha(3)
    set_a, set_b = gamma1_link(np.array([0.02, -a3]), np.array([0.02, a3]))
    points = np.vstack([set_a.points[0], set_b.points[0], set_a.points[1:]])
    points[2, 0] += 1e-3
    cert = Certificate(n=2, points=points, sets=[(0, 2, 3), (1, 2, 3)], claim=(0, 1))
    report = check_certificate(cert)
    assert not report.accepted
    assert report.failure == "SetInvalid"
    assert report.detail["set_index"] == 0


def test_checker_rejects_non_shared_claim():
    a3 = alpha(3)
    set_a, _ = gamma1_link(np.array([0.02, -a3]), np.array([0.02, a3]))
    cert = Certificate(n=2, points=set_a.points, sets=[(0, 1, 2)], claim=(0, 1))
    report = check_certificate(cert)
    assert not report.accepted
    assert report.failure == "ClaimNotImplied"
    assert report.residual > 1e-3


def test_checker_malformed():
    cert = Certificate(n=2, points=np.zeros((2, 2)), sets=[(0, 1)], claim=(0, 1))
    report = check_certificate(cert)
    assert report.failure == "MalformedCertificate"


def test_checker_reflexive_claim():
    cert = Certificate(n=2, points=np.array([[0.1, 0.2]]), sets=[], claim=(0, 0))
    report = check_certificate(cert)
    assert report.accepted and report.residual == 0.0


def test_checker_is_permutation_invariant():
    rng = np.random.default_rng(33)
    cert = generate_equality_certificate(np.array([0.2, 0.3]), np.array([0.7, -0.4]), 2)
    relabel = rng.permutation(cert.points.shape[0])  # old id -> new id
    new_points = np.empty_like(cert.points)
    new_points[relabel] = cert.points
    shuffled_sets = [tuple(int(relabel[i]) for i in s) for s in cert.sets]
    rng.shuffle(shuffled_sets)
    shuffled = Certificate(
        n=2,
        points=new_points,
        sets=shuffled_sets,
        claim=(int(relabel[cert.claim[0]]), int(relabel[cert.claim[1]])),
    )
    assert check_certificate(shuffled).accepted


# -- generator ----------------------------------------------------------------


def test_generate_reflexive():
    x = np.array([0.3, -0.2, 0.1])
    cert = generate_equality_certificate(x, x.copy(), 3)
    assert cert.sets == []
    assert cert.claim[0] == cert.claim[1]
    assert check_certificate(cert).accepted


def test_generate_shell_pair_uses_only_links():
    lam = lambda_shell(2)
    x = np.array([0.9, 0.0])
    y = np.array([0.0, 0.9])
    assert min(np.linalg.norm(x), np.linalg.norm(y)) >= lam
    cert = generate_equality_certificate(x, y, 2)
    report = check_certificate(cert)
    assert report.accepted and report.residual < 1e-8
    # pure link chains: sets arrive in pairs sharing exactly n points
    assert len(cert.sets) % 2 == 0
    for i in range(0, len(cert.sets), 2):
        shared = set(cert.sets[i]) & set(cert.sets[i + 1])
        assert len(shared) == 2


def test_generate_mixed_regions_all_stages():
    cert = generate_equality_certificate(np.zeros(3), np.array([0.95, 0.0, 0.0]), 3)
    report = check_certificate(cert)
    assert report.accepted
    assert report.residual < 1e-8
    assert len(cert.sets) <= 5000
    assert "epsilon" in cert.generator_params
    assert len(cert.generator_params["shell_rho_schedule"]) >= 2


def test_generate_schedule_matches_contract():
    for n in (2, 3, 4):
        cert = generate_equality_certificate(np.zeros(n), np.full(n, 0.9 / math.sqrt(n)), n)
        eps = cert.generator_params["epsilon"]
        lam = lambda_shell(n)
        assert eps < min(nu(n, lam), beta(n + 1) - beta(n))
        schedule = cert.generator_params["shell_rho_schedule"]
        assert schedule[-1] <= beta(n + 1)
        assert all(r1 > r2 for r1, r2 in zip(schedule, schedule[1:]))
        for r1, r2 in zip(schedule, schedule[1:]):
            assert r1 - r2 >= nu(n, lam) - eps - 1e-12
        assert schedule[0] == pytest.approx(
            float(np.clip(schedule[0], lam, 1.0)), abs=1e-9)  # starts above lambda
        assert mu(n, schedule[0]) == pytest.approx(lam - eps, abs=1e-9)


def test_generate_deterministic():
    x = np.array([0.4, 0.1, -0.3])
    y = np.array([-0.2, 0.6, 0.0])
    c1 = generate_equality_certificate(x, y, 3)
    c2 = generate_equality_certificate(x, y, 3)
    assert certificate_to_json(c1) == certificate_to_json(c2)


def test_generate_rejects_outside_ball():
    with pytest.raises(OutsideBall):
        generate_equality_certificate(np.array([1.2, 0.0]), np.array([0.0, 0.0]), 2)


def test_generate_random_pairs_and_soundness():
    rng = np.random.default_rng(55)
    for n in (2, 3, 4):
        for _ in range(5):
            x = _random_ball_point(rng, n)
            y = _random_ball_point(rng, n)
            cert = generate_equality_certificate(x, y, n)
            report = check_certificate(cert)
            assert report.accepted and report.residual < 1e-8
            assignments = _feasible_assignments(cert, 20, seed=7)
            gap = np.abs(assignments[cert.claim[0]] - assignments[cert.claim[1]])
            assert float(np.max(gap)) < 1e-6


# -- serialization --------------------------------------------------------------


def test_json_round_trip_is_exact():
    cert = generate_equality_certificate(np.array([0.35, 0.1]), np.array([0.88, 0.2]), 2)
    text = certificate_to_json(cert)
    back = certificate_from_json(text)
    assert back.n == cert.n
    assert np.array_equal(back.points, cert.points)
    assert back.sets == cert.sets
    assert back.claim == cert.claim
    assert check_certificate(back).accepted


def test_json_has_full_precision():
    value = 1.0 / 3.0
    cert = Certificate(n=2, points=np.array([[value, -value]]), sets=[], claim=(0, 0))
    text = certificate_to_json(cert)
    assert "0.33333333333333331" in text
