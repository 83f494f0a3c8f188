"""Property verification suites, shared by the CLI and the test rig.

Each suite exercises one guaranteed property at a configurable sample count
and reports the worst observed slack; the CLI's verify-all command prints
one line per suite.  Counts here default well below the acceptance-test
sizes so the command stays interactive.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .certify import check_certificate, generate_equality_certificate
from .enlarge import center_norm_bound, enlarge_to_maximal
from .gamma import gamma, gamma_bruteforce
from .geometry import Frame
from .simplex import EquilateralSet, alpha, beta, canonical_simplex, cap_extension, sample_maximal_set
from .weights import (
    WeightFn,
    eta,
    falsify,
    frame_weight_sum,
    lambda_shell,
    shell_circuit,
    sin_corner_angle,
    sin_reference_angle,
)

SUITE_NAMES = [
    "constants",
    "enlargement",
    "center_bounds",
    "k_region",
    "gamma_oracle",
    "shell_geometry",
    "eta_mu_nu",
    "certificates",
    "falsifier",
    "negative_controls",
]


@dataclass
class SuiteResult:
    name: str
    passed: bool
    count: int
    worst_slack: float
    note: str = ""


def _identity_frame(n: int) -> Frame:
    return Frame(np.eye(2, n))


def suite_constants(max_k: int = 64) -> SuiteResult:
    worst = 0.0
    for k in range(1, max_k + 1):
        simplex = canonical_simplex(max(k - 1, 1), k)
        c = simplex.points.mean(axis=0)
        measured = float(np.max(np.linalg.norm(simplex.points - c, axis=1))) if k > 1 else 0.0
        worst = max(worst, abs(measured - beta(k)))
        lifted = canonical_simplex(k, k + 1)
        base_center = lifted.points[:k].mean(axis=0)
        height = float(np.linalg.norm(lifted.points[k] - base_center))
        worst = max(worst, abs(height - alpha(k + 1)))
    return SuiteResult("constants", worst < 1e-12, max_k, worst)


def suite_enlargement(n_values, seeds_per_n: int, seed: int) -> SuiteResult:
    rng = np.random.default_rng(seed)
    worst = 0.0
    count = 0
    for n in n_values:
        for _ in range(seeds_per_n):
            base = sample_maximal_set(n, int(rng.integers(2**63 - 1)))
            k = int(rng.integers(1, n + 1))
            seed_set = EquilateralSet(base.points[:k].copy())
            out, _ = enlarge_to_maximal(seed_set)
            worst = max(worst, out.pairwise_distance_error(), out.max_norm() - 1.0)
            count += 1
    return SuiteResult("enlargement", worst < 1e-9, count, worst)


def suite_center_bounds(n_values, samples_per_n: int, seed: int) -> SuiteResult:
    rng = np.random.default_rng(seed)
    worst = -1.0
    count = 0
    for n in n_values:
        for _ in range(samples_per_n):
            s = sample_maximal_set(n, int(rng.integers(2**63 - 1)))
            norm_c, bound = center_norm_bound(s)
            worst = max(worst, norm_c - bound)
            k = int(rng.integers(2, n + 1))
            sub = EquilateralSet(s.points[:k].copy())
            norm_c, bound = center_norm_bound(sub)
            worst = max(worst, norm_c - bound)
            count += 2
    return SuiteResult("center_bounds", worst <= 1e-9, count, worst)


def suite_k_region(n_values, samples_per_n: int, seed: int) -> SuiteResult:
    rng = np.random.default_rng(seed)
    worst = 0.0
    count = 0
    for n in n_values:
        s = canonical_simplex(n, n + 1)
        extremes = np.vstack([np.zeros(n), s.points[1:] - s.points[0]])
        weights = rng.dirichlet(np.ones(n + 1), size=samples_per_n)
        combos = weights @ extremes
        worst = max(worst, float(np.max(np.linalg.norm(combos, axis=1))) - 1.0)
        accepted = 0
        v = s.points[1:].sum(axis=0)
        while accepted < samples_per_n:
            batch = rng.standard_normal((4 * samples_per_n * (2**n), n))
            ok = np.all(batch @ s.points[1:].T >= 0.0, axis=1)
            batch = batch[ok]
            if batch.size == 0:
                continue
            batch = batch / np.linalg.norm(batch, axis=1)[:, None]
            take = batch[: samples_per_n - accepted]
            worst = max(worst, float(np.max(0.5 - take @ v)))
            accepted += take.shape[0]
        count += 2 * samples_per_n
    return SuiteResult("k_region", worst <= 1e-9, count, worst)


def suite_gamma_oracle(n_values, pairs_per_n: int, seed: int,
                       grid_step: float = 1e-4) -> SuiteResult:
    rng = np.random.default_rng(seed)
    worst = 0.0
    count = 0
    for n in n_values:
        full = Frame(np.eye(n))
        for _ in range(pairs_per_n):
            a = rng.standard_normal(n)
            a *= rng.uniform() ** (1.0 / n) / np.linalg.norm(a)
            b = rng.standard_normal(n)
            b *= rng.uniform() ** (1.0 / n) / np.linalg.norm(b)
            if np.linalg.norm(b - a) < 1e-6:
                continue
            closed = gamma(a, b).value
            brute = gamma_bruteforce(a, b, full, grid_step)
            worst = max(worst, abs(closed - brute))
            count += 1
    return SuiteResult("gamma_oracle", worst <= 2 * grid_step, count, worst)


def suite_shell_geometry(max_n: int = 64) -> SuiteResult:
    worst = 0.0
    for n in range(2, max_n + 1):
        plan = shell_circuit(n, _identity_frame(n), 0.0, arc_samples=2)
        a2 = alpha(n + 1) ** 2
        t = (-1.0 + math.sqrt(8.0 * a2 - 1.0)) / 2.0
        corner = plan.corners_local["a"]
        worst = max(worst, float(np.max(np.abs(corner - t))))
        lam_closed = lambda_shell(n)
        lam_geo = 2.0 * alpha(n + 1) - float(np.linalg.norm(corner))
        worst = max(worst, abs(lam_closed - lam_geo))
        worst = max(worst, abs(plan.sin_owa - sin_corner_angle(n)))
        worst = max(worst, abs(plan.sin_owh - sin_reference_angle(n)))
        worst = max(worst, plan.sin_owa - plan.sin_owh)
    return SuiteResult("shell_geometry", worst < 1e-12, max_n - 1, worst)


def suite_eta_mu_nu(max_n: int = 64, caps: int = 100, seed: int = 0) -> SuiteResult:
    worst = 0.0
    for n in range(2, max_n + 1):
        bnext = beta(n + 1)
        worst = max(worst, abs(eta(n, bnext) - bnext))
    rng = np.random.default_rng(seed)
    for _ in range(caps):
        n = int(rng.integers(2, 9))
        rho = float(rng.uniform(beta(n), 1.0))
        direction = rng.standard_normal(n)
        direction /= np.linalg.norm(direction)
        x = eta(n, rho) * direction
        comps = cap_extension(x, rho)
        err = max(
            float(np.max(np.abs(np.linalg.norm(comps.points, axis=1) - rho))),
            float(np.max(np.abs(np.linalg.norm(comps.points - x, axis=1) - 1.0))),
        )
        full = EquilateralSet(np.vstack([x, comps.points]))
        err = max(err, full.pairwise_distance_error(), full.max_norm() - 1.0)
        worst = max(worst, err)
    return SuiteResult("eta_mu_nu", worst < 1e-9, (max_n - 1) + caps, worst)


def suite_certificates(n_values, pairs_per_n: int, seed: int) -> SuiteResult:
    rng = np.random.default_rng(seed)
    worst = 0.0
    count = 0
    for n in n_values:
        for _ in range(pairs_per_n):
            pts = []
            for _ in range(2):
                p = rng.standard_normal(n)
                p *= rng.uniform() ** (1.0 / n) / np.linalg.norm(p)
                pts.append(p)
            cert = generate_equality_certificate(pts[0], pts[1], n)
            report = check_certificate(cert)
            if not report.accepted or len(cert.sets) > 5000:
                return SuiteResult("certificates", False, count + 1,
                                   report.residual or float("inf"),
                                   note=f"n={n} rejected")
            worst = max(worst, report.residual or 0.0)
            count += 1
    return SuiteResult("certificates", True, count, worst)


def suite_falsifier(seed: int, samples: int = 200) -> SuiteResult:
    quadratic = WeightFn(evaluator=lambda p: float(p @ p))
    rep_q = falsify(quadratic, 3, samples, seed)
    constant = WeightFn(evaluator=lambda p: 1.0)
    rep_c = falsify(constant, 3, samples, seed)
    rng = np.random.default_rng(seed)
    t = rng.standard_normal((4, 4))
    t = (t + t.T) / 2.0
    total, expected = frame_weight_sum(t, seed)
    worst = max(rep_c.spread, abs(total - expected))
    passed = rep_q.verdict == "disproved" and rep_c.spread < 1e-12 and abs(total - expected) < 1e-9
    return SuiteResult("falsifier", passed, 2 * samples + 1, worst)


def suite_negative_controls(seed: int) -> SuiteResult:
    rng = np.random.default_rng(seed)
    n = 3
    x = np.zeros(n)
    y = rng.standard_normal(n)
    y *= 0.8 / np.linalg.norm(y)
    cert = generate_equality_certificate(x, y, n)
    tampered_points = cert.points.copy()
    tampered_points[cert.sets[0][0]][0] += 1e-3
    from .certify import Certificate

    tampered = Certificate(n=n, points=tampered_points, sets=cert.sets,
                           claim=cert.claim, generator_params=cert.generator_params)
    rep_tampered = check_certificate(tampered)
    single = Certificate(n=n, points=cert.points,
                         sets=[cert.sets[0]],
                         claim=(cert.sets[0][0], cert.sets[0][1]),
                         generator_params={})
    rep_single = check_certificate(single)
    passed = (not rep_tampered.accepted and rep_tampered.failure == "SetInvalid"
              and not rep_single.accepted and rep_single.failure == "ClaimNotImplied")
    return SuiteResult("negative_controls", passed, 2, 0.0)


def run_verification_suites(n_values=None, seed: int = 0,
                            inject_failure: str | None = None) -> list[SuiteResult]:
    """Run every suite at interactive sample counts; returns one result each."""
    if n_values is None:
        n_values = [2, 3, 4]
    n_values = list(n_values)
    results = [
        suite_constants(),
        suite_enlargement(n_values, seeds_per_n=50, seed=seed),
        suite_center_bounds(n_values, samples_per_n=200, seed=seed + 1),
        suite_k_region([n for n in n_values if n <= 6], samples_per_n=2000, seed=seed + 2),
        suite_gamma_oracle([n for n in n_values if n <= 6], pairs_per_n=20, seed=seed + 3),
        suite_shell_geometry(),
        suite_eta_mu_nu(seed=seed + 4),
        suite_certificates([n for n in n_values if n <= 4], pairs_per_n=2, seed=seed + 5),
        suite_falsifier(seed=seed + 6),
        suite_negative_controls(seed=seed + 7),
    ]
    if inject_failure is not None:
        for r in results:
            if r.name == inject_failure:
                r.passed = False
                r.note = "injected failure"
    return results
