"""Equality certificates: finite set systems forcing f(x) = f(y).

A certificate lists maximal standard equilateral sets in the closed unit
ball over a shared point table.  Every candidate weight f satisfies one
linear equation per set (the point values sum to the weight W), so a claim
f(x) = f(y) is implied exactly when e_x - e_y lies in the row space of the
system.  The generator builds such systems constructively:

  * points of the outer annulus are chained to a fixed anchor by hops of
    length 2*alpha(n+1) with clearance at least beta(n), two sets per hop
    (the sets share n points, so each hop's rows cancel to e_p - e_q);
  * inner points z get one set {z, c_1..c_n} with companions at the radius
    whose apex height equals ||z||, tying f(z) + n*(annulus value) = W;
  * mid-radius points u pair with the antipodal v at norm 1 - ||u||,
    enlarged to a maximal set whose extra vertices all land at norm at
    least the step radius;
  * one closing pair at the fixed-point radius beta(n+1) identifies the
    inner value with the annulus value, making W = (n+1) * anchor.

The checker is generation-agnostic: it re-validates every set numerically
and tests the claim by a least-squares row-space residual.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    GenerationFailure,
    MalformedCertificate,
    NormWindowViolation,
    OutsideBall,
    PreconditionViolation,
    RadiusSolveFailure,
)
from .gamma import gamma, gamma1_link
from .geometry import DEFAULT_TOL, Tolerance, as_point, section2d
from .simplex import EquilateralSet, alpha, beta, cap_extension, embed_in_frame
from .enlarge import enlarge_to_maximal
from .weights import (
    BISECTION_TOL,
    circuit_geometry,
    circle_circle_intersections,
    eta,
    lambda_shell,
    mu,
    mu_inverse,
    nu,
    SKELETON_CYCLE,
)

CERT_VERSION = 1
MAX_CERT_SETS = 5000
# Band-edge slack used when matching a norm against the step schedule.
BAND_EDGE_SLACK = 5e-10
INNER_EDGE = 1e-9


# ---------------------------------------------------------------------------
# The two annulus relations.


@dataclass(frozen=True)
class StepRelation:
    """Maximal set {u, v, x_1..x_{n-1}} with v antipodal to u at norm 1-||u||."""

    set: EquilateralSet
    u: np.ndarray
    v: np.ndarray
    companions: np.ndarray
    rho0: float


def theorem_step_relation(u, rho0: float, n: int,
                          tol: Tolerance = DEFAULT_TOL) -> StepRelation:
    """One inward annulus step at radius rho0 through the point u.

    Requires mu(rho0) <= ||u|| <= rho0.  The antipodal partner
    v = -((1-||u||)/||u||) u satisfies ||u - v|| = ||u|| + ||v|| = 1 and
    1 - rho0 <= ||v|| <= eta(rho0); enlarging {u, v} to a maximal set adds
    n-1 vertices whose common norm sqrt(3/4 + (||u|| - 1/2)**2) is at least
    rho0, so they live in the annulus already covered at this stage.
    """
    u = as_point(u, n)
    s = float(np.linalg.norm(u))
    bn = beta(n)
    if rho0 < bn - tol.eps_eq or rho0 > mu_inverse(n, min(lambda_shell(n), 1.0), tol) + tol.eps_eq:
        raise PreconditionViolation(f"step radius rho0={rho0} out of range for n={n}")
    lo = mu(n, rho0, tol)
    if s < lo - 2 * tol.eps_eq or s > rho0 + 2 * tol.eps_eq:
        raise PreconditionViolation(
            f"||u||={s:.12f} outside the step window [{lo:.12f}, {rho0:.12f}]")
    v = -((1.0 - s) / s) * u
    nv = float(np.linalg.norm(v))
    if nv < 1.0 - rho0 - 10 * tol.eps_eq or nv > eta(n, rho0, tol) + 10 * tol.eps_eq:
        raise PreconditionViolation(f"||v||={nv:.12f} escapes [1-rho0, eta(rho0)]")
    pair = EquilateralSet(np.vstack([u, v]))
    maximal, _ = enlarge_to_maximal(pair, tol)
    companions = maximal.points[2:]
    w = (u + v) / 2.0
    mid_sq = np.linalg.norm(companions - w, axis=1) ** 2
    if float(np.max(np.abs(mid_sq - 0.75))) > 1e-9:
        raise NormWindowViolation("companion distance to the pair midpoint is not sqrt(3)/2")
    norm_sq = np.linalg.norm(companions, axis=1) ** 2
    predicted = 0.75 + (s - 0.5) ** 2
    if float(np.max(np.abs(norm_sq - predicted))) > 1e-9:
        raise NormWindowViolation("companion norm identity 3/4 + (||u||-1/2)^2 failed")
    if float(np.min(np.linalg.norm(companions, axis=1))) < rho0 - 1e-7:
        raise NormWindowViolation("a companion fell below the step radius")
    return StepRelation(set=maximal, u=u, v=v, companions=companions, rho0=rho0)


def constant_lemma_relation(z, rho0: float, n: int,
                            tol: Tolerance = DEFAULT_TOL) -> tuple[EquilateralSet, np.ndarray]:
    """Maximal set {z, c_1..c_n} with all companions at one norm >= rho0.

    Solves eta(rho) = ||z|| on [rho0, 1] by bisection and extends z by the
    cap at that radius; the companions land in the annulus where the weight
    value is already pinned, so the set's equation reads f(z) + n*delta = W.
    """
    z = as_point(z, n)
    s = float(np.linalg.norm(z))
    bn = beta(n)
    if rho0 < bn - tol.eps_eq or rho0 > 1.0 + tol.eps_eq:
        raise PreconditionViolation(f"rho0={rho0} outside [beta_n, 1]")
    rho0 = min(max(rho0, bn), 1.0)
    top = eta(n, rho0, tol)
    if s > top + tol.eps_eq:
        raise RadiusSolveFailure(f"||z||={s:.12f} exceeds eta(rho0)={top:.12f}")
    lo, hi = rho0, 1.0
    if s >= top:
        rho = rho0
    elif s <= 0.0:
        rho = 1.0
    else:
        while hi - lo > BISECTION_TOL:
            mid = 0.5 * (lo + hi)
            if eta(n, mid, tol) > s:
                lo = mid
            else:
                hi = mid
        rho = 0.5 * (lo + hi)
    companions = cap_extension(z, rho, tol)
    full = EquilateralSet(np.vstack([z, companions.points]))
    wide = Tolerance(eps_eq=10 * tol.eps_eq, eps_rank=tol.eps_rank, grid_step=tol.grid_step)
    full.validate(in_ball=True, tol=wide)
    return full, companions.points


# ---------------------------------------------------------------------------
# Certificate container and serialization.


@dataclass
class Certificate:
    """Point table, maximal-set index tuples, claim pair, generator metadata."""

    n: int
    points: np.ndarray
    sets: list
    claim: tuple
    generator_params: dict = field(default_factory=dict)
    version: int = CERT_VERSION


def _dumps(obj) -> str:
    """JSON text with floats printed to 17 significant digits."""
    if isinstance(obj, dict):
        items = ", ".join(f"{json.dumps(k)}: {_dumps(v)}" for k, v in obj.items())
        return "{" + items + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(_dumps(v) for v in obj) + "]"
    if isinstance(obj, (bool, np.bool_)) or obj is None:
        return json.dumps(bool(obj) if obj is not None else None)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return format(float(obj), ".17g")
    return json.dumps(obj)


def certificate_to_json(cert: Certificate, tol: Tolerance = DEFAULT_TOL) -> str:
    doc = {
        "version": cert.version,
        "n": cert.n,
        "tolerance": {"eps_eq": tol.eps_eq, "eps_rank": tol.eps_rank,
                      "grid_step": tol.grid_step},
        "points": [[float(c) for c in p] for p in cert.points],
        "sets": [list(map(int, s)) for s in cert.sets],
        "claim": [int(cert.claim[0]), int(cert.claim[1])],
        "generator_params": cert.generator_params,
    }
    return _dumps(doc)


def certificate_from_json(text: str) -> Certificate:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedCertificate(f"invalid JSON: {exc}") from exc
    for key in ("n", "points", "sets", "claim"):
        if key not in doc:
            raise MalformedCertificate(f"missing field {key!r}")
    points = np.asarray(doc["points"], dtype=float)
    if points.ndim != 2:
        raise MalformedCertificate("points must be a list of coordinate arrays")
    return Certificate(
        n=int(doc["n"]),
        points=points,
        sets=[tuple(int(i) for i in s) for s in doc["sets"]],
        claim=(int(doc["claim"][0]), int(doc["claim"][1])),
        generator_params=doc.get("generator_params", {}),
        version=int(doc.get("version", CERT_VERSION)),
    )


# ---------------------------------------------------------------------------
# Checker.


@dataclass
class CheckReport:
    accepted: bool
    failure: str | None = None
    residual: float | None = None
    detail: dict = field(default_factory=dict)
    set_count: int = 0
    point_count: int = 0


def check_certificate(cert: Certificate, tol: Tolerance = DEFAULT_TOL) -> CheckReport:
    """Independently verify a certificate; never consults how it was generated.

    Re-checks every set (pairwise distances 1, norms <= 1, size n+1) and
    accepts iff e_x - e_y lies in the row space of the sum equations, via
    the least-squares residual of the transposed system.
    """
    n = cert.n
    pts = np.asarray(cert.points, dtype=float)
    if n < 1 or pts.ndim != 2 or (pts.size and pts.shape[1] != n) or not np.all(np.isfinite(pts)):
        return CheckReport(accepted=False, failure="MalformedCertificate",
                           detail={"reason": "bad point table"})
    count = pts.shape[0]
    claim = cert.claim
    if len(claim) != 2 or not all(0 <= int(i) < max(count, 1) for i in claim):
        return CheckReport(accepted=False, failure="MalformedCertificate",
                           detail={"reason": "claim indices out of range"})
    for idx, s in enumerate(cert.sets):
        if len(s) != n + 1 or any(not (0 <= int(i) < count) for i in s):
            return CheckReport(accepted=False, failure="MalformedCertificate",
                               detail={"reason": f"set {idx} is not an (n+1)-tuple of valid ids"},
                               set_count=len(cert.sets), point_count=count)
    for idx, s in enumerate(cert.sets):
        coords = pts[list(s)]
        worst_dist = 0.0
        for i in range(n + 1):
            for j in range(i + 1, n + 1):
                d = float(np.linalg.norm(coords[i] - coords[j]))
                worst_dist = max(worst_dist, abs(d - 1.0))
        worst_norm = float(np.max(np.linalg.norm(coords, axis=1))) - 1.0
        if worst_dist > tol.eps_eq or worst_norm > tol.eps_eq:
            return CheckReport(
                accepted=False, failure="SetInvalid",
                detail={"set_index": idx,
                        "worst_distance_error": worst_dist,
                        "worst_norm_excess": max(worst_norm, 0.0)},
                set_count=len(cert.sets), point_count=count)
    if int(claim[0]) == int(claim[1]):
        return CheckReport(accepted=True, residual=0.0,
                           set_count=len(cert.sets), point_count=count)
    if not cert.sets:
        return CheckReport(accepted=False, failure="ClaimNotImplied",
                           residual=math.sqrt(2.0),
                           set_count=0, point_count=count)
    rows = np.zeros((len(cert.sets), count + 1))
    for r, s in enumerate(cert.sets):
        for i in s:
            rows[r, int(i)] += 1.0
        rows[r, count] = -1.0
    target = np.zeros(count + 1)
    target[int(claim[0])] = 1.0
    target[int(claim[1])] = -1.0
    solution, *_ = np.linalg.lstsq(rows.T, target, rcond=None)
    residual = float(np.linalg.norm(rows.T @ solution - target))
    if residual < tol.eps_rank:
        return CheckReport(accepted=True, residual=residual,
                           set_count=len(cert.sets), point_count=count)
    return CheckReport(accepted=False, failure="ClaimNotImplied", residual=residual,
                       set_count=len(cert.sets), point_count=count)


# ---------------------------------------------------------------------------
# Generator.

OUTER = "outer"  # value equals the anchor value
INNER = "inner"  # value equals W - n * anchor value


class _Builder:
    def __init__(self, n: int, tol: Tolerance):
        self.n = n
        self.tol = tol
        self.points: list[np.ndarray] = []
        self.index: dict[bytes, int] = {}
        self.sets: list[tuple] = []
        self.set_keys: set[tuple] = set()

    def point_id(self, p: np.ndarray) -> int:
        key = np.round(np.asarray(p, dtype=float), 12).tobytes()
        if key in self.index:
            return self.index[key]
        pid = len(self.points)
        self.points.append(np.asarray(p, dtype=float))
        self.index[key] = pid
        return pid

    def add_set(self, s: EquilateralSet, stage: str) -> None:
        ids = tuple(sorted(self.point_id(p) for p in s.points))
        if len(set(ids)) != self.n + 1:
            raise GenerationFailure(stage, "set collapsed under point deduplication")
        if ids in self.set_keys:
            return
        if len(self.sets) >= MAX_CERT_SETS:
            raise GenerationFailure(stage, f"certificate exceeded {MAX_CERT_SETS} sets")
        self.set_keys.add(ids)
        self.sets.append(ids)

    def add_link(self, p: np.ndarray, q: np.ndarray, stage: str) -> None:
        set_a, set_b = gamma1_link(p, q, self.tol)
        self.add_set(set_a, stage)
        self.add_set(set_b, stage)


def _fold(delta: float, period: float) -> float:
    r = delta % period
    return min(r, period - r)


class _CircuitRouter:
    """Plans hop chains from any annulus point of a 2-D section to the anchor."""

    def __init__(self, n: int):
        self.n = n
        self.alpha = alpha(n + 1)
        self.hop = 2.0 * self.alpha
        self.lam = lambda_shell(n)
        self.oa = self.hop - self.lam  # norm of a circuit corner

    def circuit_angle_for(self, p_local: np.ndarray, branch: int = 1) -> float:
        """Rotation phi such that p lies on the corner arc C_a of circuit(phi)."""
        s = float(np.linalg.norm(p_local))
        theta = math.atan2(p_local[1], p_local[0])
        kappa = (s * s + self.oa * self.oa - self.hop * self.hop) / (2.0 * s * self.oa)
        kappa = min(max(kappa, -1.0), 1.0)
        return theta - math.pi / 4.0 - branch * math.acos(kappa)

    def _geometry(self, phi: float):
        return circuit_geometry(self.n, phi)

    @staticmethod
    def _walk(start: str, end: str) -> list[str]:
        cycle = SKELETON_CYCLE
        i, j = cycle.index(start), cycle.index(end)
        fwd = (j - i) % len(cycle)
        back = (i - j) % len(cycle)
        if fwd <= back:
            return [cycle[(i + t) % len(cycle)] for t in range(fwd + 1)]
        return [cycle[(i - t) % len(cycle)] for t in range(back + 1)]

    def _cross(self, phi1: float, phi2: float):
        """A point on a corner arc of both circuits, with its two arc labels."""
        _, corners1, arcs1 = self._geometry(phi1)
        _, corners2, arcs2 = self._geometry(phi2)
        arcs1 = {a.label[-1]: a for a in arcs1 if a.label[-1] in "abcd"}
        arcs2 = {a.label[-1]: a for a in arcs2 if a.label[-1] in "abcd"}
        for i in "abcd":
            for j in "abcd":
                for pt in circle_circle_intersections(corners1[i], self.hop,
                                                      corners2[j], self.hop):
                    if float(np.linalg.norm(pt)) > 1.0 + 1e-9:
                        continue
                    t1 = math.atan2(pt[1] - corners1[i][1], pt[0] - corners1[i][0])
                    t2 = math.atan2(pt[1] - corners2[j][1], pt[0] - corners2[j][0])
                    if arcs1[i].contains_angle(t1, 1e-7) and arcs2[j].contains_angle(t2, 1e-7):
                        return i, j, pt
        return None

    def plan(self, p_local: np.ndarray, anchor_local: np.ndarray) -> list[np.ndarray]:
        """Local waypoints [p, ..., anchor]; consecutive gaps are exactly one hop."""
        phi0 = self.circuit_angle_for(anchor_local)
        _, corners0, _ = self._geometry(phi0)
        phi_p = self.circuit_angle_for(p_local)
        quarter = math.pi / 2.0
        k = round((phi_p - phi0) / quarter)
        if abs(phi_p - phi0 - k * quarter) < 1e-9:
            # Same circuit: p's arc corner is a relabeled corner of circuit(phi0).
            label = ["a", "d", "c", "b"][k % 4]
            names = self._walk(label, "a")
            return [p_local] + [corners0[nm] if nm in "abcd" else self._geometry(phi0)[0][nm]
                                for nm in names] + [anchor_local]
        alt = self.circuit_angle_for(p_local, branch=-1)
        if _fold(phi_p - phi0, quarter) < 0.05 and _fold(alt - phi0, quarter) >= 0.05:
            phi_p = alt
        if _fold(phi_p - phi0, quarter) >= 0.05:
            hit = self._cross(phi_p, phi0)
            if hit is not None:
                i, j, q = hit
                return self._assemble(p_local, phi_p, i, q, j, phi0, anchor_local)
        # Nearly aligned circuits (or no crossing found): route via a middle circuit.
        phi_m = phi0 + math.pi / 8.0
        hit1 = self._cross(phi_p, phi_m)
        hit2 = self._cross(phi_m, phi0)
        if hit1 is None or hit2 is None:
            raise GenerationFailure("shell-link", "no circuit crossing found")
        i1, j1, q1 = hit1
        i2, j2, q2 = hit2
        cards_m, corners_m, _ = self._geometry(phi_m)
        part1 = self._segment(p_local, phi_p, i1)
        middle = [corners_m[nm] if nm in "abcd" else cards_m[nm]
                  for nm in self._walk(j1, i2)]
        part3 = self._segment_rev(phi0, j2, anchor_local)
        return part1 + [q1] + middle + [q2] + part3

    def _segment(self, p_local, phi_p, end_label):
        cards, corners, _ = self._geometry(phi_p)
        names = self._walk("a", end_label)
        return [p_local] + [corners[nm] if nm in "abcd" else cards[nm] for nm in names]

    def _segment_rev(self, phi0, start_label, anchor_local):
        cards, corners, _ = self._geometry(phi0)
        names = self._walk(start_label, "a")
        return [corners[nm] if nm in "abcd" else cards[nm] for nm in names] + [anchor_local]

    def _assemble(self, p_local, phi_p, i, q, j, phi0, anchor_local):
        return self._segment(p_local, phi_p, i) + [q] + self._segment_rev(phi0, j, anchor_local)


class _Generator:
    def __init__(self, n: int, tol: Tolerance):
        if n < 2:
            raise PreconditionViolation("certificates need n >= 2")
        self.n = n
        self.tol = tol
        self.builder = _Builder(n, tol)
        self.router = _CircuitRouter(n)
        self.lam = lambda_shell(n)
        self.hop = 2.0 * alpha(n + 1)
        self.bridge_floor = self.hop - 1.0
        self.beta_next = beta(n + 1)
        self.epsilon = 0.5 * min(nu(n, self.lam, tol), self.beta_next - beta(n))
        self.schedule = self._build_schedule()
        self.anchor = np.zeros(n)
        self.anchor[0] = (self.lam + 1.0) / 2.0
        self.memo: dict[bytes, str] = {}
        self.closed = False

    def _build_schedule(self) -> list[float]:
        rho = mu_inverse(self.n, self.lam - self.epsilon, self.tol)
        schedule = [rho]
        for _ in range(10000):
            if schedule[-1] <= self.beta_next:
                break
            schedule.append(mu(self.n, schedule[-1], self.tol))
        else:
            raise GenerationFailure("schedule", "inward iteration did not terminate")
        return schedule

    def _key(self, p: np.ndarray) -> bytes:
        return np.round(p, 12).tobytes()

    # -- linking mechanics ---------------------------------------------------

    def _chain_to_anchor(self, p: np.ndarray) -> None:
        """Emit gamma1 pairs along a circuit chain from p to the anchor."""
        if self._key(p) == self._key(self.anchor):
            return
        frame = section2d(self.anchor, p, self.tol)
        anchor_local = frame.basis @ self.anchor
        p_local = frame.basis @ p
        waypoints_local = self.router.plan(p_local, anchor_local)
        waypoints = [embed_in_frame(w[None, :], frame)[0] for w in waypoints_local]
        waypoints[0] = p          # use the exact ambient inputs at the ends
        waypoints[-1] = self.anchor
        cleaned = [waypoints[0]]
        for w in waypoints[1:]:
            if float(np.linalg.norm(w - cleaned[-1])) > 1e-12:
                cleaned.append(w)
        for a, b in zip(cleaned, cleaned[1:]):
            self.builder.add_link(a, b, "shell-link")

    def _bridge_partner(self, p: np.ndarray) -> np.ndarray | None:
        """A shell point at hop distance from p with verified clearance."""
        s = float(np.linalg.norm(p))
        direction = p / s
        collinear = -(self.hop - s) * direction
        if float(np.linalg.norm(collinear)) >= self.lam:
            return collinear
        frame = section2d(self.anchor, p, self.tol)
        p_local = frame.basis @ p
        theta = math.atan2(p_local[1], p_local[0])
        lo = max(self.lam, self.hop - s)
        if lo > 1.0:
            return None
        for frac in (0.0, 0.25, 0.5, 0.75, 1.0):
            rho_r = lo + frac * (1.0 - lo)
            c = (s * s + rho_r * rho_r - self.hop * self.hop) / (2.0 * s * rho_r)
            if abs(c) > 1.0:
                continue
            omega = math.acos(c)
            r_local = rho_r * np.array([math.cos(theta + omega), math.sin(theta + omega)])
            r = embed_in_frame(r_local[None, :], frame)[0]
            if gamma(p, r, self.tol).value >= beta(self.n) + 0.005:
                return r
        return None

    def _band_index(self, s: float) -> int:
        for m in range(len(self.schedule) - 1):
            if s >= self.schedule[m + 1] - BAND_EDGE_SLACK:
                return m
        return len(self.schedule) - 2

    # -- resolution ----------------------------------------------------------

    def resolve(self, p: np.ndarray) -> str:
        """Emit relations tying f(p) to the anchor; returns the value class."""
        key = self._key(p)
        if key in self.memo:
            return self.memo[key]
        self.memo[key] = OUTER  # breaks accidental cycles; overwritten below
        s = float(np.linalg.norm(p))
        if key == self._key(self.anchor):
            cls = OUTER
        elif s >= self.lam - 1e-12:
            self._chain_to_anchor(p)
            cls = OUTER
        elif s < self.beta_next - INNER_EDGE:
            cls = self._resolve_inner(p)
        elif s >= self.bridge_floor:
            partner = self._bridge_partner(p)
            if partner is not None:
                self.builder.add_link(p, partner, "bridge")
                self.resolve(partner)
                cls = OUTER
            else:
                cls = self._resolve_band(p, s)
        else:
            cls = self._resolve_band(p, s)
        self.memo[key] = cls
        return cls

    def _resolve_inner(self, p: np.ndarray) -> str:
        full, companions = constant_lemma_relation(p, self.beta_next, self.n, self.tol)
        self.builder.add_set(full, "inner-lemma")
        for c in companions:
            if self.resolve(c) != OUTER:
                raise GenerationFailure("inner-lemma", "companion did not resolve to the annulus")
        return INNER

    def _resolve_band(self, p: np.ndarray, s: float) -> str:
        m = self._band_index(s)
        rel = theorem_step_relation(p, self.schedule[m], self.n, self.tol)
        self.builder.add_set(rel.set, "annulus-step")
        if self.resolve(rel.v) != INNER:
            raise GenerationFailure("annulus-step", "antipodal point did not resolve inner")
        for c in rel.companions:
            if self.resolve(c) != OUTER:
                raise GenerationFailure("annulus-step", "companion did not resolve to the annulus")
        return OUTER

    def _emit_closing(self) -> None:
        """Identify the inner value with the annulus value at the fixed point."""
        if self.closed:
            return
        self.closed = True
        z = np.zeros(self.n)
        z[0] = self.beta_next
        m = self._band_index(self.beta_next)
        rel = theorem_step_relation(z, self.schedule[m], self.n, self.tol)
        self.builder.add_set(rel.set, "closing")
        if self.resolve(rel.v) != INNER:
            raise GenerationFailure("closing", "antipodal point did not resolve inner")
        for c in rel.companions:
            if self.resolve(c) != OUTER:
                raise GenerationFailure("closing", "companion did not resolve to the annulus")
        self.memo[self._key(z)] = OUTER
        full, companions = constant_lemma_relation(z, self.beta_next, self.n, self.tol)
        self.builder.add_set(full, "closing")
        for c in companions:
            if self.resolve(c) != OUTER:
                raise GenerationFailure("closing", "fixed-point companion did not resolve")

    def run(self, x: np.ndarray, y: np.ndarray) -> Certificate:
        id_x = self.builder.point_id(x)
        id_y = self.builder.point_id(y)
        params = {"epsilon": self.epsilon, "shell_rho_schedule": list(self.schedule)}
        if id_x == id_y:
            return Certificate(n=self.n, points=np.array([self.builder.points[id_x]]),
                               sets=[], claim=(id_x, id_x), generator_params=params)
        cls_x = self.resolve(x)
        cls_y = self.resolve(y)
        if cls_x != cls_y:
            self._emit_closing()
        return Certificate(
            n=self.n,
            points=np.array(self.builder.points),
            sets=list(self.builder.sets),
            claim=(id_x, id_y),
            generator_params=params,
        )


def generate_equality_certificate(x, y, n: int,
                                  tol: Tolerance = DEFAULT_TOL) -> Certificate:
    """Build a certificate whose sum equations force f(x) = f(y).

    Deterministic for fixed (x, y, n).  Raises GenerationFailure (with a
    stage tag) if any construction fails its re-check, and self-checks the
    result before returning it.
    """
    x = as_point(x, n)
    y = as_point(y, n)
    for p in (x, y):
        if float(np.linalg.norm(p)) > 1.0 + DEFAULT_TOL.eps_eq:
            raise OutsideBall("certificate endpoints must lie in the closed unit ball")
    gen = _Generator(n, tol)
    try:
        cert = gen.run(x, y)
    except GenerationFailure:
        raise
    except Exception as exc:  # construction bug surfaced mid-stage
        raise GenerationFailure("construction", str(exc)) from exc
    report = check_certificate(cert, tol)
    if not report.accepted:
        raise GenerationFailure("self-check", f"checker rejected: {report.failure} "
                                              f"residual={report.residual}")
    return cert
