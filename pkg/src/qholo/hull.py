"""Discrete hull computation against finite certified function families.

The hull of a finite point set K, relative to a finite family F of functions,
keeps exactly the candidate points z with |f(z)| <= max over K of |f| for
every f in F.  Any finite family yields an outer approximation of the hull
taken over the full function class, so exclusions are rigorous and
memberships are not.

The family used throughout is the unit-modulus-weight reciprocal kernel

    f_lambda(z) = (sum_i lambda_i conj(z_i)) / ||z||^2,   |lambda_i| = 1,

translated to a center p.  It has an isolated nonremovable singularity at the
center, is n-holomorphic away from it, and for the right lambda its modulus
exceeds the K-maximum on a ball around the center, which drives the
separation experiment at the end of the module.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import expr as ex
from .forms import q_holo_residual

__all__ = [
    "Lambda", "FamilyMember", "HullProblem", "HullResult", "Thm2Report",
    "BatchReport", "basener_value", "basener_expr", "construct_lambda",
    "random_lambdas", "certify_member", "build_problem", "discrete_hull",
    "theorem2_experiment", "run_theorem2_batch", "sample_sphere", "sample_ball",
]

EPS_SING = 1e-12


@dataclass(frozen=True)
class Lambda:
    """Weight vector with all entries on the unit circle (checked to 1e-12)."""

    entries: tuple

    def __init__(self, entries):
        vec = tuple(complex(v) for v in entries)
        if not vec:
            raise ValueError("lambda must have at least one entry")
        for v in vec:
            if abs(abs(v) - 1.0) > 1e-12:
                raise ValueError(f"lambda entry {v} is not unit modulus")
        object.__setattr__(self, "entries", vec)

    @property
    def n(self):
        return len(self.entries)

    def as_array(self):
        return np.array(self.entries, dtype=complex)


def basener_value(lam: Lambda, z) -> complex:
    """f_lambda at displacement z from the singular center.

    Raises ValueError within EPS_SING of the center, where the function has
    its nonremovable singularity.
    """
    z = np.asarray(z, dtype=complex)
    if z.shape != (lam.n,):
        raise ValueError(f"point has shape {z.shape}, expected ({lam.n},)")
    nsq = float(np.sum(np.abs(z) ** 2))
    if nsq <= EPS_SING ** 2:
        raise ValueError("singularity: displacement too close to the center")
    return complex(np.sum(lam.as_array() * np.conj(z)) / nsq)


def basener_expr(lam: Lambda, p, n: int) -> ex.Expr:
    """Expression tree for z -> f_lambda(z - p)."""
    p = np.asarray(p, dtype=complex)
    if p.shape != (n,):
        raise ValueError(f"center has shape {p.shape}, expected ({n},)")
    diffs = []
    for k in range(n):
        v = ex.Var(n, k + 1)
        diffs.append(v if p[k] == 0 else v - p[k])
    num = None
    den = None
    for k, d in enumerate(diffs):
        t_num = complex(lam.entries[k]) * ex.conjugate(d)
        t_den = d * ex.conjugate(d)
        num = t_num if num is None else num + t_num
        den = t_den if den is None else den + t_den
    return num / den


def construct_lambda(z, p) -> Lambda:
    """The weight vector with lambda_i * conj(z_i - p_i) = |z_i - p_i|.

    Entries with z_i = p_i are set to 1.  For this lambda the modulus of
    f_lambda(z - p) is sum_i |z_i - p_i| / ||z - p||^2, the largest the family
    attains at z.
    """
    d = np.asarray(z, dtype=complex) - np.asarray(p, dtype=complex)
    if float(np.linalg.norm(d)) == 0.0:
        raise ValueError("z equals the center point")
    mags = np.abs(d)
    lam = np.where(mags > 0, d / np.where(mags > 0, mags, 1.0), 1.0)
    return Lambda(lam)


def random_lambdas(n: int, count: int, rng) -> list:
    """Deterministic batch of uniform-phase weight vectors."""
    phases = rng.uniform(0.0, 2.0 * np.pi, size=(count, n))
    return [Lambda(np.exp(1j * phases[k])) for k in range(count)]


@dataclass(frozen=True)
class FamilyMember:
    """A certified family function: expression, its q, measured residual bound."""

    expr: ex.Expr
    q: int
    residual_bound: float
    name: str = ""


@dataclass(frozen=True)
class HullProblem:
    n: int
    K: np.ndarray          # (k, n) sample of the compact set
    Z: np.ndarray          # (m, n) candidate points
    family: tuple          # FamilyMember entries

    def __post_init__(self):
        if len(self.K) == 0:
            raise ValueError("K must be nonempty")
        if len(self.family) == 0:
            raise ValueError("family must be nonempty")


@dataclass(frozen=True)
class HullResult:
    members: tuple          # bool per candidate
    margins: tuple          # max_f (|f(z)| - max_K |f|); +inf when singular
    singular: tuple         # evaluation failed at the candidate
    k_maxima: tuple         # per family member


def certify_member(e: ex.Expr, q: int, sample_pts, tol: float = 1e-8,
                   name: str = "") -> FamilyMember:
    """Measure the q-holomorphicity residual over a documented sample.

    Raises ValueError when the measured bound exceeds tol: the family must be
    certified, not assumed.
    """
    worst = 0.0
    for z in np.asarray(sample_pts, dtype=complex):
        worst = max(worst, q_holo_residual(e, z, q))
    if worst > tol:
        raise ValueError(
            f"family member {name or ex.to_text(e)!r} failed certification: "
            f"residual {worst:.3e} > {tol:.1e} for q={q}")
    return FamilyMember(expr=e, q=q, residual_bound=worst, name=name)


def certification_points(n: int, seed: int, count: int = 100,
                         halfwidth: float = 2.0, center=None,
                         avoid=None, avoid_radius: float = 0.3) -> np.ndarray:
    """Deterministic box sample used to certify family members.

    Points closer than avoid_radius to any `avoid` center (singularities of
    the member) are redrawn, since roundoff amplification near a pole would
    measure the arithmetic, not the function.
    """
    rng = np.random.default_rng(np.random.SeedSequence([seed, 0x63657274]))
    if center is None:
        center = np.zeros(n, dtype=complex)
    center = np.asarray(center, dtype=complex)
    if avoid is None:
        avoid = []
    else:
        arr = np.asarray(avoid, dtype=complex)
        avoid = [arr] if arr.ndim == 1 else list(arr)
    out = []
    attempts = 0
    while len(out) < count:
        attempts += 1
        if attempts > 100 * count:
            raise RuntimeError("certification sampling stalled")
        x = rng.uniform(-halfwidth, halfwidth, size=2 * n)
        z = center + x[:n] + 1j * x[n:]
        if any(np.linalg.norm(z - a) < avoid_radius for a in avoid):
            continue
        out.append(z)
    return np.array(out)


def build_problem(n: int, K, Z, members, seed: int, tol: float = 1e-8) -> HullProblem:
    """Assemble a HullProblem, certifying each (expr, q, name, avoid) entry."""
    K = np.asarray(K, dtype=complex)
    Z = np.asarray(Z, dtype=complex)
    scale = max(1.0, float(np.max(np.abs(K))) if K.size else 1.0)
    fam = []
    for idx, (e, q, name, avoid) in enumerate(members):
        pts = certification_points(n, seed + idx, halfwidth=1.5 * scale,
                                   avoid=avoid, avoid_radius=0.3 * scale)
        fam.append(certify_member(e, q, pts, tol=tol, name=name))
    return HullProblem(n=n, K=K, Z=Z, family=tuple(fam))


def discrete_hull(prob: HullProblem) -> HullResult:
    """Membership sweep: z stays iff every family member satisfies
    |f(z)| <= max over K of |f|.

    K maxima are computed once with exact comparisons.  An evaluation failure
    at a K point aborts (the reference maxima would be meaningless); a failure
    at a candidate marks it excluded with margin +inf.
    """
    k_maxima = []
    for mem in prob.family:
        vals = np.abs(ex.eval_batch(mem.expr, prob.K))
        k_maxima.append(float(np.max(vals)))

    m = len(prob.Z)
    cand_vals = np.empty((len(prob.family), m))
    sing = np.zeros(m, dtype=bool)
    for fi, mem in enumerate(prob.family):
        try:
            cand_vals[fi] = np.abs(ex.eval_batch(mem.expr, prob.Z))
        except ex.EvalError:
            for zi in range(m):
                try:
                    cand_vals[fi, zi] = abs(ex.eval_value(mem.expr, prob.Z[zi]))
                except ex.EvalError:
                    cand_vals[fi, zi] = np.nan
                    sing[zi] = True

    margins = np.full(m, -np.inf)
    for fi in range(len(prob.family)):
        margins = np.maximum(margins, cand_vals[fi] - k_maxima[fi])
    margins = np.where(sing, np.inf, margins)
    members = (~sing) & (margins <= 0.0)
    return HullResult(members=tuple(bool(b) for b in members),
                      margins=tuple(float(v) for v in margins),
                      singular=tuple(bool(b) for b in sing),
                      k_maxima=tuple(k_maxima))


# ---------------------------------------------------------------------------
# Separation experiment

@dataclass(frozen=True)
class Thm2Report:
    """Per-run record of the separation chain around one center.

    For every candidate z in the inner ball, with lambda built from z, the
    chain
        |f_lambda(z-p)| = sum|z_i-p_i|/||z-p||^2 >= 1/||z-p||
                        > sqrt(n)/||w-p|| >= sum|w_i-p_i|/||w-p||^2
                        >= |f_lambda(w-p)|        (for every w in K)
    forces |f_lambda(z-p)| > max over K, so z is outside the hull.  Slacks are
    the minima of each link over all (z, w); margins are the final separation
    per z.
    """

    n: int
    z_count: int
    k_count: int
    violations: int
    min_margin: float
    link_slacks: tuple      # min slack per chain link, in displayed order
    monotonicity_err: float


_REL_GUARD = 1e-9


def theorem2_experiment(n: int, p, r: float, K, z_samples) -> Thm2Report:
    """Verify the separation chain for explicit K and candidate samples.

    Preconditions (reported per offending point): every K point at distance
    at least r from p; every candidate strictly between 0 and r/sqrt(n).
    """
    p = np.asarray(p, dtype=complex)
    K = np.asarray(K, dtype=complex)
    Z = np.asarray(z_samples, dtype=complex)
    if p.shape != (n,):
        raise ValueError(f"center has shape {p.shape}, expected ({n},)")

    dk = K - p[None, :]
    dk_norm = np.linalg.norm(dk, axis=1)
    bad_k = np.nonzero(dk_norm < r * (1 - 1e-12))[0]
    if bad_k.size:
        raise ValueError(f"K points inside B(p, r): indices {bad_k.tolist()}")
    dz = Z - p[None, :]
    dz_norm = np.linalg.norm(dz, axis=1)
    limit = r / np.sqrt(n)
    bad_z = np.nonzero((dz_norm >= limit) | (dz_norm <= 0))[0]
    if bad_z.size:
        raise ValueError(
            f"candidates outside (0, r/sqrt(n)): indices {bad_z.tolist()}")

    dk_abs_sum = np.sum(np.abs(dk), axis=1)
    dk_nsq = dk_norm ** 2
    closed_k = dk_abs_sum / dk_nsq          # the K-side middle expression
    sqrt_n = np.sqrt(n)

    slack1 = np.inf   # evaluated |f_lambda(z-p)| equals its closed form
    slack2 = np.inf   # sum|d_i|/||d||^2 >= 1/||d||
    slack3 = np.inf   # 1/||z-p|| > sqrt(n)/||w-p||  (strict)
    slack4 = np.inf   # sqrt(n)/||w-p|| >= sum|w_i-p_i|/||w-p||^2
    slack5 = np.inf   # that middle expression >= |f_lambda(w-p)|
    min_margin = np.inf
    mono_err = 0.0
    violations = 0

    slack4 = float(np.min(sqrt_n / dk_norm - closed_k))
    if slack4 < -_REL_GUARD * float(np.max(closed_k)):
        violations += 1

    for zi in range(Z.shape[0]):
        d = dz[zi]
        lam = construct_lambda(Z[zi], p)
        lhs = abs(basener_value(lam, d))
        closed = float(np.sum(np.abs(d))) / (dz_norm[zi] ** 2)
        err1 = abs(lhs - closed) / max(1.0, closed)
        slack1 = min(slack1, -err1)
        if err1 > 1e-12:
            violations += 1
        s2 = closed - 1.0 / dz_norm[zi]
        slack2 = min(slack2, s2)
        if s2 < -_REL_GUARD * closed:
            violations += 1
        s3 = 1.0 / dz_norm[zi] - float(np.max(sqrt_n / dk_norm))
        slack3 = min(slack3, s3)
        if s3 <= 0:
            violations += 1
        lam_arr = lam.as_array()
        f_on_k = np.abs(np.conj(dk) @ lam_arr) / dk_nsq
        s5 = float(np.min(closed_k - f_on_k))
        slack5 = min(slack5, s5)
        if s5 < -_REL_GUARD * float(np.max(closed_k)):
            violations += 1
        margin = lhs - float(np.max(f_on_k))
        min_margin = min(min_margin, margin)
        if margin <= 0:
            violations += 1
        for t in (0.5, 2.0):
            err = abs(abs(basener_value(lam, t * d)) * t - lhs) / max(1.0, lhs)
            mono_err = max(mono_err, err)
            if err > 1e-12:
                violations += 1

    return Thm2Report(
        n=n, z_count=Z.shape[0], k_count=K.shape[0], violations=violations,
        min_margin=float(min_margin),
        link_slacks=(float(slack1), float(slack2), float(slack3),
                     float(slack4), float(slack5)),
        monotonicity_err=float(mono_err))


@dataclass(frozen=True)
class BatchReport:
    configs: int
    violations: int
    min_margin: float
    min_link_slacks: tuple
    max_monotonicity_err: float


def _sample_outside_ball(rng, n, p, r, count, halfwidth_factor=2.5):
    out = []
    while len(out) < count:
        draw = rng.uniform(-halfwidth_factor * r, halfwidth_factor * r,
                           size=(4 * count, 2 * n))
        z = p[None, :] + draw[:, :n] + 1j * draw[:, n:]
        keep = np.linalg.norm(z - p[None, :], axis=1) >= r
        out.extend(z[keep])
    return np.array(out[:count])


def _sample_inner_ball(rng, n, p, radius, count, floor=1e-9):
    out = []
    while len(out) < count:
        raw = rng.normal(size=(4 * count, 2 * n))
        dirs = raw / np.linalg.norm(raw, axis=1, keepdims=True)
        radii = radius * rng.uniform(0.0, 1.0, size=4 * count) ** (1.0 / (2 * n))
        keep = radii > floor
        pts = p[None, :] + radii[keep, None] * (dirs[keep, :n] + 1j * dirs[keep, n:])
        out.extend(pts)
    return np.array(out[:count])


def sample_sphere(n: int, p, r: float, count: int, seed: int) -> np.ndarray:
    """Deterministic sample of the sphere of radius r around p in C^n."""
    p = np.asarray(p, dtype=complex)
    rng = np.random.default_rng(np.random.SeedSequence([seed, 0x73706872]))
    raw = rng.normal(size=(count, 2 * n))
    dirs = raw / np.linalg.norm(raw, axis=1, keepdims=True)
    return p[None, :] + r * (dirs[:, :n] + 1j * dirs[:, n:])


def sample_ball(n: int, p, radius: float, count: int, seed: int,
                floor: float = 1e-9) -> np.ndarray:
    """Uniform sample of the punctured ball B(p, radius) minus B(p, floor)."""
    p = np.asarray(p, dtype=complex)
    rng = np.random.default_rng(np.random.SeedSequence([seed, 0x62616c6c]))
    return _sample_inner_ball(rng, n, p, radius, count, floor=floor)


def run_theorem2_batch(configs: int = 1000, seed: int = 0, ns=(2, 3, 4),
                       k_count: int = 200, z_count: int = 50,
                       r_range=(0.1, 2.0)) -> BatchReport:
    """Randomized sweep of theorem2_experiment-style configurations.

    Vectorized over K and the candidate batch per configuration so the
    default 1000-configuration run stays well under a minute.
    """
    root = np.random.SeedSequence([seed, 0x74686d32])
    children = root.spawn(configs)
    violations = 0
    min_margin = np.inf
    slacks = [np.inf] * 5
    mono_err = 0.0
    for ci in range(configs):
        rng = np.random.default_rng(children[ci])
        n = int(ns[ci % len(ns)])
        p = rng.uniform(-1, 1, size=2 * n)
        p = p[:n] + 1j * p[n:]
        r = float(rng.uniform(*r_range))
        K = _sample_outside_ball(rng, n, p, r, k_count)
        Z = _sample_inner_ball(rng, n, p, r / np.sqrt(n) * (1 - 1e-12), z_count)

        dk = K - p[None, :]
        dk_norm = np.linalg.norm(dk, axis=1)
        dk_nsq = dk_norm ** 2
        closed_k = np.sum(np.abs(dk), axis=1) / dk_nsq
        dz = Z - p[None, :]
        dz_norm = np.linalg.norm(dz, axis=1)
        sqrt_n = np.sqrt(n)

        # lambda per candidate, stacked to (n, z_count)
        mags = np.abs(dz)
        lams = np.where(mags > 0, dz / np.where(mags > 0, mags, 1.0), 1.0).T
        lhs = np.sum(mags, axis=1) / dz_norm ** 2
        evaluated = np.abs(np.sum(np.conj(dz) * lams.T, axis=1)) / dz_norm ** 2
        err1 = np.max(np.abs(evaluated - lhs) / np.maximum(1.0, lhs))
        slacks[0] = min(slacks[0], -float(err1))
        if err1 > 1e-12:
            violations += 1
        s2 = float(np.min(lhs - 1.0 / dz_norm))
        slacks[1] = min(slacks[1], s2)
        if s2 < -_REL_GUARD * float(np.max(lhs)):
            violations += 1
        s3 = float(np.min(1.0 / dz_norm) - np.max(sqrt_n / dk_norm))
        slacks[2] = min(slacks[2], s3)
        if s3 <= 0:
            violations += 1
        s4 = float(np.min(sqrt_n / dk_norm - closed_k))
        slacks[3] = min(slacks[3], s4)
        if s4 < -_REL_GUARD * float(np.max(closed_k)):
            violations += 1
        f_on_k = np.abs(np.conj(dk) @ lams) / dk_nsq[:, None]   # (k, z)
        s5 = float(np.min(closed_k[:, None] - f_on_k))
        slacks[4] = min(slacks[4], s5)
        if s5 < -_REL_GUARD * float(np.max(closed_k)):
            violations += 1
        margins = evaluated - np.max(f_on_k, axis=0)
        m = float(np.min(margins))
        min_margin = min(min_margin, m)
        if m <= 0:
            violations += 1
        # spot-check radial monotonicity on the first candidate
        lam0 = Lambda(lams[:, 0])
        base = abs(basener_value(lam0, dz[0]))
        for t in (0.5, 2.0):
            err = abs(abs(basener_value(lam0, t * dz[0])) * t - base) / max(1.0, base)
            mono_err = max(mono_err, err)
            if err > 1e-12:
                violations += 1
    return BatchReport(configs=configs, violations=violations,
                       min_margin=float(min_margin),
                       min_link_slacks=tuple(float(s) for s in slacks),
                       max_monotonicity_err=float(mono_err))
