"""g-angles between subspaces of l^p.

One-dimensional ``U = span{u}``::

    cos^2 A = ||u_V||^2 / ||u||^2

Two-dimensional ``U = span{u1, u2}`` and ``V`` (dim 2)::

    cos^2 A = ||u1_V, u2_V||_g^2 / (||u1, u2||_g^2 * sup ||v1*, v2*||_g^2)

where the sup runs over all bases ``{v1, v2}`` of ``V`` and ``{v1*, v2*}`` is
the left g-orthonormalization of the basis.

Reducing the sup over bases
---------------------------
``v1* = v1/||v1||`` depends only on the line through ``v1``.  The second
vector is the normalized complement of ``v2`` with respect to ``span{v1}``,
i.e. a unit vector of ``V`` in the kernel of the linear functional
``g(v1, .)``.  On the 2-dimensional ``V`` that kernel is a line (it misses
``v1`` because ``g(v1, v1) > 0``), so ``v2*`` is fixed up to sign by ``v1``,
whichever ``v2`` completes the basis.  The 2-norm ignores signs, so the sup
is a sup over the one-parameter family ``v1(t) = cos(t) b1 + sin(t) b2``,
``t`` in ``[0, pi)``.

For p = 1 the map ``t -> ||v1*, v2*||_g`` jumps where a coordinate of
``v1(t)`` changes sign, and between two such points it is monotone, so its
sup is approached at those breakpoints.  They are added to the sweep
explicitly (exactly at the breakpoint and just to either side).
"""
from dataclasses import dataclass, field, replace
from functools import lru_cache
import math

import numpy as np

from .errors import (
    DegenerateSubspaceError,
    InvalidInputError,
    InvalidSubspaceError,
    NumericalError,
    OptimizerInconsistencyError,
    OrthonormalizationError,
)
from .gram import gram_context, left_gram_schmidt, project
from .space import LpVector, SpaceConfig, _norm_array, as_vector, g_closed, lp_norm, pad
from .twonorm import OptimizerConfig, det2, two_norm_boundary, two_norm_g

__all__ = [
    "Subspace2",
    "AngleReport",
    "SweepResult",
    "angle_1d",
    "sweep_orthonormal_2norm",
    "sup_orthonormal_2norm",
    "angle_2d",
    "lemma_factorization_check",
]

SWEEP_POINTS = 360
THETA_TOL = 1e-6
CLAMP_BAND = 1e-9
HARD_LIMIT = 1e-6
# offset used to sample the one-sided limits at p = 1 breakpoints
_BREAK_OFFSET = 1e-9
_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class Subspace2:
    """An ordered, linearly independent pair spanning a 2-dimensional subspace."""

    b1: LpVector
    b2: LpVector

    def __post_init__(self):
        b1, b2 = as_vector(self.b1), as_vector(self.b2)
        object.__setattr__(self, "b1", b1)
        object.__setattr__(self, "b2", b2)
        s = np.linalg.svd(np.vstack(pad(b1, b2)), compute_uv=False)
        if s[0] == 0.0 or s[1] <= 1e-12 * s[0]:
            raise InvalidSubspaceError(f"basis vectors {b1.tolist()} and {b2.tolist()} are dependent")

    @property
    def basis(self) -> tuple:
        return (self.b1, self.b2)


@dataclass(frozen=True)
class AngleReport:
    cos_sq: float
    angle_rad: float
    num: float
    den_norm: float
    den_sup: float
    diagnostics: dict = field(default_factory=dict, compare=False)

    @property
    def angle_deg(self) -> float:
        return math.degrees(self.angle_rad)


@dataclass(frozen=True)
class SweepResult:
    """Outcome of the basis sweep; ``value`` is the squared 2-norm."""

    value: float
    theta: float
    v1star: LpVector
    v2star: LpVector
    evaluations: int
    converged: bool
    skipped: int


def _angle_from(cos_sq: float) -> float:
    c = min(max(cos_sq, 0.0), 1.0)
    return min(max(math.acos(math.sqrt(c)), 0.0), 0.5 * math.pi)


def angle_1d(u, V, cfg: SpaceConfig) -> AngleReport:
    """Angle between ``span{u}`` and ``span(V)`` (any number of vectors)."""
    u = as_vector(u)
    if u.is_zero():
        raise InvalidInputError("u must be nonzero")
    if isinstance(V, Subspace2):
        V = V.basis
    ctx = gram_context(V, cfg)
    uv = project(u, ctx).projected
    num = lp_norm(uv, cfg) ** 2
    den = lp_norm(u, cfg) ** 2
    cos_sq = num / den
    return AngleReport(cos_sq, _angle_from(cos_sq), num, den, 1.0, {"projection": uv.tolist()})


class _Objective:
    """``||v1*, v2*||_g^2`` as a function of the first basis direction."""

    def __init__(self, V: Subspace2, cfg, opt):
        self.b1, self.b2 = pad(V.b1, V.b2)
        self.cfg = cfg
        self.opt = opt
        self.evaluations = 0
        self.skipped = 0

    def vectors(self, t):
        c, s = math.cos(t), math.sin(t)
        return c * self.b1 + s * self.b2, -s * self.b1 + c * self.b2

    def at_vectors(self, v1, w, opt=None):
        try:
            s1, s2 = left_gram_schmidt([v1, w], self.cfg)
        except (OrthonormalizationError, NumericalError):
            self.skipped += 1
            return -math.inf, None
        if opt is None:
            r = two_norm_boundary(s1, s2, self.cfg, self.opt)
        else:
            r = two_norm_g(s1, s2, self.cfg, opt)
        self.evaluations += r.evaluations
        return r.value**2, (s1, s2, r.converged)

    def __call__(self, t, opt=None):
        return self.at_vectors(*self.vectors(t), opt=opt)


def _golden_max(f, lo, hi, tol):
    a, b = lo, hi
    c = b - _INV_PHI * (b - a)
    d = a + _INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - _INV_PHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INV_PHI * (b - a)
            fd = f(d)
    return (c, fc) if fc >= fd else (d, fd)


def _breakpoints(b1, b2):
    out = []
    for k in np.flatnonzero((b1 != 0) | (b2 != 0)):
        # direction whose k-th coordinate is exactly zero
        t = math.atan2(-b1[k], b2[k]) % math.pi
        out.append(t)
    return out


def sweep_orthonormal_2norm(V: Subspace2, cfg: SpaceConfig, opt: OptimizerConfig = None) -> SweepResult:
    """Sup over bases of ``V`` of ``||v1*, v2*||_g^2``, with the maximizer.

    A uniform grid of first-basis directions is swept with the cheaper
    boundary-only 2-norm estimate, the best grid point is sharpened by golden-section
    search to ``THETA_TOL``, and the few best directions are re-evaluated
    with ``opt``.  The winning direction depends on ``V`` only, not on the
    basis passed in.
    """
    opt = opt or OptimizerConfig()
    if not isinstance(V, Subspace2):
        V = Subspace2(*V)
    return _cached_sweep(V, cfg, opt)


@lru_cache(maxsize=256)
def _cached_sweep(V: Subspace2, cfg: SpaceConfig, opt: OptimizerConfig) -> SweepResult:
    obj = _Objective(V, cfg, replace(opt, tol=min(opt.tol, 1e-12)))
    scores = {}

    def f(t):
        t = t % math.pi
        if t not in scores:
            scores[t] = obj(t)[0]
        return scores[t]

    grid = [math.pi * i / SWEEP_POINTS for i in range(SWEEP_POINTS)]
    for t in grid:
        f(t)
    if cfg.p == 1.0:
        for t in _breakpoints(obj.b1, obj.b2):
            for dt in (-_BREAK_OFFSET, _BREAK_OFFSET):
                f(t + dt)
    if all(v == -math.inf for v in scores.values()):
        raise DegenerateSubspaceError("every direction in the basis sweep was degenerate")

    ranked = sorted(scores, key=lambda t: -scores[t])
    t_best = ranked[0]
    h = math.pi / SWEEP_POINTS
    t_gold, _ = _golden_max(f, t_best - h, t_best + h, THETA_TOL)

    finalists = [(t_gold % math.pi, obj.vectors(t_gold))]
    finalists += [(t, obj.vectors(t)) for t in ranked[:3]]
    if cfg.p == 1.0:
        b1, b2 = obj.b1, obj.b2
        for k in np.flatnonzero((b1 != 0) | (b2 != 0)):
            v1 = b2[k] * b1 - b1[k] * b2
            if np.any(v1):
                t = math.atan2(-b1[k], b2[k]) % math.pi
                finalists.append((t, (v1, obj.vectors(t)[1])))

    best = None
    seen = set()
    for t, (v1, w) in finalists:
        key = tuple(np.round(v1 / max(np.max(np.abs(v1)), 1e-300), 15).tolist())
        if key in seen:
            continue
        seen.add(key)
        val, info = obj.at_vectors(v1, w, opt=opt)
        if info is not None and (best is None or val > best[0]):
            best = (val, t, info)
    if best is None:
        raise DegenerateSubspaceError("every direction in the basis sweep was degenerate")
    val, t, (s1, s2, conv) = best
    return SweepResult(val, t, s1, s2, obj.evaluations, conv, obj.skipped)


def sup_orthonormal_2norm(V: Subspace2, cfg: SpaceConfig, opt: OptimizerConfig = None) -> float:
    """``sup over bases {v1, v2} of V`` of ``||v1*, v2*||_g^2``."""
    return sweep_orthonormal_2norm(V, cfg, opt).value


def angle_2d(
    U: Subspace2,
    V: Subspace2,
    cfg: SpaceConfig,
    opt: OptimizerConfig = None,
    projection_basis: str = "sup",
) -> AngleReport:
    """g-angle between two 2-dimensional subspaces.

    Projections onto ``V`` go through a left g-orthonormal basis of ``V``.
    Because ``g`` is not linear in its first argument (p != 2), the
    g-orthogonal projection onto a subspace depends on the basis used.  With
    ``projection_basis="sup"`` (default) it is the basis attaining the sup in
    the denominator, which is determined by ``V`` alone, so the result is
    independent of how ``U`` and ``V`` are presented.  ``"given"`` uses the
    left g-orthonormalization of ``V.b1, V.b2`` as passed in.

    A cosine
    within ``CLAMP_BAND`` of [0, 1] is clamped; one above ``1 + HARD_LIMIT``
    raises :class:`OptimizerInconsistencyError`; in between it is reported
    unclamped and flagged in the diagnostics.
    """
    opt = opt or OptimizerConfig()
    if not isinstance(U, Subspace2):
        U = Subspace2(*U)
    if not isinstance(V, Subspace2):
        V = Subspace2(*V)
    if projection_basis not in ("sup", "given"):
        raise InvalidInputError(f"projection_basis must be 'sup' or 'given', got {projection_basis!r}")
    sweep = sweep_orthonormal_2norm(V, cfg, opt)
    if projection_basis == "sup":
        vstar = [sweep.v1star, sweep.v2star]
    else:
        vstar = left_gram_schmidt(V.basis, cfg)
    ctx = gram_context(vstar, cfg)
    u1v = project(U.b1, ctx).projected
    u2v = project(U.b2, ctx).projected

    r_num = two_norm_g(u1v, u2v, cfg, opt)
    # v1*, v2* are feasible directions with |det| = |det[g(v_i*, u_j)]|
    r_den = two_norm_g(U.b1, U.b2, cfg, opt, hints=vstar)

    num = r_num.value**2
    den_norm = r_den.value**2
    den_sup = sweep.value
    if den_norm <= 0.0 or den_sup <= 0.0:
        raise NumericalError(f"vanishing denominator: ||u1,u2||_g^2 = {den_norm}, sup = {den_sup}")
    raw = num / (den_norm * den_sup)
    if raw > 1.0 + HARD_LIMIT:
        raise OptimizerInconsistencyError(
            f"cos^2 = {raw!r} exceeds 1 by more than {HARD_LIMIT}; "
            "the denominator sup is probably under-resolved (raise samples)"
        )
    cos_sq = raw
    if 1.0 < raw <= 1.0 + CLAMP_BAND:
        cos_sq = 1.0
    elif -CLAMP_BAND <= raw < 0.0:
        cos_sq = 0.0
    diagnostics = {
        "num": {"evaluations": r_num.evaluations, "converged": r_num.converged},
        "den_norm": {"evaluations": r_den.evaluations, "converged": r_den.converged},
        "den_sup": {
            "evaluations": sweep.evaluations,
            "converged": sweep.converged,
            "theta": sweep.theta,
            "skipped": sweep.skipped,
        },
        "projections": [u1v.tolist(), u2v.tolist()],
        "orthonormal_basis": [vstar[0].tolist(), vstar[1].tolist()],
        "projection_basis": projection_basis,
        "outside_clamp_band": cos_sq > 1.0,
    }
    return AngleReport(cos_sq, _angle_from(cos_sq), num, den_norm, den_sup, diagnostics)


def lemma_factorization_check(U: Subspace2, Vstar: Subspace2, y1, y2, cfg: SpaceConfig, tol=1e-9):
    """Both sides of the determinant factorization for a left g-orthonormal ``Vstar``.

    Returns ``(lhs, rhs)`` with ``lhs = det[g(y_j, u_iV)]`` and
    ``rhs = det[g(v_i*, u_j)] * det[g(y_j, v_i*)]``.
    """
    if not isinstance(U, Subspace2):
        U = Subspace2(*U)
    if not isinstance(Vstar, Subspace2):
        Vstar = Subspace2(*Vstar)
    v1, v2 = Vstar.basis
    n1, n2 = lp_norm(v1, cfg), lp_norm(v2, cfg)
    g12 = g_closed(v1, v2, cfg)
    if abs(n1 - 1.0) > tol or abs(n2 - 1.0) > tol or abs(g12) > tol:
        raise InvalidInputError(
            f"Vstar is not left g-orthonormal: norms ({n1}, {n2}), g(v1*, v2*) = {g12}"
        )
    ctx = gram_context(Vstar.basis, cfg)
    u1, u2 = U.basis
    u1v = project(u1, ctx).projected
    u2v = project(u2, ctx).projected
    lhs = det2(y1, y2, u1v, u2v, cfg)
    m = g_closed(v1, u1, cfg) * g_closed(v2, u2, cfg) - g_closed(v1, u2, cfg) * g_closed(v2, u1, cfg)
    rhs = m * det2(y1, y2, v1, v2, cfg)
    return lhs, rhs
