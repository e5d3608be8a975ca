"""Gram matrices under g, g-orthogonal projections, left g-orthonormalization.

``g`` is not symmetric unless p = 2, so the Gram matrix ``G[i, k] = g(x_i, x_k)``
is not either, and the order of a basis matters for orthonormalization.
"""
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import InvalidInputError, OrthonormalizationError, SingularGramError
from .space import LpVector, SpaceConfig, _norm_array, as_vector, dual_map, stack

__all__ = [
    "GramContext",
    "ProjectionResult",
    "SINGULAR_RTOL",
    "gram_matrix",
    "gram_context",
    "project",
    "left_gram_schmidt",
]

#: |Gamma| <= SINGULAR_RTOL * prod ||x_i||^2 counts as singular.
SINGULAR_RTOL = 1e-10


def gram_matrix(rows: np.ndarray, cfg, others: np.ndarray = None) -> np.ndarray:
    """``M[i, k] = g(rows[i], others[k])`` (``others`` defaults to ``rows``)."""
    duals = np.vstack([dual_map(r, cfg) for r in rows])
    return duals @ (rows if others is None else others).T


@dataclass(frozen=True, eq=False)
class GramContext:
    """An ordered basis with its Gram matrix ``[g(x_i, x_k)]`` and determinant."""

    basis: tuple
    gram: np.ndarray
    gamma: float
    cfg: SpaceConfig

    @property
    def rows(self) -> np.ndarray:
        return stack(self.basis)

    def singular_threshold(self) -> float:
        return SINGULAR_RTOL * float(np.prod(np.diag(self.gram)))

    def is_singular(self) -> bool:
        return abs(self.gamma) <= self.singular_threshold()


@dataclass(frozen=True)
class ProjectionResult:
    projected: LpVector
    complement: LpVector
    coefficients: tuple


def gram_context(basis: Sequence, cfg: SpaceConfig) -> GramContext:
    vecs = tuple(as_vector(v) for v in basis)
    if not vecs:
        raise InvalidInputError("a Gram context needs at least one vector")
    rows = stack(vecs)
    gram = gram_matrix(rows, cfg)
    gram.setflags(write=False)
    # np.linalg.det goes through LU with partial pivoting
    gamma = float(np.linalg.det(gram))
    return GramContext(vecs, gram, gamma, cfg)


def project(u, ctx: GramContext) -> ProjectionResult:
    """g-orthogonal projection of ``u`` onto the span of ``ctx.basis``.

    The coefficients ``c`` solve ``G c = [g(x_i, u)]``, which is the cofactor
    expansion of the bordered determinant defining the projection.  The
    complement ``u - u_S`` is then annihilated by ``g(x_i, .)`` for every
    basis vector.
    """
    if ctx.is_singular():
        raise SingularGramError(
            f"singular Gram matrix: Gamma = {ctx.gamma:.3e} "
            f"(threshold {ctx.singular_threshold():.3e})",
            gamma=ctx.gamma,
        )
    u = as_vector(u)
    rows = ctx.rows
    n = max(rows.shape[1], u.dim)
    if n > rows.shape[1]:
        rows = np.hstack([rows, np.zeros((rows.shape[0], n - rows.shape[1]))])
    uu = u.padded(n)
    rhs = gram_matrix(rows, ctx.cfg, uu[None, :])[:, 0]
    coef = np.linalg.solve(ctx.gram, rhs)
    proj = coef @ rows
    return ProjectionResult(LpVector(proj), LpVector(uu - proj), tuple(coef.tolist()))


def left_gram_schmidt(vectors: Sequence, cfg: SpaceConfig) -> list:
    """Left g-orthonormal sequence ``x_1*, ..., x_n*``.

    ``x_1* = x_1/||x_1||`` and ``x_k*`` is the normalized g-orthogonal
    complement of ``x_k`` with respect to ``span{x_1*, ..., x_{k-1}*}``.
    Consequently ``g(x_k*, x_l*) = 0`` for ``k < l`` (earlier vector in the
    first slot), while ``g(x_l*, x_k*)`` is in general nonzero.

    Raises :class:`OrthonormalizationError` naming the first index whose
    complement vanishes or whose preceding Gram matrix is singular.
    """
    vecs = [as_vector(v) for v in vectors]
    if not vecs:
        return []
    p = cfg.p
    out = []
    for k, v in enumerate(vecs):
        nv = _norm_array(v.coords, p)
        if nv == 0.0:
            raise OrthonormalizationError(f"vector {k} is zero", index=k)
        if out:
            ctx = gram_context(out, cfg)
            try:
                comp = project(v, ctx).complement
            except SingularGramError as exc:
                raise OrthonormalizationError(
                    f"Gram determinant of the first {k} orthonormalized vectors vanishes "
                    f"(Gamma = {exc.gamma:.3e}) before vector {k}",
                    index=k,
                ) from exc
        else:
            comp = v
        nc = _norm_array(comp.coords, p)
        if nc <= 1e-10 * nv:
            raise OrthonormalizationError(
                f"vector {k} lies in the span of the preceding vectors", index=k
            )
        out.append(comp / nc)
    return out
