"""Finitely supported l^p vectors, norms and the semi-inner product g.

Two routes to ``g`` are provided and they are meant to be checked against
each other:

* :func:`g_closed` -- the closed form
  ``g(x, y) = ||x||^(2-p) * sum |x_k|^(p-1) sgn(x_k) y_k``;
* :func:`g_numeric` -- ``(1/2) ||x|| (tau_+ + tau_-)`` with the one-sided
  derivatives of the norm estimated by difference quotients.

Vectors of different lengths are zero padded, never truncated.
"""
from dataclasses import dataclass
from numbers import Real
from typing import Callable, NamedTuple, Sequence

import numpy as np

from .errors import InvalidInputError, LimitEstimationError, UndefinedDirectionError

__all__ = [
    "LpVector",
    "SpaceConfig",
    "TauPair",
    "as_vector",
    "pad",
    "stack",
    "lp_norm",
    "dual_map",
    "g_closed",
    "tau",
    "g_numeric",
]


class LpVector:
    """Immutable real coordinate vector living in some l^p.

    Equality ignores trailing zeros, so ``LpVector([1, 2]) == LpVector([1, 2, 0])``.
    Supports ``+``, ``-`` and scalar ``*`` / ``/``; results are padded to the
    longer operand.
    """

    __slots__ = ("_coords",)

    def __init__(self, coords):
        if isinstance(coords, LpVector):
            arr = coords._coords
        else:
            try:
                arr = np.array(coords, dtype=float)
            except (TypeError, ValueError) as exc:
                raise InvalidInputError(f"cannot interpret {coords!r} as a vector") from exc
            if arr.ndim == 0:
                arr = arr.reshape(1)
            if arr.ndim != 1:
                raise InvalidInputError(f"expected a 1-d coordinate list, got shape {arr.shape}")
            if arr.size == 0:
                raise InvalidInputError("a vector needs at least one coordinate")
            if not np.all(np.isfinite(arr)):
                raise InvalidInputError(f"non-finite coordinate in {arr.tolist()}")
            arr.setflags(write=False)
        self._coords = arr

    @property
    def coords(self) -> np.ndarray:
        return self._coords

    @property
    def dim(self) -> int:
        return self._coords.size

    def padded(self, dim: int) -> np.ndarray:
        if dim < self.dim:
            raise InvalidInputError(f"cannot pad a {self.dim}-vector down to {dim}")
        out = np.zeros(dim)
        out[: self.dim] = self._coords
        return out

    def is_zero(self) -> bool:
        return not np.any(self._coords)

    def tolist(self) -> list:
        return self._coords.tolist()

    def _trimmed(self):
        nz = np.flatnonzero(self._coords)
        return self._coords[: nz[-1] + 1] if nz.size else self._coords[:0]

    def __array__(self, dtype=None, copy=None):
        return np.array(self._coords, dtype=dtype)

    def __len__(self):
        return self.dim

    def __iter__(self):
        return iter(self._coords.tolist())

    def __getitem__(self, k):
        return self._coords[k]

    def __eq__(self, other):
        if not isinstance(other, LpVector):
            return NotImplemented
        a, b = self._trimmed(), other._trimmed()
        return a.shape == b.shape and bool(np.all(a == b))

    def __hash__(self):
        return hash(tuple(self._trimmed().tolist()))

    def __repr__(self):
        return f"LpVector({self._coords.tolist()!r})"

    def _binary(self, other, op):
        other = as_vector(other)
        n = max(self.dim, other.dim)
        return LpVector(op(self.padded(n), other.padded(n)))

    def __add__(self, other):
        return self._binary(other, np.add)

    def __sub__(self, other):
        return self._binary(other, np.subtract)

    def __neg__(self):
        return LpVector(-self._coords)

    def __mul__(self, scalar):
        if not isinstance(scalar, Real):
            return NotImplemented
        return LpVector(self._coords * float(scalar))

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        if not isinstance(scalar, Real):
            return NotImplemented
        return LpVector(self._coords / float(scalar))


def as_vector(x) -> LpVector:
    return x if isinstance(x, LpVector) else LpVector(x)


def pad(*vectors) -> list:
    """Zero-pad all arguments to their common dimension; returns ndarrays."""
    vs = [as_vector(v) for v in vectors]
    n = max(v.dim for v in vs)
    return [v.padded(n) for v in vs]


def stack(vectors: Sequence) -> np.ndarray:
    """Rows of the returned matrix are the zero-padded vectors."""
    return np.vstack(pad(*vectors))


_DEFAULT_STEPS = (1e-2, 1e-3, 1e-4, 1e-5, 1e-6)


@dataclass(frozen=True)
class SpaceConfig:
    """The exponent ``p`` together with the tolerances of the numeric g route.

    ``tau_steps`` are relative step sizes; the actual step is scaled by
    ``||x|| / ||y||`` so the difference quotients are scale free.
    ``tau_stable`` is the stabilization threshold between successive
    extrapolated quotients, relative to ``||y||``.
    """

    p: float = 2.0
    eps_g: float = 1e-6
    tau_steps: tuple = _DEFAULT_STEPS
    tau_stable: float = 1e-7

    def __post_init__(self):
        p = self.p
        if not isinstance(p, Real) or not np.isfinite(p) or p < 1:
            raise InvalidInputError(f"p must be a finite real >= 1, got {p!r}")
        object.__setattr__(self, "p", float(p))
        if not self.eps_g > 0:
            raise InvalidInputError(f"eps_g must be positive, got {self.eps_g!r}")
        if not self.tau_stable > 0:
            raise InvalidInputError(f"tau_stable must be positive, got {self.tau_stable!r}")
        steps = tuple(float(h) for h in self.tau_steps)
        if len(steps) < 2:
            raise InvalidInputError("tau_steps needs at least two step sizes")
        if any(h <= 0 for h in steps) or any(a <= b for a, b in zip(steps, steps[1:])):
            raise InvalidInputError(f"tau_steps must be positive and strictly decreasing: {steps}")
        object.__setattr__(self, "tau_steps", steps)


def _p(cfg) -> float:
    if isinstance(cfg, SpaceConfig):
        return cfg.p
    return SpaceConfig(p=cfg).p


def _norm_array(a: np.ndarray, p: float) -> float:
    m = np.max(np.abs(a)) if a.size else 0.0
    if m == 0.0:
        return 0.0
    if p == 2.0:
        s = a / m
        return float(m * np.sqrt(np.dot(s, s)))
    if p == 1.0:
        return float(np.sum(np.abs(a)))
    return float(m * np.sum((np.abs(a) / m) ** p) ** (1.0 / p))


def lp_norm(x, cfg) -> float:
    """``(sum |x_k|^p)^(1/p)``, computed with max-scaling against overflow."""
    return _norm_array(as_vector(x).coords, _p(cfg))


def dual_map(x, cfg) -> np.ndarray:
    """The vector ``j(x)`` with ``g(x, y) = j(x) . y`` for every ``y``.

    ``j(x)_k = ||x||^(2-p) |x_k|^(p-1) sgn(x_k)``; zero coordinates map to
    zero for every ``p``, including ``p = 1``.
    """
    a = as_vector(x).coords
    p = _p(cfg)
    n = _norm_array(a, p)
    if n == 0.0:
        return np.zeros_like(a)
    if p == 2.0:
        return a.copy()
    # ||x||^(2-p) |x_k|^(p-1) == ||x|| (|x_k|/||x||)^(p-1), which stays in range
    return n * np.sign(a) * (np.abs(a) / n) ** (p - 1.0)


def g_closed(x, y, cfg) -> float:
    """Closed-form l^p semi-inner product; linear in ``y``, ``g(0, y) = 0``."""
    a, b = pad(x, y)
    return float(np.dot(dual_map(a, cfg), b))


class TauPair(NamedTuple):
    tau_plus: float
    tau_minus: float


def _one_sided(norm_of, x, y, steps, sign, stable):
    base = norm_of(x)
    quotients = []
    for h in steps:
        t = sign * h
        quotients.append((h, (norm_of(x + t * y) - base) / t))
    prev = None
    for (h0, d0), (h1, d1) in zip(quotients, quotients[1:]):
        r = h0 / h1
        est = (r * d1 - d0) / (r - 1.0)
        if prev is not None and abs(est - prev) <= stable:
            return est
        prev = est
    raise LimitEstimationError(
        f"one-sided derivative (t -> {'+' if sign > 0 else '-'}0) did not stabilize; "
        f"quotients {[q for _, q in quotients]}"
    )


def tau(x, y, cfg: SpaceConfig, norm: Callable[[np.ndarray], float] = None) -> TauPair:
    """One-sided Gateaux derivatives of the norm at ``x`` in direction ``y``.

    Forward/backward difference quotients over ``cfg.tau_steps`` are combined
    by one level of Richardson extrapolation; the first pair of successive
    extrapolants that agree within ``cfg.tau_stable * ||y||`` is accepted.
    ``norm`` defaults to the l^p norm of ``cfg``.
    """
    a, b = pad(x, y)
    if norm is None:
        p = cfg.p
        norm = lambda v: _norm_array(v, p)  # noqa: E731
    nx = norm(a)
    if nx == 0.0:
        raise UndefinedDirectionError("tau(x, y) is undefined at x = 0")
    ny = norm(b)
    if ny == 0.0:
        return TauPair(0.0, 0.0)
    scale = nx / ny
    steps = [h * scale for h in cfg.tau_steps]
    stable = cfg.tau_stable * ny
    plus = _one_sided(norm, a, b, steps, 1.0, stable)
    minus = _one_sided(norm, a, b, steps, -1.0, stable)
    return TauPair(plus, minus)


def g_numeric(x, y, cfg: SpaceConfig, norm: Callable[[np.ndarray], float] = None) -> float:
    """``(1/2) ||x|| (tau_+ + tau_-)`` with numerically estimated limits."""
    a, b = pad(x, y)
    if norm is None:
        p = cfg.p
        norm = lambda v: _norm_array(v, p)  # noqa: E731
    nx = norm(a)
    if nx == 0.0:
        return 0.0
    tp, tm = tau(a, b, cfg, norm=norm)
    return 0.5 * nx * (tp + tm)
