"""Complex polynomials, root finding and dense linear algebra helpers.

Matrices are plain ``numpy`` complex arrays throughout the package; this
module only adds the pieces numpy does not provide in the required form
(Newton-polished roots, relative numerical rank, Hermitian solves that
refuse to proceed on ill-conditioned systems).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
from numpy.polynomial import polynomial as npoly
from scipy.linalg import solve_triangular

from .errors import IllConditioned, InputError, NonConvergence

__all__ = [
    "Polynomial",
    "ToleranceConfig",
    "DEFAULT_TOL",
    "poly_roots",
    "numerical_rank",
    "lstsq_min_norm",
    "hermitian_solve",
]


@dataclass(frozen=True)
class ToleranceConfig:
    """Numerical thresholds shared by every module.

    Attributes
    ----------
    root_residual : float
        Target for ``|p(root)| / max|coeff|`` after Newton polishing.
    rank_rel : float
        Singular values below ``rank_rel * s_max`` are treated as zero.
    membership_rel : float
        Relative residual accepted by the membership test.
    sep : float
        Two points closer than this are considered the same point.
    """

    root_residual: float = 1e-12
    rank_rel: float = 1e-8
    membership_rel: float = 1e-8
    sep: float = 1e-10

    def __post_init__(self):
        for name in ("root_residual", "rank_rel", "membership_rel", "sep"):
            if not getattr(self, name) > 0:
                raise InputError(f"{name} must be strictly positive")


DEFAULT_TOL = ToleranceConfig()


class Polynomial:
    """Complex polynomial with coefficients in ascending degree order.

    Trailing zero coefficients are dropped; the zero polynomial has an
    empty coefficient array and degree -1.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Sequence[complex]):
        c = np.asarray(coeffs, dtype=complex).ravel()
        nz = np.flatnonzero(c)
        c = c[: nz[-1] + 1] if nz.size else c[:0]
        c.setflags(write=False)
        self.coeffs = c

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, z):
        if self.degree < 0:
            return np.zeros_like(np.asarray(z, dtype=complex))
        return npoly.polyval(z, self.coeffs)

    def deriv(self) -> "Polynomial":
        if self.degree < 1:
            return Polynomial([])
        return Polynomial(npoly.polyder(self.coeffs))

    def __add__(self, other):
        other = _as_poly(other)
        return Polynomial(npoly.polyadd(self.coeffs, other.coeffs))

    def __sub__(self, other):
        other = _as_poly(other)
        return Polynomial(npoly.polysub(self.coeffs, other.coeffs))

    def __mul__(self, other):
        if isinstance(other, Polynomial):
            if self.degree < 0 or other.degree < 0:
                return Polynomial([])
            return Polynomial(npoly.polymul(self.coeffs, other.coeffs))
        return Polynomial(self.coeffs * complex(other))

    __rmul__ = __mul__

    def __eq__(self, other):
        return isinstance(other, Polynomial) and np.array_equal(self.coeffs, other.coeffs)

    def __hash__(self):
        return hash(tuple(self.coeffs))

    def __repr__(self):
        return f"Polynomial({self.coeffs.tolist()!r})"


def _as_poly(x) -> Polynomial:
    return x if isinstance(x, Polynomial) else Polynomial([x])


def poly_roots(p: Polynomial, cfg: ToleranceConfig = DEFAULT_TOL, maxiter: int = 60) -> np.ndarray:
    """Roots of ``p`` with multiplicity, polished by Newton's method.

    Starting values are the companion-matrix eigenvalues.  Each root is then
    refined until ``|p(z)| <= cfg.root_residual * max|coeff|``.

    Raises
    ------
    NonConvergence
        If some root cannot be brought under the residual target.
    """
    if p.degree < 1:
        raise InputError("poly_roots needs a polynomial of degree >= 1")
    c = p.coeffs
    scale = np.max(np.abs(c))
    target = cfg.root_residual * scale
    dp = p.deriv()
    roots = np.array(npoly.polyroots(c), dtype=complex)
    out = np.empty_like(roots)
    for k, z in enumerate(roots):
        res = abs(p(z))
        for _ in range(maxiter):
            if res <= target * 1e-3:
                break
            d = dp(z)
            if d == 0:
                break
            cand = z - p(z) / d
            cres = abs(p(cand))
            if not cres < res:
                break
            z, res = cand, cres
        if not res <= target:
            raise NonConvergence(f"root {z!r} has residual {res:.3e} > {target:.3e}")
        out[k] = z
    return out


def numerical_rank(M, rel_tol: float = DEFAULT_TOL.rank_rel) -> int:
    """Number of singular values above ``rel_tol`` times the largest one."""
    M = np.asarray(M)
    if M.size == 0:
        raise InputError("numerical_rank of an empty matrix")
    s = np.linalg.svd(M, compute_uv=False)
    if s[0] == 0:
        return 0
    return int(np.sum(s > rel_tol * s[0]))


def lstsq_min_norm(A, b):
    """Minimal-norm least-squares solution of ``A x = b``.

    Returns
    -------
    x : ndarray
    residual : float
        Euclidean norm of ``A x - b``.
    """
    A = np.atleast_2d(np.asarray(A, dtype=complex))
    b = np.asarray(b, dtype=complex)
    if A.size == 0:
        raise InputError("lstsq_min_norm of an empty matrix")
    x = np.linalg.lstsq(A, b, rcond=None)[0]
    return x, float(np.linalg.norm(A @ x - b))


def hermitian_solve(G, B, max_cond: float = 1e12):
    """Solve ``G X = B`` for a Hermitian positive-definite ``G``.

    Raises ``IllConditioned`` rather than returning a solution polluted by
    rounding when the condition number exceeds ``max_cond``.
    """
    G = np.asarray(G, dtype=complex)
    cond = np.linalg.cond(G)
    if not cond <= max_cond:
        raise IllConditioned(f"Gram matrix condition number {cond:.3e} exceeds {max_cond:.1e}")
    try:
        L = np.linalg.cholesky(G)
    except np.linalg.LinAlgError as exc:
        raise IllConditioned(f"Gram matrix is not numerically positive definite: {exc}") from exc
    Y = solve_triangular(L, B, lower=True)
    return solve_triangular(L.conj().T, Y, lower=False)
