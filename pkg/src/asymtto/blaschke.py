"""Finite Blaschke products.

The normalization is fixed to

    alpha(z) = prod_i (a_i - z) / (1 - conj(a_i) z)

with no extra unimodular constant, so a single zero at the origin gives
``alpha(z) = -z``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import jsonio
from .errors import AmbiguousMatching, DuplicateZeros, InputError, PoleProximity
from .numerics import DEFAULT_TOL, Polynomial

__all__ = ["BlaschkeProduct", "ZeroMatching", "match_points", "match_zeros", "random_blaschke"]

_MAX_ZERO_MODULUS = 1 - 1e-12
_DOMAIN_SLACK = 1e-9
_POLE_GUARD = 1e-14


class BlaschkeProduct:
    """Finite Blaschke product given by its zero list (repetition = multiplicity)."""

    __slots__ = ("zeros",)

    def __init__(self, zeros: Sequence[complex]):
        z = np.asarray(zeros, dtype=complex).ravel().copy()
        if z.size == 0:
            raise InputError("a Blaschke product needs at least one zero")
        if not np.all(np.isfinite(z)):
            raise InputError("zeros must be finite")
        if np.max(np.abs(z)) > _MAX_ZERO_MODULUS:
            raise InputError("every zero must lie strictly inside the unit disk")
        z.setflags(write=False)
        self.zeros = z

    @property
    def degree(self) -> int:
        return len(self.zeros)

    def _factors(self, z):
        z = np.asarray(z, dtype=complex)
        if np.any(np.abs(z) > 1 + _DOMAIN_SLACK):
            raise InputError("evaluation point outside the closed unit disk")
        a = self.zeros.reshape((-1,) + (1,) * z.ndim)
        den = 1 - a.conj() * z
        if np.any(np.abs(den) < _POLE_GUARD):
            raise PoleProximity("evaluation point too close to a pole")
        return a, z, den

    def __call__(self, z):
        return self.eval(z)

    def eval(self, z):
        a, z, den = self._factors(z)
        return np.prod((a - z) / den, axis=0)[()]

    def deriv(self, z):
        """Derivative by the product rule over the factors.

        Each factor ``(a - z)/(1 - conj(a) z)`` has derivative
        ``(|a|^2 - 1)/(1 - conj(a) z)^2``; prefix/suffix products avoid any
        division by factor values, so the formula stays exact at the zeros.
        """
        a, z, den = self._factors(z)
        f = (a - z) / den
        df = (np.abs(a) ** 2 - 1) / den**2
        m = self.degree
        one = np.ones_like(f[0])
        prefix = [one]
        for i in range(m - 1):
            prefix.append(prefix[-1] * f[i])
        suffix = [one]
        for i in range(m - 1, 0, -1):
            suffix.append(suffix[-1] * f[i])
        suffix.reverse()
        return sum(prefix[i] * df[i] * suffix[i] for i in range(m))[()]

    def rational_form(self) -> tuple[Polynomial, Polynomial]:
        """Numerator and denominator with ``alpha = P / Q`` and ``Q(0) = 1``."""
        P = Polynomial([1.0])
        Q = Polynomial([1.0])
        for a in self.zeros:
            P = P * Polynomial([a, -1.0])
            Q = Q * Polynomial([1.0, -np.conj(a)])
        return P, Q

    def has_distinct_zeros(self, sep: float = DEFAULT_TOL.sep) -> bool:
        z = self.zeros
        d = np.abs(z[:, None] - z[None, :])
        np.fill_diagonal(d, np.inf)
        return bool(np.all(d > sep))

    def require_distinct(self, sep: float = DEFAULT_TOL.sep):
        if not self.has_distinct_zeros(sep):
            raise DuplicateZeros(f"zeros {self.zeros.tolist()} are not pairwise separated by {sep}")

    def permuted(self, perm) -> "BlaschkeProduct":
        return BlaschkeProduct(self.zeros[np.asarray(perm, dtype=int)])

    def to_json(self) -> dict:
        return {"zeros": jsonio.enc(self.zeros)}

    @classmethod
    def from_json(cls, obj) -> "BlaschkeProduct":
        if not isinstance(obj, dict) or "zeros" not in obj:
            raise InputError("Blaschke product JSON needs a 'zeros' list")
        zeros = obj["zeros"]
        if not isinstance(zeros, list) or not zeros:
            raise InputError("'zeros' must be a non-empty list of [re, im] pairs")
        return cls([jsonio.dec(z) for z in zeros])

    def __eq__(self, other):
        return isinstance(other, BlaschkeProduct) and np.array_equal(self.zeros, other.zeros)

    def __hash__(self):
        return hash(tuple(self.zeros))

    def __repr__(self):
        return f"BlaschkeProduct({self.zeros.tolist()!r})"


@dataclass(frozen=True)
class ZeroMatching:
    """Common points of two point lists.

    ``perm_alpha`` / ``perm_beta`` reorder the lists so that the ``l``
    common points come first, aligned index by index; the remaining points
    keep their relative order.
    """

    l: int
    perm_alpha: tuple
    perm_beta: tuple

    @property
    def pairs(self):
        return list(zip(self.perm_alpha[: self.l], self.perm_beta[: self.l]))

    @property
    def is_canonical(self) -> bool:
        return self.perm_alpha == tuple(range(len(self.perm_alpha))) and self.perm_beta == tuple(
            range(len(self.perm_beta))
        )


def _check_distinct(points, sep, label):
    d = np.abs(points[:, None] - points[None, :])
    np.fill_diagonal(d, np.inf)
    if np.any(d <= sep):
        raise DuplicateZeros(f"{label} points are not pairwise separated by {sep}")


def match_points(xs, ys, sep: float = DEFAULT_TOL.sep) -> ZeroMatching:
    """Greedy matching of two lists of pairwise-distinct points at tolerance ``sep``."""
    xs = np.asarray(xs, dtype=complex)
    ys = np.asarray(ys, dtype=complex)
    _check_distinct(xs, sep, "first")
    _check_distinct(ys, sep, "second")
    close = np.abs(xs[:, None] - ys[None, :]) <= sep
    if np.any(close.sum(axis=0) > 1) or np.any(close.sum(axis=1) > 1):
        raise AmbiguousMatching("a point has more than one partner within sep")
    pairs = [(i, int(np.flatnonzero(close[i])[0])) for i in range(len(xs)) if close[i].any()]
    ia = [i for i, _ in pairs]
    jb = [j for _, j in pairs]
    perm_a = ia + [i for i in range(len(xs)) if i not in ia]
    perm_b = jb + [j for j in range(len(ys)) if j not in jb]
    return ZeroMatching(len(pairs), tuple(perm_a), tuple(perm_b))


def match_zeros(alpha: BlaschkeProduct, beta: BlaschkeProduct, sep: float = DEFAULT_TOL.sep) -> ZeroMatching:
    """Common zeros of ``alpha`` and ``beta``; both must have distinct zeros."""
    alpha.require_distinct(sep)
    beta.require_distinct(sep)
    return match_points(alpha.zeros, beta.zeros, sep)


def random_blaschke(rng: np.random.Generator, degree: int, radius: float = 0.8, min_gap: float = 0.15) -> BlaschkeProduct:
    """Random product with zeros in ``|z| <= radius`` that are ``min_gap`` apart.

    Rejection sampling; intended for tests and the verify report, where
    well-separated zeros keep Gram matrices comfortably conditioned.
    """
    zeros: list[complex] = []
    while len(zeros) < degree:
        z = radius * np.sqrt(rng.uniform()) * np.exp(2j * np.pi * rng.uniform())
        if all(abs(z - w) >= min_gap for w in zeros):
            zeros.append(complex(z))
    return BlaschkeProduct(zeros)
