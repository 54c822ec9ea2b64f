"""Shared generators for the test-suite."""
import numpy as np

from asymtto import atto
from asymtto.blaschke import BlaschkeProduct, random_blaschke
from asymtto.modelspace import BasisSpec, clark_system

FAMILIES = ("kernel", "conjugate_kernel", "clark", "modified_clark")


def cn(rng, size):
    return rng.normal(size=size) + 1j * rng.normal(size=size)


def unimodular(rng):
    return complex(np.exp(2j * np.pi * rng.uniform()))


def random_pair(rng, max_degree=6, min_degree=1):
    m = int(rng.integers(min_degree, max_degree + 1))
    n = int(rng.integers(min_degree, max_degree + 1))
    return random_blaschke(rng, m), random_blaschke(rng, n)


def pair_with_common_zeros(rng, l, extra_alpha, extra_beta):
    """alpha, beta sharing ``l`` zeros, listed in shuffled order when ``shuffle``."""
    pool = random_blaschke(rng, l + extra_alpha + extra_beta).zeros
    common = list(pool[:l])
    a = common + list(pool[l : l + extra_alpha])
    b = common + list(pool[l + extra_alpha :])
    return BlaschkeProduct(a), BlaschkeProduct(b)


def matching_lambda(beta, eta):
    """Parameter whose Clark system for ``beta`` contains the unimodular point ``eta``."""
    b0 = complex(beta.eval(0.0))
    be = complex(beta.eval(eta))
    return (be - b0) / (1 - np.conj(b0) * be)


def basis_pair(family, rng, alpha=None, beta=None, common_clark=0):
    """Input/output ``BasisSpec`` for a family.

    For Clark families ``common_clark > 0`` engineers that many shared
    points by picking the output parameter from a point of the input system
    (only one shared point can be forced in general; ``alpha == beta`` with
    equal parameters shares all of them).
    """
    if family in ("kernel", "conjugate_kernel"):
        s = BasisSpec(family)
        return s, s
    lam1 = unimodular(rng)
    if common_clark:
        eta = clark_system(alpha, lam1).points[int(rng.integers(alpha.degree))]
        lam2 = matching_lambda(beta, eta)
        lam2 /= abs(lam2)
    else:
        lam2 = unimodular(rng)
    return BasisSpec(family, lam1), BasisSpec(family, lam2)


def random_symbol(alpha, beta, rng):
    return atto.SymbolPair.from_coeffs(alpha, beta, cn(rng, alpha.degree), cn(rng, beta.degree))


def constructed(alpha, beta, bin_, bout, rng):
    return atto.matrix_from_symbol(random_symbol(alpha, beta, rng), bin_, bout)


def erase_non_determining(M, **kw):
    det = atto.determining_entries(M.alpha, M.beta, M.basis_in, M.basis_out, **kw)
    P = np.full(M.shape, np.nan, dtype=complex)
    for s, p in det:
        P[s, p] = M.entries[s, p]
    return P, det
