"""Brute-force verification on a boundary grid.

Everything here works with samples at the N-th roots of unity: the Szego
projection is a discrete Fourier truncation, ``P_beta g = P g - beta P(conj(beta) g)``
gives the model-space projection, and operator matrices come from
``A f = P_beta(phi f)`` followed by a grid-Gram solve.  None of it uses the
closed-form inner products of ``modelspace``; basis functions are sampled
with the textbook quotient formulas.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .blaschke import BlaschkeProduct
from .errors import AliasingRisk, IllConditioned, InputError
from .modelspace import BasisSpec, resolve_basis

__all__ = [
    "DEFAULT_N",
    "BoundaryGrid",
    "FourierSeries",
    "nodes",
    "sample",
    "szego_project",
    "model_project",
    "grid_inner",
    "sample_basis",
    "sample_kernel",
    "sample_conj_kernel",
    "oracle_matrix",
    "oracle_apply",
    "coefficients_on_grid",
    "symbol_pair_samples",
    "rank_one_symbol",
]

DEFAULT_N = 4096
_NEAR = 1e-7


def nodes(N: int = DEFAULT_N) -> np.ndarray:
    return np.exp(2j * np.pi * np.arange(N) / N)


@dataclass(frozen=True)
class BoundaryGrid:
    samples: np.ndarray

    def __post_init__(self):
        s = np.asarray(self.samples, dtype=complex)
        N = s.shape[-1]
        if N < 2 or N & (N - 1):
            raise InputError("grid size must be a power of two")
        object.__setattr__(self, "samples", s)

    @property
    def N(self) -> int:
        return self.samples.shape[-1]

    @property
    def nodes(self) -> np.ndarray:
        return nodes(self.N)

    def __add__(self, other):
        return BoundaryGrid(self.samples + _s(other))

    def __sub__(self, other):
        return BoundaryGrid(self.samples - _s(other))

    __array_ufunc__ = None  # keep ndarray * grid from broadcasting elementwise

    def __mul__(self, other):
        return BoundaryGrid(self.samples * _s(other))

    __rmul__ = __mul__

    def conj(self):
        return BoundaryGrid(self.samples.conj())


def _s(x):
    return x.samples if isinstance(x, BoundaryGrid) else x


@dataclass(frozen=True)
class FourierSeries:
    """Coefficients for frequencies ``-N/2 .. N/2-1`` (in that order)."""

    coefficients: np.ndarray

    @classmethod
    def from_grid(cls, g: BoundaryGrid) -> "FourierSeries":
        return cls(np.fft.fftshift(np.fft.fft(g.samples, axis=-1) / g.N, axes=-1))

    def to_grid(self) -> BoundaryGrid:
        N = self.coefficients.shape[-1]
        return BoundaryGrid(np.fft.ifft(np.fft.ifftshift(self.coefficients, axes=-1), axis=-1) * N)

    @property
    def frequencies(self) -> np.ndarray:
        N = self.coefficients.shape[-1]
        return np.arange(-N // 2, N // 2)


def sample(f, N: int = DEFAULT_N) -> BoundaryGrid:
    return BoundaryGrid(f(nodes(N)))


def szego_project(g: BoundaryGrid) -> BoundaryGrid:
    c = np.fft.fft(g.samples, axis=-1)
    c[..., g.N // 2 :] = 0
    return BoundaryGrid(np.fft.ifft(c, axis=-1))


def model_project(beta: BlaschkeProduct, g: BoundaryGrid) -> BoundaryGrid:
    """Samples of ``P_beta g`` via ``P g - beta * P(conj(beta) * g)``."""
    if g.N < 4 * (beta.degree + 2):
        raise AliasingRisk(f"grid of {g.N} points too coarse for degree {beta.degree}")
    b = beta.eval(g.nodes)
    inner = szego_project(BoundaryGrid(np.conj(b) * g.samples)).samples
    return BoundaryGrid(szego_project(g).samples - b * inner)


def grid_inner(f: BoundaryGrid, g: BoundaryGrid) -> complex:
    """Trapezoidal ``(1/N) sum f conj(g)``."""
    if f.N != g.N:
        raise InputError("grids differ in size")
    return complex(np.mean(f.samples * np.conj(g.samples)))


# ---------------------------------------------------------------------------
# sampled basis functions


def sample_kernel(theta: BlaschkeProduct, w, N: int = DEFAULT_N) -> BoundaryGrid:
    """``(1 - conj(theta(w)) theta(z)) / (1 - conj(w) z)`` on the grid."""
    z = nodes(N)
    w = complex(w)
    tw = complex(theta.eval(w))
    with np.errstate(divide="ignore", invalid="ignore"):
        vals = (1 - np.conj(tw) * theta.eval(z)) / (1 - np.conj(w) * z)
    near = np.abs(z - w) < _NEAR
    if np.any(near):
        # only reachable for boundary w: limit is conj(theta(w)) theta'(w) w
        vals[near] = np.conj(tw) * complex(theta.deriv(w)) * w
    return BoundaryGrid(vals)


def sample_conj_kernel(theta: BlaschkeProduct, w, N: int = DEFAULT_N) -> BoundaryGrid:
    """``(theta(z) - theta(w)) / (z - w)`` on the grid."""
    z = nodes(N)
    w = complex(w)
    with np.errstate(divide="ignore", invalid="ignore"):
        vals = (theta.eval(z) - complex(theta.eval(w))) / (z - w)
    near = np.abs(z - w) < _NEAR
    if np.any(near):
        vals[near] = complex(theta.deriv(w))
    return BoundaryGrid(vals)


def sample_basis(theta: BlaschkeProduct, spec: BasisSpec, N: int = DEFAULT_N) -> np.ndarray:
    """Rows are the basis functions sampled on the grid."""
    basis = resolve_basis(theta, spec)
    rows = []
    for t, p, s in zip(basis.tilde, basis.points, basis.scales):
        f = sample_conj_kernel if t else sample_kernel
        rows.append(s * f(theta, p, N).samples)
    return np.array(rows)


# ---------------------------------------------------------------------------
# operators


def _grid_coefficients(rows: np.ndarray, targets: np.ndarray) -> np.ndarray:
    """Least-squares coefficients of each target (rows of ``targets``) in the sampled basis."""
    N = rows.shape[-1]
    G = rows.conj() @ rows.T / N  # G[i, j] = <b_j, b_i>
    rhs = rows.conj() @ targets.T / N  # rhs[i, k] = <t_k, b_i>
    if np.linalg.cond(G) > 1e12:
        raise IllConditioned("grid Gram matrix is ill-conditioned")
    return np.linalg.solve(G, rhs)


def oracle_matrix(
    alpha: BlaschkeProduct,
    beta: BlaschkeProduct,
    symbol_samples: BoundaryGrid,
    basis_in: BasisSpec,
    basis_out: BasisSpec,
) -> np.ndarray:
    """Matrix of ``f -> P_beta(phi f)`` computed column by column on the grid."""
    N = symbol_samples.N
    if N < 4 * (alpha.degree + beta.degree + 2):
        raise AliasingRisk(f"grid of {N} points too coarse for degrees {alpha.degree}, {beta.degree}")
    f_in = sample_basis(alpha, basis_in, N)
    g_out = sample_basis(beta, basis_out, N)
    images = np.array([model_project(beta, symbol_samples * f).samples for f in f_in])
    return _grid_coefficients(g_out, images)


def oracle_apply(beta: BlaschkeProduct, symbol_samples: BoundaryGrid, f_samples: BoundaryGrid, basis_out: BasisSpec):
    """Coefficients of ``P_beta(phi f)`` in ``basis_out``."""
    g_out = sample_basis(beta, basis_out, f_samples.N)
    img = model_project(beta, symbol_samples * f_samples).samples
    return _grid_coefficients(g_out, img[None, :])[:, 0]


def coefficients_on_grid(theta: BlaschkeProduct, spec: BasisSpec, f: BoundaryGrid) -> np.ndarray:
    """Coefficients of a sampled element of K_theta in the basis ``spec``."""
    rows = sample_basis(theta, spec, f.N)
    return _grid_coefficients(rows, f.samples[None, :])[:, 0]


# ---------------------------------------------------------------------------
# symbols


def symbol_pair_samples(alpha, beta, chi_coeffs, psi_coeffs, N: int = DEFAULT_N) -> BoundaryGrid:
    """``conj(chi) + psi`` with ``chi = sum c_i k~_{a_i}``, ``psi = sum d_j k~_{b_j}``."""
    z = nodes(N)
    a_z = alpha.eval(z)
    b_z = beta.eval(z)
    chi = sum(c * a_z / (z - a) for c, a in zip(chi_coeffs, alpha.zeros))
    psi = sum(d * b_z / (z - b) for d, b in zip(psi_coeffs, beta.zeros))
    return BoundaryGrid(np.conj(chi) + psi)


def rank_one_symbol(alpha, beta, w, kind: str, N: int = DEFAULT_N) -> BoundaryGrid:
    """Symbols realizing the rank-one operators as ATTOs.

    ``tilde_out_k_in``: beta(z)/(z - w); ``k_out_tilde_in``: conj(alpha(z))/(conj(z) - conj(w));
    ``boundary_kk``: k_w^beta + conj(k_w^alpha) - 1 for unimodular w.
    """
    z = nodes(N)
    if kind == "tilde_out_k_in":
        return BoundaryGrid(beta.eval(z) / (z - w))
    if kind == "k_out_tilde_in":
        return BoundaryGrid(np.conj(alpha.eval(z) / (z - w)))
    if kind == "boundary_kk":
        kb = sample_kernel(beta, w, N).samples
        ka = sample_kernel(alpha, w, N).samples
        return BoundaryGrid(kb + np.conj(ka) - 1)
    raise InputError(f"unknown rank-one kind {kind!r}")
