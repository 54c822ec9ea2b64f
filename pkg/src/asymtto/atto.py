"""Asymmetric truncated Toeplitz operators between finite-dimensional model spaces.

An operator ``A: K_alpha -> K_beta`` is stored as its n x m matrix with
respect to a pair of bases (column p = coefficients of ``A f_p``).

Membership and completion
-------------------------
For each of the four basis families there are nodes ``x_p`` (input side),
``y_s`` (output side) and diagonal rescalings ``sigma_s``, ``tau_p`` such
that ``R[s, p] = sigma_s * M[s, p] * tau_p`` of an ATTO matrix has the
Loewner form ``(F_p - G_s) / (x_p - y_s)`` off the common diagonal:

================  ==============  ==============  ========================  =================================
family            x_p             y_s             sigma_s                   tau_p
================  ==============  ==============  ========================  =================================
kernel            conj(a_p)       conj(b_s)       conj(beta'(b_s))          1
conjugate kernel  a_p             b_s             beta'(b_s)                1
Clark             eta_p           zeta_s          sqrt|beta'(zeta_s)|       sqrt|alpha'(eta_p)| / eta_p
modified Clark    eta_p           zeta_s          sqrt|beta'(zeta_s)| w^b_s sqrt|alpha'(eta_p)| / (eta_p w^a_p)
================  ==============  ==============  ========================  =================================

With the ``l`` common nodes placed first (``x_i = y_i`` for ``i < l``) every
entry follows from a pivot row and column through

    R[s,p] (x_p - y_s) = (x_c - y_s) R[s,c] + (y_r - x_c) R[r,c] + (x_p - y_r) R[r,p]

plus the symmetry ``R[s,k] = R[k,s]`` among common indices.  The free
parameters are ``F`` and ``G`` up to a shared constant, plus the ``l``
common diagonal entries, which gives ``m + n - 1`` determining entries.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from . import jsonio
from .blaschke import BlaschkeProduct, ZeroMatching, match_points, match_zeros
from .errors import (
    BasisMismatch,
    FormulaInapplicable,
    InputError,
    MissingEntry,
    NotAMember,
    PointCollision,
)
from .modelspace import (
    CLARK,
    CONJUGATE_KERNEL,
    KERNEL,
    MODIFIED_CLARK,
    ILL_CONDITIONED,
    Basis,
    BasisSpec,
    ModelVector,
    _gram,
    atom_inner,
    change_basis,
    clark_system,
    coefficients_of,
    resolve_basis,
    transfer_matrix,
)
from .numerics import DEFAULT_TOL, ToleranceConfig, hermitian_solve, lstsq_min_norm, numerical_rank

__all__ = [
    "TILDE_OUT_K_IN",
    "K_OUT_TILDE_IN",
    "BOUNDARY_KK",
    "RANK_ONE_KINDS",
    "SymbolPair",
    "BoundaryCombo",
    "AttoMatrix",
    "Membership",
    "pair_matching",
    "rank_one_matrix",
    "matrix_from_symbol",
    "identity_symbol_matrix",
    "matrix_from_boundary_combo",
    "convert",
    "determining_entries",
    "membership_check",
    "complete_matrix",
    "adjoint_matrix",
    "conjugate_kernel_matrix",
    "dimension_estimate",
    "subspace_dims",
    "recover_symbol",
    "apply",
    "default_trial_points",
    "CrossCheckWarning",
]

TILDE_OUT_K_IN = "tilde_out_k_in"
K_OUT_TILDE_IN = "k_out_tilde_in"
BOUNDARY_KK = "boundary_kk"
RANK_ONE_KINDS = (TILDE_OUT_K_IN, K_OUT_TILDE_IN, BOUNDARY_KK)


class CrossCheckWarning(RuntimeWarning):
    """Two independent membership routes disagreed."""


# ---------------------------------------------------------------------------
# data types


@dataclass(frozen=True)
class SymbolPair:
    """Symbol ``conj(chi) + psi`` with chi in K_alpha and psi in K_beta."""

    chi: ModelVector
    psi: ModelVector

    @classmethod
    def from_coeffs(cls, alpha, beta, c, d) -> "SymbolPair":
        """Build from conjugate-kernel coefficients ``c`` (length m) and ``d`` (length n)."""
        ck = BasisSpec(CONJUGATE_KERNEL)
        return cls(ModelVector(alpha, ck, c), ModelVector(beta, ck, d))

    def coeffs(self, cfg: ToleranceConfig = DEFAULT_TOL):
        ck = BasisSpec(CONJUGATE_KERNEL)
        return change_basis(self.chi, ck, cfg).coeffs, change_basis(self.psi, ck, cfg).coeffs


@dataclass(frozen=True)
class BoundaryCombo:
    """``sum_i coeffs[i] * k_{xi_i}^beta (x) k_{xi_i}^alpha`` over unimodular points."""

    points: np.ndarray
    coeffs: np.ndarray

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=complex).ravel()
        c = np.asarray(self.coeffs, dtype=complex).ravel()
        if len(pts) != len(c):
            raise InputError("boundary combo needs one coefficient per point")
        if np.any(np.abs(np.abs(pts) - 1) > 1e-12):
            raise InputError("boundary combo points must be unimodular")
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "coeffs", c)


@dataclass(frozen=True)
class Membership:
    is_member: bool
    max_residual: float
    worst_entry: tuple | None

    def to_json(self) -> dict:
        return {
            "is_member": self.is_member,
            "max_residual": self.max_residual,
            "worst_entry": None if self.worst_entry is None else list(self.worst_entry),
        }


def pair_matching(alpha, beta, basis_in: BasisSpec, basis_out: BasisSpec, cfg: ToleranceConfig = DEFAULT_TOL):
    """Common-index matching for a same-family basis pair, else ``None``.

    Kernel families match zeros; Clark families match Clark points.  The
    two notions are never mixed.
    """
    if basis_in.kind != basis_out.kind:
        return None
    if basis_in.is_clark:
        e = clark_system(alpha, basis_in.lam, cfg).points
        z = clark_system(beta, basis_out.lam, cfg).points
        return match_points(e, z, cfg.sep)
    return match_zeros(alpha, beta, cfg.sep)


@dataclass(frozen=True)
class AttoMatrix:
    alpha: BlaschkeProduct
    beta: BlaschkeProduct
    basis_in: BasisSpec
    basis_out: BasisSpec
    entries: np.ndarray
    matching: ZeroMatching | None = field(default=None, compare=False)

    def __post_init__(self):
        M = np.array(self.entries, dtype=complex)
        if M.shape != (self.beta.degree, self.alpha.degree):
            raise InputError(f"matrix shape {M.shape} != ({self.beta.degree}, {self.alpha.degree})")
        M.setflags(write=False)
        object.__setattr__(self, "entries", M)
        if self.matching is None:
            object.__setattr__(self, "matching", pair_matching(self.alpha, self.beta, self.basis_in, self.basis_out))

    @property
    def l(self) -> int | None:
        return None if self.matching is None else self.matching.l

    @property
    def shape(self):
        return self.entries.shape

    def with_entries(self, entries) -> "AttoMatrix":
        return AttoMatrix(self.alpha, self.beta, self.basis_in, self.basis_out, entries, self.matching)

    def to_json(self) -> dict:
        return {
            "alpha": self.alpha.to_json(),
            "beta": self.beta.to_json(),
            "basis_in": self.basis_in.to_json(),
            "basis_out": self.basis_out.to_json(),
            "l": self.l,
            "entries": jsonio.enc(self.entries),
        }

    @classmethod
    def from_json(cls, obj) -> "AttoMatrix":
        for key in ("alpha", "beta", "basis_in", "basis_out", "entries"):
            if key not in obj:
                raise InputError(f"matrix JSON lacks {key!r}")
        M = cls(
            BlaschkeProduct.from_json(obj["alpha"]),
            BlaschkeProduct.from_json(obj["beta"]),
            BasisSpec.from_json(obj["basis_in"]),
            BasisSpec.from_json(obj["basis_out"]),
            jsonio.dec_matrix(obj["entries"]),
        )
        if obj.get("l") is not None and obj["l"] != M.l:
            raise FormulaInapplicable(f"declared l={obj['l']} but the bases have {M.l} common indices")
        return M


# ---------------------------------------------------------------------------
# construction


def _bases(alpha, beta, basis_in, basis_out, cfg):
    return resolve_basis(alpha, basis_in, cfg), resolve_basis(beta, basis_out, cfg)


def _rank_one(fin: Basis, gout: Basis, u, v):
    """Matrix of ``f -> <f, v> u``; ``u``/``v`` are ``(tilde, point)`` atoms of K_beta / K_alpha."""
    # column p needs <f_p, v> = scale_p * <X_p, v>
    y = fin.scales * atom_inner(fin.theta, fin.tilde, fin.points, np.array(v[0]), np.array(v[1], dtype=complex))
    x = coefficients_of(gout, u[0], u[1])
    return np.outer(x, y)


def rank_one_matrix(
    alpha, beta, w, kind: str, basis_in: BasisSpec, basis_out: BasisSpec, cfg: ToleranceConfig = DEFAULT_TOL
) -> AttoMatrix:
    """Matrix of a rank-one generator of the ATTO space.

    ``tilde_out_k_in``  k~_w^beta (x) k_w^alpha   = A_{beta(z)/(z - w)}
    ``k_out_tilde_in``  k_w^beta (x) k~_w^alpha   = A_{conj(alpha(z))/(conj z - conj w)}
    ``boundary_kk``     k_w^beta (x) k_w^alpha    = A_{k_w^beta + conj(k_w^alpha) - 1}, |w| = 1
    """
    w = complex(w)
    if kind not in RANK_ONE_KINDS:
        raise InputError(f"unknown rank-one kind {kind!r}")
    if kind == BOUNDARY_KK and abs(abs(w) - 1) > 1e-12:
        raise InputError("boundary_kk needs a unimodular point")
    if abs(w) > 1 + 1e-12:
        raise InputError("rank-one point outside the closed disk")
    fin, gout = _bases(alpha, beta, basis_in, basis_out, cfg)
    u_tilde = kind == TILDE_OUT_K_IN
    v_tilde = kind == K_OUT_TILDE_IN
    M = _rank_one(fin, gout, (u_tilde, w), (v_tilde, w))
    return AttoMatrix(alpha, beta, basis_in, basis_out, M)


def _kernel_symbol_entries(alpha, beta, c, d, sep):
    """Closed-form kernel-basis matrix of ``A_{conj(chi) + psi}``.

    r[s,p] = conj(c_p) conj(alpha'(a_p)) / conj(beta'(b_s)) <k_{a_p}^beta, k~_{b_s}^beta>
             + 1/conj(beta'(b_s)) sum_j d_j / ((1 - conj(a_p) b_j)(1 - conj(b_s) b_j))
    with <k_{a_p}^beta, k~_{b_s}^beta> = conj(beta(a_p)) / (conj(a_p) - conj(b_s)) for a_p != b_s
    and conj(beta'(b_s)) when a_p = b_s.
    """
    a, b = alpha.zeros, beta.zeros
    c = np.asarray(c, dtype=complex)
    d = np.asarray(d, dtype=complex)
    da = alpha.deriv(a)
    db = beta.deriv(b)
    ba = beta.eval(a)
    same = np.abs(a[None, :] - b[:, None]) <= sep  # [s, p]
    with np.errstate(divide="ignore", invalid="ignore"):
        ip = np.conj(ba)[None, :] / (np.conj(a)[None, :] - np.conj(b)[:, None])
    ip = np.where(same, np.conj(db)[:, None], ip)
    first = np.conj(c * da)[None, :] / np.conj(db)[:, None] * ip
    cross = 1 / ((1 - np.conj(a)[None, :, None] * b[None, None, :]) * (1 - np.conj(b)[:, None, None] * b[None, None, :]))
    second = (cross @ d) / np.conj(db)[:, None]
    return first + second


def matrix_from_symbol(
    sym: SymbolPair, basis_in: BasisSpec | None = None, basis_out: BasisSpec | None = None, cfg: ToleranceConfig = DEFAULT_TOL
) -> AttoMatrix:
    """Matrix of ``A_{conj(chi) + psi}``: closed form in kernel bases, converted otherwise."""
    alpha, beta = sym.chi.generator, sym.psi.generator
    match_zeros(alpha, beta, cfg.sep)
    c, d = sym.coeffs(cfg)
    kb = BasisSpec(KERNEL)
    M = AttoMatrix(alpha, beta, kb, kb, _kernel_symbol_entries(alpha, beta, c, d, cfg.sep))
    return convert(M, basis_in or kb, basis_out or kb, cfg)


def identity_symbol_matrix(alpha, beta, basis_in, basis_out, cfg: ToleranceConfig = DEFAULT_TOL) -> AttoMatrix:
    """Matrix of ``A_1`` (``f -> P_beta f``), realized through ``psi = P_beta 1 = k_0^beta``."""
    ck = BasisSpec(CONJUGATE_KERNEL)
    d = coefficients_of(resolve_basis(beta, ck, cfg), False, 0.0)
    sym = SymbolPair(ModelVector(alpha, ck, np.zeros(alpha.degree)), ModelVector(beta, ck, d))
    return matrix_from_symbol(sym, basis_in, basis_out, cfg)


def matrix_from_boundary_combo(
    alpha, beta, combo: BoundaryCombo, basis_in: BasisSpec, basis_out: BasisSpec, cfg: ToleranceConfig = DEFAULT_TOL
) -> AttoMatrix:
    pts = combo.points
    gaps = np.abs(pts[:, None] - pts[None, :])
    np.fill_diagonal(gaps, np.inf)
    if np.any(gaps <= cfg.sep):
        raise PointCollision("boundary combo points are not distinct")
    fin, gout = _bases(alpha, beta, basis_in, basis_out, cfg)
    for basis in (fin, gout):
        if basis.clark is not None and np.any(np.abs(pts[:, None] - basis.points[None, :]) <= cfg.sep):
            raise PointCollision("boundary combo point coincides with a Clark point")
    M = np.zeros((beta.degree, alpha.degree), dtype=complex)
    for xi, c in zip(pts, combo.coeffs):
        M += c * _rank_one(fin, gout, (False, xi), (False, xi))
    return AttoMatrix(alpha, beta, basis_in, basis_out, M)


def convert(M: AttoMatrix, basis_in: BasisSpec, basis_out: BasisSpec, cfg: ToleranceConfig = DEFAULT_TOL) -> AttoMatrix:
    """Same operator, represented in another basis pair."""
    if basis_in == M.basis_in and basis_out == M.basis_out:
        return M
    old_in, old_out = _bases(M.alpha, M.beta, M.basis_in, M.basis_out, cfg)
    new_in, new_out = _bases(M.alpha, M.beta, basis_in, basis_out, cfg)
    S = transfer_matrix(new_in, old_in)
    T = transfer_matrix(old_out, new_out)
    return AttoMatrix(M.alpha, M.beta, basis_in, basis_out, T @ M.entries @ S)


def apply(M: AttoMatrix, v: ModelVector) -> ModelVector:
    if v.generator != M.alpha or v.basis != M.basis_in:
        raise BasisMismatch("vector is not expressed in the operator's input basis")
    return ModelVector(M.beta, M.basis_out, M.entries @ v.coeffs)


# ---------------------------------------------------------------------------
# membership and completion


@dataclass(frozen=True)
class _Loewner:
    x: np.ndarray  # canonical order
    y: np.ndarray
    sigma: np.ndarray
    tau: np.ndarray
    l: int
    perm_in: np.ndarray
    perm_out: np.ndarray


def _loewner(alpha, beta, basis_in, basis_out, cfg) -> _Loewner:
    kind = basis_in.kind
    if kind != basis_out.kind:
        raise FormulaInapplicable("membership formulas need both bases from the same family")
    match = pair_matching(alpha, beta, basis_in, basis_out, cfg)
    if kind == KERNEL:
        a, b = alpha.zeros, beta.zeros
        x, y = np.conj(a), np.conj(b)
        sigma, tau = np.conj(beta.deriv(b)), np.ones(len(a), dtype=complex)
    elif kind == CONJUGATE_KERNEL:
        a, b = alpha.zeros, beta.zeros
        x, y = a.astype(complex), b.astype(complex)
        sigma, tau = beta.deriv(b), np.ones(len(a), dtype=complex)
    else:
        ca = clark_system(alpha, basis_in.lam, cfg)
        cb = clark_system(beta, basis_out.lam, cfg)
        x, y = ca.points, cb.points
        sigma = np.sqrt(cb.weights).astype(complex)
        tau = np.sqrt(ca.weights) / ca.points
        if kind == MODIFIED_CLARK:
            sigma = sigma * cb.phases
            tau = tau / ca.phases
    pi = np.array(match.perm_alpha, dtype=int)
    po = np.array(match.perm_beta, dtype=int)
    return _Loewner(x[pi], y[po], np.asarray(sigma)[po], np.asarray(tau)[pi], match.l, pi, po)


def _check_pivot(lw: _Loewner, pivot, orientation):
    n, m = len(lw.y), len(lw.x)
    r, c = pivot
    if not (0 <= r < n and 0 <= c < m):
        raise InputError(f"pivot {pivot} outside the {n}x{m} matrix")
    if orientation not in ("row", "col"):
        raise InputError("orientation must be 'row' or 'col'")
    if lw.l > 0 and not (r == c and r < lw.l):
        raise InputError("with common indices the pivot must be one of the first l diagonal entries")


def _determining_mask(lw: _Loewner, pivot, orientation):
    """Boolean n x m mask of determining entries, canonical order."""
    n, m = len(lw.y), len(lw.x)
    r, c = pivot
    mask = np.zeros((n, m), dtype=bool)
    if lw.l == 0:
        mask[r, :] = True
        mask[:, c] = True
        return mask
    k = r
    if orientation == "row":
        mask[k, :] = True
        mask[lw.l :, k] = True
    else:
        mask[:, k] = True
        mask[k, lw.l :] = True
    for i in range(lw.l):
        mask[i, i] = True
    return mask


def _reconstruct(R, lw: _Loewner, pivot, orientation, sep):
    """Fill every non-determining entry of the rescaled canonical matrix ``R``."""
    n, m = R.shape
    x, y, l = lw.x, lw.y, lw.l
    r, c = pivot
    out = R.copy()
    mask = _determining_mask(lw, pivot, orientation)
    denom = x[None, :] - y[:, None]
    common = np.zeros((n, m), dtype=bool)
    common[np.arange(l), np.arange(l)] = True
    if np.any(np.abs(denom[~common]) <= sep):
        raise FormulaInapplicable("a non-common index pair has coincident nodes; l is inconsistent")
    if l == 0:
        pred = ((x[c] - y)[:, None] * R[:, c][:, None] + (y[r] - x[c]) * R[r, c] + (x - y[r])[None, :] * R[r, :][None, :]) / denom
    else:
        k = r
        if orientation == "row":
            for s in range(l):
                if s != k:
                    out[s, k] = R[k, s]
        else:
            for p in range(l):
                if p != k:
                    out[k, p] = R[p, k]
        pred = ((x[k] - y)[:, None] * out[:, k][:, None] + (x - y[k])[None, :] * out[k, :][None, :]) / np.where(
            common, 1, denom
        )
        pred = np.where(common, out, pred)
        fixed = mask.copy()
        fixed[:, k] = True
        fixed[k, :] = True
        pred = np.where(fixed, out, pred)
    return np.where(mask, R, pred)


def _to_canonical(M, lw):
    return lw.sigma[:, None] * M[np.ix_(lw.perm_out, lw.perm_in)] * lw.tau[None, :]


def _from_canonical(R, lw):
    M = np.empty_like(R)
    M[np.ix_(lw.perm_out, lw.perm_in)] = R / (lw.sigma[:, None] * lw.tau[None, :])
    return M


def determining_entries(
    alpha, beta, basis_in: BasisSpec, basis_out: BasisSpec, pivot=(0, 0), orientation="row", cfg: ToleranceConfig = DEFAULT_TOL
):
    """Positions ``(s, p)`` (original indexing) of the m + n - 1 determining entries.

    The pivot is given in canonical order (common indices first).  Default:
    first row and column for ``l = 0``; first row, the common diagonal and
    the non-common part of the first column for ``l > 0``.
    """
    lw = _loewner(alpha, beta, basis_in, basis_out, cfg)
    _check_pivot(lw, pivot, orientation)
    mask = _determining_mask(lw, pivot, orientation)
    s_idx, p_idx = np.nonzero(mask)
    return sorted((int(lw.perm_out[s]), int(lw.perm_in[p])) for s, p in zip(s_idx, p_idx))


def _membership_same_family(M: AttoMatrix, cfg, pivot=(0, 0), orientation="row") -> Membership:
    lw = _loewner(M.alpha, M.beta, M.basis_in, M.basis_out, cfg)
    _check_pivot(lw, pivot, orientation)
    R = _to_canonical(M.entries, lw)
    pred = _from_canonical(_reconstruct(R, lw, pivot, orientation, cfg.sep), lw)
    scale = np.max(np.abs(M.entries))
    if scale == 0:
        return Membership(True, 0.0, None)
    diff = np.abs(pred - M.entries) / scale
    s, p = np.unravel_index(int(np.argmax(diff)), diff.shape)
    res = float(diff[s, p])
    worst = (int(s), int(p)) if res > 0 else None
    return Membership(res <= cfg.membership_rel, res, worst)


def membership_check(M: AttoMatrix, cfg: ToleranceConfig = DEFAULT_TOL, pivot=(0, 0), orientation="row") -> Membership:
    """Decide whether ``M`` represents an ATTO.

    Every non-determining entry is predicted from the determining ones and
    compared with the stored value; the residual is the largest deviation
    divided by the largest entry magnitude, so the verdict is scale free.
    Mixed basis pairs are first converted to Clark bases (lambda = 1).
    """
    if M.basis_in.kind != M.basis_out.kind:
        cl = BasisSpec(CLARK, 1.0)
        return membership_check(convert(M, cl, cl, cfg), cfg)
    res = _membership_same_family(M, cfg, pivot, orientation)
    if M.basis_in.kind == CONJUGATE_KERNEL and M.l:
        kb = BasisSpec(KERNEL)
        other = _membership_same_family(convert(M, kb, kb, cfg), cfg)
        if other.is_member != res.is_member:
            warnings.warn(
                f"conjugate-kernel verdict {res.is_member} (residual {res.max_residual:.2e}) disagrees with "
                f"kernel-basis verdict {other.is_member} (residual {other.max_residual:.2e})",
                CrossCheckWarning,
                stacklevel=2,
            )
    return res


def complete_matrix(
    partial,
    alpha,
    beta,
    basis_in: BasisSpec,
    basis_out: BasisSpec,
    l: int | None = None,
    pivot=(0, 0),
    orientation="row",
    cfg: ToleranceConfig = DEFAULT_TOL,
) -> AttoMatrix:
    """Reconstruct an ATTO matrix from its determining entries.

    ``partial`` is an n x m array; only determining positions are read, and
    they must be finite (use NaN for unknown entries elsewhere).
    """
    P = np.array(partial, dtype=complex)
    if P.shape != (beta.degree, alpha.degree):
        raise InputError(f"partial matrix shape {P.shape} != ({beta.degree}, {alpha.degree})")
    lw = _loewner(alpha, beta, basis_in, basis_out, cfg)
    if l is not None and l != lw.l:
        raise FormulaInapplicable(f"declared l={l} but the bases have {lw.l} common indices")
    _check_pivot(lw, pivot, orientation)
    mask = _determining_mask(lw, pivot, orientation)
    R = _to_canonical(P, lw)
    if not np.all(np.isfinite(R[mask])):
        missing = [(int(lw.perm_out[s]), int(lw.perm_in[p])) for s, p in zip(*np.nonzero(mask & ~np.isfinite(R)))]
        raise MissingEntry(f"determining entries missing at {missing}")
    R = np.where(mask, R, 0)
    full = _from_canonical(_reconstruct(R, lw, pivot, orientation, cfg.sep), lw)
    return AttoMatrix(alpha, beta, basis_in, basis_out, full)


# ---------------------------------------------------------------------------
# adjoints and representations


def adjoint_matrix(M: AttoMatrix, cfg: ToleranceConfig = DEFAULT_TOL) -> AttoMatrix:
    """Matrix of ``A*: K_beta -> K_alpha`` in the same bases: ``G_in^{-1} M^H G_out``."""
    fin, gout = _bases(M.alpha, M.beta, M.basis_in, M.basis_out, cfg)
    N = hermitian_solve(_gram(fin), M.entries.conj().T @ _gram(gout), ILL_CONDITIONED)
    return AttoMatrix(M.beta, M.alpha, M.basis_out, M.basis_in, N)


def conjugate_kernel_matrix(M: AttoMatrix, cfg: ToleranceConfig = DEFAULT_TOL) -> AttoMatrix:
    ck = BasisSpec(CONJUGATE_KERNEL)
    return convert(M, ck, ck, cfg)


# ---------------------------------------------------------------------------
# dimension


def default_trial_points(alpha, beta, count: int, rng, boundary_fraction=0.5, cfg: ToleranceConfig = DEFAULT_TOL):
    """Distinct trial points: interior points plus rotated roots of unity.

    Boundary points avoid the lambda = 1 Clark points of both products.
    """
    nb = int(round(count * boundary_fraction))
    ni = count - nb
    r = 0.85 * np.sqrt(rng.uniform(0, 1, ni))
    interior = r * np.exp(2j * np.pi * rng.uniform(0, 1, ni))
    avoid = np.concatenate([clark_system(alpha, 1.0, cfg).points, clark_system(beta, 1.0, cfg).points])
    K = max(nb, 1) * 4
    ring = np.exp(2j * np.pi * (np.arange(K) / K + rng.uniform(0, 1)))
    ok = np.min(np.abs(ring[:, None] - avoid[None, :]), axis=1) > 1e-6
    ring = ring[ok]
    boundary = ring[rng.choice(len(ring), size=nb, replace=False)] if nb else ring[:0]
    return np.concatenate([interior, boundary])


def _vectorized_generators(alpha, beta, points, kind, cfg):
    cl = BasisSpec(CLARK, 1.0)
    rows = []
    for w in points:
        v = rank_one_matrix(alpha, beta, w, kind, cl, cl, cfg).entries.ravel()
        rows.append(v / np.linalg.norm(v))
    return np.array(rows).T


def dimension_estimate(alpha, beta, trial_points, cfg: ToleranceConfig = DEFAULT_TOL, kind=TILDE_OUT_K_IN) -> int:
    """Numerical rank of the rank-one generators at the trial points.

    Generators are represented in (orthonormal) Clark bases and normalized
    before the SVD; both choices leave the rank unchanged.
    """
    pts = np.asarray(trial_points, dtype=complex).ravel()
    m, n = alpha.degree, beta.degree
    if len(pts) < m + n - 1:
        raise InputError(f"need at least m + n - 1 = {m + n - 1} trial points")
    if np.any(np.abs(pts) > 1 + 1e-12):
        raise InputError("trial points must lie in the closed disk")
    gaps = np.abs(pts[:, None] - pts[None, :])
    np.fill_diagonal(gaps, np.inf)
    if np.any(gaps <= cfg.sep):
        raise InputError("trial points must be distinct")
    return numerical_rank(_vectorized_generators(alpha, beta, pts, kind, cfg), cfg.rank_rel)


def subspace_dims(alpha, beta, cfg: ToleranceConfig = DEFAULT_TOL) -> dict:
    """Dimensions of the analytic-symbol span, the co-analytic span and their intersection.

    Analytic part: ``A_psi`` for psi in the conjugate-kernel basis of K_beta
    (``A_{k~_{b_j}} = k~_{b_j}^beta (x) k_{b_j}^alpha``).  Co-analytic part:
    ``A_{conj(chi)}`` for chi in the conjugate-kernel basis of K_alpha.
    The returned ``intersection`` is a unit-norm matrix (Clark bases,
    lambda = 1) spanning the intersection when it is one-dimensional.
    """
    alpha.require_distinct(cfg.sep)
    beta.require_distinct(cfg.sep)
    V1 = _vectorized_generators(alpha, beta, beta.zeros, TILDE_OUT_K_IN, cfg)
    V2 = _vectorized_generators(alpha, beta, alpha.zeros, K_OUT_TILDE_IN, cfg)
    r1 = numerical_rank(V1, cfg.rank_rel)
    r2 = numerical_rank(V2, cfg.rank_rel)
    both = np.hstack([V1, -V2])
    r12 = numerical_rank(both, cfg.rank_rel)
    out = {"dim_analytic": r1, "dim_coanalytic": r2, "dim_intersection": r1 + r2 - r12, "intersection": None}
    if out["dim_intersection"] == 1:
        null = np.linalg.svd(both)[2][-1].conj()
        rep = V1 @ null[: V1.shape[1]]
        out["intersection"] = (rep / np.linalg.norm(rep)).reshape(beta.degree, alpha.degree)
    return out


# ---------------------------------------------------------------------------
# symbol recovery


def recover_symbol(M: AttoMatrix, cfg: ToleranceConfig = DEFAULT_TOL) -> dict:
    """Minimal-norm symbol ``conj(chi) + psi`` reproducing ``M``.

    The symbol map has a one-dimensional kernel spanned by
    ``chi = -k_0^alpha, psi = k_0^beta`` (both give the operator ``A_1``);
    the minimal-norm representative is returned together with that gauge
    direction in conjugate-kernel coordinates.
    """
    mem = membership_check(M, cfg)
    if not mem.is_member:
        raise NotAMember(f"membership residual {mem.max_residual:.3e} exceeds tolerance")
    kb = BasisSpec(KERNEL)
    target = convert(M, kb, kb, cfg).entries
    alpha, beta = M.alpha, M.beta
    m, n = alpha.degree, beta.degree
    cols = []
    for i in range(m):
        u = np.zeros(m, dtype=complex)
        u[i] = 1
        cols.append(_kernel_symbol_entries(alpha, beta, u, np.zeros(n), cfg.sep).ravel())
    for j in range(n):
        e = np.zeros(n, dtype=complex)
        e[j] = 1
        cols.append(_kernel_symbol_entries(alpha, beta, np.zeros(m), e, cfg.sep).ravel())
    L = np.array(cols).T
    sol, residual = lstsq_min_norm(L, target.ravel())
    # unknowns are conj(c) and d, since the map is conjugate-linear in c
    c, d = np.conj(sol[:m]), sol[m:]
    ck = BasisSpec(CONJUGATE_KERNEL)
    sym = SymbolPair(ModelVector(alpha, ck, c), ModelVector(beta, ck, d))
    gauge_chi = -coefficients_of(resolve_basis(alpha, ck, cfg), False, 0.0)
    gauge_psi = coefficients_of(resolve_basis(beta, ck, cfg), False, 0.0)
    return {
        "sym": sym,
        "residual": residual,
        "gauge": {"chi": gauge_chi, "psi": gauge_psi},
        "gauge_note": "symbol determined up to (chi, psi) + t * (-k_0^alpha, k_0^beta) with conj(t) on chi; minimal-norm choice returned",
    }
