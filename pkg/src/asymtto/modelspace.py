"""Model spaces K_theta of a finite Blaschke product theta.

Every basis used here is made of *atoms*: a scalar multiple of a
reproducing kernel ``k_w`` or of a conjugate kernel ``k~_w = C k_w`` at a
point ``w`` of the closed disk.  Inner products between atoms have closed
forms, so Gram matrices, changes of basis and coefficient extraction never
need quadrature.

Gram convention: ``G[i, j] = <b_j, b_i>``, so that ``G @ x`` lists the
inner products ``<f, b_i>`` of ``f = sum_j x_j b_j``.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from . import jsonio
from .blaschke import BlaschkeProduct
from .errors import (
    BasisInadmissible,
    BasisMismatch,
    DegenerateSystem,
    IllConditionedWarning,
    InputError,
    NonConvergence,
)
from .numerics import DEFAULT_TOL, ToleranceConfig, hermitian_solve, poly_roots

__all__ = [
    "KERNEL",
    "CONJUGATE_KERNEL",
    "CLARK",
    "MODIFIED_CLARK",
    "BasisSpec",
    "ClarkSystem",
    "Basis",
    "ModelVector",
    "kernel_eval",
    "conj_kernel_eval",
    "clark_system",
    "resolve_basis",
    "gram",
    "cross_gram",
    "coefficients_of",
    "change_basis",
    "conjugate_vector",
    "eval_vector",
]

KERNEL = "kernel"
CONJUGATE_KERNEL = "conjugate_kernel"
CLARK = "clark"
MODIFIED_CLARK = "modified_clark"
_KINDS = (KERNEL, CONJUGATE_KERNEL, CLARK, MODIFIED_CLARK)

ILL_CONDITIONED = 1e12


# ---------------------------------------------------------------------------
# kernels


def _mobius_parts(theta: BlaschkeProduct, z):
    a = theta.zeros.reshape((-1,) + (1,) * np.ndim(z))
    den = 1 - a.conj() * z
    return a, den, (a - z) / den


def kernel_eval(theta: BlaschkeProduct, w, z):
    """Reproducing kernel ``k_w(z) = (1 - conj(theta(w)) theta(z)) / (1 - conj(w) z)``.

    Evaluated through the telescoped factor form

        k_w(z) = sum_i [prod_{j<i} conj(f_j(w)) f_j(z)] (1 - |a_i|^2) / ((1 - a_i conj(w)) (1 - conj(a_i) z))

    which has no removable singularity, so boundary points ``w = z = eta``
    give ``|theta'(eta)|`` directly.
    """
    w, z = np.broadcast_arrays(np.asarray(w, dtype=complex), np.asarray(z, dtype=complex))
    theta.eval(w)
    theta.eval(z)
    _, dw, fw = _mobius_parts(theta, w)
    a, dz, fz = _mobius_parts(theta, z)
    term = (1 - np.abs(a) ** 2) / (dw.conj() * dz)
    pref = np.cumprod(np.concatenate([np.ones_like(fz[:1]), fw[:-1].conj() * fz[:-1]]), axis=0)
    return np.sum(pref * term, axis=0)[()]


def conj_kernel_eval(theta: BlaschkeProduct, w, z):
    """Conjugate kernel ``k~_w(z) = (theta(z) - theta(w)) / (z - w)``.

    Telescoped like ``kernel_eval``; equals ``theta'(w)`` at ``z = w``.
    """
    w, z = np.broadcast_arrays(np.asarray(w, dtype=complex), np.asarray(z, dtype=complex))
    theta.eval(w)
    theta.eval(z)
    _, dw, fw = _mobius_parts(theta, w)
    a, dz, fz = _mobius_parts(theta, z)
    term = (np.abs(a) ** 2 - 1) / (dz * dw)
    m = theta.degree
    before = np.cumprod(np.concatenate([np.ones_like(fz[:1]), fz[:-1]]), axis=0)
    after = np.cumprod(np.concatenate([np.ones_like(fw[:1]), fw[:0:-1]]), axis=0)[::-1]
    assert before.shape[0] == after.shape[0] == m
    return np.sum(before * term * after, axis=0)[()]


# ---------------------------------------------------------------------------
# basis specifications and Clark systems


@dataclass(frozen=True)
class BasisSpec:
    kind: str
    lam: complex | None = None

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise InputError(f"unknown basis kind {self.kind!r}")
        if self.kind in (CLARK, MODIFIED_CLARK):
            if self.lam is None:
                raise InputError(f"{self.kind} basis needs a unimodular lambda")
            lam = complex(self.lam)
            if abs(abs(lam) - 1) > 1e-12:
                raise InputError("lambda must be unimodular")
            object.__setattr__(self, "lam", lam)
        elif self.lam is not None:
            raise InputError(f"{self.kind} basis takes no lambda")

    @property
    def is_clark(self) -> bool:
        return self.kind in (CLARK, MODIFIED_CLARK)

    def to_json(self) -> dict:
        out = {"kind": self.kind}
        if self.lam is not None:
            out["lambda"] = jsonio.enc(self.lam)
        return out

    @classmethod
    def from_json(cls, obj) -> "BasisSpec":
        if not isinstance(obj, dict) or "kind" not in obj:
            raise InputError("basis JSON needs a 'kind'")
        lam = obj.get("lambda")
        return cls(obj["kind"], None if lam is None else jsonio.dec(lam))

    @classmethod
    def kernel(cls):
        return cls(KERNEL)

    @classmethod
    def conjugate_kernel(cls):
        return cls(CONJUGATE_KERNEL)

    @classmethod
    def clark(cls, lam=1.0):
        return cls(CLARK, lam)

    @classmethod
    def modified_clark(cls, lam=1.0):
        return cls(MODIFIED_CLARK, lam)


@dataclass(frozen=True)
class ClarkSystem:
    """Solutions of ``theta(eta) = theta_lambda`` on the circle.

    ``weights[j] = |theta'(eta_j)| = ||k_{eta_j}||^2`` and the phases satisfy
    ``phases[j]**2 * points[j] == alpha_lambda``, which makes each modified
    Clark vector fixed by the conjugation.
    """

    lam: complex
    alpha_lambda: complex
    points: np.ndarray
    weights: np.ndarray
    phases: np.ndarray

    def to_json(self) -> dict:
        return {
            "lambda": jsonio.enc(self.lam),
            "alpha_lambda": jsonio.enc(self.alpha_lambda),
            "points": jsonio.enc(self.points),
            "weights": [float(w) for w in self.weights],
            "phases": jsonio.enc(self.phases),
        }


def clark_system(theta: BlaschkeProduct, lam, cfg: ToleranceConfig = DEFAULT_TOL) -> ClarkSystem:
    """Clark points, weights and half-angle phases for the parameter ``lam``.

    Points are the roots of ``P - theta_lambda Q`` (with ``theta = P/Q``),
    Newton-refined on ``theta`` itself, projected onto the circle and
    sorted by principal argument.
    """
    lam = complex(lam)
    if abs(abs(lam) - 1) > 1e-12:
        raise InputError("lambda must be unimodular")
    return _clark_cached(theta, lam, cfg)


@lru_cache(maxsize=256)
def _clark_cached(theta, lam, cfg):
    a0 = complex(theta.eval(0.0))
    target = (lam + a0) / (1 + a0.conjugate() * lam)
    target /= abs(target)
    P, Q = theta.rational_form()
    pts = poly_roots(P - Q * target, cfg)
    pts = pts / np.abs(pts)
    for _ in range(8):
        res = theta.eval(pts) - target
        if np.max(np.abs(res)) <= 1e-15:
            break
        pts = pts - res / theta.deriv(pts)
        pts = pts / np.abs(pts)
    res = np.max(np.abs(theta.eval(pts) - target))
    if res > 1e-10:
        raise NonConvergence(f"Clark point residual {res:.3e} above 1e-10")
    pts = pts[np.argsort(np.angle(pts), kind="stable")]
    gaps = np.abs(pts[:, None] - pts[None, :])
    np.fill_diagonal(gaps, np.inf)
    if np.any(gaps <= cfg.sep):
        raise DegenerateSystem("two Clark points coincide")
    weights = np.abs(theta.deriv(pts))
    phases = np.exp(-0.5j * (np.angle(pts) - np.angle(target)))
    for arr in (pts, weights, phases):
        arr.setflags(write=False)
    return ClarkSystem(lam, target, pts, weights, phases)


# ---------------------------------------------------------------------------
# resolved bases


@dataclass(frozen=True)
class Basis:
    """A basis of K_theta as atoms ``scales[j] * (k~ if tilde[j] else k)_{points[j]}``."""

    theta: BlaschkeProduct
    spec: BasisSpec
    tilde: np.ndarray
    points: np.ndarray
    scales: np.ndarray
    clark: ClarkSystem | None = field(default=None, compare=False)

    def __len__(self):
        return len(self.points)

    def evaluate(self, z):
        """Values of every basis function at ``z``; shape ``(len(self),) + z.shape``."""
        z = np.asarray(z, dtype=complex)
        out = []
        for t, p, s in zip(self.tilde, self.points, self.scales):
            f = conj_kernel_eval if t else kernel_eval
            out.append(s * f(self.theta, p, z))
        return np.array(out)


def resolve_basis(theta: BlaschkeProduct, spec: BasisSpec, cfg: ToleranceConfig = DEFAULT_TOL) -> Basis:
    m = theta.degree
    if spec.kind in (KERNEL, CONJUGATE_KERNEL):
        if not theta.has_distinct_zeros(cfg.sep):
            raise BasisInadmissible(f"{spec.kind} basis needs pairwise-distinct zeros")
        tilde = np.full(m, spec.kind == CONJUGATE_KERNEL)
        return Basis(theta, spec, tilde, theta.zeros, np.ones(m, dtype=complex))
    cs = clark_system(theta, spec.lam, cfg)
    scales = 1 / np.sqrt(cs.weights)
    if spec.kind == MODIFIED_CLARK:
        scales = scales * cs.phases
    return Basis(theta, spec, np.zeros(m, dtype=bool), cs.points, scales.astype(complex), cs)


def atom_inner(theta, tilde_u, u, tilde_v, v):
    """``<X_u, Y_v>`` for atoms X, Y in {k, k~} at points u, v (broadcasting)."""
    tilde_u, u, tilde_v, v = np.broadcast_arrays(tilde_u, u, tilde_v, v)
    out = np.empty(u.shape, dtype=complex)
    kk = ~tilde_u & ~tilde_v
    tk = tilde_u & ~tilde_v
    kt = ~tilde_u & tilde_v
    tt = tilde_u & tilde_v
    # <k_u, k_v> = k_u(v); <k~_u, k_v> = k~_u(v); <k_u, k~_v> = conj(k~_u(v)); <k~_u, k~_v> = k_v(u)
    out[kk] = kernel_eval(theta, u[kk], v[kk])
    out[tk] = conj_kernel_eval(theta, u[tk], v[tk])
    out[kt] = np.conj(conj_kernel_eval(theta, u[kt], v[kt]))
    out[tt] = kernel_eval(theta, v[tt], u[tt])
    return out


def cross_gram(src: Basis, dst: Basis):
    """``C[i, j] = <src_j, dst_i>`` for two bases of the same model space."""
    if src.theta != dst.theta:
        raise BasisMismatch("bases belong to different model spaces")
    raw = atom_inner(
        src.theta,
        src.tilde[None, :],
        src.points[None, :],
        dst.tilde[:, None],
        dst.points[:, None],
    )
    return raw * src.scales[None, :] * np.conj(dst.scales[:, None])


def _gram(basis: Basis):
    G = cross_gram(basis, basis)
    return (G + G.conj().T) / 2


def gram(theta: BlaschkeProduct, spec: BasisSpec, cfg: ToleranceConfig = DEFAULT_TOL):
    """Gram matrix of the basis; warns when its condition number exceeds 1e12."""
    G = _gram(resolve_basis(theta, spec, cfg))
    cond = np.linalg.cond(G)
    if cond > ILL_CONDITIONED:
        warnings.warn(f"Gram matrix condition number {cond:.3e}", IllConditionedWarning, stacklevel=2)
    return G


def transfer_matrix(src: Basis, dst: Basis):
    """Columns are the ``dst``-coefficients of the ``src`` basis vectors."""
    if src.spec == dst.spec:
        return np.eye(len(src), dtype=complex)
    return hermitian_solve(_gram(dst), cross_gram(src, dst), ILL_CONDITIONED)


def coefficients_of(basis: Basis, tilde: bool, point, scale=1.0):
    """Coefficients in ``basis`` of the single atom ``scale * (k~ or k)_point``."""
    rhs = atom_inner(basis.theta, np.array([tilde]), np.array([point], dtype=complex), basis.tilde, basis.points)
    rhs = rhs * np.conj(basis.scales) * scale
    return hermitian_solve(_gram(basis), rhs, ILL_CONDITIONED)


# ---------------------------------------------------------------------------
# vectors


@dataclass(frozen=True)
class ModelVector:
    generator: BlaschkeProduct
    basis: BasisSpec
    coeffs: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=complex).ravel()
        if len(c) != self.generator.degree:
            raise InputError(f"expected {self.generator.degree} coefficients, got {len(c)}")
        object.__setattr__(self, "coeffs", c)

    def resolved(self, cfg: ToleranceConfig = DEFAULT_TOL) -> Basis:
        return resolve_basis(self.generator, self.basis, cfg)


def change_basis(v: ModelVector, target: BasisSpec, cfg: ToleranceConfig = DEFAULT_TOL) -> ModelVector:
    """Re-express ``v`` in the ``target`` basis; the represented function is unchanged."""
    if target == v.basis:
        return v
    T = transfer_matrix(v.resolved(cfg), resolve_basis(v.generator, target, cfg))
    return ModelVector(v.generator, target, T @ v.coeffs)


def conjugate_vector(v: ModelVector, cfg: ToleranceConfig = DEFAULT_TOL) -> ModelVector:
    """Coefficients of ``C f`` where ``C f = theta * conj(z) * conj(f)`` on the circle.

    ``C k_w = k~_w`` swaps the kernel and conjugate-kernel bases; modified
    Clark vectors are fixed by ``C``; a plain Clark vector picks up the
    factor ``theta_lambda * conj(eta_j)``.
    """
    c = np.conj(v.coeffs)
    kind = v.basis.kind
    if kind == KERNEL:
        return ModelVector(v.generator, BasisSpec(CONJUGATE_KERNEL), c)
    if kind == CONJUGATE_KERNEL:
        return ModelVector(v.generator, BasisSpec(KERNEL), c)
    if kind == MODIFIED_CLARK:
        return ModelVector(v.generator, v.basis, c)
    cs = clark_system(v.generator, v.basis.lam, cfg)
    return ModelVector(v.generator, v.basis, c * cs.alpha_lambda * np.conj(cs.points))


def eval_vector(v: ModelVector, z, cfg: ToleranceConfig = DEFAULT_TOL):
    vals = v.resolved(cfg).evaluate(z)
    return np.tensordot(v.coeffs, vals, axes=1)[()]
