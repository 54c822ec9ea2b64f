"""Seeded self-check report used by ``asymtto verify``.

Each trial draws a pair of Blaschke products (unless fixed by the caller)
and runs the structural checks: dimension count, membership of constructed
operators and rejection of random matrices in every basis family,
completion from determining entries, and agreement with the boundary-grid
oracle.  The report holds only rounded numbers and booleans, so the same
seed gives byte-identical output.
"""
from __future__ import annotations

import numpy as np

from . import atto, oracle
from .blaschke import BlaschkeProduct, random_blaschke
from .modelspace import BasisSpec, clark_system, gram
from .numerics import DEFAULT_TOL, ToleranceConfig

__all__ = ["verify_report"]

COMPLETION_TOL = 1e-9
ORACLE_TOL = 1e-7
REJECT_TOL = 1e-3
CLARK_TOL = 1e-10


def _r(x: float) -> float:
    return float(f"{x:.3e}")


def _cn(rng, size):
    return rng.normal(size=size) + 1j * rng.normal(size=size)


def _families(rng):
    lam1 = np.exp(2j * np.pi * rng.uniform())
    lam2 = np.exp(2j * np.pi * rng.uniform())
    return [
        BasisSpec.kernel(),
        BasisSpec.conjugate_kernel(),
        BasisSpec.clark(lam1),
        BasisSpec.modified_clark(lam2),
    ]


def _family_checks(alpha, beta, spec, rng, cfg, N):
    m, n = alpha.degree, beta.degree
    c, d = _cn(rng, m), _cn(rng, n)
    sym = atto.SymbolPair.from_coeffs(alpha, beta, c, d)
    M = atto.matrix_from_symbol(sym, spec, spec, cfg)
    mem = atto.membership_check(M, cfg)

    det = atto.determining_entries(alpha, beta, spec, spec, cfg=cfg)
    partial = np.full(M.shape, np.nan, dtype=complex)
    for s, p in det:
        partial[s, p] = M.entries[s, p]
    done = atto.complete_matrix(partial, alpha, beta, spec, spec, cfg=cfg)
    completion_err = float(np.max(np.abs(done.entries - M.entries)))

    O = oracle.oracle_matrix(alpha, beta, oracle.symbol_pair_samples(alpha, beta, c, d, N), spec, spec)
    oracle_err = float(np.max(np.abs(O - M.entries)))

    out = {
        "basis": spec.to_json(),
        "member_residual": _r(mem.max_residual),
        "determining_count": len(det),
        "completion_error": _r(completion_err),
        "oracle_error": _r(oracle_err),
    }
    ok = mem.is_member and len(det) == m + n - 1 and completion_err <= COMPLETION_TOL and oracle_err <= ORACLE_TOL
    if min(m, n) > 1:
        junk = M.with_entries(_cn(rng, M.shape))
        rej = atto.membership_check(junk, cfg)
        out["random_residual"] = _r(rej.max_residual)
        ok = ok and rej.max_residual > REJECT_TOL
    out["pass"] = bool(ok)
    return out


def _clark_checks(alpha, lam, cfg):
    cs = clark_system(alpha, lam, cfg)
    resid = float(np.max(np.abs(alpha.eval(cs.points) - cs.alpha_lambda)))
    G = gram(alpha, BasisSpec.clark(lam), cfg)
    gram_err = float(np.max(np.abs(G - np.eye(alpha.degree))))
    return {
        "residual": _r(resid),
        "gram_error": _r(gram_err),
        "pass": bool(resid <= CLARK_TOL and gram_err <= CLARK_TOL),
    }


def _trial(alpha, beta, rng, cfg, N):
    m, n = alpha.degree, beta.degree
    pts = atto.default_trial_points(alpha, beta, m + n + 2, rng, cfg=cfg)
    rank = atto.dimension_estimate(alpha, beta, pts, cfg)
    families = [_family_checks(alpha, beta, spec, rng, cfg, N) for spec in _families(rng)]
    clark = _clark_checks(alpha, np.exp(2j * np.pi * rng.uniform()), cfg)

    w = 0.7 * np.sqrt(rng.uniform()) * np.exp(2j * np.pi * rng.uniform())
    kb = BasisSpec.kernel()
    R1 = atto.rank_one_matrix(alpha, beta, w, atto.TILDE_OUT_K_IN, kb, kb, cfg).entries
    O1 = oracle.oracle_matrix(alpha, beta, oracle.rank_one_symbol(alpha, beta, w, atto.TILDE_OUT_K_IN, N), kb, kb)
    rank_one_err = float(np.max(np.abs(R1 - O1)))

    ok = rank == m + n - 1 and all(f["pass"] for f in families) and clark["pass"] and rank_one_err <= ORACLE_TOL
    return {
        "alpha": alpha.to_json(),
        "beta": beta.to_json(),
        "rank": rank,
        "expected_rank": m + n - 1,
        "families": families,
        "clark": clark,
        "rank_one_oracle_error": _r(rank_one_err),
        "pass": bool(ok),
    }


def verify_report(
    trials: int,
    seed: int,
    alpha: BlaschkeProduct | None = None,
    beta: BlaschkeProduct | None = None,
    max_degree: int = 4,
    cfg: ToleranceConfig = DEFAULT_TOL,
    N: int = oracle.DEFAULT_N,
) -> dict:
    """Run ``trials`` seeded trials and collect a JSON-ready report.

    Products not supplied are drawn per trial with degrees in
    ``1..max_degree``.
    """
    rng = np.random.default_rng(seed)
    rows = []
    for _ in range(trials):
        a = alpha if alpha is not None else random_blaschke(rng, int(rng.integers(1, max_degree + 1)))
        b = beta if beta is not None else random_blaschke(rng, int(rng.integers(1, max_degree + 1)))
        rows.append(_trial(a, b, rng, cfg, N))
    passed = sum(r["pass"] for r in rows)
    return {
        "seed": seed,
        "trials": trials,
        "grid": N,
        "passed": passed,
        "failed": trials - passed,
        "all_pass": passed == trials,
        "results": rows,
    }
