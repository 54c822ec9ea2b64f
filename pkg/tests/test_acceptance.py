"""Acceptance suite: one test (and one printed PASS/FAIL line) per criterion.

Run with ``pytest tests/test_acceptance.py -v``; the summary lines are
printed even when output capture is on.
"""
import io
import json
import subprocess
import sys
import time

import numpy as np
import pytest

from asymtto import atto, cli, oracle
from asymtto.blaschke import random_blaschke
from asymtto.modelspace import BasisSpec, clark_system, gram, resolve_basis

from helpers import (
    FAMILIES,
    basis_pair,
    cn,
    constructed,
    erase_non_determining,
    pair_with_common_zeros,
    random_pair,
    unimodular,
)
from reference_criteria import clark_violation, conj_kernel_violation, kernel_violation

KB = BasisSpec.kernel()


@pytest.fixture
def report(capsys):
    def emit(number, ok, detail):
        with capsys.disabled():
            print(f"\n[{'PASS' if ok else 'FAIL'}] criterion {number}: {detail}")
        assert ok, detail

    return emit


def fifty_pairs():
    rng = np.random.default_rng(2024)
    return [random_pair(rng, 6) for _ in range(50)]


# ---------------------------------------------------------------------------
# 1. dimension


def test_criterion_1_dimension(report):
    rng = np.random.default_rng(1)
    t0 = time.perf_counter()
    bad_rank, bad_split = [], []
    for a, b in fifty_pairs():
        m, n = a.degree, b.degree
        pts = atto.default_trial_points(a, b, m + n + 2, rng)
        if atto.dimension_estimate(a, b, pts) != m + n - 1:
            bad_rank.append((m, n))
        sd = atto.subspace_dims(a, b)
        if (sd["dim_analytic"], sd["dim_coanalytic"], sd["dim_intersection"]) != (n, m, 1):
            bad_split.append((m, n))
    dt = time.perf_counter() - t0
    ok = not bad_rank and not bad_split and dt < 10
    report(1, ok, f"50 pairs, rank mismatches={len(bad_rank)}, subspace mismatches={len(bad_split)}, {dt:.2f}s (< 10s)")


# ---------------------------------------------------------------------------
# 2. basis theorem


def test_criterion_2_generators_form_a_basis(report):
    rng = np.random.default_rng(2)
    failures = 0
    checked = 0
    for a, b in fifty_pairs():
        m, n = a.degree, b.degree
        k = m + n - 1
        for frac in (0.0, 0.5, 1.0):
            pts = atto.default_trial_points(a, b, k + 1, rng, boundary_fraction=frac)
            for kind in (atto.TILDE_OUT_K_IN, atto.K_OUT_TILDE_IN):
                checked += 1
                full = atto.dimension_estimate(a, b, pts[:k], kind=kind)
                more = atto.dimension_estimate(a, b, pts, kind=kind)
                if full != k or more != k:
                    failures += 1
    report(2, failures == 0, f"{checked} generator sets (interior/mixed/boundary, both kinds), failures={failures}")


# ---------------------------------------------------------------------------
# 3-5. membership protocol


def membership_protocol(family, rng, n_cases=200):
    """Constructed operators (pass) and i.i.d. matrices (fail), mixing l = 0 and l >= 1."""
    members, randoms, ls = [], [], []
    for i in range(n_cases):
        if family in ("kernel", "conjugate_kernel"):
            if i % 2:
                l = int(rng.integers(1, 4))
                a, b = pair_with_common_zeros(rng, l, int(rng.integers(0, 4)), int(rng.integers(0, 4)))
            else:
                a, b = random_pair(rng, 6)
            bi, bo = basis_pair(family, rng)
        else:
            mode = i % 3
            if mode == 2:
                a = random_blaschke(rng, int(rng.integers(1, 7)))
                b = a
                spec = BasisSpec(family, unimodular(rng))
                bi, bo = spec, spec
            else:
                a, b = random_pair(rng, 6)
                bi, bo = basis_pair(family, rng, a, b, common_clark=mode)
        M = constructed(a, b, bi, bo, rng)
        members.append(M)
        ls.append(M.l)
        a2, b2 = random_pair(rng, 6, 2)
        bi2, bo2 = basis_pair(family, rng, a2, b2, common_clark=i % 2) if "clark" in family else basis_pair(family, rng)
        randoms.append(atto.AttoMatrix(a2, b2, bi2, bo2, cn(rng, (b2.degree, a2.degree))))
    return members, randoms, ls


def run_protocol(members, randoms):
    t0 = time.perf_counter()
    pass_res = [atto.membership_check(M).max_residual for M in members]
    fail_res = [atto.membership_check(M).max_residual for M in randoms]
    return np.array(pass_res), np.array(fail_res), time.perf_counter() - t0


def literal(M):
    pi, po = np.array(M.matching.perm_alpha), np.array(M.matching.perm_beta)
    r = M.entries[np.ix_(po, pi)]
    a, b, l = M.alpha, M.beta, M.l
    kind = M.basis_in.kind
    if kind == "kernel":
        v = kernel_violation(r, a.zeros[pi], b.zeros[po], b.deriv(b.zeros)[po], l)
    elif kind == "conjugate_kernel":
        v = conj_kernel_violation(r, a.zeros[pi], b.zeros[po], b.deriv(b.zeros)[po], l)
    else:
        ca, cb = clark_system(a, M.basis_in.lam), clark_system(b, M.basis_out.lam)
        args = (r, ca.points[pi], cb.points[po], ca.weights[pi], cb.weights[po], l)
        v = clark_violation(*args) if kind == "clark" else clark_violation(*args, wa=ca.phases[pi], wb=cb.phases[po])
    return v / max(np.max(np.abs(M.entries)), 1e-300)


def test_criterion_3_kernel_membership(report):
    members, randoms, ls = membership_protocol("kernel", np.random.default_rng(3))
    ok_res, bad_res, dt = run_protocol(members, randoms)
    lit_ok = max(literal(M) for M in members)
    lit_bad = min(literal(M) for M in randoms)
    covered = min(ls) == 0 and max(ls) >= 1
    ok = ok_res.max() <= 1e-8 and bad_res.min() > 1e-3 and dt < 5 and covered and lit_ok <= 1e-8 and lit_bad > 1e-3
    report(
        3,
        ok,
        f"members max residual {ok_res.max():.1e} (<= 1e-8), random min residual {bad_res.min():.1e} (> 1e-3), "
        f"l in [{min(ls)}, {max(ls)}], literal formulas {lit_ok:.1e}/{lit_bad:.1e}, {dt:.2f}s (< 5s)",
    )


def test_criterion_4_conjugate_kernel_membership_and_adjoint(report):
    rng = np.random.default_rng(4)
    members, randoms, ls = membership_protocol("conjugate_kernel", rng)
    ok_res, bad_res, dt = run_protocol(members, randoms)
    lit_ok = max(literal(M) for M in members)
    lit_bad = min(literal(M) for M in randoms)
    tr_err = 0.0
    for M in members[:100]:
        a, b = M.alpha, M.beta
        Mk = atto.convert(M, KB, KB)
        T = atto.conjugate_kernel_matrix(Mk).entries
        R = atto.adjoint_matrix(Mk).entries
        pred = a.deriv(a.zeros)[None, :] / b.deriv(b.zeros)[:, None] * np.conj(R.T)
        tr_err = max(tr_err, float(np.max(np.abs(T - pred))))
    covered = min(ls) == 0 and max(ls) >= 1
    ok = ok_res.max() <= 1e-8 and bad_res.min() > 1e-3 and covered and lit_ok <= 1e-8 and lit_bad > 1e-3 and tr_err <= 1e-9
    report(
        4,
        ok,
        f"members max residual {ok_res.max():.1e}, random min residual {bad_res.min():.1e}, l in [{min(ls)}, {max(ls)}], "
        f"literal formulas {lit_ok:.1e}/{lit_bad:.1e}, t/r relation error {tr_err:.1e} (<= 1e-9)",
    )


def test_criterion_5_clark_membership(report):
    lines, ok = [], True
    for family in ("clark", "modified_clark"):
        members, randoms, ls = membership_protocol(family, np.random.default_rng(5))
        ok_res, bad_res, _ = run_protocol(members, randoms)
        lit_ok = max(literal(M) for M in members)
        lit_bad = min(literal(M) for M in randoms)
        engineered = sum(1 for l in ls if l >= 1)
        full = sum(1 for M, l in zip(members, ls) if l == M.alpha.degree and M.alpha == M.beta)
        fam_ok = ok_res.max() <= 1e-8 and bad_res.min() > 1e-3 and engineered > 0 and full > 0
        fam_ok = fam_ok and lit_ok <= 1e-8 and lit_bad > 1e-3
        ok = ok and fam_ok
        lines.append(
            f"{family}: members {ok_res.max():.1e}, random {bad_res.min():.1e}, common-point cases {engineered} "
            f"(l=m: {full}), literal {lit_ok:.1e}/{lit_bad:.1e}"
        )
    report(5, ok, "; ".join(lines))


# ---------------------------------------------------------------------------
# 6. completion


def test_criterion_6_completion(report):
    rng = np.random.default_rng(6)
    worst, count_bad, self_bad, n = 0.0, 0, 0, 0
    for family in FAMILIES:
        members, _, _ = membership_protocol(family, rng, n_cases=60)
        for M in members:
            P, det = erase_non_determining(M)
            m, k = M.alpha.degree, M.beta.degree
            if len(det) != m + k - 1:
                count_bad += 1
            if M.alpha == M.beta and len(det) != 2 * m - 1:
                self_bad += 1
            done = atto.complete_matrix(P, M.alpha, M.beta, M.basis_in, M.basis_out)
            worst = max(worst, float(np.max(np.abs(done.entries - M.entries))))
            n += 1
    ok = worst <= 1e-9 and count_bad == 0 and self_bad == 0
    report(6, ok, f"{n} matrices over 4 families, max completion error {worst:.1e} (<= 1e-9), count mismatches={count_bad}, 2m-1 mismatches={self_bad}")


# ---------------------------------------------------------------------------
# 7. oracle


def test_criterion_7_oracle_equivalence(report):
    rng = np.random.default_rng(7)
    t0 = time.perf_counter()
    worst = {"symbol": 0.0, "rank_one": 0.0, "boundary_combo": 0.0}
    for i in range(50):
        a, b = random_pair(rng, 6)
        family = FAMILIES[i % 4]
        bi, bo = basis_pair(family, rng, a, b)
        c, d = cn(rng, a.degree), cn(rng, b.degree)
        M = atto.matrix_from_symbol(atto.SymbolPair.from_coeffs(a, b, c, d), bi, bo)
        O = oracle.oracle_matrix(a, b, oracle.symbol_pair_samples(a, b, c, d), bi, bo)
        worst["symbol"] = max(worst["symbol"], float(np.max(np.abs(M.entries - O))))

        w = 0.8 * np.sqrt(rng.uniform()) * np.exp(2j * np.pi * rng.uniform())
        kind = (atto.TILDE_OUT_K_IN, atto.K_OUT_TILDE_IN)[i % 2]
        R = atto.rank_one_matrix(a, b, w, kind, bi, bo)
        O = oracle.oracle_matrix(a, b, oracle.rank_one_symbol(a, b, w, kind), bi, bo)
        worst["rank_one"] = max(worst["rank_one"], float(np.max(np.abs(R.entries - O))))

        avoid = np.concatenate([resolve_basis(a, bi).points, resolve_basis(b, bo).points])
        pts = []
        while len(pts) < 3:
            p = np.exp(2j * np.pi * rng.uniform())
            if np.min(np.abs(avoid - p)) > 1e-3 and all(abs(p - q) > 1e-3 for q in pts):
                pts.append(p)
        coeffs = cn(rng, 3)
        B = atto.matrix_from_boundary_combo(a, b, atto.BoundaryCombo(pts, coeffs), bi, bo)
        phi = sum(cf * oracle.rank_one_symbol(a, b, p, atto.BOUNDARY_KK).samples for p, cf in zip(pts, coeffs))
        O = oracle.oracle_matrix(a, b, oracle.BoundaryGrid(phi), bi, bo)
        worst["boundary_combo"] = max(worst["boundary_combo"], float(np.max(np.abs(B.entries - O))))
    dt = time.perf_counter() - t0
    ok = max(worst.values()) <= 1e-7 and dt < 30
    detail = ", ".join(f"{k} {v:.1e}" for k, v in worst.items())
    report(7, ok, f"50 configurations (N=4096), max errors: {detail} (<= 1e-7), {dt:.2f}s (< 30s)")


# ---------------------------------------------------------------------------
# 8. Clark system


def test_criterion_8_clark_integrity(report):
    rng = np.random.default_rng(8)
    res, gerr, nerr, cerr = 0.0, 0.0, 0.0, 0.0
    z = oracle.nodes()
    for _ in range(30):
        a = random_blaschke(rng, int(rng.integers(1, 7)))
        lam = unimodular(rng)
        cs = clark_system(a, lam)
        res = max(res, float(np.max(np.abs(a.eval(cs.points) - cs.alpha_lambda))))
        gerr = max(gerr, float(np.max(np.abs(gram(a, BasisSpec.clark(lam)) - np.eye(a.degree)))))
        for eta, wt in zip(cs.points, cs.weights):
            k = oracle.sample_kernel(a, eta)
            nerr = max(nerr, abs(oracle.grid_inner(k, k).real - wt))
        E = oracle.sample_basis(a, BasisSpec.modified_clark(lam))
        CE = a.eval(z)[None, :] * np.conj(z)[None, :] * np.conj(E)
        cerr = max(cerr, float(np.max(np.abs(CE - E))))
    ok = res <= 1e-10 and gerr <= 1e-10 and nerr <= 1e-9 and cerr <= 1e-9
    report(
        8,
        ok,
        f"30 systems: residual {res:.1e} (<= 1e-10), Gram-I {gerr:.1e} (<= 1e-10), "
        f"|norm^2 - |a'|| {nerr:.1e} (<= 1e-9), |C e_j - e_j| on grid {cerr:.1e} (<= 1e-9)",
    )


# ---------------------------------------------------------------------------
# 9. rank-one identities


def test_criterion_9_rank_one_identities(report):
    rng = np.random.default_rng(9)
    e_int, e_bd, e_prop, alpha_wrong = 0.0, 0.0, 0.0, 0.0
    for i in range(20):
        a, b = random_pair(rng, 5)
        bi, bo = basis_pair(FAMILIES[i % 4], rng, a, b)
        w = 0.8 * np.sqrt(rng.uniform()) * np.exp(2j * np.pi * rng.uniform())
        R = atto.rank_one_matrix(a, b, w, atto.TILDE_OUT_K_IN, bi, bo).entries
        O = oracle.oracle_matrix(a, b, oracle.sample(lambda z: b.eval(z) / (z - w)), bi, bo)
        e_int = max(e_int, float(np.max(np.abs(R - O))))

        avoid = np.concatenate([resolve_basis(a, bi).points, resolve_basis(b, bo).points])
        eta = np.exp(2j * np.pi * rng.uniform())
        while np.min(np.abs(avoid - eta)) < 1e-3:
            eta = np.exp(2j * np.pi * rng.uniform())
        kk = atto.rank_one_matrix(a, b, eta, atto.BOUNDARY_KK, bi, bo).entries
        phi = oracle.sample_kernel(b, eta).samples + np.conj(oracle.sample_kernel(a, eta).samples) - 1
        O = oracle.oracle_matrix(a, b, oracle.BoundaryGrid(phi), bi, bo)
        e_bd = max(e_bd, float(np.max(np.abs(kk - O))))

        tk = atto.rank_one_matrix(a, b, eta, atto.TILDE_OUT_K_IN, bi, bo).entries
        kt = atto.rank_one_matrix(a, b, eta, atto.K_OUT_TILDE_IN, bi, bo).entries
        e_prop = max(
            e_prop,
            float(np.max(np.abs(tk - b.eval(eta) * np.conj(eta) * kk))),
            float(np.max(np.abs(kt - np.conj(a.eval(eta)) * eta * kk))),
        )
        alpha_wrong = max(alpha_wrong, float(np.max(np.abs(tk - a.eval(eta) * np.conj(eta) * kk))))
    ok = e_int <= 1e-8 and e_bd <= 1e-7 and e_prop <= 1e-10 and alpha_wrong > 1e-3
    report(
        9,
        ok,
        f"k~(x)k vs A_(beta/(z-w)) {e_int:.1e} (<= 1e-8), k(x)k vs boundary symbol {e_bd:.1e} (<= 1e-7), "
        f"beta(eta) proportionality {e_prop:.1e}; alpha(eta) variant off by {alpha_wrong:.1e}",
    )


# ---------------------------------------------------------------------------
# 10. CLI


def _cli(args, text):
    proc = subprocess.run([sys.executable, "-m", "asymtto.cli", *args], input=text.encode(), capture_output=True, check=False)
    return proc.returncode, proc.stdout


def _cli_in_process(command, text):
    out, stdin = io.StringIO(), sys.stdin
    sys.stdin = io.StringIO(text)
    try:
        code = cli.run([command], stdout=out, stderr=io.StringIO())
    finally:
        sys.stdin = stdin
    return code, out.getvalue()


def test_criterion_10_cli(report):
    req = json.dumps({"trials": 25, "max_degree": 4})
    c1, out1 = _cli(["verify", "--seed", "42"], req)
    c2, out2 = _cli(["verify", "--seed", "42"], req)
    identical = out1 == out2 and len(out1) > 0
    all_pass = c1 == 0 and json.loads(out1)["all_pass"]

    rng = np.random.default_rng(10)
    failures = 0
    kinds = ("symbol", "boundary_combo", "rank_one")
    for i in range(100):
        a, b = random_pair(rng, 5)
        bi, bo = (basis_pair(FAMILIES[i % 4], rng, a, b)[0], basis_pair(FAMILIES[(i // 4) % 4], rng, a, b)[1])
        payload = {"alpha": a.to_json(), "beta": b.to_json(), "basis_in": bi.to_json(), "basis_out": bo.to_json()}
        kind = kinds[i % 3]
        if kind == "symbol":
            payload["symbol"] = {
                "chi": [[float(x.real), float(x.imag)] for x in cn(rng, a.degree)],
                "psi": [[float(x.real), float(x.imag)] for x in cn(rng, b.degree)],
            }
        elif kind == "boundary_combo":
            avoid = np.concatenate([resolve_basis(a, bi).points, resolve_basis(b, bo).points])
            pts = []
            while len(pts) < 2:
                p = np.exp(2j * np.pi * rng.uniform())
                if np.min(np.abs(avoid - p)) > 1e-3 and all(abs(p - q) > 1e-3 for q in pts):
                    pts.append(p)
            payload["boundary_combo"] = {
                "points": [[p.real, p.imag] for p in pts],
                "coeffs": [[float(x.real), float(x.imag)] for x in cn(rng, 2)],
            }
        else:
            w = 0.7 * np.exp(2j * np.pi * rng.uniform())
            payload["rank_one"] = {"kind": ("tilde_out_k_in", "k_out_tilde_in")[i % 2], "w": [w.real, w.imag]}
        code, matrix_doc = _cli_in_process("matrix", json.dumps(payload))
        codes = [code, _cli_in_process("check", matrix_doc)[0]]
        if codes != [0, 0]:
            failures += 1
    ok = identical and all_pass and failures == 0
    report(10, ok, f"verify --seed 42 byte-identical={identical}, all-pass={all_pass}; matrix->check round trips failing={failures}/100")
