"""Acceptance criteria, one test each, with wall-clock limits.

Each test records a PASS/FAIL line; conftest.py prints them at the end of the
run.  ``python3 tests/test_acceptance.py`` runs them standalone.
"""

import time
from contextlib import contextmanager
from fractions import Fraction as F

import pytest

from casimir_spectra.classical import verify_quadratic_poisson
from casimir_spectra.oracle import GridSpec, adjudicate, oracle_spectrum
from casimir_spectra.params import ModelParams
from casimir_spectra.qalgebra import verify_phi_identity
from casimir_spectra.spectrum import (
    EVEN,
    PLUS_ROOT,
    ODD,
    MINUS_ROOT,
    energy_closed_form,
    ladder_closed_form,
    parity_shift_identity,
    solve_spectrum,
    verify_u_roots,
)

RESULTS: list[str] = []


@contextmanager
def criterion(n: int, title: str, limit: float):
    start = time.perf_counter()
    detail = {}
    try:
        yield detail
    except BaseException as exc:
        elapsed = time.perf_counter() - start
        RESULTS.append(f"ACCEPTANCE {n} FAIL  {title} ({elapsed:.2f} s): {exc!s:.200}")
        raise
    elapsed = time.perf_counter() - start
    ok = elapsed < limit
    extra = f" {detail['note']}" if "note" in detail else ""
    RESULTS.append(f"ACCEPTANCE {n} {'PASS' if ok else 'FAIL'}  {title} ({elapsed:.2f} s < {limit:g} s){extra}")
    assert ok, f"criterion {n} took {elapsed:.2f} s, limit {limit} s"


@pytest.mark.parametrize("hk", [(1, 1, 1), (1, -1, 4), (2, 1, 9)])
def test_1_phi_identity(hk):
    h, k, w2 = hk
    with criterion(1, f"structure-function identity at (hbar, kappa, omega^2) = {hk}", 5) as d:
        rep = verify_phi_identity(ModelParams.from_kappa(k, omega_sq=w2, hbar=h))
        for c in rep.comparisons:
            if (c.lhs, c.rhs) in {("built_corrected", "factorized"), ("expanded", "factorized"),
                                  ("built_corrected", "expanded")}:
                assert c.proportional and c.positive, c.mismatches
        assert rep.passed
        d["note"] = "ratios " + ",".join(str(c.ratio) for c in rep.comparisons if c.proportional)


def test_2_u_roots():
    with criterion(2, "u-roots exact (u1..u4) and to 1e-12 (u5..u8) at 5 energies", 5):
        checks = verify_u_roots(ModelParams.from_kappa(1, omega=1), [F(-1, 2), F(0), F(1, 3), F(2), F(7, 5)])
        for c in checks:
            if c.branch in ("u1", "u2", "u3", "u4"):
                assert c.exact_zero and c.isolated, c
            elif c.u is not None:
                assert c.isolated and c.error <= 1e-12, c
        assert sum(c.u is not None for c in checks if c.branch in ("u5", "u6", "u7", "u8")) > 0


@pytest.mark.parametrize("hk", [(1, 1, 1), (1, -1, 2)])
def test_3_generic_energies(hk):
    h, k, w = hk
    with criterion(3, f"generic solve reproduces closed-form energies p = 0..10 at (hbar, kappa, omega) = {hk}",
                   60) as d:
        params = ModelParams.from_kappa(k, omega=w, hbar=h)
        generic = solve_spectrum(params, 10, "generic")
        closed = solve_spectrum(params, 10)
        by_p = {}
        for ln in generic:
            by_p.setdefault(ln.p, []).append(ln.E_float)
        for ln in closed:
            exact = float(energy_closed_form(ln.p, params, ln.parity, ln.sign))
            assert min(abs(exact - e) for e in by_p[ln.p]) < 1e-10, (ln.p, ln.parity, ln.sign)
        covered = {(ln.p, ln.parity) for ln in closed}
        assert covered == {(p, par) for p in range(11) for par in (EVEN, ODD)}
        d["note"] = f"{len(closed)} closed-form lines, {len(generic)} generic"


def test_4_ladder_positivity():
    # the energy formula read literally (sqrt(kappa^2) = kappa) pairs u1 with the
    # root sign -sign(kappa); in the |kappa| convention used here that is MINUS_ROOT for
    # kappa > 0 and PLUS_ROOT for kappa < 0
    cases = [(1, 1, 1), (1, F(1, 1000), 1), (1, F(-1, 1000), 1), (1, -1, 1)]
    with criterion(4, "branch u1 ladders: Phi(0) = Phi(p+1) = 0 exactly, Phi(1..p) > 0, p <= 10", 10) as d:
        for h, k, w2 in cases:
            params = ModelParams.from_kappa(k, omega_sq=w2, hbar=h)
            sign_ = MINUS_ROOT if k > 0 else PLUS_ROOT
            lines = [ln for ln in solve_spectrum(params, 10, signs=(sign_,), include_inadmissible=True)
                     if ln.u_branch == "u1"]
            for p in range(11):
                for parity in (EVEN, ODD):
                    hit = [ln for ln in lines if ln.p == p and ln.parity == parity]
                    assert hit, (p, parity)
                    ln = hit[0]
                    assert ln.exact and ln.flags.phi0_zero and ln.flags.phiP1_zero, ((h, k, w2), p, parity)
                    assert ln.flags.all_positive and all(v > 0 for v in ln.phi_ladder), ((h, k, w2), p, parity)
                    if k > 0:
                        lad = ladder_closed_form(params, p, parity)
                        assert lad.evaluate({"x": 0}) == 0 and lad.evaluate({"x": p + 1}) == 0
        d["note"] = f"at (hbar, kappa, omega^2) in {[tuple(str(v) for v in c) for c in cases]}"


def test_5_parity_identity():
    with criterion(5, "even ladder under p -> (2p+1)/2 equals the odd ladder exactly", 1):
        assert parity_shift_identity()


def test_6_classical_algebra():
    with criterion(6, "classical quadratic algebra residuals < 1e-5 over 100 seeded points", 10) as d:
        rep = verify_quadratic_poisson(ModelParams.from_lambda(1, omega=1), n_points=100, seed=0)
        bad = {k: v for k, v in rep.residuals.items() if not v < 1e-5}
        assert not bad, bad
        d["note"] = f"max residual {max(rep.residuals.values()):.1e}"


def test_7_oracle_flat_limit():
    with criterion(7, "oracle flat limit lowest six = 1,2,2,3,3,3 within 1% at n_r = 512", 60) as d:
        spec = oracle_spectrum(ModelParams.from_lambda(0, omega=1), GridSpec(n_r=512), k_lowest=6)
        got = spec.eigenvalues[:6]
        for e, want in zip(got, [1, 2, 2, 3, 3, 3]):
            assert abs(e - want) <= 0.01 * want
        d["note"] = "E = " + ", ".join(f"{e:.6f}" for e in got)


ADJ_CASES = [
    ("kappa = +1e-3", ModelParams.from_kappa(F(1, 1000), omega=1), 3, GridSpec(n_r=512, m_max=8), 5),
    ("kappa = -1e-3", ModelParams.from_kappa(F(-1, 1000), omega=1), 3, GridSpec(n_r=512, m_max=8), 5),
    ("lambda = 0.1", ModelParams.from_lambda(F(1, 10), omega=1), 2, GridSpec(n_r=512), 6),
]


@pytest.mark.parametrize("case", ADJ_CASES, ids=[c[0] for c in ADJ_CASES])
def test_8_adjudication(case):
    label, params, p_max, grid, k = case
    with criterion(8, f"adjudication at {label}: every admissible line matched under one named convention",
                   300) as d:
        lines = solve_spectrum(params, p_max)
        rep = adjudicate(lines, oracle_spectrum(params, grid, k_lowest=k))
        assert rep.verdict is not None, {n: (len(c.matched), len(c.unmatched)) for n, c in rep.conventions.items()}
        win = rep.conventions[rep.verdict]
        assert not win.out_of_range and not win.unmatched
        assert all(m.diff <= m.tol for m in win.matched)
        others = [c for n, c in rep.conventions.items() if n != rep.verdict]
        assert all(not c.all_matched for c in others)
        d["note"] = f"verdict '{rep.verdict}', {len(win.matched)} lines matched"


if __name__ == "__main__":
    import sys

    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
