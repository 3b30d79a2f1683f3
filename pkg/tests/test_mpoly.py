from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from casimir_spectra.mpoly import (
    MultiPoly,
    UniPoly,
    collect,
    isolate_real_roots,
    real_roots,
    resultant,
    square_free_decomposition,
    sturm_chain,
    sturm_variations,
)
from casimir_spectra.params import ModelParams
from casimir_spectra.qalgebra import build_structure_function, model_quantum_spec
from casimir_spectra.spectrum import energy_closed_form

x, u, E = MultiPoly.var("x"), MultiPoly.var("u"), MultiPoly.var("E")


def test_arithmetic_examples():
    assert (x + u) * (x - u) == x * x - u * u
    assert x + MultiPoly() == x
    assert (2 * (x + u) - 1) ** 2 == 4 * x**2 + 8 * x * u + 4 * u**2 - 4 * x - 4 * u + 1


def test_substitute_examples():
    assert (x * x - u * u).substitute({"x": 0}) == -u * u
    p = x**2 * u + E
    assert p.substitute({"x": u + 1}) == (u + 1) ** 2 * u + E


def test_collect_examples():
    c = collect(x * x * E + x * E + 1, "E")
    assert c.coeffs == (MultiPoly.const(1), x * x + x)
    assert collect(MultiPoly.const(3), "E").degree == 0


def test_real_roots_examples():
    r = real_roots((x * x - 2).to_unipoly("x"), tol=1e-15)
    assert [m for _, m in r] == [1, 1]
    assert r[0][0] == pytest.approx(-2**0.5, abs=1e-14)
    assert r[1][0] == pytest.approx(2**0.5, abs=1e-14)
    assert real_roots(((x - 1) ** 2 * (x + 3)).to_unipoly("x")) == [(F(-3), 1), (F(1), 2)]


def test_real_roots_isolating_intervals_contain_root():
    lo, hi = isolate_real_roots((x * x - 2).to_unipoly("x"), tol=F(1, 10**6))
    assert lo.lo < -(2**0.5) <= lo.hi and hi.lo < 2**0.5 <= hi.hi
    assert hi.hi - hi.lo <= F(1, 10**6)


def test_model_phi_u_roots_at_fixed_energy():
    spec, cas = model_quantum_spec(ModelParams.from_kappa(1, omega=1))
    phi = build_structure_function(spec, cas).phi
    e0 = F(-61803398875, 10**11)
    roots = [v for v, _ in real_roots(phi.substitute({"x": 0, "E": e0}).to_unipoly("u"))]
    for target in (0.25 - 0.5590169943749474, 0.25 + 0.5590169943749474):
        assert min(abs(float(r) - target) for r in roots) < 1e-9


def test_resultant_examples():
    r = resultant(E - u, u - 2, "u")
    # Sylvester sign convention: res_u(E - u, u - 2) = 2 - E
    assert r == 2 - E
    assert r.substitute({"E": 2}).is_zero()


def test_resultant_shared_root_vanishes():
    # u^2 - 5 and (u - E)^2 - 5 share a root at E = 0 and E = +-2 sqrt(5)
    r = resultant(u * u - 5, (u - E) ** 2 - 5, "u")
    assert r.substitute({"E": 0}).is_zero()
    assert not r.substitute({"E": 1}).is_zero()
    # E^2 = 20 is the other pair of shared roots
    assert sorted(round(float(v), 9) for v, _ in real_roots(r.to_unipoly("E"))) == [
        round(-(20**0.5), 9), 0.0, round(20**0.5, 9)]


def test_resultant_model_p0_contains_closed_form_energy():
    params = ModelParams.from_kappa(1, omega=1)
    spec, cas = model_quantum_spec(params)
    sf = build_structure_function(spec, cas)
    res = resultant(sf.at(0), sf.at(1), "u")
    poly = res.to_unipoly("E")
    e0 = float(energy_closed_form(0, params))
    coeffs = [float(c) for c in poly.coeffs]
    scale = max(abs(c) for c in coeffs)
    val = sum(c * e0**k for k, c in enumerate(coeffs)) / scale
    assert abs(val) < 1e-6
    assert any(abs(float(v) - e0) < 1e-9 for v, _ in real_roots(poly))


def test_square_free_and_sturm():
    p = ((x - 1) ** 3 * (x + 2) * (x * x + 1)).to_unipoly("x")
    parts = square_free_decomposition(p)
    assert sorted(m for _, m in parts) == [1, 3]
    sq = [f for f, m in parts if m == 1][0]
    chain = sturm_chain(sq)
    assert sturm_variations(chain, F(-10)) - sturm_variations(chain, F(10)) == 1


ints = st.integers(min_value=-6, max_value=6)


@settings(max_examples=40, deadline=None)
@given(st.lists(ints, min_size=2, max_size=7).filter(lambda c: c[-1] != 0))
def test_root_count_matches_numpy(coeffs):
    p = UniPoly([F(c) for c in coeffs], "x")
    ours = sorted(float(v) for v, m in real_roots(p) for _ in range(m))
    ref = np.roots(list(reversed([float(c) for c in coeffs])))
    # compare only when numpy's classification is unambiguous
    if all(abs(r.imag) < 1e-9 or abs(r.imag) > 1e-3 for r in ref) and len(set(np.round(ref, 3))) == len(ref):
        assert len(ours) == sum(abs(r.imag) < 1e-9 for r in ref)
        for v in ours:
            assert min(abs(v - r) for r in ref) < 1e-6


@settings(max_examples=30, deadline=None)
@given(st.lists(ints, min_size=6, max_size=6), ints, ints)
def test_resultant_vanishes_at_common_root(c, u0, e0):
    p = c[0] * u * u + c[1] * u * E + c[2] * E + u
    q = c[3] * u * u * E + c[4] * u + c[5] * E * E + 1
    p = p - p.evaluate({"u": u0, "E": e0})
    q = q - q.evaluate({"u": u0, "E": e0})
    if p.degree("u") < 1 or q.degree("u") < 1:
        return
    r = resultant(p, q, "u")
    assert r.evaluate({"E": e0}) == 0


@settings(max_examples=30, deadline=None)
@given(st.lists(ints, min_size=3, max_size=3), st.lists(ints, min_size=3, max_size=3))
def test_substitution_composes(a, b):
    p = a[0] * x * x + a[1] * x * u + a[2] * u
    s1 = {"x": b[0] * u + b[1]}
    s2 = {"u": MultiPoly.const(b[2])}
    assert p.substitute(s1).substitute(s2) == p.substitute({"x": b[0] * b[2] + b[1], "u": b[2]})
