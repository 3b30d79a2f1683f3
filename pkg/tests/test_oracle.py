import math

import numpy as np
import pytest

from casimir_spectra.oracle import (
    GridSpec,
    OracleDomainError,
    adjudicate,
    oracle_spectrum,
    radial_operator,
    wall_limit,
)
from casimir_spectra.params import ModelParams
from casimir_spectra.spectrum import solve_spectrum

FLAT = ModelParams.from_lambda(0, omega=1)


def sector_lowest(spec, m):
    return min(lv.E for lv in spec.levels if lv.m == m)


def test_flat_sectors():
    spec = oracle_spectrum(FLAT, GridSpec(n_r=512), k_lowest=6)
    assert sector_lowest(spec, 0) == pytest.approx(1, rel=0.01)
    assert sector_lowest(spec, 1) == pytest.approx(2, rel=0.01)
    assert spec.eigenvalues[:6] == pytest.approx([1, 2, 2, 3, 3, 3], rel=0.01)


def test_flat_degeneracies_and_order():
    spec = oracle_spectrum(FLAT, GridSpec(n_r=256), k_lowest=4)
    for n in range(4):
        near = [lv for lv in spec.levels if abs(lv.E - (n + 1)) < 1e-6]
        assert len(near) == n + 1
    for lv in spec.resolved():
        assert lv.order is None or lv.order >= 1.9


def test_refinement_shifts_shrink_fourfold():
    spec = oracle_spectrum(FLAT, GridSpec(n_r=256), k_lowest=3)
    for lv in spec.levels:
        e0, e1, e2 = lv.E_grids
        assert abs(e0 - e1) / abs(e1 - e2) > 3.9


def test_operator_is_symmetric():
    op = radial_operator(2, ModelParams.from_lambda(0.3, omega=1), GridSpec(n_r=64, r_max=5.0))
    d = op.dense()
    assert np.array_equal(d, d.T)
    assert np.all(np.linalg.eigvalsh(d) > 0)


def test_sphere_domain():
    sphere = ModelParams.from_lambda(-1, omega=1)
    with pytest.raises(OracleDomainError):
        oracle_spectrum(sphere, GridSpec(n_r=64, r_max=1.5), k_lowest=2)
    assert wall_limit(-1.0) == pytest.approx(math.pi / 2)
    assert wall_limit(0.0) is None


def test_sphere_matches_algebraic_levels():
    # lambda = -0.5: exact levels kappa N^2/2 + (N/2) sqrt(kappa^2 + 4)
    params = ModelParams.from_lambda(-0.5, omega=1)
    spec = oracle_spectrum(params, GridSpec(n_r=256), k_lowest=3)
    k = 0.5
    for lv in spec.resolved():
        N = 2 * lv.level + abs(lv.m) + 1
        assert lv.E == pytest.approx(k * N * N / 2 + N / 2 * math.sqrt(k * k + 4), abs=1e-8)


def test_hyperbolic_threshold():
    spec = oracle_spectrum(ModelParams.from_lambda(0.1, omega=1), GridSpec(n_r=128), k_lowest=3)
    assert spec.threshold == pytest.approx(5 + 0.1 / 8)
    assert spec.cutoff < spec.threshold


def test_invalid_grid():
    with pytest.raises(ValueError):
        GridSpec(n_r=10)
    with pytest.raises(ValueError):
        oracle_spectrum(FLAT, GridSpec(n_r=64), k_lowest=100)


def test_empty_adjudication():
    rep = adjudicate([], oracle_spectrum(FLAT, GridSpec(n_r=64), k_lowest=2))
    assert rep.conventions == {} and rep.verdict is None


def _plus_root_matches(lam, omega, p_max=2):
    params = ModelParams.from_lambda(lam, omega=omega)
    rep = adjudicate(solve_spectrum(params, p_max), oracle_spectrum(params, GridSpec(n_r=512), k_lowest=6))
    return rep, len(rep.conventions["plus_root"].matched)


def test_adjudication_scaling_invariance():
    rep1, n1 = _plus_root_matches(0.1, 1)
    rep2, n2 = _plus_root_matches(0.2, 2)
    assert rep1.verdict == rep2.verdict == "plus_root"
    assert n1 == n2 > 0
