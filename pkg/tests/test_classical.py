import numpy as np
import pytest

from casimir_spectra.classical import (
    DomainError,
    PhasePoint,
    eval_observables,
    observables,
    poisson_bracket,
    resolve_convention,
    sample_points,
    verify_quadratic_poisson,
)
from casimir_spectra.params import KAPPA_MINUS_LAMBDA, ModelParams

LAM1 = ModelParams.from_lambda(1, omega=1)


def random_point(seed=3):
    rng = np.random.default_rng(seed)
    x, y = rng.uniform(-0.5, 0.5, 2)
    px, py = rng.uniform(-1, 1, 2)
    return PhasePoint(x, y, px, py)


def test_origin_at_rest():
    inv = eval_observables(PhasePoint(0, 0, 0, 0), ModelParams.from_lambda(0.7, omega=2))
    assert inv.H == inv.H1 == inv.H2 == inv.H3 == 0


def test_kinetic_point():
    inv = eval_observables(PhasePoint(0, 0, 1, 0), LAM1)
    assert (inv.H1, inv.H2, inv.H3, inv.H) == (0.5, 0, 0, 0.5)


def test_constraints_vanish():
    for seed in range(5):
        inv = eval_observables(random_point(seed), LAM1)
        assert abs(inv.F1) < 1e-12 and abs(inv.F2) < 1e-12


def test_canonical_and_conserved():
    pt = random_point()
    assert poisson_bracket("x", "px", pt, LAM1) == pytest.approx(1, abs=1e-8)
    assert abs(poisson_bracket("H", "H3", pt, LAM1)) < 1e-6
    c45 = poisson_bracket("C4", "C5", pt, LAM1)
    inv = eval_observables(pt, LAM1)
    assert c45 == pytest.approx(2 * inv.H2 - 2 * inv.H1, abs=1e-6)


def test_antisymmetry():
    pt = random_point(11)
    names = ["H", "H1", "H2", "C4", "C5"]
    for f in names:
        for g in names:
            assert poisson_bracket(f, g, pt, LAM1) == pytest.approx(-poisson_bracket(g, f, pt, LAM1), abs=1e-8)


def test_domain_error():
    sphere = ModelParams.from_lambda(-1, omega=1)
    with pytest.raises(DomainError):
        eval_observables(PhasePoint(1.0, 0.2, 0, 0), sphere)
    with pytest.raises(DomainError):
        poisson_bracket("x", "px", PhasePoint(0.99999, 0, 0, 0), sphere, step=1e-4)


def test_sampling_respects_domain_and_seed():
    sphere = ModelParams.from_lambda(-3.5, omega=1)
    z = sample_points(sphere, 50, 4)
    assert z.shape == (4, 50)
    assert np.all(1 - 3.5 * (z[0] ** 2 + z[1] ** 2) > 0.1)
    assert np.array_equal(z, sample_points(sphere, 50, 4))


@pytest.mark.parametrize("lam", [1, 0, -1, 0.3])
def test_quadratic_algebra_residuals(lam):
    rep = verify_quadratic_poisson(ModelParams.from_lambda(lam, omega=1), n_points=100, seed=0)
    assert rep.passed, {k: v for k, v in rep.residuals.items() if not rep.passes(k)}
    assert rep.residuals["casimir"] < 1e-5


def test_flat_limit_uses_gamma_zero():
    rep = verify_quadratic_poisson(ModelParams.from_lambda(0, omega=1), n_points=20, seed=1)
    assert rep.passed
    assert rep.params.kappa == 0


def test_report_dict_shape():
    d = verify_quadratic_poisson(LAM1, n_points=5, seed=2).as_dict()
    assert d["passed"] and d["n_points"] == 5
    assert {"jacobi", "F1", "F2", "bracket_C4_C5"} <= set(d["residuals"])


def test_resolve_convention():
    conv, reports = resolve_convention(LAM1, n_points=30, seed=0)
    assert conv == KAPPA_MINUS_LAMBDA
    assert not all(r.passed for r in reports.values())


def test_wrong_constraint_is_detected():
    # F2 written with alpha^2 = 64 instead of omega^2 would not vanish
    obs = observables(LAM1)
    z = sample_points(LAM1, 10, 0)
    alt = 2 * obs["H1"](z) * obs["H2"](z) - 0.5 * 64 * obs["C4"](z) ** 2 - 0.5 * obs["C5"](z) ** 2
    assert np.max(np.abs(alt)) > 1e-3
