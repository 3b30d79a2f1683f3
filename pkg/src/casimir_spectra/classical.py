"""Classical integrals of the curved oscillator and finite-difference checks of
their quadratic Poisson algebra.

Observables are plain functions of a phase array ``z`` with rows
``(x, y, px, py)``, so every check vectorizes over sample points.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .params import KAPPA_MINUS_LAMBDA, KAPPA_PLUS_LAMBDA, ModelParams

DEFAULT_STEP = 1e-5
# step and Richardson levels per nesting depth, innermost bracket first
NESTED_STEPS = (1e-4, 4e-3, 4e-2)
NESTED_LEVELS = (1, 2, 2)
DEFAULT_TOL = 1e-5
CONSTRAINT_TOL = 1e-10

Observable = Callable[[np.ndarray], np.ndarray]


class DomainError(ValueError):
    """Point outside the region where 1 + lambda (x^2 + y^2) > 0."""


@dataclass(frozen=True)
class PhasePoint:
    x: float
    y: float
    px: float
    py: float

    def array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.px, self.py], dtype=float)


@dataclass(frozen=True)
class ClassicalInvariantSet:
    H: float
    H1: float
    H2: float
    H3: float
    C: tuple[float, float, float, float, float]
    F1: float
    F2: float


def observables(params: ModelParams) -> dict[str, Observable]:
    """Named observables for the given parameters (kappa read from ``params``)."""
    lam = float(params.lam)
    kap = float(params.kappa)
    w2 = float(params.omega_sq)

    def g(z):
        return 1 + lam * (z[0] ** 2 + z[1] ** 2)

    def H1(z):
        return 0.5 * (g(z) * z[2] ** 2 + w2 * z[0] ** 2 / g(z))

    def H2(z):
        return 0.5 * (g(z) * z[3] ** 2 + w2 * z[1] ** 2 / g(z))

    def C4(z):
        return z[0] * z[3] - z[1] * z[2]

    def H3(z):
        return 0.5 * C4(z) ** 2

    def H(z):
        return 0.5 * (z[2] ** 2 + z[3] ** 2 + lam * (z[0] * z[2] + z[1] * z[3]) ** 2) + 0.5 * w2 * (
            z[0] ** 2 + z[1] ** 2) / g(z)

    def C5(z):
        return g(z) * z[2] * z[3] + w2 * z[0] * z[1] / g(z)

    def F1(z):
        return H(z) - (H1(z) + H2(z) + 0.5 * kap * C4(z) ** 2)

    def F2(z):
        return 2 * H1(z) * H2(z) - 0.5 * w2 * C4(z) ** 2 - 0.5 * C5(z) ** 2

    return {
        "x": lambda z: z[0], "y": lambda z: z[1], "px": lambda z: z[2], "py": lambda z: z[3],
        "H": H, "H1": H1, "H2": H2, "H3": H3,
        "C1": H, "C2": H1, "C3": H2, "C4": C4, "C5": C5,
        "A": lambda z: 2 * H1(z), "B": lambda z: 2 * H3(z),
        "F1": F1, "F2": F2, "metric": g,
    }


def _check_domain(metric: Observable, z: np.ndarray):
    if np.any(metric(z) <= 0):
        raise DomainError("1 + lambda (x^2 + y^2) must be positive")


def _partial(f: Observable, z: np.ndarray, i: int, h: float, levels: int = 1) -> np.ndarray:
    """Central difference with ``levels`` Richardson extrapolations (h, h/2, h/4, ...)."""
    e = np.zeros_like(z)
    e[i] = 1.0

    def d(s):
        return (f(z + s * e) - f(z - s * e)) / (2 * s)

    table = [d(h / 2 ** k) for k in range(levels + 1)]
    for k in range(1, levels + 1):
        factor = 4 ** k
        table = [(factor * table[j + 1] - table[j]) / (factor - 1) for j in range(len(table) - 1)]
    return table[0]


def bracket(f: Observable, g: Observable, step: float = DEFAULT_STEP, levels: int = 1) -> Observable:
    """{f, g} as a new observable, evaluated by finite differences."""

    def fg(z):
        return sum(_partial(f, z, i, step, levels) * _partial(g, z, i + 2, step, levels)
                   - _partial(f, z, i + 2, step, levels) * _partial(g, z, i, step, levels) for i in (0, 1))

    return fg


def eval_observables(pt: PhasePoint, params: ModelParams) -> ClassicalInvariantSet:
    obs = observables(params)
    z = pt.array()
    _check_domain(obs["metric"], z)
    v = {k: float(obs[k](z)) for k in ("H", "H1", "H2", "H3", "C4", "C5", "F1", "F2")}
    return ClassicalInvariantSet(v["H"], v["H1"], v["H2"], v["H3"],
                                 (v["H"], v["H1"], v["H2"], v["C4"], v["C5"]), v["F1"], v["F2"])


def poisson_bracket(f: str | Observable, g: str | Observable, pt: PhasePoint, params: ModelParams,
                    step: float = DEFAULT_STEP) -> float:
    obs = observables(params)
    f = obs[f] if isinstance(f, str) else f
    g = obs[g] if isinstance(g, str) else g
    z = pt.array()
    # every stencil point lies within 2*step of pt in one coordinate
    for i in range(4):
        for s in (-2 * step, 2 * step):
            zz = z.copy()
            zz[i] += s
            _check_domain(obs["metric"], zz)
    return float(bracket(f, g, step)(z))


def sample_points(params: ModelParams, n_points: int, seed: int, margin: float = 0.1) -> np.ndarray:
    """Uniform samples in |x|,|y| <= 0.5, |p| <= 1, keeping the metric factor above ``margin``."""
    rng = np.random.default_rng(seed)
    lam = float(params.lam)
    out = []
    have = 0
    while have < n_points:
        z = np.vstack([rng.uniform(-0.5, 0.5, (2, n_points)), rng.uniform(-1.0, 1.0, (2, n_points))])
        keep = 1 + lam * (z[0] ** 2 + z[1] ** 2) > margin
        out.append(z[:, keep])
        have += int(keep.sum())
        if have == 0 and len(out) > 50:
            raise DomainError("sampling box lies outside the metric domain")
    return np.hstack(out)[:, :n_points]


@dataclass
class ResidualReport:
    params: ModelParams
    n_points: int
    seed: int
    residuals: dict[str, float] = field(default_factory=dict)
    tolerances: dict[str, float] = field(default_factory=dict)

    def passes(self, name: str) -> bool:
        r = self.residuals[name]
        return math.isfinite(r) and r < self.tolerances[name]

    @property
    def passed(self) -> bool:
        return all(self.passes(k) for k in self.residuals)

    def as_dict(self) -> dict:
        return {
            "params": self.params.as_dict(),
            "n_points": self.n_points,
            "seed": self.seed,
            "passed": self.passed,
            "residuals": {k: {"max_abs": self.residuals[k], "tol": self.tolerances[k], "pass": self.passes(k)}
                          for k in sorted(self.residuals)},
        }


def verify_quadratic_poisson(params: ModelParams, n_points: int = 100, seed: int = 0,
                             step: float = DEFAULT_STEP, nested_steps: tuple = NESTED_STEPS,
                             tol: float = DEFAULT_TOL, constraint_tol: float = CONSTRAINT_TOL) -> ResidualReport:
    """Max residuals of the quadratic algebra, Jacobi, Casimir, constraints and bracket table."""
    if n_points < 1:
        raise ValueError("n_points must be >= 1")
    obs = observables(params)
    z = sample_points(params, n_points, seed)
    kap, w2 = float(params.kappa), float(params.omega_sq)
    A, B, H = obs["A"], obs["B"], obs["H"]
    Av, Bv, Hv = A(z), B(z), H(z)
    al, ga, de, ep = -8.0, -8.0 * kap, 16.0 * Hv, -16.0 * w2

    (h0, h1, h2), (l0, l1, l2) = nested_steps, NESTED_LEVELS
    C_in = bracket(A, B, h0, l0)
    AC, BC = bracket(A, C_in, h1, l1), bracket(B, C_in, h1, l1)
    Cv = bracket(A, B, step)(z)

    res: dict[str, np.ndarray] = {}
    res["algebra_AC"] = AC(z) - (al * Av ** 2 + 2 * ga * Av * Bv + de * Av + ep * Bv)
    res["algebra_BC"] = BC(z) - (-ga * Bv ** 2 - 2 * al * Av * Bv - de * Bv)
    res["jacobi"] = bracket(A, BC, h2, l2)(z) - bracket(B, AC, h2, l2)(z)
    res["casimir"] = Cv ** 2 - 2 * al * Av ** 2 * Bv - 2 * ga * Av * Bv ** 2 - 2 * de * Av * Bv - ep * Bv ** 2
    res["conservation_HA"] = bracket(H, A, step)(z)
    res["conservation_HB"] = bracket(H, B, step)(z)
    res["antisymmetry_AB"] = bracket(A, B, step)(z) + bracket(B, A, step)(z)
    C = {i: obs[f"C{i}"] for i in range(1, 6)}
    Cz = {i: C[i](z) for i in range(1, 6)}
    table = {
        "bracket_C2_C4": ((2, 4), -Cz[5]),
        "bracket_C2_C3": ((2, 3), kap * Cz[4] * Cz[5]),
        "bracket_C2_C5": ((2, 5), w2 * Cz[4] + 2 * kap * Cz[2] * Cz[4]),
        "bracket_C3_C4": ((3, 4), Cz[5]),
        "bracket_C3_C5": ((3, 5), -w2 * Cz[4] - 2 * kap * Cz[3] * Cz[4]),
        "bracket_C4_C5": ((4, 5), 2 * Cz[3] - 2 * Cz[2]),
    }
    for name, ((i, j), expected) in table.items():
        res[name] = bracket(C[i], C[j], step)(z) - expected
    tols = {k: tol for k in res}
    res["F1"] = obs["F1"](z)
    res["F2"] = obs["F2"](z)
    res["H_decomposition"] = Hv - (obs["H1"](z) + obs["H2"](z) - float(params.lam) * obs["H3"](z))
    tols.update(F1=constraint_tol, F2=constraint_tol, H_decomposition=constraint_tol)

    report = ResidualReport(params, n_points, seed, tolerances=tols)
    report.residuals = {k: float(np.max(np.abs(v))) for k, v in res.items()}
    return report


def resolve_convention(params: ModelParams, n_points: int = 100, seed: int = 0,
                       **kwargs) -> tuple[int | None, dict[int, ResidualReport]]:
    """Run the check under kappa = -lambda and kappa = +lambda (same lambda).

    Returns the convention whose residuals all pass (None if neither or both
    do, e.g. at lambda = 0 where the two coincide) and both reports.
    """
    reports = {c: verify_quadratic_poisson(params.with_convention(c), n_points, seed, **kwargs)
               for c in (KAPPA_MINUS_LAMBDA, KAPPA_PLUS_LAMBDA)}
    passing = [c for c, r in reports.items() if r.passed]
    return (passing[0] if len(passing) == 1 else None), reports
