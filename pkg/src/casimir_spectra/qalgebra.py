"""Quadratic associative algebra data, deformed-oscillator realization and
structure functions.

Polynomials use the variables ``x`` (number-operator eigenvalue), ``u`` (the
free shift parameter) and ``E`` (energy, i.e. the Hamiltonian's eigenvalue).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .exactnum import Surd, rational_sqrt
from .mpoly import MultiPoly, _var_key
from .params import ModelParams

GAMMA_NONZERO = "gamma_nonzero"
GAMMA_ZERO = "gamma_zero_eps_nonzero"

BUILT_GENERIC = "built_generic"
EXPANDED_FORM = "expanded_form"
FACTORIZED_FORM = "factorized_form"

X = MultiPoly.var("x")
U = MultiPoly.var("u")
E = MultiPoly.var("E")
Y = X + U


class UnsupportedBranchError(ValueError):
    """gamma = 0 with epsilon <= 0 (or E-dependent): no closed form is available."""


def _as_poly(v) -> MultiPoly:
    return v if isinstance(v, MultiPoly) else MultiPoly.const(v)


@dataclass(frozen=True)
class QuadraticAlgebraSpec:
    alpha: Fraction
    gamma: Fraction
    a: Fraction
    delta: MultiPoly
    epsilon: MultiPoly
    d: MultiPoly
    zeta: MultiPoly
    z: MultiPoly

    def __post_init__(self):
        for name in ("delta", "epsilon", "d", "zeta", "z"):
            p = _as_poly(getattr(self, name))
            object.__setattr__(self, name, p)
            if set(p.variables()) - {"E"}:
                raise ValueError(f"{name} may only depend on E")
            limit = 2 if name in ("zeta", "z") else 1
            if p.degree("E") > limit:
                raise ValueError(f"{name} has degree {p.degree('E')} in E, limit {limit}")


@dataclass(frozen=True)
class CasimirPoly:
    """K(E) = k0 + k1 E + k2 E^2 + k3 E^3."""

    k0: Fraction
    k1: Fraction = Fraction(0)
    k2: Fraction = Fraction(0)
    k3: Fraction = Fraction(0)

    def as_poly(self) -> MultiPoly:
        return self.k0 + self.k1 * E + self.k2 * E ** 2 + self.k3 * E ** 3


@dataclass(frozen=True)
class RationalFunction:
    num: MultiPoly
    den: MultiPoly = field(default_factory=lambda: MultiPoly.const(1))

    def __add__(self, other):
        o = _as_rational(other)
        return RationalFunction(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(-self.num, self.den)

    def __sub__(self, other):
        return self + (-_as_rational(other))

    def __rsub__(self, other):
        return _as_rational(other) + (-self)

    def __mul__(self, other):
        o = _as_rational(other)
        return RationalFunction(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def substitute(self, bindings) -> "RationalFunction":
        return RationalFunction(self.num.substitute(bindings), self.den.substitute(bindings))

    def is_zero(self) -> bool:
        return self.num.is_zero()


def _as_rational(v) -> RationalFunction:
    if isinstance(v, RationalFunction):
        return v
    return RationalFunction(_as_poly(v))


@dataclass(frozen=True)
class LadderRealization:
    A_of_N: MultiPoly
    b_of_N: RationalFunction
    rho_of_N: RationalFunction
    branch: str


@dataclass(frozen=True)
class StructureFunction:
    phi: MultiPoly
    branch: str
    provenance: str
    reading: str = "corrected"

    def at(self, x) -> MultiPoly:
        return self.phi.substitute({"x": x})


@dataclass(frozen=True)
class PhiReading:
    """Which variant of the generic gamma != 0 / gamma = 0 formulas to assemble.

    ``lead_factor``: multiply the gamma^8 term by (3 alpha^2 + 4 a gamma).
    ``quad_sign``: sign of the linear term in (-1 +/- 12 y + 12 y^2).
    ``quartic_power``: exponent of alpha in the gamma = 0 quartic term.
    """

    name: str
    lead_factor: bool
    quad_sign: int
    quartic_power: int


CORRECTED = PhiReading("corrected", lead_factor=True, quad_sign=-1, quartic_power=2)
LITERAL = PhiReading("literal", lead_factor=False, quad_sign=1, quartic_power=4)
READINGS = {r.name: r for r in (CORRECTED, LITERAL)}


def model_quantum_spec(params: ModelParams) -> tuple[QuadraticAlgebraSpec, CasimirPoly]:
    """Structure constants and Casimir of the curved oscillator with A = 2H1, B = 2J^2."""
    h2 = params.hbar ** 2
    h4, h6 = h2 ** 2, h2 ** 3
    k, w2 = params.kappa, params.omega_sq
    spec = QuadraticAlgebraSpec(
        alpha=8 * h2,
        gamma=8 * h2 * k,
        a=Fraction(0),
        delta=-8 * h2 * (2 * E + h2 * k),
        epsilon=MultiPoly.const(16 * h2 * (w2 - h2 * k * k)),
        d=MultiPoly.const(16 * h4),
        zeta=16 * h4 * k * E + 8 * h4 * w2,
        z=-16 * h4 * E,
    )
    casimir = CasimirPoly(k0=-32 * h6 * w2, k1=-96 * h6 * k, k2=-48 * h4, k3=Fraction(0))
    return spec, casimir


def _branch(spec: QuadraticAlgebraSpec) -> str:
    if spec.gamma != 0:
        return GAMMA_NONZERO
    if not spec.epsilon.is_constant():
        raise UnsupportedBranchError("gamma = 0 needs an E-independent epsilon")
    if spec.epsilon.constant_value() <= 0:
        raise UnsupportedBranchError("gamma = 0 needs epsilon > 0")
    return GAMMA_ZERO


def _sqrt_eps(spec: QuadraticAlgebraSpec):
    eps = spec.epsilon.constant_value()
    r = rational_sqrt(eps)
    return r if r is not None else Surd.sqrt_of(eps)


def build_ladder(spec: QuadraticAlgebraSpec) -> LadderRealization:
    branch = _branch(spec)
    al, ga, de, ep, ze = spec.alpha, spec.gamma, spec.delta, spec.epsilon, spec.zeta
    if branch == GAMMA_NONZERO:
        D = Y ** 2 - Fraction(1, 4)
        A = Fraction(ga, 2) * (D - ep * Fraction(1, ga * ga))
        poly_part = -al * D * Fraction(1, 4) + (al * ep - de * ga) * Fraction(1, 2 * ga * ga)
        pole = (al * ep ** 2 - 2 * ep * de * ga + 4 * ga * ga * ze) * Fraction(1, 4 * ga ** 4)
        b = RationalFunction(poly_part * D - pole, D)
        rho = RationalFunction(MultiPoly.const(1),
                               3 * 2 ** 12 * ga ** 8 * Y * (Y + 1) * (1 + 2 * Y) ** 2)
        return LadderRealization(A, b, rho, branch)
    s = _sqrt_eps(spec)
    eps = spec.epsilon.constant_value()
    A = Y * s
    b = RationalFunction(-al * Y ** 2 - de * Y * (1 / s) - ze * (1 / eps))
    return LadderRealization(A, b, RationalFunction(MultiPoly.const(1)), branch)


def build_structure_function(spec: QuadraticAlgebraSpec, casimir: CasimirPoly | MultiPoly,
                             reading: PhiReading | str = CORRECTED) -> StructureFunction:
    """Assemble Phi(x, u, E) from the generic closed forms for either gamma branch."""
    if isinstance(reading, str):
        reading = READINGS[reading]
    K = casimir.as_poly() if isinstance(casimir, CasimirPoly) else _as_poly(casimir)
    branch = _branch(spec)
    al, ga, a = spec.alpha, spec.gamma, spec.a
    de, ep, ze, d, z = spec.delta, spec.epsilon, spec.zeta, spec.d, spec.z
    if branch == GAMMA_NONZERO:
        ym, yp, y3 = 2 * Y - 1, 2 * Y + 1, 2 * Y - 3
        lead = (3 * al ** 2 + 4 * a * ga) if reading.lead_factor else 1
        phi = (
            -3072 * ga ** 6 * K * ym ** 2
            - 48 * ga ** 6 * (al ** 2 * ep - al * de * ga + a * ep * ga - d * ga ** 2) * y3 * ym ** 4 * yp
            + lead * ga ** 8 * y3 ** 2 * ym ** 4 * yp ** 2
            + 768 * (al * ep ** 2 - 2 * de * ep * ga + 4 * ga ** 2 * ze) ** 2
            + 32 * ga ** 4 * ym ** 2 * (-1 + reading.quad_sign * 12 * Y + 12 * Y ** 2)
            * (3 * al ** 2 * ep ** 2 - 6 * al * de * ep * ga + 2 * a * ep ** 2 * ga + 2 * de ** 2 * ga ** 2
               - 4 * d * ep * ga ** 2 + 8 * ga ** 3 * z + 4 * al * ga ** 2 * ze)
            - 256 * ga ** 2 * ym ** 2
            * (3 * al ** 2 * ep ** 3 - 9 * al * de * ep ** 2 * ga + a * ep ** 3 * ga + 6 * de ** 2 * ep * ga ** 2
               - 3 * d * ep ** 2 * ga ** 2 + 2 * de ** 2 * ga ** 4 + 2 * d * ep * ga ** 4 + 12 * ep * ga ** 3 * z
               - 4 * ga ** 5 * z + 12 * al * ep * ga ** 2 * ze - 12 * de * ga ** 3 * ze + 4 * al * ga ** 4 * ze)
        )
        return StructureFunction(phi, branch, BUILT_GENERIC, reading.name)

    s = _sqrt_eps(spec)
    eps = ep.constant_value()
    inv_s, inv_e = 1 / s, Fraction(1) / eps
    ds = de * inv_s  # delta / sqrt(eps)
    zs = z * inv_s
    ze_e = ze * inv_e
    phi = (
        Fraction(1, 4) * (-K * inv_e - zs - ds * ze_e + ze_e ** 2)
        - Fraction(1, 12) * (3 * d - a * s - 3 * al * ds + 3 * ds ** 2 - 6 * zs + 6 * al * ze_e - 6 * ds * ze_e) * Y
        + Fraction(1, 4) * (al ** 2 + d - a * s - 3 * al * ds + ds ** 2 + 2 * al * ze_e) * Y ** 2
        - Fraction(1, 6) * (3 * al ** 2 - a * s - 3 * al * ds) * Y ** 3
        + Fraction(1, 4) * al ** reading.quartic_power * Y ** 4
    )
    return StructureFunction(phi, branch, BUILT_GENERIC, reading.name)


def _require_curved(params: ModelParams):
    if params.kappa == 0:
        raise ValueError("the factorized structure function needs kappa != 0")


def factorized_phi(params: ModelParams) -> StructureFunction:
    """Four-quadratic factorized form of the model's structure function."""
    _require_curved(params)
    h2, k, w2 = params.hbar ** 2, params.kappa, params.omega_sq
    c = h2 * k * k
    phi = (
        3221225472 * h2 ** 6
        * (2 * c - w2 - 6 * c * Y + 4 * c * Y ** 2)
        * (-2 * k * E + 2 * c - w2 - 6 * c * Y + 4 * c * Y ** 2)
        * (-w2 - 2 * c * Y + 4 * c * Y ** 2)
        * (-2 * k * E - w2 - 2 * c * Y + 4 * c * Y ** 2)
    )
    return StructureFunction(phi, GAMMA_NONZERO, FACTORIZED_FORM)


def expanded_phi(params: ModelParams) -> StructureFunction:
    """Term-by-term transcription of the model's expanded structure function.

    The glyphs w and k are read as omega and kappa.
    """
    _require_curved(params)
    h2, k, w2 = params.hbar ** 2, params.kappa, params.omega_sq
    h4 = h2 ** 2
    H = E
    g8 = 8 * h2 * k          # gamma
    a8 = 8 * h2              # alpha
    eps = 16 * h2 * w2 - 16 * h4 * k * k
    mdel = 16 * h2 * H + 8 * h4 * k   # -delta
    zet = k * 16 * h4 * H + 8 * h4 * w2
    d16 = 16 * h4
    zH = 16 * h4 * H         # -z
    y = Y
    phi = (
        3072 * g8 ** 6 * d16 * (3 * H ** 2 + 2 * h2 * w2 + 6 * k * h2 * H) * (-1 + 2 * y) ** 2
        - 48 * g8 ** 6 * (a8 ** 2 * eps + a8 * g8 * mdel - g8 ** 2 * d16)
        * (-3 + 2 * y) * (-1 + 2 * y) ** 4 * (1 + 2 * y)
        + 3 * a8 ** 2 * g8 ** 8 * (-3 + 2 * y) ** 2 * (-1 + 2 * y) ** 4 * (1 + 2 * y) ** 2
        + 768 * (a8 * eps ** 2 + 2 * mdel * eps * g8 + 4 * g8 ** 2 * zet) ** 2
        + 32 * g8 ** 4 * (-1 + 2 * y) ** 2 * (-1 - 12 * y + 12 * y ** 2)
        * (3 * a8 ** 2 * eps ** 2 + 6 * a8 * g8 * mdel * eps + 2 * g8 ** 2 * mdel ** 2
           - 4 * g8 ** 2 * d16 * eps - 8 * g8 ** 3 * zH + 4 * a8 * g8 ** 2 * zet)
        - 256 * g8 ** 2 * (-1 + 2 * y) ** 2
        * (3 * a8 ** 2 * eps ** 3 + 9 * a8 * g8 * mdel * eps ** 2 + 6 * mdel ** 2 * eps * g8 ** 2
           - 3 * d16 * eps ** 2 * g8 ** 2 + 2 * mdel ** 2 * g8 ** 4 + 2 * d16 * eps * g8 ** 4
           - 12 * eps * g8 ** 3 * zH + 4 * g8 ** 5 * zH + 12 * a8 * g8 ** 2 * eps * zet
           + 12 * mdel * g8 ** 3 * zet + 4 * a8 * g8 ** 4 * zet)
    )
    return StructureFunction(phi, GAMMA_NONZERO, EXPANDED_FORM)


# ---------------------------------------------------------------------------
# identity checks


@dataclass(frozen=True)
class PhiComparison:
    lhs: str
    rhs: str
    proportional: bool
    ratio: Fraction | None
    mismatches: tuple[tuple[str, str], ...] = ()

    @property
    def positive(self) -> bool:
        return self.ratio is not None and self.ratio > 0


def compare_up_to_constant(p: MultiPoly, q: MultiPoly, lhs: str = "lhs", rhs: str = "rhs",
                           max_mismatches: int = 20) -> PhiComparison:
    """Decide exactly whether p = c * q for one constant c; list residual terms otherwise."""
    if q.is_zero():
        ok = p.is_zero()
        return PhiComparison(lhs, rhs, ok, Fraction(1) if ok else None)
    order = sorted(set(p.variables()) | set(q.variables()), key=_var_key)
    lm, lc = q.leading_term(order)
    c = p.terms.get(lm, Fraction(0)) / lc
    residual = p - q * c
    if residual.is_zero() and c != 0:
        ratio = c.rational() if isinstance(c, Surd) else c
        return PhiComparison(lhs, rhs, True, ratio)
    bad = []
    for m, coeff in residual.sorted_terms(order)[:max_mismatches]:
        mono = "*".join(v if e == 1 else f"{v}^{e}" for v, e in m) or "1"
        bad.append((mono, str(coeff)))
    return PhiComparison(lhs, rhs, False, None, tuple(bad))


@dataclass(frozen=True)
class PhiIdentityReport:
    params: ModelParams
    comparisons: tuple[PhiComparison, ...]
    reproducing_readings: tuple[str, ...]

    @property
    def passed(self) -> bool:
        need = {("built_corrected", "factorized"), ("expanded", "factorized"), ("built_corrected", "expanded")}
        got = {(c.lhs, c.rhs) for c in self.comparisons if c.proportional and c.positive}
        return need <= got

    def as_dict(self) -> dict:
        return {
            "params": self.params.as_dict(),
            "passed": self.passed,
            "comparisons": [
                {"lhs": c.lhs, "rhs": c.rhs, "proportional": c.proportional,
                 "ratio": None if c.ratio is None else str(c.ratio), "positive": c.positive,
                 "mismatches": [list(m) for m in c.mismatches]}
                for c in self.comparisons
            ],
            "reproducing_readings": list(self.reproducing_readings),
        }


def verify_phi_identity(params: ModelParams) -> PhiIdentityReport:
    _require_curved(params)
    spec, K = model_quantum_spec(params)
    forms = {
        "built_corrected": build_structure_function(spec, K, CORRECTED).phi,
        "built_literal": build_structure_function(spec, K, LITERAL).phi,
        "expanded": expanded_phi(params).phi,
        "factorized": factorized_phi(params).phi,
    }
    pairs = [("built_corrected", "factorized"), ("expanded", "factorized"),
             ("built_corrected", "expanded"), ("built_literal", "factorized")]
    comps = tuple(compare_up_to_constant(forms[a], forms[b], a, b) for a, b in pairs)
    reproducing = []
    for lead in (False, True):
        for qs in (1, -1):
            r = PhiReading(f"lead_factor={lead},quad_sign={qs:+d}", lead, qs, 2)
            phi = build_structure_function(spec, K, r).phi
            if compare_up_to_constant(phi, forms["factorized"]).proportional:
                reproducing.append(r.name)
    return PhiIdentityReport(params, comps, tuple(reproducing))
