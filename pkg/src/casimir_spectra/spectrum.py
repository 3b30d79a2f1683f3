"""Finite unitary representations: solve Phi(0) = Phi(p+1) = 0 for (u, E) and
keep the solutions whose ladder Phi(1..p) is strictly positive.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, replace
from fractions import Fraction

import mpmath

from .exactnum import Surd, sign, to_float
from .mpoly import MultiPoly, UniPoly, isolate_real_roots, resultant
from .params import ModelParams
from .qalgebra import (
    CasimirPoly,
    QuadraticAlgebraSpec,
    StructureFunction,
    build_structure_function,
    model_quantum_spec,
)

log = logging.getLogger(__name__)

EVEN = "even_formula"
ODD = "odd_formula"
PARITIES = (EVEN, ODD)
# sign in front of the square root in the energy formula
MINUS_ROOT = -1
PLUS_ROOT = 1
SIGN_NAMES = {MINUS_ROOT: "minus_root", PLUS_ROOT: "plus_root"}
BRANCHES = tuple(f"u{i}" for i in range(1, 9))

FLOAT_ZERO_TOL = 1e-10
DEDUP_TOL = 1e-10
WORK_DPS = 50


# ---------------------------------------------------------------------------
# closed forms


def radicand(params: ModelParams) -> Fraction:
    """t = hbar^4 kappa^4 + 4 hbar^2 kappa^2 omega^2."""
    h2, k2 = params.hbar ** 2, params.kappa ** 2
    return h2 * h2 * k2 * k2 + 4 * h2 * k2 * params.omega_sq


def _mp(v):
    if isinstance(v, (Fraction, Surd, int)):
        return to_float(v, int(WORK_DPS * 3.33))
    return mpmath.mpf(v)


def closed_form_u(params: ModelParams, E) -> list:
    """The eight roots u1..u8 of Phi(0, u, E) = 0 (None where complex).

    u1..u4 live in Q(sqrt(t)).  u5..u8 are exact when their radicand
    8 hbar^2 E kappa^3 + t is a square in Q(sqrt(t)), else mpmath floats.
    """
    if params.kappa == 0:
        raise ValueError("closed-form u-roots need kappa != 0")
    h2, k = params.hbar ** 2, params.kappa
    t = radicand(params)
    den = 4 * h2 * k * k
    r = Surd(0, 1 / den, t)
    out = [Fraction(1, 4) - r, Fraction(1, 4) + r, Fraction(3, 4) + r, Fraction(3, 4) - r]
    rad_e = 8 * h2 * k ** 3 * (E if isinstance(E, (Fraction, Surd)) else _mp(E)) + t
    if isinstance(rad_e, (Fraction, Surd)):
        rad_s = rad_e if isinstance(rad_e, Surd) else Surd(rad_e, 0, t)
        root = rad_s.sqrt()
        if root is not None:
            q = root / den
            return out + [Fraction(1, 4) - q, Fraction(1, 4) + q, Fraction(3, 4) - q, Fraction(3, 4) + q]
        rad_e = _mp(rad_s)
    if rad_e < 0:
        return out + [None] * 4
    with mpmath.workdps(WORK_DPS):
        q = mpmath.sqrt(rad_e) / _mp(den)
        return out + [mpmath.mpf(1) / 4 - q, mpmath.mpf(1) / 4 + q, mpmath.mpf(3) / 4 - q, mpmath.mpf(3) / 4 + q]


def level_index(p: int, parity: str) -> int:
    """N = 2p+1 for the even formula, 2p+2 for the odd one."""
    if parity not in PARITIES:
        raise ValueError(f"unknown parity {parity!r}")
    return 2 * p + 1 if parity == EVEN else 2 * p + 2


def energy_closed_form(p: int, params: ModelParams, parity: str = EVEN, sign_: int = MINUS_ROOT) -> Surd:
    """E = hbar^2 kappa N^2 / 2 + sign_ * (hbar^2 N / 2) sqrt(kappa^2 + 4 omega^2 / hbar^2)."""
    if p < 0:
        raise ValueError("p must be >= 0")
    if sign_ not in (MINUS_ROOT, PLUS_ROOT):
        raise ValueError("sign must be -1 or +1")
    N = level_index(p, parity)
    h2, k = params.hbar ** 2, params.kappa
    if k != 0:
        root = Surd(0, 1 / (h2 * abs(k)), radicand(params))
    else:
        root = Surd(0, 2 / params.hbar, params.omega_sq)
    return h2 * k * N * N / 2 + sign_ * root * (h2 * N / 2)


def ladder_polynomial(parity: str = EVEN) -> MultiPoly:
    """Closed-form ladder in variables x, p and S = sqrt(4 omega^2/(hbar^2 kappa^2) + 1),
    without the constant 12884901888 hbar^20 kappa^8."""
    x, p, S = MultiPoly.var("x"), MultiPoly.var("p"), MultiPoly.var("S")
    common = x * (2 * x - 1) * (-p + x - 1) * (S - 2 * x) * (S - 2 * x + 1)
    if parity == EVEN:
        return common * (-2 * p + 2 * x - 1) * (S - 2 * p - 2 * x - 1) * (S - 2 * p - 2 * x)
    if parity == ODD:
        return common * (-2 * p + 2 * x - 3) * (S - 2 * p - 2 * x - 2) * (S - 2 * p - 2 * x - 1)
    raise ValueError(f"unknown parity {parity!r}")


def parity_shift_identity() -> bool:
    """Even ladder with p -> (2p+1)/2 equals the odd ladder, exactly."""
    p = MultiPoly.var("p")
    shifted = ladder_polynomial(EVEN).substitute({"p": (2 * p + 1) * Fraction(1, 2)})
    return shifted == ladder_polynomial(ODD)


def ladder_closed_form(params: ModelParams, p: int, parity: str = EVEN) -> MultiPoly:
    """Closed-form ladder as a polynomial in x with coefficients in Q(sqrt(t))."""
    if params.kappa == 0:
        raise ValueError("closed-form ladder needs kappa != 0")
    h2, k = params.hbar ** 2, params.kappa
    S = Surd(0, 1 / (h2 * k * k), radicand(params))
    const = 12884901888 * h2 ** 10 * k ** 8
    return ladder_polynomial(parity).substitute({"p": Fraction(p), "S": S}) * const


# ---------------------------------------------------------------------------
# lines


@dataclass(frozen=True)
class LineFlags:
    phi0_zero: bool
    phiP1_zero: bool
    all_positive: bool
    matches_closed_form: bool

    def as_dict(self) -> dict:
        return {"phi0_zero": self.phi0_zero, "phiP1_zero": self.phiP1_zero,
                "all_positive": self.all_positive, "matches_closed_form": self.matches_closed_form}


@dataclass(frozen=True)
class SpectrumLine:
    p: int
    u_branch: str
    u: object
    E: object
    phi_ladder: tuple
    flags: LineFlags
    parity: str | None = None
    sign: int | None = None
    exact: bool = False
    equivalent_branches: tuple[str, ...] = ()

    @property
    def admissible(self) -> bool:
        f = self.flags
        return f.phi0_zero and f.phiP1_zero and f.all_positive

    @property
    def convention(self) -> str | None:
        return SIGN_NAMES.get(self.sign)

    @property
    def E_float(self) -> float:
        return float(_mp(self.E))

    @property
    def u_float(self) -> float:
        return float(_mp(self.u))


class _Model:
    """Phi restricted to x = 0 (it depends on x + u only), variables u and E.

    Exact evaluation runs Horner in u over E-coefficients cached per energy.
    """

    def __init__(self, phi: StructureFunction):
        self.phi = phi
        self.phi_u = phi.phi.substitute({"x": 0})
        self._coeffs = self.phi_u.collect("u").coeffs
        self._has_E = "E" in self.phi_u.variables()
        self._cache: dict = {}

    def _at_E(self, E):
        key = E if self._has_E else None
        if key not in self._cache:
            bind = {"E": E} if self._has_E else {}
            self._cache[key] = [c.evaluate(bind) for c in self._coeffs]
        return self._cache[key]

    def at(self, n, u, E):
        y = n + u
        acc = Fraction(0)
        for c in reversed(self._at_E(E)):
            acc = acc * y + c
        return acc

    def at_mp(self, n, u, E):
        bind = {"u": _mp(n) + _mp(u)}
        if self._has_E:
            bind["E"] = _mp(E)
        return self.phi_u.evaluate_mp(bind, WORK_DPS)


def _model(params: ModelParams, spec: QuadraticAlgebraSpec | None = None,
           casimir: CasimirPoly | None = None) -> _Model:
    if spec is None:
        spec, casimir = model_quantum_spec(params)
    return _Model(build_structure_function(spec, casimir))


def _is_zero(v, scale=None, tol=FLOAT_ZERO_TOL) -> bool:
    if isinstance(v, (Fraction, Surd)):
        return v == 0
    if scale is None or scale == 0:
        return v == 0
    return abs(v) <= tol * scale


def _evaluate_ladder(model: _Model, p: int, u, E, exact: bool):
    if exact:
        phi0 = model.at(0, u, E)
        phi1 = model.at(p + 1, u, E)
        ladder = tuple(model.at(n, u, E) for n in range(1, p + 1))
        return _is_zero(phi0), _is_zero(phi1), ladder, all(sign(v) > 0 for v in ladder)
    v0, s0 = model.at_mp(0, u, E)
    v1, s1 = model.at_mp(p + 1, u, E)
    vals = [model.at_mp(n, u, E) for n in range(1, p + 1)]
    ladder = tuple(v for v, _ in vals)
    positive = all(v > FLOAT_ZERO_TOL * s for v, s in vals)
    return _is_zero(v0, s0), _is_zero(v1, s1), ladder, positive


def _close(a, b, tol=DEDUP_TOL) -> bool:
    a, b = _mp(a), _mp(b)
    return abs(a - b) <= tol * max(1, abs(a), abs(b))


def _dedupe(lines: list[SpectrumLine]) -> list[SpectrumLine]:
    kept: list[SpectrumLine] = []
    for line in lines:
        for i, other in enumerate(kept):
            if other.p == line.p and _close(other.E, line.E) and \
                    _same_multiset(other.phi_ladder, line.phi_ladder):
                kept[i] = replace(other, equivalent_branches=other.equivalent_branches + (line.u_branch,))
                break
        else:
            kept.append(line)
    return kept


def _same_multiset(a, b) -> bool:
    if len(a) != len(b):
        return False
    fa, fb = sorted(float(_mp(v)) for v in a), sorted(float(_mp(v)) for v in b)
    scale = max([1.0] + [abs(v) for v in fa + fb])
    return all(abs(x - y) <= DEDUP_TOL * scale for x, y in zip(fa, fb))


def _sort_key(line: SpectrumLine):
    return (line.p, line.E_float, BRANCHES.index(line.u_branch) if line.u_branch in BRANCHES else 99,
            line.parity or "", line.sign or 0)


def solve_spectrum(params: ModelParams, p_max: int, mode: str = "closed_form", *,
                   signs=(MINUS_ROOT, PLUS_ROOT), include_inadmissible: bool = False) -> list[SpectrumLine]:
    if p_max < 0:
        raise ValueError("p_max must be >= 0")
    if mode == "closed_form":
        lines = _solve_closed_form(params, p_max, signs)
    elif mode == "generic":
        lines = _solve_generic(params, p_max)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    if not include_inadmissible:
        lines = [ln for ln in lines if ln.admissible]
    return sorted(_dedupe(lines), key=_sort_key)


def _solve_closed_form(params: ModelParams, p_max: int, signs) -> list[SpectrumLine]:
    model = _model(params)
    lines = []
    for p in range(p_max + 1):
        for parity in PARITIES:
            for sg in signs:
                E = energy_closed_form(p, params, parity, sg)
                for name, u in zip(BRANCHES, closed_form_u(params, E)):
                    if u is None:
                        continue
                    exact = isinstance(u, (Fraction, Surd))
                    z0, z1, ladder, pos = _evaluate_ladder(model, p, u, E, exact)
                    flags = LineFlags(z0, z1, pos, True)
                    lines.append(SpectrumLine(p, name, u, E, ladder, flags, parity, sg, exact))
    return lines


# ---------------------------------------------------------------------------
# generic elimination


def _split_content(phi_u: MultiPoly) -> tuple[UniPoly, MultiPoly]:
    """phi_u = c(u) * rest(u, E) with c the gcd of the E-coefficients."""
    coeffs = [c for c in phi_u.collect("E").coeffs if not c.is_zero()]
    g = None
    for c in coeffs:
        cu = c.to_unipoly("u")
        g = cu if g is None else g.gcd(cu)
    if g is None or g.degree <= 0:
        return UniPoly([Fraction(1)], "u"), phi_u
    g = g.monic()
    return g, phi_u.exact_div(g.to_multipoly())


def _mp_roots(coeffs_desc, dps=WORK_DPS):
    """All complex roots of a dense polynomial, descending mpf coefficients."""
    while coeffs_desc and coeffs_desc[0] == 0:
        coeffs_desc = coeffs_desc[1:]
    if len(coeffs_desc) <= 1:
        return []
    with mpmath.workdps(dps):
        return mpmath.polyroots(coeffs_desc, maxsteps=400, extraprec=4 * dps)


def _real_parts(roots, tol):
    out = []
    for r in roots:
        r = mpmath.mpmathify(r)
        if isinstance(r, mpmath.mpc):
            if abs(r.imag) > tol * max(1, abs(r.real)):
                continue
            r = r.real
        out.append(r)
    return out


def _poly_in(phi_u: MultiPoly, var: str, bindings: dict) -> list:
    """Descending mpf coefficients of phi_u in ``var`` once the other variable is bound."""
    up = phi_u.collect(var)
    out = []
    for c in reversed(up.coeffs):
        out.append(c.evaluate_mp(bindings, WORK_DPS)[0] if c.variables() else _mp(c.constant_value()))
    return out


def _polish_root(f: UniPoly, lo: Fraction, hi: Fraction):
    coeffs = [_mp(c) for c in f.coeffs]

    def fe(e):
        acc = mpmath.mpf(0)
        for c in reversed(coeffs):
            acc = acc * e + c
        return acc

    with mpmath.workdps(WORK_DPS):
        a, b = _mp(lo), _mp(hi)
        fa, fb = fe(a), fe(b)
        if fa == 0:
            return a
        if fb == 0:
            return b
        for _ in range(400):
            m = (a + b) / 2
            fm = fe(m)
            if fm == 0 or b - a < mpmath.mpf(10) ** (-WORK_DPS + 5) * max(1, abs(m)):
                return m
            if (fm > 0) == (fa > 0):
                a, fa = m, fm
            else:
                b = m
        return (a + b) / 2


def energy_roots(poly_E: MultiPoly) -> list:
    """Real roots of a univariate polynomial in E, exact or polished to WORK_DPS digits."""
    if poly_E.is_zero():
        raise ArithmeticError("eliminant vanished identically")
    if poly_E.is_constant():
        return []
    up = poly_E.to_unipoly("E")
    out = []
    from .mpoly import square_free_decomposition
    for factor, _ in square_free_decomposition(up):
        for r in isolate_real_roots(factor, Fraction(1, 10 ** 12)):
            out.append(r.exact if r.exact is not None else _polish_root(factor, r.lo, r.hi))
    return out


def _solve_generic(params: ModelParams, p_max: int) -> list[SpectrumLine]:
    model = _model(params)
    content, rest = _split_content(model.phi_u)
    rest_has_u = rest.degree("u") > 0
    content_roots = [r.exact if r.exact is not None else _polish_root(content, r.lo, r.hi)
                     for r in isolate_real_roots(content)] if content.degree > 0 else []
    candidates: list[tuple[int, object, object]] = []
    for p in range(p_max + 1):
        shift = {"u": MultiPoly.var("u") + (p + 1)}
        phi1 = model.phi_u.substitute(shift)
        # branch 1: Phi(0) vanishes through an E-independent factor
        for u0 in content_roots:
            coeffs = _poly_in(phi1, "E", {"u": _mp(u0)})
            for E in _real_parts(_mp_roots(coeffs), 1e-20):
                candidates.append((p, u0, E))
        # branch 2: common root of the E-dependent part and Phi(p+1)
        if rest_has_u:
            res = resultant(rest, phi1, "u")
            for E in energy_roots(res):
                coeffs = _poly_in(rest, "u", {"E": _mp(E)})
                for u in _real_parts(_mp_roots(coeffs), 1e-20):
                    candidates.append((p, u, E))
    lines = []
    for p, u, E in candidates:
        z0, z1, ladder, pos = _evaluate_ladder(model, p, u, E, exact=False)
        if not (z0 and z1):
            continue
        name, parity, sg, matched = _label(params, p, u, E)
        lines.append(SpectrumLine(p, name, u, E, ladder, LineFlags(z0, z1, pos, matched), parity, sg, False))
    return _unique_points(lines)


def _unique_points(lines: list[SpectrumLine]) -> list[SpectrumLine]:
    out: list[SpectrumLine] = []
    for ln in lines:
        if not any(o.p == ln.p and _close(o.E, ln.E, 1e-20) and _close(o.u, ln.u, 1e-20) for o in out):
            out.append(ln)
    return out


def _label(params: ModelParams, p: int, u, E):
    """Nearest closed-form branch for u, and the energy formula E matches (if any)."""
    parity = sg = None
    matched = False
    for par in PARITIES:
        for s in (MINUS_ROOT, PLUS_ROOT):
            if _close(E, energy_closed_form(p, params, par, s)):
                parity, sg, matched = par, s, True
                break
        if matched:
            break
    name = "generic"
    if params.kappa != 0:
        best = None
        for bname, cu in zip(BRANCHES, closed_form_u(params, _mp(E))):
            if cu is None:
                continue
            d = abs(_mp(cu) - _mp(u))
            if d <= 1e-8 * max(1, abs(_mp(u))) and (best is None or d < best[0]):
                best = (d, bname)
        if best is not None:
            name = best[1]
    return name, parity, sg, matched


# ---------------------------------------------------------------------------
# amplitudes


def ladder_amplitudes(line: SpectrumLine) -> list:
    """sqrt(Phi(n)) for n = 1..p; exact in Q(sqrt(t)) when the square root exists there."""
    out = []
    for v in line.phi_ladder:
        if sign(v) < 0 if isinstance(v, (Fraction, Surd)) else v < 0:
            raise ValueError("negative structure function value: corrupted line")
        if isinstance(v, (Fraction, Surd)):
            s = v.sqrt() if isinstance(v, Surd) else Surd(v, 0, 0).sqrt()
            out.append(s if s is not None else mpmath.sqrt(_mp(v)))
        else:
            with mpmath.workdps(WORK_DPS):
                out.append(mpmath.sqrt(v))
    if not line.flags.all_positive:
        raise ValueError("ladder is not strictly positive")
    return out


# ---------------------------------------------------------------------------
# u-root check


@dataclass(frozen=True)
class URootCheck:
    E: Fraction
    branch: str
    u: object
    exact_zero: bool | None
    isolated: bool
    error: float | None


def _in_interval(u, root) -> bool:
    if root.exact is not None:
        return u == root.exact
    return root.lo < u <= root.hi


def verify_u_roots(params: ModelParams, energies, tol: float = 1e-12) -> list[URootCheck]:
    """Compare Sturm-isolated real roots of Phi(0, u, E) with the closed-form u-branches.

    Exact branches must vanish exactly and sit inside an isolating interval;
    float branches must lie within ``tol`` of an isolated root.
    """
    model = _model(params)
    out = []
    for E in energies:
        E = Fraction(E)
        roots = isolate_real_roots(model.phi_u.substitute({"E": E}).to_unipoly("u"), Fraction(1, 10 ** 16))
        for name, u in zip(BRANCHES, closed_form_u(params, E)):
            if u is None:
                out.append(URootCheck(E, name, None, None, False, None))  # complex branch
                continue
            if isinstance(u, (Fraction, Surd)):
                zero = model.at(0, u, E) == 0
                hit = any(_in_interval(u, r) for r in roots)
                out.append(URootCheck(E, name, u, zero, hit, 0.0 if hit else None))
            else:
                errs = [abs(_mp(r.mid) - u) for r in roots]
                err = float(min(errs)) if errs else None
                out.append(URootCheck(E, name, u, None, err is not None and err <= tol, err))
    return out
