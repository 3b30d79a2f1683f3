"""Sparse multivariate polynomials over exact scalars.

Coefficients are :class:`fractions.Fraction` or :class:`~.exactnum.Surd`.
Monomials are tuples of ``(variable, exponent)`` pairs; the canonical
variable order is ``x > u > E`` followed by any other names alphabetically.
Reported term order is graded lexicographic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import Iterable, Mapping

import mpmath

from .exactnum import Surd, exact, sign

__all__ = [
    "MultiPoly",
    "RealRoot",
    "UniPoly",
    "collect",
    "isolate_real_roots",
    "poly_arith",
    "real_roots",
    "resultant",
    "square_free_decomposition",
    "sturm_chain",
    "sturm_variations",
    "substitute",
]

_PRIMARY_ORDER = {"x": 0, "u": 1, "E": 2}


def _var_key(name: str):
    return (_PRIMARY_ORDER.get(name, len(_PRIMARY_ORDER)), name)


def _mono_mul(m1: tuple, m2: tuple) -> tuple:
    if not m1:
        return m2
    if not m2:
        return m1
    exps = dict(m1)
    for v, e in m2:
        exps[v] = exps.get(v, 0) + e
    return tuple(sorted(exps.items(), key=lambda ve: _var_key(ve[0])))


def _mono_degree(m: tuple) -> int:
    return sum(e for _, e in m)


def _grlex_key(m: tuple, order: list[str]):
    exps = dict(m)
    return (_mono_degree(m), tuple(exps.get(v, 0) for v in order))


def _scalar(c):
    if isinstance(c, (Fraction, Surd)):
        return c
    return exact(c)


class MultiPoly:
    """Immutable sparse polynomial; ``terms`` maps monomial -> coefficient."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[tuple, object] | None = None):
        clean = {}
        if terms:
            for m, c in terms.items():
                c = _scalar(c)
                if c != 0:
                    clean[tuple(sorted(m, key=lambda ve: _var_key(ve[0])))] = c
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, name, value):
        raise AttributeError("MultiPoly is immutable")

    @classmethod
    def var(cls, name: str) -> "MultiPoly":
        return cls({((name, 1),): Fraction(1)})

    @classmethod
    def const(cls, c) -> "MultiPoly":
        return cls({(): c})

    @staticmethod
    def _lift(other) -> "MultiPoly | None":
        if isinstance(other, MultiPoly):
            return other
        if isinstance(other, (int, Fraction, Surd)) and not isinstance(other, bool):
            return MultiPoly.const(other)
        return None

    # arithmetic -----------------------------------------------------------
    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        out = dict(self.terms)
        for m, c in o.terms.items():
            out[m] = out[m] + c if m in out else c
        return MultiPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        if not self.terms or not o.terms:
            return MultiPoly()
        if len(o.terms) == 1 and () in o.terms:
            k = o.terms[()]
            return MultiPoly({m: c * k for m, c in self.terms.items()})
        out: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in o.terms.items():
                m = _mono_mul(m1, m2)
                v = c1 * c2
                out[m] = out[m] + v if m in out else v
        return MultiPoly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            return NotImplemented
        result, base = MultiPoly.const(1), self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self.terms == o.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    # inspection -----------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and () in self.terms)

    def constant_value(self):
        if not self.is_constant():
            raise ValueError("polynomial is not constant")
        return self.terms.get((), Fraction(0))

    def variables(self) -> list[str]:
        names = {v for m in self.terms for v, _ in m}
        return sorted(names, key=_var_key)

    def degree(self, var: str | None = None) -> int:
        """Total degree, or degree in ``var``; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        if var is None:
            return max(_mono_degree(m) for m in self.terms)
        return max(dict(m).get(var, 0) for m in self.terms)

    def sorted_terms(self, order: list[str] | None = None) -> list[tuple[tuple, object]]:
        order = order or self.variables()
        return sorted(self.terms.items(), key=lambda mc: _grlex_key(mc[0], order), reverse=True)

    def leading_term(self, order: list[str]) -> tuple[tuple, object]:
        return max(self.terms.items(), key=lambda mc: _grlex_key(mc[0], order))

    def coefficient(self, monomial: Mapping[str, int]) -> object:
        m = tuple(sorted(((v, e) for v, e in monomial.items() if e), key=lambda ve: _var_key(ve[0])))
        return self.terms.get(m, Fraction(0))

    # substitution ---------------------------------------------------------
    def substitute(self, bindings: Mapping[str, object]) -> "MultiPoly":
        """Replace variables by scalars or polynomials; unbound ones stay symbolic."""
        if not bindings:
            return self
        lifted = {v: (b if isinstance(b, MultiPoly) else MultiPoly.const(b)) for v, b in bindings.items()}
        powers: dict[tuple[str, int], MultiPoly] = {}

        def power(v, e):
            key = (v, e)
            if key not in powers:
                powers[key] = lifted[v] ** e
            return powers[key]

        acc: dict = {}
        for m, c in self.terms.items():
            kept = tuple((v, e) for v, e in m if v not in lifted)
            factor = MultiPoly({kept: c})
            for v, e in m:
                if v in lifted:
                    factor = factor * power(v, e)
            for mm, cc in factor.terms.items():
                acc[mm] = acc[mm] + cc if mm in acc else cc
        return MultiPoly(acc)

    def evaluate(self, bindings: Mapping[str, object]):
        """Exact value once every variable is bound to a scalar."""
        missing = set(self.variables()) - set(bindings)
        if missing:
            raise ValueError(f"unbound variables {sorted(missing)}")
        total = Fraction(0)
        cache: dict = {}
        for m, c in self.terms.items():
            term = c
            for v, e in m:
                key = (v, e)
                if key not in cache:
                    cache[key] = _scalar(bindings[v]) ** e
                term = term * cache[key]
            total = total + term
        return total

    def evaluate_mp(self, bindings: Mapping[str, object], dps: int = 50):
        """Evaluate in mpmath; returns ``(value, scale)``.

        ``scale`` is the sum of absolute term magnitudes, the natural yardstick
        for deciding whether a float-path value is zero.
        """
        from .exactnum import to_float

        prec = int(dps * 3.33) + 8
        with mpmath.workprec(prec):
            vals = {v: (b if isinstance(b, (mpmath.mpf, mpmath.mpc)) else
                        (to_float(b, prec) if isinstance(b, (Fraction, Surd, int)) else mpmath.mpf(b)))
                    for v, b in bindings.items()}
            total = mpmath.mpf(0)
            scale = mpmath.mpf(0)
            for m, c in self.terms.items():
                term = to_float(c, prec)
                for v, e in m:
                    term = term * vals[v] ** e
                total += term
                scale += abs(term)
            return total, scale

    def collect(self, var: str) -> "UniPoly":
        """View as a polynomial in ``var`` with MultiPoly coefficients."""
        buckets: dict[int, dict] = {}
        for m, c in self.terms.items():
            e = dict(m).get(var, 0)
            rest = tuple((v, k) for v, k in m if v != var)
            buckets.setdefault(e, {})[rest] = c
        if not buckets:
            return UniPoly([], var)
        deg = max(buckets)
        return UniPoly([MultiPoly(buckets.get(i, {})) for i in range(deg + 1)], var)

    def to_unipoly(self, var: str) -> "UniPoly":
        """Univariate view with scalar coefficients; other variables must be absent."""
        others = [v for v in self.variables() if v != var]
        if others:
            raise ValueError(f"polynomial still depends on {others}")
        return UniPoly([c.constant_value() for c in self.collect(var).coeffs], var)

    def content(self) -> Fraction:
        """Positive rational gcd of the coefficients (rational coefficients only)."""
        coeffs = list(self.terms.values())
        if not coeffs or any(isinstance(c, Surd) and not c.is_rational for c in coeffs):
            return Fraction(1)
        coeffs = [c.rational() if isinstance(c, Surd) else c for c in coeffs]
        num = reduce(math.gcd, (c.numerator for c in coeffs))
        den = reduce(lambda a, b: a * b // math.gcd(a, b), (c.denominator for c in coeffs))
        return Fraction(num, den)

    def exact_div(self, other: "MultiPoly") -> "MultiPoly":
        """Quotient of an exact division; raises ``ArithmeticError`` otherwise."""
        o = self._lift(other)
        if o is None or o.is_zero():
            raise ZeroDivisionError("division by zero polynomial")
        if o.is_constant():
            k = o.constant_value()
            return MultiPoly({m: c / k for m, c in self.terms.items()})
        order = sorted(set(self.variables()) | set(o.variables()), key=_var_key)
        lm_o, lc_o = o.leading_term(order)
        rem, quo = self, {}
        while rem.terms:
            lm, lc = rem.leading_term(order)
            de = dict(lm)
            for v, e in lm_o:
                de[v] = de.get(v, 0) - e
                if de[v] < 0:
                    raise ArithmeticError("inexact polynomial division")
            qm = tuple(sorted(((v, e) for v, e in de.items() if e), key=lambda ve: _var_key(ve[0])))
            qc = lc / lc_o
            quo[qm] = qc
            rem = rem - MultiPoly({qm: qc}) * o
        return MultiPoly(quo)

    def __repr__(self):
        return f"MultiPoly({self})"

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for m, c in self.sorted_terms():
            mono = "*".join(v if e == 1 else f"{v}^{e}" for v, e in m)
            cs = f"({c})" if isinstance(c, Surd) and not c.is_rational else str(c)
            parts.append(cs if not mono else (mono if c == 1 else f"{cs}*{mono}"))
        return " + ".join(parts)


def poly_arith(p: MultiPoly, q: MultiPoly, op: str) -> MultiPoly:
    if op == "add":
        return p + q
    if op == "sub":
        return p - q
    if op == "mul":
        return p * q
    raise ValueError(f"unknown operation {op!r}")


def substitute(p: MultiPoly, bindings: Mapping[str, object]) -> MultiPoly:
    return p.substitute(bindings)


def collect(p: MultiPoly, var: str) -> "UniPoly":
    return p.collect(var)


# ---------------------------------------------------------------------------
# univariate polynomials


class UniPoly:
    """Dense univariate polynomial, ascending coefficients, no trailing zeros."""

    __slots__ = ("coeffs", "var")

    def __init__(self, coeffs: Iterable, var: str = "x"):
        cs = list(coeffs)
        while cs and not cs[-1]:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))
        object.__setattr__(self, "var", var)

    def __setattr__(self, name, value):
        raise AttributeError("UniPoly is immutable")

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def lc(self):
        if not self.coeffs:
            raise ValueError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def is_zero(self) -> bool:
        return not self.coeffs

    def __call__(self, x):
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def _like(self, coeffs):
        return UniPoly(coeffs, self.var)

    def __add__(self, other):
        if not isinstance(other, UniPoly):
            other = self._like([other])
        n = max(len(self.coeffs), len(other.coeffs))
        a = list(self.coeffs) + [0] * (n - len(self.coeffs))
        b = list(other.coeffs) + [0] * (n - len(other.coeffs))
        return self._like([x + y for x, y in zip(a, b)])

    def __neg__(self):
        return self._like([-c for c in self.coeffs])

    def __sub__(self, other):
        if not isinstance(other, UniPoly):
            other = self._like([other])
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, UniPoly):
            return self._like([c * other for c in self.coeffs])
        if not self.coeffs or not other.coeffs:
            return self._like([])
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a * b
        return self._like(out)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, UniPoly):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.coeffs, self.var))

    def derivative(self) -> "UniPoly":
        return self._like([c * i for i, c in enumerate(self.coeffs)][1:])

    def divmod(self, other: "UniPoly") -> tuple["UniPoly", "UniPoly"]:
        """Euclidean division over a field of coefficients."""
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = other.degree
        lc = other.lc()
        if len(rem) - 1 < dq:
            return self._like([]), self
        quo = [Fraction(0)] * (len(rem) - dq)
        for k in range(len(rem) - 1, dq - 1, -1):
            c = rem[k]
            if not c:
                continue
            f = c / lc
            quo[k - dq] = f
            for j, b in enumerate(other.coeffs):
                rem[k - dq + j] = rem[k - dq + j] - f * b
        return self._like(quo), self._like(rem[:dq])

    def __floordiv__(self, other):
        return self.divmod(other)[0]

    def __mod__(self, other):
        return self.divmod(other)[1]

    def monic(self) -> "UniPoly":
        if self.is_zero():
            return self
        lc = self.lc()
        return self._like([c / lc for c in self.coeffs])

    def scaled_positive(self) -> "UniPoly":
        """Divide by |lc| (a positive constant), keeping the sign pattern."""
        if self.is_zero():
            return self
        lc = self.lc()
        k = lc if sign(lc) > 0 else -lc
        return self._like([c / k for c in self.coeffs])

    def gcd(self, other: "UniPoly") -> "UniPoly":
        a, b = self, other
        while not b.is_zero():
            a, b = b, (a % b).monic()
        return a.monic()

    def to_multipoly(self) -> MultiPoly:
        terms = {}
        for i, c in enumerate(self.coeffs):
            if isinstance(c, MultiPoly):
                for m, cc in c.terms.items():
                    mm = _mono_mul(m, ((self.var, i),) if i else ())
                    terms[mm] = terms[mm] + cc if mm in terms else cc
            elif c:
                terms[((self.var, i),) if i else ()] = c
        return MultiPoly(terms)

    def __repr__(self):
        return f"UniPoly({list(self.coeffs)}, {self.var!r})"


def square_free_decomposition(p: UniPoly) -> list[tuple[UniPoly, int]]:
    """Yun's algorithm: ``p = lc * prod f_i**i`` with square-free, coprime ``f_i``."""
    if p.is_zero():
        raise ValueError("zero polynomial")
    if p.degree == 0:
        return []
    out = []
    a = p.monic()
    b = a.derivative()
    c = a.gcd(b)
    w = a // c
    i = 1
    while c.degree > 0:
        y = w.gcd(c)
        z = w // y
        if z.degree > 0:
            out.append((z.monic(), i))
        i += 1
        w = y
        c = c // y
    if w.degree > 0:
        out.append((w.monic(), i))
    return out


# ---------------------------------------------------------------------------
# Sturm isolation


def sturm_chain(p: UniPoly) -> list[UniPoly]:
    chain = [p.scaled_positive(), p.derivative().scaled_positive()]
    while chain[-1].degree > 0:
        r = -(chain[-2] % chain[-1])
        if r.is_zero():
            break
        chain.append(r.scaled_positive())
    return chain


def sturm_variations(chain: list[UniPoly], x) -> int:
    signs = [s for s in (sign(q(x)) for q in chain) if s != 0]
    return sum(1 for s0, s1 in zip(signs, signs[1:]) if s0 != s1)


def _upper_abs(c) -> Fraction:
    if isinstance(c, Surd):
        return abs(c.a) + abs(c.b) * (math.isqrt(math.ceil(c.t)) + 1)
    return abs(Fraction(c))


def _cauchy_bound(p: UniPoly) -> Fraction:
    lc = p.lc()
    bound = Fraction(0)
    for c in p.coeffs[:-1]:
        if c:
            bound = max(bound, _upper_abs(c / lc))
    return 1 + bound


def _simplest_between(lo: Fraction, hi: Fraction) -> Fraction:
    """Simplest rational in the closed interval [lo, hi] (Stern-Brocot)."""
    if lo > hi:
        lo, hi = hi, lo
    if lo <= 0 <= hi:
        return Fraction(0)
    if hi < 0:
        return -_simplest_between(-hi, -lo)
    fl = lo.numerator // lo.denominator
    if Fraction(fl) == lo:
        return lo
    if fl + 1 <= hi:
        return Fraction(fl + 1)
    rest = _simplest_between(1 / (hi - fl), 1 / (lo - fl))
    return fl + 1 / rest


@dataclass(frozen=True)
class RealRoot:
    """An isolated real root: ``lo < root <= hi`` unless ``exact`` is set."""

    lo: Fraction
    hi: Fraction
    multiplicity: int
    exact: Fraction | None = None

    @property
    def mid(self) -> Fraction:
        return self.exact if self.exact is not None else (self.lo + self.hi) / 2

    @property
    def value(self) -> Fraction | float:
        return self.exact if self.exact is not None else float(self.mid)

    def mp(self, dps: int = 50) -> mpmath.mpf:
        m = self.mid
        with mpmath.workdps(dps):
            return mpmath.mpf(m.numerator) / m.denominator


_EXACT_DENOM_BITS = 64


def _refine(f: UniPoly, lo: Fraction, hi: Fraction, tol: Fraction) -> tuple[Fraction, Fraction, Fraction | None]:
    """Shrink an isolating interval (lo, hi] of a simple root of square-free f."""
    fhi = sign(f(hi))
    if fhi == 0:
        return hi, hi, hi
    last_q = None
    while hi - lo > tol:
        q = _simplest_between(lo, hi)
        if q != lo and q != last_q and q.denominator.bit_length() <= _EXACT_DENOM_BITS:
            last_q = q
            if sign(f(q)) == 0:
                return q, q, q
        mid = (lo + hi) / 2
        fm = sign(f(mid))
        if fm == 0:
            return mid, mid, mid
        if fm == fhi:
            hi = mid
        else:
            lo = mid
    return lo, hi, None


def isolate_real_roots(p: UniPoly, tol: float | Fraction = 1e-12) -> list[RealRoot]:
    """All real roots with multiplicity, as isolating intervals of width <= tol."""
    if p.is_zero():
        raise ValueError("zero polynomial has no isolated roots")
    tol = Fraction(tol) if not isinstance(tol, Fraction) else tol
    roots: list[RealRoot] = []
    for factor, mult in square_free_decomposition(p):
        chain = sturm_chain(factor)
        bound = _cauchy_bound(factor)
        lo, hi = -bound, bound
        stack = [(lo, hi, sturm_variations(chain, lo), sturm_variations(chain, hi))]
        while stack:
            a, b, va, vb = stack.pop()
            n = va - vb
            if n <= 0:
                continue
            if n == 1:
                rlo, rhi, ex = _refine(factor, a, b, tol)
                roots.append(RealRoot(rlo, rhi, mult, ex))
                continue
            m = (a + b) / 2
            vm = sturm_variations(chain, m)
            stack.append((a, m, va, vm))
            stack.append((m, b, vm, vb))
    roots.sort(key=lambda r: r.mid)
    return roots


def real_roots(p: UniPoly, tol: float = 1e-12) -> list[tuple[Fraction | float, int]]:
    """Real roots as ``(value, multiplicity)``; exact rationals stay Fractions."""
    return [(r.value, r.multiplicity) for r in isolate_real_roots(p, tol)]


# ---------------------------------------------------------------------------
# resultants


def _bareiss_det(rows: list[list]) -> object:
    """Fraction-free determinant; entries must support exact division."""
    n = len(rows)
    if n == 0:
        return Fraction(1)
    m = [list(r) for r in rows]
    is_poly = any(isinstance(e, MultiPoly) for r in m for e in r)
    zero = (lambda e: e.is_zero()) if is_poly else (lambda e: not e)
    div = (lambda a, b: a.exact_div(b)) if is_poly else (
        lambda a, b: a // b if isinstance(a, int) and isinstance(b, int) else a / b)
    sgn = 1
    prev = 1
    for k in range(n - 1):
        if zero(m[k][k]):
            for i in range(k + 1, n):
                if not zero(m[i][k]):
                    m[k], m[i] = m[i], m[k]
                    sgn = -sgn
                    break
            else:
                return MultiPoly() if is_poly else 0
        pk = m[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = div(m[i][j] * pk - m[i][k] * m[k][j], prev)
        prev = pk
    det = m[n - 1][n - 1]
    return det if sgn > 0 else -det


def _sylvester(pc: list, qc: list) -> list[list]:
    """Sylvester matrix from descending coefficient lists."""
    m, n = len(pc) - 1, len(qc) - 1
    size = m + n
    zero = Fraction(0)
    rows = []
    for i in range(n):
        rows.append([zero] * i + list(pc) + [zero] * (size - m - 1 - i))
    for i in range(m):
        rows.append([zero] * i + list(qc) + [zero] * (size - n - 1 - i))
    return rows


def _newton_interpolate(xs: list, ys: list, var: str) -> UniPoly:
    n = len(xs)
    coef = list(ys)
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) / (xs[i] - xs[i - j])
    poly = UniPoly([coef[-1]], var)
    for i in range(n - 2, -1, -1):
        poly = poly * UniPoly([-xs[i], Fraction(1)], var) + coef[i]
    return poly


def _integer_scale(p: MultiPoly) -> Fraction:
    """Rational k > 0 with k*p integral, or 1 when coefficients are irrational."""
    c = p.content()
    return 1 / c if c != 0 else Fraction(1)


def resultant(p: MultiPoly | UniPoly, q: MultiPoly | UniPoly, eliminated: str) -> MultiPoly:
    """Sylvester resultant of p and q with respect to ``eliminated``.

    With at most one remaining variable the determinant is evaluated at
    integer points in integer arithmetic and interpolated exactly; otherwise a
    fraction-free elimination runs directly on polynomial entries.
    """
    if isinstance(p, UniPoly):
        p = p.to_multipoly()
    if isinstance(q, UniPoly):
        q = q.to_multipoly()
    if p.is_zero() or q.is_zero():
        raise ValueError("resultant of a zero polynomial")
    m, n = p.degree(eliminated), q.degree(eliminated)
    if m <= 0 and n <= 0:
        raise ValueError(f"both inputs are constant in {eliminated!r}")
    if m == 0:
        return p ** n
    if n == 0:
        return q ** m

    kp, kq = _integer_scale(p), _integer_scale(q)
    ps, qs = p * kp, q * kq
    pc = list(reversed(ps.collect(eliminated).coeffs))
    qc = list(reversed(qs.collect(eliminated).coeffs))
    others = sorted({v for c in pc + qc for v in c.variables()}, key=_var_key)
    unscale = 1 / (kp ** n * kq ** m)

    if len(others) >= 2:
        det = _bareiss_det(_sylvester(pc, qc))
        return det * unscale

    if not others:
        rows = _sylvester([c.constant_value() for c in pc], [c.constant_value() for c in qc])
        return MultiPoly.const(_scalar_det(rows) * unscale)

    var = others[0]
    dp = max(c.degree(var) for c in pc)
    dq = max(c.degree(var) for c in qc)
    bound = n * max(dp, 0) + m * max(dq, 0)
    xs = [Fraction((k + 1) // 2 * (1 if k % 2 else -1)) for k in range(bound + 1)]
    pu = [c.collect(var) for c in pc]
    qu = [c.collect(var) for c in qc]
    ys = []
    for x in xs:
        pv = [_eval_coeffs(c, x) for c in pu]
        qv = [_eval_coeffs(c, x) for c in qu]
        ys.append(_scalar_det(_sylvester(pv, qv)))
    poly = _newton_interpolate(xs, ys, var)
    return poly.to_multipoly() * unscale


def _eval_coeffs(c: UniPoly, x: Fraction):
    acc = Fraction(0)
    for k in reversed(c.coeffs):
        acc = acc * x + k.constant_value()
    return acc


def _scalar_det(rows: list[list]):
    flat = [e for r in rows for e in r]
    if all(isinstance(e, Fraction) and e.denominator == 1 for e in flat):
        int_rows = [[e.numerator for e in r] for r in rows]
        return Fraction(_bareiss_det(int_rows))
    return _bareiss_det(rows)
