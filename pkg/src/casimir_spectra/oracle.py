"""Independent finite-difference eigensolver for the curved oscillator and the
adjudication of algebraic spectra against it.

Separating e^{i m phi} R(r) in the Noether-momentum form of the Hamiltonian
gives the radial operator

    -(hbar^2/2) [(1 + lam r^2)(R'' + R'/r) + lam r R'] + hbar^2 m^2/(2 r^2)
    + omega^2 r^2 / (2 (1 + lam r^2)).

In the geodesic radius s (dr/ds = sqrt(1 + lam r^2)) this becomes
-(hbar^2/2)(1/r) d/ds(r dR/ds) + V(s), self-adjoint for the weight r ds.  A
cell-centred grid puts the flux r on half points, with r = 0 at the origin,
so no inner boundary condition is needed; the outer wall is Dirichlet.

On the sphere (lam < 0) the whole disk r < 1/sqrt(-lam) maps to the finite
interval s < pi/(2 sqrt(-lam)).  The potential diverges there and R vanishes,
so Dirichlet at that point is exact rather than a truncation; cell centres
never touch it.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np
from scipy import sparse
from scipy.linalg import eigh_tridiagonal
from scipy.sparse.linalg import ArpackNoConvergence, eigsh

from .params import ModelParams

log = logging.getLogger(__name__)

DENSE_MAX = 1024
DECAY_TOL = 1e-8
TAIL_FRACTION = 0.05
MAX_WIDENINGS = 4


class OracleDomainError(ValueError):
    """Grid reaches past the coordinate disk r < 1/sqrt(-lambda)."""


class OracleConvergenceError(RuntimeError):
    """The iterative eigensolver hit its iteration cap."""


@dataclass(frozen=True)
class GridSpec:
    n_r: int = 512
    r_max: float | None = None  # None: chosen from hbar, omega and the levels requested
    m_max: int | None = None
    refinement_levels: int = 3

    def __post_init__(self):
        if self.n_r < 64:
            raise ValueError("n_r must be >= 64")
        if self.refinement_levels < 1:
            raise ValueError("refinement_levels must be >= 1")
        if self.r_max is not None and self.r_max <= 0:
            raise ValueError("r_max must be positive")


def radius_of(s: np.ndarray, lam: float) -> np.ndarray:
    """Coordinate radius r at geodesic distance s."""
    if lam > 0:
        q = math.sqrt(lam)
        return np.sinh(q * s) / q
    if lam < 0:
        q = math.sqrt(-lam)
        return np.sin(q * s) / q
    return np.asarray(s, dtype=float)


def geodesic_of(r: float, lam: float) -> float:
    if lam > 0:
        q = math.sqrt(lam)
        return math.asinh(q * r) / q
    if lam < 0:
        q = math.sqrt(-lam)
        if q * r > 1:
            raise OracleDomainError(f"r_max = {r} must not exceed 1/sqrt(-lambda) = {1 / q}")
        return math.asin(q * r) / q
    return r


def wall_limit(lam: float) -> float | None:
    """Geodesic radius of the disk boundary on the sphere (None otherwise)."""
    if lam >= 0:
        return None
    return math.pi / (2 * math.sqrt(-lam))


@dataclass(frozen=True)
class RadialOperator:
    """Symmetric tridiagonal matrix (diag, off) on cell centres s."""

    m: int
    s: np.ndarray
    diag: np.ndarray
    off: np.ndarray

    def to_sparse(self):
        return sparse.diags([self.off, self.diag, self.off], [-1, 0, 1], format="csc")

    def dense(self) -> np.ndarray:
        return np.diag(self.diag) + np.diag(self.off, 1) + np.diag(self.off, -1)


def _operator(m: int, params: ModelParams, s_max: float, n: int) -> RadialOperator:
    lam, hb, w2 = float(params.lam), float(params.hbar), float(params.omega_sq)
    h = s_max / n
    s = (np.arange(n) + 0.5) * h
    r = radius_of(s, lam)
    r_half = radius_of(np.arange(n + 1) * h, lam)
    g = 1 + lam * r ** 2
    if np.any(g <= 0):
        raise OracleDomainError("grid leaves the metric domain")
    V = hb ** 2 * m ** 2 / (2 * r ** 2) + w2 * r ** 2 / (2 * g)
    c = hb ** 2 / (2 * h ** 2)
    diag = c * (r_half[1:] + r_half[:-1]) / r + V
    off = -c * r_half[1:-1] / np.sqrt(r[:-1] * r[1:])
    return RadialOperator(m, s, diag, off)


def radial_operator(m: int, params: ModelParams, grid: GridSpec, s_max: float | None = None) -> RadialOperator:
    """Discrete radial operator of angular sector m on ``grid.n_r`` cells."""
    lam = float(params.lam)
    if s_max is None:
        s_max = geodesic_of(grid.r_max, lam) if grid.r_max is not None else auto_s_max(params, 6, abs(m))
    limit = wall_limit(lam)
    if limit is not None and s_max > limit * (1 + 1e-12):
        raise OracleDomainError("r_max beyond the sphere wall")
    return _operator(m, params, s_max, grid.n_r)


def auto_s_max(params: ModelParams, k: int, m_max: int) -> float:
    hb, w = float(params.hbar), params.omega
    if w <= 0:
        raise ValueError("the oracle needs omega > 0")
    n_top = 2 * k + m_max + 1
    s_max = math.sqrt(hb / w) * (math.sqrt(2 * n_top + 1) + 7)
    limit = wall_limit(float(params.lam))
    return min(s_max, limit) if limit is not None else s_max


def _lowest(op: RadialOperator, k: int) -> tuple[np.ndarray, np.ndarray]:
    n = len(op.diag)
    if n <= DENSE_MAX:
        vals, vecs = eigh_tridiagonal(op.diag, op.off, select="i", select_range=(0, k - 1))
        return vals, vecs
    try:
        # operator is positive definite: the eigenvalues nearest 0 are the lowest
        vals, vecs = eigsh(op.to_sparse(), k=k, sigma=0.0, which="LM", maxiter=10000, tol=0)
    except ArpackNoConvergence as exc:
        raise OracleConvergenceError(str(exc)) from exc
    order = np.argsort(vals)
    return vals[order], vecs[:, order]


@dataclass(frozen=True)
class OracleLevel:
    E: float              # Richardson-extrapolated
    m: int
    level: int            # radial index within the sector
    error: float          # |E_fine - E_mid| / 3
    order: float | None   # observed convergence order (None if shifts are at round-off)
    decayed: bool
    E_grids: tuple[float, ...] = ()

    def as_dict(self) -> dict:
        return {"E": self.E, "m": self.m, "level": self.level, "error": self.error,
                "order": self.order, "decayed": self.decayed, "E_grids": list(self.E_grids)}


@dataclass
class OracleSpectrum:
    params: ModelParams
    levels: list[OracleLevel]
    cutoff: float                 # merged list complete for E <= cutoff
    threshold: float | None       # continuum edge for lambda > 0
    s_max: float
    n_r: int
    m_max: int
    k_lowest: int

    @property
    def eigenvalues(self) -> list[float]:
        return [lv.E for lv in self.levels]

    def resolved(self) -> list[OracleLevel]:
        return [lv for lv in self.levels if lv.decayed]

    def as_dict(self) -> dict:
        return {"params": self.params.as_dict(), "cutoff": self.cutoff, "threshold": self.threshold,
                "s_max": self.s_max, "n_r": self.n_r, "m_max": self.m_max, "k_lowest": self.k_lowest,
                "levels": [lv.as_dict() for lv in self.levels]}


def _decayed(vec: np.ndarray) -> bool:
    a = np.abs(vec)
    tail = a[int(len(a) * (1 - TAIL_FRACTION)):]
    return bool(tail.max() <= DECAY_TOL * a.max())


def _sector(params: ModelParams, m: int, k: int, s_max: float, grid: GridSpec, at_wall: bool = False):
    vals = []
    vec = None
    for lvl in range(grid.refinement_levels):
        n = grid.n_r * 2 ** lvl
        v, vecs = _lowest(_operator(m, params, s_max, n), k)
        vals.append(v)
        vec = vecs
    decay = [at_wall or _decayed(vec[:, j]) for j in range(k)]
    return np.array(vals), decay


def _extrapolate(vals: np.ndarray):
    """Richardson for a second-order scheme with grids n, 2n, 4n."""
    if len(vals) < 2:
        return vals[-1], np.full(vals.shape[1], np.inf), [None] * vals.shape[1]
    fine, mid = vals[-1], vals[-2]
    E = fine + (fine - mid) / 3
    err = np.abs(fine - mid) / 3
    orders = []
    for j in range(vals.shape[1]):
        if len(vals) < 3:
            orders.append(None)
            continue
        d1, d2 = abs(vals[-2][j] - vals[-3][j]), abs(fine[j] - mid[j])
        if d2 <= 1e-11 * max(1.0, abs(fine[j])) or d1 == 0:
            orders.append(None)
        else:
            orders.append(math.log2(d1 / d2))
    return E, err, orders


def oracle_spectrum(params: ModelParams, grid: GridSpec = GridSpec(), k_lowest: int = 6) -> OracleSpectrum:
    """k_lowest eigenvalues in every sector |m| <= m_max (both signs of m listed)."""
    if k_lowest < 1 or k_lowest > grid.n_r // 4:
        raise ValueError("k_lowest must lie in 1..n_r/4")
    lam = float(params.lam)
    m_max = grid.m_max if grid.m_max is not None else k_lowest - 1
    if grid.r_max is not None:
        s_max = geodesic_of(grid.r_max, lam)
        widenings = 0
    else:
        s_max = auto_s_max(params, k_lowest, m_max)
        widenings = MAX_WIDENINGS if lam > 0 else 0

    limit = wall_limit(lam)
    at_wall = limit is not None and s_max >= limit * (1 - 1e-12)
    while True:
        sectors = {m: _sector(params, m, k_lowest, s_max, grid, at_wall) for m in range(m_max + 1)}
        if widenings == 0 or all(all(d) for _, d in sectors.values()):
            break
        widenings -= 1
        s_max *= 1.5
        log.info("widening oracle domain to s_max=%.3g", s_max)

    levels = []
    top = []
    for m, (vals, decay) in sectors.items():
        E, err, orders = _extrapolate(vals)
        top.append(E[-1])
        for j in range(k_lowest):
            for mm in ((m,) if m == 0 else (m, -m)):
                levels.append(OracleLevel(float(E[j]), mm, j, float(err[j]), orders[j], decay[j],
                                          tuple(float(v[j]) for v in vals)))
    levels.sort(key=lambda lv: (lv.E, abs(lv.m), lv.m))
    E_mmax0 = min(lv.E for lv in levels if abs(lv.m) == m_max and lv.level == 0)
    cutoff = min(min(top), E_mmax0)
    undecayed = [lv.E for lv in levels if not lv.decayed]
    if undecayed:
        cutoff = min(cutoff, min(undecayed))
    # potential plateau plus the bottom of the hyperbolic Laplacian
    threshold = (float(params.omega_sq) / (2 * lam) + float(params.hbar) ** 2 * lam / 8) if lam > 0 else None
    return OracleSpectrum(params, levels, float(cutoff), threshold, float(s_max), grid.n_r, m_max, k_lowest)


# ---------------------------------------------------------------------------
# adjudication


@dataclass(frozen=True)
class LineMatch:
    p: int
    parity: str | None
    u_branch: str
    E: float
    oracle_E: float | None
    m: int | None
    level: int | None
    diff: float | None
    tol: float | None
    matched: bool


@dataclass
class ConventionResult:
    name: str
    matched: list[LineMatch] = field(default_factory=list)
    unmatched: list[LineMatch] = field(default_factory=list)
    out_of_range: list[LineMatch] = field(default_factory=list)

    @property
    def all_matched(self) -> bool:
        return bool(self.matched) and not self.unmatched

    def as_dict(self) -> dict:
        def rows(items):
            return [vars(x) for x in items]
        return {"name": self.name, "n_matched": len(self.matched), "n_unmatched": len(self.unmatched),
                "n_out_of_range": len(self.out_of_range), "all_matched": self.all_matched,
                "matched": rows(self.matched), "unmatched": rows(self.unmatched),
                "out_of_range": rows(self.out_of_range)}


@dataclass
class AdjudicationReport:
    conventions: dict[str, ConventionResult]
    verdict: str | None            # the unique convention matching every in-range line
    best: str | None               # convention with the most matches
    cutoff: float | None
    threshold: float | None
    matching_stops_at: float | None

    def as_dict(self) -> dict:
        return {"verdict": self.verdict, "best": self.best, "cutoff": self.cutoff, "threshold": self.threshold,
                "matching_stops_at": self.matching_stops_at,
                "conventions": {k: v.as_dict() for k, v in sorted(self.conventions.items())}}


def adjudicate(algebraic, numeric: OracleSpectrum, tol: float = 1e-9, factor: float = 3.0) -> AdjudicationReport:
    """Match every algebraic energy to the nearest resolved oracle eigenvalue.

    A line is in range when E <= the oracle's resolved cutoff (and below the
    continuum threshold for lambda > 0).  It matches when the distance is
    within ``factor`` times the Richardson estimate, floored at
    ``tol * max(1, |E|)`` for round-off.
    """
    from .spectrum import SIGN_NAMES

    algebraic = list(algebraic)
    if not algebraic:
        return AdjudicationReport({}, None, None, None, None, None)
    resolved = numeric.resolved()
    results: dict[str, ConventionResult] = {}
    for line in algebraic:
        name = SIGN_NAMES.get(line.sign, "unlabelled")
        res = results.setdefault(name, ConventionResult(name))
        E = line.E_float
        base = dict(p=line.p, parity=line.parity, u_branch=line.u_branch, E=E)
        in_range = E <= numeric.cutoff and (numeric.threshold is None or E < numeric.threshold)
        if not in_range:
            res.out_of_range.append(LineMatch(**base, oracle_E=None, m=None, level=None, diff=None, tol=None,
                                              matched=False))
            continue
        best = min(resolved, key=lambda lv: abs(lv.E - E)) if resolved else None
        if best is None:
            res.unmatched.append(LineMatch(**base, oracle_E=None, m=None, level=None, diff=None, tol=None,
                                           matched=False))
            continue
        diff = abs(best.E - E)
        allowed = max(factor * best.error, tol * max(1.0, abs(E)))
        lm = LineMatch(**base, oracle_E=best.E, m=best.m, level=best.level, diff=diff, tol=allowed,
                       matched=diff <= allowed)
        (res.matched if lm.matched else res.unmatched).append(lm)
    winners = [k for k, v in results.items() if v.all_matched]
    verdict = winners[0] if len(winners) == 1 else None
    best_name = max(results, key=lambda k: (len(results[k].matched), -len(results[k].unmatched)))
    stops = None
    if verdict is not None:
        stops = max(m.E for m in results[verdict].matched)
    return AdjudicationReport(results, verdict, best_name, numeric.cutoff, numeric.threshold, stops)
