"""Command-line interface: ``casimir-spectra <command> [flags]``.

Reports go to stdout (or ``--out``) as JSON or CSV; logs go to stderr.
Exit codes: 0 success, 1 invariant violation, 2 invalid input.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath

from . import __version__
from .classical import CONSTRAINT_TOL, DEFAULT_STEP, DEFAULT_TOL, resolve_convention, verify_quadratic_poisson
from .exactnum import Surd, exact
from .oracle import GridSpec, OracleConvergenceError, OracleDomainError, adjudicate, oracle_spectrum
from .params import KAPPA_MINUS_LAMBDA, KAPPA_PLUS_LAMBDA, ModelParams
from .qalgebra import UnsupportedBranchError, verify_phi_identity
from .spectrum import (
    BRANCHES,
    EVEN,
    PLUS_ROOT,
    ODD,
    MINUS_ROOT,
    SpectrumLine,
    ladder_amplitudes,
    solve_spectrum,
)

SCHEMA = "casimir-spectra/1"
EXIT_OK, EXIT_VIOLATION, EXIT_INVALID = 0, 1, 2
MIN_ORDER = 1.9

log = logging.getLogger("casimir_spectra")


class InvalidInput(ValueError):
    pass


@dataclass
class Report:
    command: str
    params: dict
    payload: dict
    rows: list[dict] = field(default_factory=list)  # CSV view
    ok: bool = True

    def to_json(self) -> str:
        doc = {"schema": SCHEMA, "command": self.command, "params": self.params, **self.payload}
        return json.dumps(doc, sort_keys=True, indent=2, allow_nan=False, default=_json_default) + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        if self.rows:
            cols = list(self.rows[0])
            w = csv.DictWriter(buf, fieldnames=cols, lineterminator="\n")
            w.writeheader()
            for r in self.rows:
                w.writerow({k: _csv_cell(v) for k, v in r.items()})
        return buf.getvalue()


def _json_default(o):
    if isinstance(o, (Fraction, Surd)):
        return str(o)
    if isinstance(o, mpmath.mpf):
        return float(o)
    raise TypeError(f"not serializable: {type(o).__name__}")


def _csv_cell(v):
    if isinstance(v, float):
        return repr(v)
    if isinstance(v, (list, tuple)):
        return ";".join(_csv_cell(x) for x in v)
    return v


def _num(v) -> float:
    """Float view of an exact or mpmath value; repr round-trips exactly."""
    if isinstance(v, (Fraction, Surd)):
        from .exactnum import to_float
        return float(to_float(v, 64))
    return float(v)


def _exact_str(v) -> str | None:
    return str(v) if isinstance(v, (Fraction, Surd)) else None


# ---------------------------------------------------------------------------
# argument parsing


def _add_params(p: argparse.ArgumentParser):
    g = p.add_argument_group("model parameters")
    g.add_argument("--hbar", default="1", help="Planck constant (exact rational, default 1)")
    lk = g.add_mutually_exclusive_group(required=True)
    lk.add_argument("--lambda", dest="lam", help="nonlinearity lambda")
    lk.add_argument("--kappa", help="curvature kappa")
    g.add_argument("--convention", choices=("kappa=-lambda", "kappa=+lambda"), default="kappa=-lambda",
                   help="map between kappa and lambda (default kappa=-lambda)")
    om = g.add_mutually_exclusive_group()
    om.add_argument("--omega", help="frequency (default 1)")
    om.add_argument("--omega-sq", dest="omega_sq", help="frequency squared")


def _add_output(p: argparse.ArgumentParser):
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--out", help="write the report to FILE instead of stdout")
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")


def _add_grid(p: argparse.ArgumentParser):
    g = p.add_argument_group("oracle grid")
    g.add_argument("--n-r", type=int, default=512, help="radial cells on the coarsest grid")
    g.add_argument("--r-max", type=float, default=None, help="domain radius (default: automatic)")
    g.add_argument("--m-max", type=int, default=None, help="largest |m| sector (default k_lowest-1)")
    g.add_argument("--refinements", type=int, default=3, help="grids n, 2n, 4n, ...")
    g.add_argument("--k-lowest", type=int, default=6, help="eigenvalues per sector")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="casimir-spectra",
                                 description="Quadratic-algebra spectra of the curved-space oscillator.")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify-classical", help="finite-difference check of the Poisson algebra")
    _add_params(p)
    p.add_argument("--points", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--step", type=float, default=DEFAULT_STEP)
    p.add_argument("--tol", type=float, default=DEFAULT_TOL, help="bracket residual tolerance")
    p.add_argument("--constraint-tol", type=float, default=CONSTRAINT_TOL,
                   help="tolerance for the algebraic constraints F1, F2 and the H decomposition")
    _add_output(p)

    p = sub.add_parser("verify-identity", help="exact comparison of the three structure-function forms")
    _add_params(p)
    _add_output(p)

    p = sub.add_parser("spectrum", help="admissible (p, u, E) lines")
    _add_params(p)
    p.add_argument("--p-max", type=int, required=True)
    p.add_argument("--mode", choices=("closed_form", "generic"), default="closed_form")
    p.add_argument("--branch", action="append", choices=BRANCHES + ("generic",),
                   help="keep only these u-branches (repeatable)")
    p.add_argument("--sign", choices=("minus", "plus", "both"), default="both",
                   help="sign of the square root in the energy formula (closed_form mode)")
    p.add_argument("--include-inadmissible", action="store_true")
    _add_output(p)

    p = sub.add_parser("ladder", help="structure-function ladder and amplitudes of one line")
    _add_params(p)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--parity", choices=("even", "odd"), default="even")
    p.add_argument("--sign", choices=("minus", "plus"), default="minus")
    p.add_argument("--branch", choices=BRANCHES, default="u1")
    _add_output(p)

    p = sub.add_parser("oracle", help="numerical eigenvalues of the radial Schroedinger operator")
    _add_params(p)
    _add_grid(p)
    p.add_argument("--min-order", type=float, default=MIN_ORDER,
                   help="smallest acceptable observed convergence order")
    _add_output(p)

    p = sub.add_parser("adjudicate", help="match algebraic lines to oracle eigenvalues")
    _add_params(p)
    p.add_argument("--p-max", type=int, required=True)
    p.add_argument("--tol", type=float, default=1e-9, help="relative round-off floor for matching")
    p.add_argument("--factor", type=float, default=3.0, help="allowed multiple of the Richardson estimate")
    _add_grid(p)
    _add_output(p)
    return ap


def _params(ns) -> ModelParams:
    conv = KAPPA_MINUS_LAMBDA if ns.convention == "kappa=-lambda" else KAPPA_PLUS_LAMBDA
    try:
        kw = dict(hbar=exact(ns.hbar), convention=conv)
        if ns.omega is not None:
            kw["omega"] = exact(ns.omega)
        if ns.omega_sq is not None:
            kw["omega_sq"] = exact(ns.omega_sq)
        if ns.lam is not None:
            return ModelParams.from_lambda(exact(ns.lam), **kw)
        return ModelParams.from_kappa(exact(ns.kappa), **kw)
    except (ValueError, ZeroDivisionError) as exc:
        raise InvalidInput(str(exc)) from exc


def _grid(ns) -> GridSpec:
    try:
        return GridSpec(ns.n_r, ns.r_max, ns.m_max, ns.refinements)
    except ValueError as exc:
        raise InvalidInput(str(exc)) from exc


# ---------------------------------------------------------------------------
# commands


def line_record(line: SpectrumLine) -> dict:
    return {
        "p": line.p,
        "u_branch": line.u_branch,
        "equivalent_branches": list(line.equivalent_branches),
        "parity": line.parity,
        "convention": line.convention,
        "u": _num(line.u),
        "u_exact": _exact_str(line.u),
        "E": _num(line.E),
        "E_exact": _exact_str(line.E),
        "phi": [_num(v) for v in line.phi_ladder],
        "phi_exact": [_exact_str(v) for v in line.phi_ladder] if line.exact else None,
        "flags": line.flags.as_dict(),
        "exact": line.exact,
    }


def _line_row(rec: dict) -> dict:
    return {"p": rec["p"], "u_branch": rec["u_branch"], "parity": rec["parity"], "convention": rec["convention"],
            "u": rec["u"], "E": rec["E"], "phi": rec["phi"], **rec["flags"]}


def cmd_verify_classical(ns, params: ModelParams) -> Report:
    if ns.points < 1:
        raise InvalidInput("--points must be >= 1")
    tols = dict(step=ns.step, tol=ns.tol, constraint_tol=ns.constraint_tol)
    rep = verify_quadratic_poisson(params, ns.points, ns.seed, **tols)
    chosen, both = resolve_convention(params, ns.points, ns.seed, **tols)
    payload = {
        "report": rep.as_dict(),
        "convention_check": {
            ("kappa=-lambda" if c == KAPPA_MINUS_LAMBDA else "kappa=+lambda"): r.passed for c, r in both.items()},
        "vanishing_convention": None if chosen is None else
        ("kappa=-lambda" if chosen == KAPPA_MINUS_LAMBDA else "kappa=+lambda"),
    }
    rows = [{"identity": k, **v} for k, v in rep.as_dict()["residuals"].items()]
    return Report(ns.command, params.as_dict(), payload, rows, rep.passed)


def cmd_verify_identity(ns, params: ModelParams) -> Report:
    if params.kappa == 0:
        raise InvalidInput("verify-identity needs kappa != 0")
    rep = verify_phi_identity(params)
    d = rep.as_dict()
    d.pop("params")
    rows = [{"lhs": c["lhs"], "rhs": c["rhs"], "proportional": c["proportional"], "ratio": c["ratio"],
             "n_mismatches": len(c["mismatches"])} for c in d["comparisons"]]
    return Report(ns.command, params.as_dict(), {"identity": d}, rows, rep.passed)


def cmd_spectrum(ns, params: ModelParams) -> Report:
    if ns.p_max < 0:
        raise InvalidInput("--p-max must be >= 0")
    if ns.mode == "closed_form" and params.kappa == 0:
        raise InvalidInput("closed_form mode needs kappa != 0; use --mode generic")
    signs = {"minus": (MINUS_ROOT,), "plus": (PLUS_ROOT,), "both": (MINUS_ROOT, PLUS_ROOT)}[ns.sign]
    try:
        lines = solve_spectrum(params, ns.p_max, ns.mode, signs=signs, include_inadmissible=ns.include_inadmissible)
    except UnsupportedBranchError as exc:
        raise InvalidInput(str(exc)) from exc
    if ns.branch:
        lines = [ln for ln in lines if ln.u_branch in ns.branch]
    recs = [line_record(ln) for ln in lines]
    ok = all(r["flags"]["phi0_zero"] and r["flags"]["phiP1_zero"] for r in recs)
    return Report(ns.command, params.as_dict(), {"mode": ns.mode, "p_max": ns.p_max, "lines": recs},
                  [_line_row(r) for r in recs], ok)


def cmd_ladder(ns, params: ModelParams) -> Report:
    if ns.p < 0:
        raise InvalidInput("--p must be >= 0")
    if params.kappa == 0:
        raise InvalidInput("ladder needs kappa != 0")
    parity = EVEN if ns.parity == "even" else ODD
    sg = MINUS_ROOT if ns.sign == "minus" else PLUS_ROOT
    from .spectrum import _solve_closed_form
    cands = [ln for ln in _solve_closed_form(params, ns.p, (sg,))
             if ln.p == ns.p and ln.parity == parity and ln.u_branch == ns.branch]
    line = cands[0]
    rec = line_record(line)
    ok = line.admissible
    if ok:
        amps = ladder_amplitudes(line)
        rec["amplitudes"] = [_num(a) for a in amps]
        rec["amplitudes_exact"] = [_exact_str(a) for a in amps]
    else:
        rec["amplitudes"] = None
        rec["amplitudes_exact"] = None
    rows = [{"n": i + 1, "phi": rec["phi"][i], "amplitude": rec["amplitudes"][i] if ok else None}
            for i in range(len(rec["phi"]))]
    return Report(ns.command, params.as_dict(), {"line": rec, "admissible": ok}, rows, ok)


def _oracle(ns, params: ModelParams):
    try:
        return oracle_spectrum(params, _grid(ns), ns.k_lowest)
    except (OracleDomainError, ValueError) as exc:
        raise InvalidInput(str(exc)) from exc


def cmd_oracle(ns, params: ModelParams) -> Report:
    spec = _oracle(ns, params)
    d = spec.as_dict()
    d.pop("params")
    bad = [lv for lv in spec.resolved() if lv.order is not None and lv.order < ns.min_order]
    rows = [{k: v for k, v in lv.as_dict().items() if k != "E_grids"} for lv in spec.levels]
    return Report(ns.command, params.as_dict(), {"oracle": d}, rows, not bad)


def cmd_adjudicate(ns, params: ModelParams) -> Report:
    if ns.p_max < 0:
        raise InvalidInput("--p-max must be >= 0")
    if params.kappa == 0:
        raise InvalidInput("adjudicate needs kappa != 0 (use a small kappa for the flat limit)")
    lines = solve_spectrum(params, ns.p_max, "closed_form")
    spec = _oracle(ns, params)
    rep = adjudicate(lines, spec, ns.tol, ns.factor)
    rows = []
    for name, res in sorted(rep.conventions.items()):
        for status, items in (("matched", res.matched), ("unmatched", res.unmatched),
                              ("out_of_range", res.out_of_range)):
            for m in items:
                rows.append({"convention": name, "status": status, "p": m.p, "parity": m.parity,
                             "u_branch": m.u_branch, "E": m.E, "oracle_E": m.oracle_E, "m": m.m,
                             "diff": m.diff, "tol": m.tol})
    return Report(ns.command, params.as_dict(), {"adjudication": rep.as_dict(), "p_max": ns.p_max},
                  rows, rep.verdict is not None)


COMMANDS = {
    "verify-classical": cmd_verify_classical,
    "verify-identity": cmd_verify_identity,
    "spectrum": cmd_spectrum,
    "ladder": cmd_ladder,
    "oracle": cmd_oracle,
    "adjudicate": cmd_adjudicate,
}


def run(argv=None) -> tuple[Report | None, int, argparse.Namespace]:
    """Parse, dispatch and return (report, exit code, parsed flags); argparse errors raise SystemExit(2)."""
    ns = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if ns.verbose else logging.WARNING, stream=sys.stderr,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        params = _params(ns)
        report = COMMANDS[ns.command](ns, params)
    except InvalidInput as exc:
        log.error("invalid input: %s", exc)
        return None, EXIT_INVALID, ns
    except OracleConvergenceError as exc:
        log.error("eigensolver failed: %s", exc)
        return None, EXIT_VIOLATION, ns
    return report, (EXIT_OK if report.ok else EXIT_VIOLATION), ns


def main(argv=None) -> int:
    try:
        report, code, ns = run(argv)
    except SystemExit as exc:  # argparse errors and --help
        return int(exc.code or 0)
    if report is not None:
        text = report.to_json() if ns.format == "json" else report.to_csv()
        if ns.out:
            with open(ns.out, "w", encoding="utf-8") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
        if code == EXIT_VIOLATION:
            log.error("invariant violation reported (exit 1)")
    return code


if __name__ == "__main__":
    sys.exit(main())
