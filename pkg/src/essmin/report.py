"""Full pipeline for one (a, b): upper bound, lower bound, density threshold,
consistency check, and text/JSON rendering. Also the reference tables that
``essmin reproduce`` recomputes."""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Tuple, Union

from essmin import __version__
from essmin.circle import SERIES_CAP, SERIES_TARGET, series_omega_center
from essmin.density import DensityResult, density_threshold, gamma
from essmin.exact import GaussianRational, delta, parse_number
from essmin.lower import (
    DEFAULT_GRID,
    LowerBoundResult,
    LowerMethod,
    best_lower,
    tau_single_factor,
)
from essmin.upper import (
    UpperBoundResult,
    UpperMethod,
    omega,
    omega_general,
    omega_min,
    upper_bound_gaussian,
)
from essmin.values import ValueWithError

# Slack granted to the lower bound when checking lower <= upper: the numeric
# lower methods are only polished to about this accuracy.
LOWER_METHOD_TOL = 1e-9

DOCHE_NOTE = (
    "external context: Doche's interval 0.2482474 <= mu_ess(h_Z) <= 0.25443678 "
    "uses a different method and is not reproduced here"
)
DELTA_EXAMPLE_NOTE = (
    "Delta(7/15, 125/18) = log 90 with both numbers in lowest terms; the value "
    "log 1250 comes from the unreduced form 250/36 and a signed log term, and "
    "is not the correction term"
)


class UsageError(ValueError):
    """Bad user input: carries the offending token and a hint."""

    def __init__(self, token: str, problem: str, hint: str):
        super().__init__(f"{problem}: {token!r}")
        self.token = token
        self.problem = problem
        self.hint = hint


@dataclass(frozen=True)
class Config:
    tol: float = 1e-12
    grid_size: int = DEFAULT_GRID
    series_cap: int = SERIES_CAP
    series_target: float = SERIES_TARGET

    def __post_init__(self):
        if not (self.tol > 0 and math.isfinite(self.tol)):
            raise UsageError(str(self.tol), "tolerance must be a positive number", "try --tol 1e-12")
        if self.grid_size < 8:
            raise UsageError(str(self.grid_size), "grid size too small", "use at least 8")
        if self.series_cap < 1:
            raise UsageError(str(self.series_cap), "series cap must be positive", "try 200")

    @classmethod
    def from_env(cls, **overrides) -> "Config":
        """Defaults, then ESSMIN_TOL, then explicit (non-None) overrides."""
        kw = {}
        env = os.environ.get("ESSMIN_TOL")
        if env is not None:
            try:
                kw["tol"] = float(env)
            except ValueError:
                raise UsageError(env, "ESSMIN_TOL is not a number", "e.g. ESSMIN_TOL=1e-10") from None
        kw.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**kw)


def parse_input(token: str, name: str) -> Union[Fraction, GaussianRational]:
    try:
        return parse_number(token)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(
            token, f"cannot parse --{name} ({exc})",
            "write integers, fractions n/d, or Gaussian rationals like 1/2+3/4i",
        ) from None


@dataclass(frozen=True)
class BoundReport:
    problem: Dict[str, str]
    lower: LowerBoundResult
    upper: UpperBoundResult
    density: Optional[DensityResult]
    config: Config
    notes: Tuple[str, ...]
    version: str
    consistent: bool
    t: Optional[float] = None
    omega_at_t: Optional[ValueWithError] = None


def _field_name(a, b) -> str:
    ga, gb = GaussianRational.of(a), GaussianRational.of(b)
    return "Q" if ga.is_real() and gb.is_real() else "Q(i)"


def analyze(a, b, config: Optional[Config] = None, t: Optional[float] = None) -> BoundReport:
    """Run every bound for h(alpha) + h(a alpha + b) and cross-check them.

    ``a`` and ``b`` may be strings (parsed) or numbers.
    """
    config = config or Config()
    if isinstance(a, str):
        a = parse_input(a, "a")
    if isinstance(b, str):
        b = parse_input(b, "b")
    if GaussianRational.of(a).is_zero():
        raise UsageError(str(a), "a must be nonzero", "h(alpha) + h(b) has no interesting minimum")
    fld = _field_name(a, b)
    notes: List[str] = []

    if fld == "Q":
        a, b = GaussianRational.of(a).re, GaussianRational.of(b).re
        upper = omega_min(a, b, config.tol, config.series_target, config.series_cap)
        dens = density_threshold(a, b, config.tol)
        if abs(a) != 1:
            alt = gamma(a, b, dens.x_star, None, config.tol, variant="x")
            notes.append(
                f"Gamma uses the shift b + a*x; the variant b + x gives {alt.value!r} at x* "
                f"(the two agree only when |a| = 1)"
            )
        if dens.threshold.upper < upper.upper - 1e-9:
            notes.append("density threshold is below the Omega bound and is itself an upper bound")
        if (abs(a), abs(b)) == (Fraction(7, 15), Fraction(125, 18)):
            notes.append(DELTA_EXAMPLE_NOTE)
        if abs(a) == 1 and abs(b) == 1:
            notes.append(DOCHE_NOTE)
    else:
        upper = upper_bound_gaussian(a, b, config.tol)
        dens = None
        notes.append("density thresholds are implemented for rational a, b only")

    lower = best_lower(a, b, config.grid_size)
    notes.extend(lower.notes)
    if not upper.certified:
        notes.append(f"upper bound via {upper.method.value}: numeric (not certified)")
    if lower.method is LowerMethod.L_NUMERIC:
        notes.append("lower bound via circle minima on a grid: numeric (not certified)")

    consistent = lower.value <= upper.upper + LOWER_METHOD_TOL
    if dens is not None:
        consistent = consistent and lower.value <= dens.threshold.upper + LOWER_METHOD_TOL
    if not consistent:
        notes.append("INCONSISTENT: lower bound exceeds an upper bound")

    omega_t = None
    if t is not None:
        omega_t = omega(a, b, t, config.tol) if fld == "Q" else omega_general(a, b, t, config.tol)

    problem = {"a": str(a), "b": str(b), "field": fld}
    return BoundReport(problem, lower, upper, dens, config, tuple(notes), __version__,
                       consistent, None if t is None else float(t), omega_t)


# ---------------------------------------------------------------------------
# Reference tables
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ReproductionRow:
    label: str
    paper_constant: float
    computed: ValueWithError
    band: float
    kind: str = "upper"
    note: str = ""

    @property
    def passed(self) -> bool:
        """An upper bound must not exceed the constant (within 1e-12) and may
        undercut it by at most ``band``; a lower bound mirrors this."""
        if self.kind == "upper":
            return (self.computed.upper <= self.paper_constant + 1e-12
                    and self.computed.value >= self.paper_constant - self.band)
        return (self.computed.value >= self.paper_constant - 1e-12
                and self.computed.value <= self.paper_constant + self.band)


def _row_series(label, a, b, constant, paper_terms):
    s = series_omega_center(a, b)
    d = delta(a, b)
    return ReproductionRow(
        label, constant, d + s.certified, 1e-4,
        note=f"adaptive N = {s.terms} (tabulated with N = {paper_terms})",
    )


def _table_thm29() -> List[ReproductionRow]:
    rows = [
        _row_series("|b/a|=1", 1, 1, 0.3194490869562, 20),
        _row_series("|b/a|=2", 1, 2, 0.6461598436469, 15),
        _row_series("|b/a|=3", 1, 3, 0.9909205628144, 7),
    ]
    up = omega_min(1, 5)
    rows.append(ReproductionRow("|b/a|>=4 (1,5)", math.log(5), up.value, 1e-12,
                                note=up.method.value))
    up = omega_min(2, 0)
    rows.append(ReproductionRow("b=0 (2,0)", math.log(2), up.value, 1e-12, note=up.method.value))
    return rows


def _table_thmA() -> List[ReproductionRow]:
    up = omega_min(-1, 1)
    dens = density_threshold(-1, 1)
    return [
        ReproductionRow("h_Z upper (-1,1)", 0.31944909, up.value, 1e-4, note=up.method.value),
        ReproductionRow("h_Z density threshold (-1,1)", 0.31944909, dens.threshold, 1e-4,
                        note=f"x* = {dens.x_star!r}"),
    ]


def _table_cor39() -> List[ReproductionRow]:
    res = tau_single_factor(1, 2, (1, 1))
    return [
        ReproductionRow("tau(1,2) with f1 = x+1", math.log(math.sqrt(3)),
                        ValueWithError(res.value, 1e-9), 1e-9, kind="lower",
                        note=f"A1* = {res.witness['A1']!r}"),
    ]


def _table_thm43() -> List[ReproductionRow]:
    rows = []
    for a, b in ((1, 4), (1, 5), (-1, 7)):
        lo, hi = math.log((abs(b) - 1) / abs(a)), math.log(abs(b) / abs(a))
        low = best_lower(a, b)
        up = omega_min(a, b)
        rows.append(ReproductionRow(f"({a},{b}) lower", lo, ValueWithError(low.value, 1e-12), 1e-8,
                                    kind="lower", note=low.method.value))
        rows.append(ReproductionRow(f"({a},{b}) upper", hi, up.value, 1e-8, note=up.method.value))
    return rows


TABLES: Dict[str, Callable[[], List[ReproductionRow]]] = {
    "thm2.9": _table_thm29,
    "thmA": _table_thmA,
    "cor3.9": _table_cor39,
    "thm4.3-examples": _table_thm43,
}


def reproduce(table_id: str) -> List[ReproductionRow]:
    if table_id not in TABLES:
        raise UsageError(table_id, "unknown table", "choose one of " + ", ".join(TABLES))
    return TABLES[table_id]()


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------


def _num(x) -> Optional[str]:
    return None if x is None else repr(float(x))


def _unnum(s) -> Optional[float]:
    return None if s is None else float(s)


def _vwe(v: Optional[ValueWithError]):
    if v is None:
        return None
    return {"value": _num(v.value), "abs_error": _num(v.abs_error)}


def _unvwe(d) -> Optional[ValueWithError]:
    if d is None:
        return None
    return ValueWithError(float(d["value"]), float(d["abs_error"]))


def report_to_dict(r: BoundReport) -> dict:
    up, lo = r.upper, r.lower
    out = {
        "problem": dict(r.problem),
        "lower": {
            "value": _num(lo.value),
            "method": lo.method.value,
            "witness": lo.witness,
            "notes": list(lo.notes),
        },
        "upper": {
            "value": _vwe(up.value),
            "bound": _num(up.upper),
            "t_star": _num(up.t_star),
            "method": up.method.value,
            "certified": up.certified,
            "series_terms": up.series_terms,
        },
        "density": None,
        "config": {
            "tol": _num(r.config.tol),
            "grid_size": r.config.grid_size,
            "series_cap": r.config.series_cap,
            "series_target": _num(r.config.series_target),
        },
        "notes": list(r.notes),
        "version": r.version,
        "consistent": r.consistent,
        "t": _num(r.t),
        "omega_at_t": _vwe(r.omega_at_t),
    }
    if r.density is not None:
        d = r.density
        out["density"] = {
            "threshold": _vwe(d.threshold),
            "x_star": _num(d.x_star),
            "radii": [str(x) for x in d.radii],
            "primes": list(d.primes),
            "interval_note": d.interval_note,
        }
    return out


def report_to_json(r: BoundReport) -> str:
    return json.dumps(report_to_dict(r), sort_keys=True, indent=2, ensure_ascii=True) + "\n"


def report_from_json(text: str) -> BoundReport:
    d = json.loads(text)
    lo, up = d["lower"], d["upper"]
    lower = LowerBoundResult(float(lo["value"]), LowerMethod(lo["method"]), lo["witness"],
                             tuple(lo["notes"]))
    upper = UpperBoundResult(_unvwe(up["value"]), float(up["t_star"]), UpperMethod(up["method"]),
                             up["certified"], up["series_terms"])
    dens = None
    if d["density"] is not None:
        dd = d["density"]
        dens = DensityResult(_unvwe(dd["threshold"]), float(dd["x_star"]),
                             tuple(Fraction(x) for x in dd["radii"]), tuple(dd["primes"]),
                             dd["interval_note"])
    c = d["config"]
    config = Config(float(c["tol"]), c["grid_size"], c["series_cap"], float(c["series_target"]))
    return BoundReport(d["problem"], lower, upper, dens, config, tuple(d["notes"]), d["version"],
                       d["consistent"], _unnum(d["t"]), _unvwe(d["omega_at_t"]))


def rows_to_json(table_id: str, rows: List[ReproductionRow]) -> str:
    payload = {
        "table": table_id,
        "pass": all(r.passed for r in rows),
        "rows": [
            {
                "label": r.label,
                "kind": r.kind,
                "paper_constant": _num(r.paper_constant),
                "computed": _vwe(r.computed),
                "band": _num(r.band),
                "pass": r.passed,
                "note": r.note,
            }
            for r in rows
        ],
    }
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


# ---------------------------------------------------------------------------
# Text rendering
# ---------------------------------------------------------------------------


def _fmt(v: ValueWithError) -> str:
    return f"{v.value:.15f} +/- {v.abs_error:.1e}"


def report_to_text(r: BoundReport) -> str:
    p = r.problem
    up, lo = r.upper, r.lower
    lines = [f"essmin {r.version}   a = {p['a']}   b = {p['b']}   field {p['field']}", ""]
    cert = "certified" if up.certified else "numeric"
    extra = f", N = {up.series_terms}" if up.series_terms else ""
    lines.append(f"  {'lower':<8}{lo.value:.15f}   [{lo.method.value}]")
    lines.append(f"  {'upper':<8}{_fmt(up.value)}   [{up.method.value}, {cert}, t* = {up.t_star!r}{extra}]")
    if r.density is not None:
        d = r.density
        lines.append(f"  {'density':<8}{_fmt(d.threshold)}   [x* = {d.x_star!r}; {d.interval_note}]")
    if r.omega_at_t is not None:
        lines.append(f"  {'Omega(t)':<8}{_fmt(r.omega_at_t)}   [t = {r.t!r}]")
    if r.notes:
        lines.append("")
        lines.append("notes:")
        lines.extend(f"  - {n}" for n in r.notes)
    c = r.config
    lines.append("")
    lines.append(f"config: tol={c.tol!r} grid={c.grid_size} series_cap={c.series_cap}")
    lines.append("status: " + ("consistent" if r.consistent else "INCONSISTENT"))
    return "\n".join(lines) + "\n"


def rows_to_text(table_id: str, rows: List[ReproductionRow]) -> str:
    width = max(len(r.label) for r in rows)
    lines = [f"table {table_id}"]
    for r in rows:
        mark = "PASS" if r.passed else "FAIL"
        lines.append(
            f"  {mark}  {r.label:<{width}}  {r.kind:<5}  constant {r.paper_constant:.13f}  "
            f"computed {_fmt(r.computed)}  {r.note}"
        )
    lines.append("overall: " + ("PASS" if all(r.passed for r in rows) else "FAIL"))
    return "\n".join(lines) + "\n"
