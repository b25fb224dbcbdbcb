"""Lower bounds for the essential minimum of h(alpha) + h(a alpha + b).

Three families:

* closed forms that hold when |b| and |a| are far apart or both small;
* ``L(a, b)``: the largest of the averaged minima of three auxiliary circle
  functions g, f, G (numeric, grid plus local refinement);
* ``tau(a, b)``: the minima of g penalized by ``-A log|f1(z)|`` where f1
  vanishes on the points of height zero, maximized over the admissible
  weight A.

The circle minimizations are not certified; they are dense-grid searches
polished by golden-section steps, or (for tau) exact stationary points.
"""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
from numpy.polynomial import Chebyshev, Polynomial

from essmin.exact import GaussianRational, as_fraction, factorize, vp, weil_height
from essmin.optimize import golden_section_max, golden_section_min

DEFAULT_GRID = 4096
REFINE_ROUNDS = 3


class LowerMethod(str, enum.Enum):
    PROP34 = "prop34"
    PROP35 = "prop35"
    PROP36 = "prop36"
    L_NUMERIC = "L_numeric"
    TAU_B0 = "tau_b0"
    TAU_SINGLE_FACTOR = "tau_single_factor"
    ZERO = "zero"


@dataclass(frozen=True)
class LowerBoundResult:
    value: float
    method: LowerMethod
    witness: Optional[dict] = None
    notes: Tuple[str, ...] = ()

    def __post_init__(self):
        if self.value < 0:
            raise ValueError("lower bound must be non-negative")
        if self.method is LowerMethod.ZERO and self.value != 0:
            raise ValueError("method 'zero' carries the value 0")


def _conjugates(a, b) -> Tuple[List[Tuple[complex, complex]], int]:
    """Images (sigma(a), sigma(b)) over G(a, b) and the degree [K_{a,b}:Q]."""
    ga, gb = GaussianRational.of(a), GaussianRational.of(b)
    if ga.is_zero():
        raise ValueError("a must be nonzero")
    if ga.is_real() and gb.is_real():
        return [(complex(ga), complex(gb))], 1
    return [(complex(ga), complex(gb)), (complex(ga.conj()), complex(gb.conj()))], 2


# ---------------------------------------------------------------------------
# Closed forms
# ---------------------------------------------------------------------------


def closed_form_lower(a, b) -> Optional[LowerBoundResult]:
    """Best of the three closed-form bounds that applies, or ``None``."""
    sigmas, degree = _conjugates(a, b)
    best: Optional[LowerBoundResult] = None
    for k, (sa, sb) in enumerate(sigmas):
        A, B = abs(sa), abs(sb)
        found = []
        if B - A > 1:
            found.append((min(math.log(B - A), math.log((B - 1) / A)), LowerMethod.PROP34))
        if A - B > 1 and B != 0:
            found.append((math.log(A / (B + 1)), LowerMethod.PROP35))
        if abs(A - B) <= 1 and A + B < 1:
            found.append((math.log(1 / (A + B)), LowerMethod.PROP36))
        for value, method in found:
            value /= degree
            if best is None or value > best.value:
                best = LowerBoundResult(value, method, {"sigma": ("id", "conj")[k]})
    return best


# ---------------------------------------------------------------------------
# Numeric L(a, b)
# ---------------------------------------------------------------------------


def _logplus(x):
    with np.errstate(divide="ignore"):
        return np.where(x > 1, np.log(np.where(x > 1, x, 1.0)), 0.0)


def _circle_functions(sa: complex, sb: complex):
    """Circle parametrizations for g, f and G. Each entry maps an angle array
    to the function values along one critical circle."""

    def on_unit(fun):
        return lambda th: fun(np.exp(1j * th))

    def g(z):
        return _logplus(np.abs(z)) + _logplus(np.abs(sa * z + sb))

    def f(z):
        with np.errstate(divide="ignore"):
            return _logplus(np.abs(z)) + _logplus(1.0 / np.abs(sa * z + sb))

    def G(z):
        with np.errstate(divide="ignore", invalid="ignore"):
            return _logplus(np.abs(z)) + _logplus(np.abs((sa + sb * z) / z))

    def shifted(fun):
        # |sa z + sb| = 1
        return lambda th: fun((np.exp(1j * th) - sb) / sa)

    def inverted(fun):
        # |sa + sb z| = |z|
        def h(th):
            with np.errstate(divide="ignore", invalid="ignore"):
                return fun(sa / (np.exp(1j * th) - sb))
        return h

    return {
        "g": [("unit", on_unit(g)), ("|az+b|=1", shifted(g))],
        "f": [("unit", on_unit(f)), ("|az+b|=1", shifted(f))],
        "G": [("unit", on_unit(G)), ("|a+bz|=|z|", inverted(G))],
    }


def _circle_min(fun, grid_size: int, rounds: int = REFINE_ROUNDS) -> Tuple[float, float]:
    """Minimum of ``fun`` over [0, 2pi): grid, then golden-section polishing
    around the best few grid minima."""
    theta = (np.arange(grid_size) + 0.5) * (2 * np.pi / grid_size)
    vals = np.asarray(fun(theta), dtype=float)
    vals = np.where(np.isfinite(vals), vals, np.inf)
    h = 2 * np.pi / grid_size
    order = np.argsort(vals, kind="stable")[: max(1, rounds + 1)]
    best_t, best_v = float(theta[order[0]]), float(vals[order[0]])

    def scalar(t):
        v = float(fun(np.array([t]))[0])
        return v if math.isfinite(v) else math.inf

    for i in order:
        t0 = float(theta[i])
        t, v = golden_section_min(scalar, t0 - h, t0 + h, xtol=1e-13)
        if v < best_v:
            best_t, best_v = t, v
    return best_v, best_t % (2 * math.pi)


def L_numeric(a, b, grid_size: int = DEFAULT_GRID) -> LowerBoundResult:
    """max(g_min, f_min, G_min), each the sum over sigma of the circle minima
    divided by [K_{a,b}:Q]."""
    if grid_size < 8:
        raise ValueError("grid_size too small")
    sigmas, degree = _conjugates(a, b)
    totals: Dict[str, float] = {"g": 0.0, "f": 0.0, "G": 0.0}
    where: Dict[str, list] = {"g": [], "f": [], "G": []}
    for sa, sb in sigmas:
        for name, circles in _circle_functions(sa, sb).items():
            best = (math.inf, None, None)
            for label, fun in circles:
                v, t = _circle_min(fun, grid_size)
                if v < best[0]:
                    best = (v, label, t)
            totals[name] += best[0]
            where[name].append({"circle": best[1], "theta": best[2]})
    mins = {k: max(v / degree, 0.0) for k, v in totals.items()}
    name = max(mins, key=lambda k: mins[k])
    witness = {"function": name, "minima": mins, "location": where[name]}
    return LowerBoundResult(mins[name], LowerMethod.L_NUMERIC, witness)


# ---------------------------------------------------------------------------
# Points of height zero
# ---------------------------------------------------------------------------

# Roots of unity with rational real part, grouped by minimal polynomial
# (coefficients ascending). Only these can satisfy |a zeta + b| = 1 for all
# conjugates at once when a, b are rational.
_CYCLOTOMIC = [
    (Fraction(1), (-1, 1), [1 + 0j]),
    (Fraction(-1), (1, 1), [-1 + 0j]),
    (Fraction(0), (1, 0, 1), [1j, -1j]),
    (Fraction(-1, 2), (1, 1, 1), [complex(-0.5, math.sqrt(3) / 2), complex(-0.5, -math.sqrt(3) / 2)]),
    (Fraction(1, 2), (1, -1, 1), [complex(0.5, math.sqrt(3) / 2), complex(0.5, -math.sqrt(3) / 2)]),
]
_UNIT_REAL_PARTS = {Fraction(0), Fraction(1, 2), Fraction(-1, 2), Fraction(1), Fraction(-1)}


def _poly_mul(p: Sequence[int], q: Sequence[int]) -> Tuple[int, ...]:
    out = [0] * (len(p) + len(q) - 1)
    for i, x in enumerate(p):
        for j, y in enumerate(q):
            out[i + j] += x * y
    return tuple(out)


@dataclass(frozen=True)
class MinimizerSet:
    """Points where h(alpha) = h(a alpha + b) = 0, and the monic integer
    polynomial (coefficients ascending) vanishing exactly on them."""

    points: Tuple[complex, ...]
    factors: Tuple[Tuple[int, ...], ...]
    polynomial: Tuple[int, ...]

    @property
    def degree(self) -> int:
        return len(self.polynomial) - 1


def _is_root_of_unity_value(re: Fraction, norm: Fraction) -> bool:
    return norm == 1 and re in _UNIT_REAL_PARTS


def find_height_zero_minimizers(a, b) -> Union[MinimizerSet, str]:
    """All alpha with h(alpha) = 0 and h(a alpha + b) = 0, for rational a, b.

    Returns ``"infinite"`` when a = ±1 and b = 0, ``"empty"`` when there are
    none. Candidates are alpha = 0 and the roots of unity of order 1, 2, 3, 4
    or 6: if |a zeta + b| = 1 for every conjugate of zeta then Re(zeta) is
    rational, which forces one of these orders.
    """
    a, b = as_fraction(a), as_fraction(b)
    if a == 0:
        raise ValueError("a must be nonzero")
    if b == 0 and abs(a) == 1:
        return "infinite"
    points: List[complex] = []
    factors: List[Tuple[int, ...]] = []
    if b in (0, 1, -1):
        points.append(0j)
        factors.append((0, 1))
    for re_zeta, minpoly, roots in _CYCLOTOMIC:
        # a zeta + b has real part a Re(zeta) + b and squared modulus
        # a^2 + b^2 + 2ab Re(zeta)
        re_val = a * re_zeta + b
        norm = a * a + b * b + 2 * a * b * re_zeta
        if norm == 0 or _is_root_of_unity_value(re_val, norm):
            points.extend(roots)
            factors.append(minpoly)
    if not points:
        return "empty"
    poly: Tuple[int, ...] = (1,)
    for fac in factors:
        poly = _poly_mul(poly, fac)
    return MinimizerSet(tuple(points), tuple(factors), poly)


# ---------------------------------------------------------------------------
# tau(a, b) for one weighted factor
# ---------------------------------------------------------------------------


def parse_polynomial(text: str) -> Tuple[int, ...]:
    """Parse a monic integer polynomial in x such as ``"x^2+x+1"`` into
    ascending coefficients."""
    s = text.replace(" ", "").replace("**", "^")
    if not s:
        raise ValueError("empty polynomial")
    coeffs: Dict[int, int] = {}
    for sign, body in _poly_terms(s):
        if "x" in body:
            c, _, e = body.partition("x")
            c = c.rstrip("*")
            coeff = int(c) if c else 1
            exp = int(e[1:]) if e.startswith("^") else (1 if not e else None)
            if exp is None:
                raise ValueError(f"bad term {body!r}")
        else:
            coeff, exp = int(body), 0
        coeffs[exp] = coeffs.get(exp, 0) + sign * coeff
    deg = max(coeffs)
    out = tuple(coeffs.get(k, 0) for k in range(deg + 1))
    if out[-1] != 1:
        raise ValueError(f"{text!r} is not monic")
    return out


def _poly_terms(s: str):
    i = 0
    while i < len(s):
        sign = 1
        if s[i] in "+-":
            sign = -1 if s[i] == "-" else 1
            i += 1
        j = i
        while j < len(s) and s[j] not in "+-":
            j += 1
        if j == i:
            raise ValueError(f"bad polynomial {s!r}")
        yield sign, s[i:j]
        i = j


@dataclass(frozen=True)
class WeightRange:
    """Admissible weights A for one factor: [0, upper] or [0, upper)."""

    upper: float
    inclusive: bool
    binding_prime: Optional[int] = None


def _ratio_inf(c_a: float, c_b: float) -> float:
    """inf over u > 0 of L(u)/u with L(u) = u + log+ of the largest possible
    |a alpha + b|_p when |alpha|_p = e^u, allowing cancellation at |a alpha| = |b|.
    """
    def L(u):
        return u + max(0.0, c_a + u, c_b)

    cands = [2.0]
    if max(0.0, c_a, c_b) == 0.0:
        cands.append(1.0 + (1.0 if c_a == 0.0 else 0.0))
    for u in (-c_a, c_b - c_a, c_b):
        if math.isfinite(u) and u > 0:
            cands.append(L(u) / u)
    if math.isfinite(c_b) and c_b - c_a > 0:
        # alpha close to -b/a: |a alpha + b|_p can be made <= 1
        cands.append(1.0)
    return min(cands)


def weight_range(a, b, f1: Sequence[int]) -> WeightRange:
    """Admissible weights A with log+|x|_v + log+|ax+b|_v >= A log|f1(x)|_v
    at every finite place v and every x off the zero set of f1.

    For |x|_v <= 1 the right side is <= 0 (f1 is monic integral with roots
    of absolute value <= 1), so only |x|_v = e^u > 1 matters; there
    |f1(x)|_v = e^{du} and the condition reads A d <= L(u)/u for every u.
    Growth at infinity caps A d strictly below 2.
    """
    a, b = as_fraction(a), as_fraction(b)
    d = len(f1) - 1
    if d < 1:
        raise ValueError("f1 must have positive degree")
    primes = set(factorize(a.numerator)) | set(factorize(a.denominator))
    if b != 0:
        primes |= set(factorize(b.numerator)) | set(factorize(b.denominator))
    best, inclusive, binding = 2.0, False, None
    for p in sorted(primes):
        c_a = -(vp(a, p)) * math.log(p)
        c_b = -math.inf if b == 0 else -(vp(b, p)) * math.log(p)
        r = _ratio_inf(c_a, c_b)
        if r < best:
            best, inclusive, binding = r, True, p
    return WeightRange(best / d, inclusive, binding)


def _abs2_in_cos(coeffs: np.ndarray) -> Polynomial:
    """|P(e^{i theta})|^2 as a polynomial in c = cos(theta), for real P."""
    n = len(coeffs)
    cheb = np.zeros(n)
    for j in range(n):
        for k in range(n):
            cheb[abs(j - k)] += coeffs[j] * coeffs[k]
    return Chebyshev(cheb).convert(kind=Polynomial)


@dataclass
class CosineProfile:
    """A function of c = cos(theta) in [-1, 1] of the form
    sum_k w_k * 0.5 * L_k(P_k(c)) where L_k is log+ or log and P_k is a
    polynomial that is non-negative on [-1, 1]."""

    terms: List[Tuple[float, Polynomial, bool]] = field(default_factory=list)

    def add(self, weight: float, poly: Polynomial, plus: bool):
        if weight != 0:
            self.terms.append((weight, poly, plus))

    def __call__(self, c):
        c = np.asarray(c, dtype=float)
        out = np.zeros_like(c)
        with np.errstate(divide="ignore", invalid="ignore"):
            for w, P, plus in self.terms:
                v = P(c)
                lg = np.log(np.where(v > 0, v, 0.0))
                if plus:
                    lg = np.maximum(lg, 0.0)
                out = out + 0.5 * w * lg
        return np.where(np.isnan(out), np.inf, out)

    def critical_points(self) -> List[float]:
        """Endpoints, kinks of the log+ terms, and stationary points of every
        smooth branch (derivative numerators solved as polynomials)."""
        pts = [-1.0, 1.0]
        plus_terms = [t for t in self.terms if t[2]]
        plain = [t for t in self.terms if not t[2]]
        for _, P, _ in plus_terms:
            pts.extend(_real_roots_in(P - 1))
        for active in itertools.product((False, True), repeat=len(plus_terms)):
            live = [t for t, on in zip(plus_terms, active) if on] + plain
            if not live:
                continue
            num = Polynomial([0.0])
            for i, (w, P, _) in enumerate(live):
                prod = Polynomial([w]) * P.deriv()
                for j, (_, Q, _) in enumerate(live):
                    if j != i:
                        prod = prod * Q
                num = num + prod
            pts.extend(_real_roots_in(num))
        return pts

    def minimum(self, grid_size: int = DEFAULT_GRID) -> Tuple[float, float]:
        """(min value, argmin c) from the critical points plus a grid."""
        theta = np.linspace(0.0, np.pi, grid_size + 1)
        cs = np.concatenate([np.array(self.critical_points()), np.cos(theta)])
        vals = self(cs)
        i = int(np.argmin(vals))
        return float(vals[i]), float(cs[i])


def _real_roots_in(P: Polynomial, lo: float = -1.0, hi: float = 1.0) -> List[float]:
    P = P.trim(tol=0.0)
    if P.degree() < 1:
        return []
    out = []
    for r in P.roots():
        if abs(r.imag) <= 1e-12 * max(1.0, abs(r.real)) and lo - 1e-12 <= r.real <= hi + 1e-12:
            out.append(min(hi, max(lo, float(r.real))))
    return out


def _penalized_profiles(a: Fraction, b: Fraction, f1: Sequence[int], weight: float):
    """g_A(z) = log+|z| + log+|az+b| - A log|f1(z)| on its two circles."""
    fa, fb = float(a), float(b)
    f1p = Polynomial([float(x) for x in f1])
    # circle |z| = 1, z = w
    unit = CosineProfile()
    unit.add(1.0, _abs2_in_cos(np.array([fb, fa])), True)
    unit.add(-weight, _abs2_in_cos(f1p.coef), False)
    # circle |az + b| = 1, z = (w - b)/a
    z_of_w = Polynomial([-fb / fa, 1.0 / fa])
    shifted = CosineProfile()
    shifted.add(1.0, _abs2_in_cos(z_of_w.coef), True)
    shifted.add(-weight, _abs2_in_cos(f1p(z_of_w).coef), False)
    return {"unit": unit, "|az+b|=1": shifted}


@dataclass(frozen=True)
class InnerMinimum:
    value: float
    circle: str
    cos_theta: float
    per_circle: Dict[str, float]


def penalized_inner_min(a, b, f1: Sequence[int], weight: float,
                        grid_size: int = DEFAULT_GRID) -> InnerMinimum:
    """H(A): the minimum over z of log+|z| + log+|az+b| - A log|f1(z)|.

    The function is superharmonic off the two circles |z| = 1 and
    |az + b| = 1 and tends to +infinity at infinity while A deg(f1) < 2, so
    its minimum lies on one of them.
    """
    a, b = as_fraction(a), as_fraction(b)
    per, where = {}, {}
    for name, prof in _penalized_profiles(a, b, f1, weight).items():
        per[name], where[name] = prof.minimum(grid_size)
    name = min(per, key=lambda k: (per[k], k))
    return InnerMinimum(per[name], name, where[name], per)


def tau_single_factor(a, b, f1: Union[Sequence[int], MinimizerSet], weight: Optional[float] = None,
                      grid_size: int = DEFAULT_GRID) -> LowerBoundResult:
    """tau(a, b) with a single weight A on f1: max over admissible A of H(A).

    H is a pointwise minimum of functions affine in A, hence concave, so a
    golden-section search over the admissible interval finds its maximum.
    ``weight`` pins A instead of maximizing.
    """
    if isinstance(f1, MinimizerSet):
        f1 = f1.polynomial
    f1 = tuple(int(x) for x in f1)
    a, b = as_fraction(a), as_fraction(b)
    if len(f1) - 1 > 2:
        raise NotImplementedError("weighted bound implemented for deg(f1) <= 2 only")
    rng = weight_range(a, b, f1)

    def H(A):
        return penalized_inner_min(a, b, f1, A, grid_size).value

    if weight is not None:
        if not 0 <= weight <= rng.upper:
            raise ValueError(f"weight {weight} outside admissible range [0, {rng.upper}]")
        A_star, value = weight, H(weight)
    else:
        hi = rng.upper if rng.inclusive else rng.upper * (1 - 1e-9)
        A_star, value = golden_section_max(H, 0.0, hi, xtol=1e-11)
    inner = penalized_inner_min(a, b, f1, A_star, grid_size)
    witness = {
        "A1": A_star,
        "A1_max": rng.upper,
        "A1_max_inclusive": rng.inclusive,
        "f1": list(f1),
        "circle": inner.circle,
        "cos_theta": inner.cos_theta,
    }
    if value <= 0:
        return LowerBoundResult(0.0, LowerMethod.ZERO, witness)
    return LowerBoundResult(value, LowerMethod.TAU_SINGLE_FACTOR, witness)


def tau_b0(a) -> LowerBoundResult:
    """Lower bound h(a) for b = 0 (zero exactly when a is a root of unity).

    The archimedean part is tau(a, 0) = log+|a| at A = 1; the finite places
    contribute log+|a|_p each, giving h(a) in total.
    """
    a = as_fraction(a)
    if a == 0:
        raise ValueError("a must be nonzero")
    if abs(a) == 1:
        return LowerBoundResult(0.0, LowerMethod.ZERO, {"reason": "a is a root of unity"})
    return LowerBoundResult(weil_height(a), LowerMethod.TAU_B0, {"A1": 1.0, "f1": [0, 1]})


# ---------------------------------------------------------------------------
# Combined
# ---------------------------------------------------------------------------

TIE_TOL = 1e-9


def best_lower(a, b, grid_size: int = DEFAULT_GRID) -> LowerBoundResult:
    """Largest available lower bound; earlier methods win near-ties
    (tau_b0, closed forms, tau_single_factor, then L_numeric)."""
    ga, gb = GaussianRational.of(a), GaussianRational.of(b)
    rational = ga.is_real() and gb.is_real()
    candidates: List[LowerBoundResult] = []
    notes: List[str] = []

    if rational:
        fa, fb = ga.re, gb.re
        if fb == 0:
            candidates.append(tau_b0(fa))
        mins = find_height_zero_minimizers(fa, fb)
        cf = closed_form_lower(fa, fb)
        if cf is not None:
            candidates.append(cf)
        if isinstance(mins, MinimizerSet) and fb != 0:
            if mins.degree <= 2:
                candidates.append(tau_single_factor(fa, fb, mins, grid_size=grid_size))
            else:
                notes.append(
                    f"height-zero set has {len(mins.points)} points (f1 of degree "
                    f"{mins.degree}); weighted bound needs deg <= 2, skipped"
                )
        elif mins == "infinite":
            notes.append("infinitely many points of height zero: essential minimum is 0")
        candidates.append(L_numeric(fa, fb, grid_size))
    else:
        cf = closed_form_lower(ga, gb)
        if cf is not None:
            candidates.append(cf)
        candidates.append(L_numeric(ga, gb, grid_size))
        notes.append("weighted bound not implemented over Q(i)")

    best = candidates[0]
    for c in candidates[1:]:
        if c.value > best.value + TIE_TOL:
            best = c
    if best.value <= TIE_TOL:
        return LowerBoundResult(0.0, LowerMethod.ZERO, None, tuple(notes))
    return LowerBoundResult(best.value, best.method, best.witness, tuple(notes))
