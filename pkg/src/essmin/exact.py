"""Exact arithmetic over Q and Q(i): p-adic absolute values, Weil heights and
the correction term Delta(a, b).

Rationals are plain :class:`fractions.Fraction` objects (always in lowest terms
with a positive denominator). Elements of Q(i) are :class:`GaussianRational`.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Tuple, Union

from essmin.values import ValueWithError

# Per-term budget for double precision logarithms.
LOG_TERM_ERROR = 1e-14

DEFAULT_FACTOR_BOUND = 2**63
# trial division stops here; larger cofactors go to sympy
TRIAL_DIVISION_LIMIT = 10**5

Number = Union[Fraction, "GaussianRational"]


class FactoringLimitError(ValueError):
    """Raised when an integer exceeds the configured factoring bound."""


# ---------------------------------------------------------------------------
# Integer helpers
# ---------------------------------------------------------------------------


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    if n >= TRIAL_DIVISION_LIMIT**2:
        from sympy import isprime

        return bool(isprime(n))
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def factorize(n: int, bound: int = DEFAULT_FACTOR_BOUND) -> Dict[int, int]:
    """Prime factorization of ``|n|``: trial division by small primes, then
    sympy for any remaining cofactor.

    ``n = 0`` and ``n = ±1`` have empty factorizations. Integers larger than
    ``bound`` are refused rather than factored slowly.
    """
    n = abs(n)
    if n > bound:
        raise FactoringLimitError(f"refusing to factor {n}: exceeds bound {bound}")
    out: Dict[int, int] = {}
    if n < 2:
        return out
    for p in (2, 3):
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    d = 5
    step = 2
    while d * d <= n and d < TRIAL_DIVISION_LIMIT:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += step
        step = 6 - step
    if n > 1 and d * d > n:
        out[n] = out.get(n, 0) + 1
    elif n > 1:
        # cofactor without small primes: hand it to a general factorizer
        from sympy import factorint

        for q, e in factorint(n).items():
            out[int(q)] = out.get(int(q), 0) + int(e)
    return out


def vp_int(n: int, p: int) -> int:
    """Additive p-adic valuation of a nonzero integer."""
    if n == 0:
        raise ValueError("valuation of 0 is infinite")
    n = abs(n)
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return k


def vp(q: Fraction, p: int) -> int:
    return vp_int(q.numerator, p) - vp_int(q.denominator, p)


def two_squares(p: int) -> Tuple[int, int]:
    """Return (x, y) with x^2 + y^2 = p, x > y > 0, for a prime p = 1 mod 4.

    Finds a square root of -1 mod p from a quadratic non-residue, then runs the
    Euclidean descent (Cornacchia's algorithm with d = 1).
    """
    if p % 4 != 1 or not is_prime(p):
        raise ValueError(f"{p} is not a prime congruent to 1 mod 4")
    c = 2
    while pow(c, (p - 1) // 2, p) != p - 1:
        c += 1
    r = pow(c, (p - 1) // 4, p)
    a, b = p, r
    limit = math.isqrt(p)
    while b > limit:
        a, b = b, a % b
    x = b
    y = math.isqrt(p - x * x)
    assert x * x + y * y == p
    return (max(x, y), min(x, y))


# ---------------------------------------------------------------------------
# Q(i)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GaussianRational:
    """An element ``re + im*i`` of Q(i)."""

    re: Fraction
    im: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "re", Fraction(self.re))
        object.__setattr__(self, "im", Fraction(self.im))

    @classmethod
    def of(cls, x) -> "GaussianRational":
        if isinstance(x, GaussianRational):
            return x
        if isinstance(x, complex):
            raise TypeError("floating complex numbers are not exact")
        return cls(Fraction(x), Fraction(0))

    def conj(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    def norm(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def is_real(self) -> bool:
        return self.im == 0

    def __complex__(self) -> complex:
        return complex(float(self.re), float(self.im))

    def __abs__(self) -> float:
        return math.sqrt(self.norm())

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __add__(self, other):
        o = GaussianRational.of(other)
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = GaussianRational.of(other)
        return GaussianRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        return GaussianRational.of(other) - self

    def __mul__(self, other):
        o = GaussianRational.of(other)
        return GaussianRational(
            self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = GaussianRational.of(other)
        n = o.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero in Q(i)")
        num = self * o.conj()
        return GaussianRational(num.re / n, num.im / n)

    def __rtruediv__(self, other):
        return GaussianRational.of(other) / self

    def __str__(self) -> str:
        if self.im == 0:
            return str(self.re)
        im = "" if abs(self.im) == 1 else str(abs(self.im))
        if self.re == 0:
            return f"{'-' if self.im < 0 else ''}{im}i"
        return f"{self.re}{'-' if self.im < 0 else '+'}{im}i"


_RAT = r"[+-]?\d+(?:/\d+)?"
_RAT_RE = re.compile(rf"^{_RAT}$")
_GAUSS_RE = re.compile(rf"^(?:(?P<re>{_RAT})(?=[+-]))?(?P<im>[+-]?(?:\d+(?:/\d+)?)?)i$")


def parse_rational(text: str) -> Fraction:
    """Parse ``"n"`` or ``"n/d"`` (ASCII only, no whitespace inside)."""
    s = text.strip()
    if not _RAT_RE.match(s):
        raise ValueError(f"not a rational literal: {text!r}")
    num, _, den = s.partition("/")
    if den and int(den) == 0:
        raise ValueError(f"zero denominator in {text!r}")
    return Fraction(int(num), int(den) if den else 1)


def parse_number(text: str) -> Union[Fraction, GaussianRational]:
    """Parse a rational literal or a Gaussian literal such as ``"1/2+3/4i"``.

    Returns a :class:`Fraction` for purely rational input, including inputs
    like ``"3+0i"``.
    """
    s = text.strip()
    if _RAT_RE.match(s):
        return parse_rational(s)
    m = _GAUSS_RE.match(s)
    if not m:
        raise ValueError(f"not a rational or Gaussian literal: {text!r}")
    re_part = parse_rational(m.group("re")) if m.group("re") else Fraction(0)
    im_txt = m.group("im")
    if im_txt in ("", "+"):
        im_part = Fraction(1)
    elif im_txt == "-":
        im_part = Fraction(-1)
    else:
        im_part = parse_rational(im_txt)
    if im_part == 0:
        return re_part
    return GaussianRational(re_part, im_part)


# ---------------------------------------------------------------------------
# Valuations and heights
# ---------------------------------------------------------------------------


def _logplus(x: float) -> float:
    return math.log(x) if x > 1 else 0.0


def padic_abs(q, p: int) -> Fraction:
    """``|q|_p = p^(-v_p(q))`` as an exact rational; ``|0|_p = 0``."""
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    q = Fraction(q)
    if q == 0:
        return Fraction(0)
    v = vp(q, p)
    return Fraction(1, p**v) if v >= 0 else Fraction(p ** (-v))


def prime_support(a, b) -> List[int]:
    """Primes dividing the reduced denominator of ``a`` or of ``b``."""
    a, b = Fraction(a), Fraction(b)
    if a == 0:
        raise ValueError("a must be nonzero")
    primes = set(factorize(a.denominator))
    if b != 0:
        primes |= set(factorize(b.denominator))
    return sorted(primes)


def weil_height(q) -> float:
    """h(m/n) = log max(|m|, n) for m/n in lowest terms."""
    q = Fraction(q)
    if q == 0:
        return 0.0
    return math.log(max(abs(q.numerator), q.denominator))


def weil_height_by_places(q) -> float:
    """The same height, summed place by place (archimedean plus every p)."""
    q = Fraction(q)
    if q == 0:
        return 0.0
    total = _logplus(abs(q))
    for p in sorted(set(factorize(q.numerator)) | set(factorize(q.denominator))):
        total += _logplus(float(padic_abs(q, p)))
    return total


@dataclass(frozen=True)
class ValuationProfile:
    """For each rational prime p, the exponents (v_id, v_conj) with
    ``|sigma(alpha)|_p = p^(-v_sigma)`` for sigma in {id, conj}.

    Exponents are exact rationals; at the ramified prime 2 they may be
    half-integers.
    """

    entries: Tuple[Tuple[int, Tuple[Fraction, Fraction]], ...]

    def as_dict(self) -> Dict[int, Tuple[Fraction, Fraction]]:
        return dict(self.entries)

    def abs_values(self, p: int) -> Tuple[float, float]:
        v_id, v_conj = self.as_dict().get(p, (Fraction(0), Fraction(0)))
        return (p ** float(-v_id), p ** float(-v_conj))

    def primes(self) -> List[int]:
        return [p for p, _ in self.entries]


def _split_prime_rep(p: int) -> Tuple[int, int]:
    x, y = two_squares(p)
    return (x, y)


def _gauss_int_val(m: int, n: int, p: int) -> Tuple[Fraction, Fraction]:
    """(v_id, v_conj) of the nonzero Gaussian integer m + n i above p."""
    if p == 2:
        k = 0
        while m % 2 == n % 2:
            # (m + ni) / (1 + i) = ((m + n) + (n - m) i) / 2
            m, n = (m + n) // 2, (n - m) // 2
            k += 1
        return (Fraction(k, 2), Fraction(k, 2))
    if p % 4 == 3:
        k = min(vp_int(m, p) if m else 10**9, vp_int(n, p) if n else 10**9)
        return (Fraction(k), Fraction(k))
    x, y = _split_prime_rep(p)

    def val(m: int, n: int, x: int, y: int) -> int:
        # divide by pi = x + y i while possible: (m+ni)(x-yi)/p
        k = 0
        while True:
            re_, im_ = m * x + n * y, n * x - m * y
            if re_ % p or im_ % p:
                return k
            m, n = re_ // p, im_ // p
            k += 1

    return (Fraction(val(m, n, x, y)), Fraction(val(m, n, x, -y)))


def gaussian_valuations(alpha) -> ValuationProfile:
    """Valuation profile of a nonzero element of Q(i).

    Split primes p = 1 mod 4 are handled through a Gaussian prime x + yi with
    x^2 + y^2 = p; "id" is the embedding in which x + yi has positive
    valuation. Inert primes give v_id = v_conj = v_p(N)/2, and the ramified
    prime 2 counts powers of (1 + i) with exponent 1/2 each.
    """
    alpha = GaussianRational.of(alpha)
    if alpha.is_zero():
        raise ValueError("valuation profile of 0 is undefined")
    d = math.lcm(alpha.re.denominator, alpha.im.denominator)
    m, n = int(alpha.re * d), int(alpha.im * d)
    primes = set(factorize(m * m + n * n)) | set(factorize(d))
    entries = []
    for p in sorted(primes):
        v_id, v_conj = _gauss_int_val(m, n, p)
        vd = vp_int(d, p)
        v_id, v_conj = v_id - vd, v_conj - vd
        if v_id or v_conj:
            entries.append((p, (v_id, v_conj)))
    return ValuationProfile(tuple(entries))


def gaussian_weil_height(alpha) -> float:
    alpha = GaussianRational.of(alpha)
    if alpha.is_zero():
        return 0.0
    total = 0.0
    for p, (v_id, v_conj) in gaussian_valuations(alpha).entries:
        for v in (v_id, v_conj):
            if v < 0:
                total += float(-v) * math.log(p)
    total += 2 * _logplus(abs(alpha))
    return total / 2


def delta(a, b) -> ValueWithError:
    """Correction term Delta(a, b): for every prime p and every sigma in
    G(a, b), ``log+ max(|sigma(a)|_p, |sigma(b)|_p)``, plus ``log+ |sigma(a)|``.

    G(a, b) = {id} for rational input and {id, conj} when either argument has
    a nonzero imaginary part.
    """
    if _is_gaussian(a) or _is_gaussian(b):
        a, b = GaussianRational.of(a), GaussianRational.of(b)
        if a.is_zero():
            raise ValueError("a must be nonzero")
        pa = gaussian_valuations(a).as_dict()
        pb = {} if b.is_zero() else gaussian_valuations(b).as_dict()
        zero = (Fraction(0), Fraction(0))
        parts = []
        for p in sorted(set(pa) | set(pb)):
            for k in (0, 1):
                va = pa.get(p, zero)[k]
                # |0|_p = 0, i.e. valuation +infinity
                vb = pb.get(p, zero)[k] if not b.is_zero() else None
                worst = -va if vb is None else max(-va, -vb)
                if worst > 0:
                    parts.append(float(worst) * math.log(p))
        arch = _logplus(abs(a))
        if arch:
            parts += [arch, arch]
        # fsum is order independent, so conjugating the input is exact
        return ValueWithError(math.fsum(parts), len(parts) * LOG_TERM_ERROR)

    a, b = as_fraction(a), as_fraction(b)
    if a == 0:
        raise ValueError("a must be nonzero")
    value, terms = 0.0, 0
    for p in prime_support(a, b):
        worst = max(padic_abs(a, p), padic_abs(b, p))
        if worst > 1:
            value += math.log(worst)
            terms += 1
    if abs(a) > 1:
        value += math.log(abs(a))
        terms += 1
    return ValueWithError(value, terms * LOG_TERM_ERROR)


def as_fraction(x) -> Fraction:
    if isinstance(x, GaussianRational):
        if not x.is_real():
            raise ValueError(f"{x} is not rational")
        return x.re
    return Fraction(x)


def _is_gaussian(x) -> bool:
    return isinstance(x, GaussianRational) and not x.is_real()
