"""Exact arithmetic in K = Q(sqrt(-d)) and p-adic valuations at split primes.

Elements are written x + y*w with w**2 = -d. The generator of K used throughout
the library is alpha = w, so conj(alpha) = -alpha.
"""

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Sequence, Tuple, Union

from cachetools import LRUCache, cached
from loguru import logger
from sympy import factorint, isprime, legendre_symbol, multiplicity, sqrt_mod

from errors import MathDomainError, NotSplitError, ParameterError, PrecisionError

Rational = Union[int, Fraction]
Valuation = Union[int, float]

INFINITY: float = math.inf
DEFAULT_PRECISION_CAP = 64


def parse_rational(text: Union[str, int, Fraction]) -> Fraction:
    """Parse ``"num/den"`` (or a bare integer) into a reduced Fraction."""
    if isinstance(text, (int, Fraction)):
        return Fraction(text)
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError, AttributeError) as e:
        raise ParameterError(f"not a rational number: {text!r} ({e})")


def format_rational(value: Fraction) -> str:
    """Canonical rational text; the denominator is always written."""
    return f"{value.numerator}/{value.denominator}"


@cached(cache=LRUCache(maxsize=256))
def check_field_parameter(d: int) -> int:
    if not isinstance(d, int) or isinstance(d, bool) or d <= 0:
        raise ParameterError(f"field parameter d must be a positive integer, got {d!r}")
    if d > 1 and any(e > 1 for e in factorint(d).values()):
        raise ParameterError(f"field parameter d={d} is not square-free")
    return d


@dataclass(frozen=True)
class FieldElement:
    x: Fraction
    y: Fraction
    d: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "x", Fraction(self.x))
        object.__setattr__(self, "y", Fraction(self.y))
        check_field_parameter(self.d)

    # -- coercion ---------------------------------------------------------
    def _coerce(self, other: object) -> "FieldElement":
        if isinstance(other, FieldElement):
            if other.d != self.d:
                raise ParameterError(f"field mismatch: d={self.d} vs d={other.d}")
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return FieldElement(Fraction(other), Fraction(0), self.d)
        raise TypeError(f"cannot combine FieldElement with {type(other).__name__}")

    # -- ring operations --------------------------------------------------
    def __add__(self, other: object) -> "FieldElement":
        o = self._coerce(other)
        return FieldElement(self.x + o.x, self.y + o.y, self.d)

    __radd__ = __add__

    def __neg__(self) -> "FieldElement":
        return FieldElement(-self.x, -self.y, self.d)

    def __sub__(self, other: object) -> "FieldElement":
        return self + (-self._coerce(other))

    def __rsub__(self, other: object) -> "FieldElement":
        return self._coerce(other) - self

    def __mul__(self, other: object) -> "FieldElement":
        o = self._coerce(other)
        return FieldElement(
            self.x * o.x - self.d * self.y * o.y,
            self.x * o.y + self.y * o.x,
            self.d,
        )

    __rmul__ = __mul__

    def inverse(self) -> "FieldElement":
        n = self.norm()
        if n == 0:
            raise MathDomainError("division by zero in K")
        return FieldElement(self.x / n, -self.y / n, self.d)

    def __truediv__(self, other: object) -> "FieldElement":
        return self * self._coerce(other).inverse()

    def __rtruediv__(self, other: object) -> "FieldElement":
        return self._coerce(other) * self.inverse()

    def __pow__(self, exponent: int) -> "FieldElement":
        if exponent < 0:
            return self.inverse() ** (-exponent)
        result = FieldElement(Fraction(1), Fraction(0), self.d)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def conj(self) -> "FieldElement":
        return FieldElement(self.x, -self.y, self.d)

    # -- invariants -------------------------------------------------------
    def trace(self) -> Fraction:
        return 2 * self.x

    def norm(self) -> Fraction:
        return self.x * self.x + self.d * self.y * self.y

    def is_zero(self) -> bool:
        return self.x == 0 and self.y == 0

    def is_rational(self) -> bool:
        return self.y == 0

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __eq__(self, other: object) -> bool:
        if isinstance(other, FieldElement):
            return self.d == other.d and self.x == other.x and self.y == other.y
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.y == 0 and self.x == other
        return NotImplemented

    def __hash__(self) -> int:
        if self.y == 0:
            return hash(self.x)
        return hash((self.x, self.y, self.d))

    def sort_key(self) -> Tuple[Fraction, Fraction]:
        return (self.x, self.y)

    # -- serialization ----------------------------------------------------
    def to_pair(self) -> List[str]:
        return [format_rational(self.x), format_rational(self.y)]

    @classmethod
    def from_pair(cls, pair: Sequence[Union[str, int]], d: int) -> "FieldElement":
        if len(pair) != 2:
            raise ParameterError(f"field element must be a pair [x, y], got {pair!r}")
        return cls(parse_rational(pair[0]), parse_rational(pair[1]), d)

    def __repr__(self) -> str:
        if self.y == 0:
            return f"{self.x}"
        return f"({self.x} + {self.y}w)"


class QuadraticField:
    """Factory for elements of Q(sqrt(-d))."""

    def __init__(self, d: int):
        self.d = check_field_parameter(d)

    def __call__(self, x: Rational = 0, y: Rational = 0) -> FieldElement:
        return FieldElement(Fraction(x), Fraction(y), self.d)

    @property
    def zero(self) -> FieldElement:
        return self(0)

    @property
    def one(self) -> FieldElement:
        return self(1)

    @property
    def omega(self) -> FieldElement:
        return self(0, 1)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, QuadraticField) and other.d == self.d

    def __hash__(self) -> int:
        return hash(("K", self.d))

    def __repr__(self) -> str:
        return f"QuadraticField(d={self.d})"


def ring_ops(a: FieldElement, b: FieldElement, op: str) -> FieldElement:
    """Named dispatch for ``add``/``sub``/``mul``/``div``; ``conj`` ignores b."""
    if a.d != b.d:
        raise ParameterError(f"field mismatch: d={a.d} vs d={b.d}")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    if op == "conj":
        return a.conj()
    raise ParameterError(f"unknown ring operation {op!r}")


def trace_norm(a: FieldElement) -> Tuple[Fraction, Fraction]:
    return a.trace(), a.norm()


def in_maximal_order(a: FieldElement) -> bool:
    """Membership in O_K (which is Z[(1+w)/2] when d = 3 mod 4, else Z[w])."""
    if a.d % 4 == 3:
        x2, y2 = 2 * a.x, 2 * a.y
        if x2.denominator != 1 or y2.denominator != 1:
            return False
        return (x2.numerator - y2.numerator) % 2 == 0
    return a.x.denominator == 1 and a.y.denominator == 1


def in_z_omega(a: FieldElement) -> bool:
    return a.x.denominator == 1 and a.y.denominator == 1


# ---------------------------------------------------------------------------
# split primes
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SplitPrimeData:
    """A prime v above p, given by Hensel lifts r_k of a square root of -d.

    ``roots[k-1]`` is r_k, defined mod p**k. The embedding K -> Q_p sends w to r.
    """

    p: int
    d: int
    roots: Tuple[int, ...]
    precision: int
    cap: int = DEFAULT_PRECISION_CAP
    conjugated: bool = field(default=False)

    def root_mod(self, k: int) -> int:
        if k > self.precision:
            return self.lift_to(k).roots[k - 1]
        return self.roots[k - 1]

    def lift_to(self, k: int) -> "SplitPrimeData":
        if k <= self.precision:
            return self
        if k > self.cap:
            raise PrecisionError(f"p-adic precision {k} exceeds cap {self.cap} (p={self.p})")
        roots = list(self.roots)
        roots.extend(_hensel_lift(self.p, self.d, roots[-1], len(roots), k))
        logger.debug(f"lifted root at p={self.p} from precision {self.precision} to {k}")
        return SplitPrimeData(self.p, self.d, tuple(roots), k, self.cap, self.conjugated)

    def conjugate(self) -> "SplitPrimeData":
        """The conjugate prime: w is sent to -r."""
        roots = tuple((-r) % self.p ** (k + 1) for k, r in enumerate(self.roots))
        return SplitPrimeData(self.p, self.d, roots, self.precision, self.cap, not self.conjugated)


def _hensel_lift(p: int, d: int, r: int, have: int, want: int) -> List[int]:
    out = []
    for k in range(have, want):
        modulus = p ** (k + 1)
        r = (r - (r * r + d) * pow(2 * r, -1, modulus)) % modulus
        out.append(r)
    return out


def split_prime_data(p: int, d: int, precision: int, cap: int = DEFAULT_PRECISION_CAP) -> SplitPrimeData:
    check_field_parameter(d)
    if precision < 1:
        raise ParameterError(f"precision must be positive, got {precision}")
    if not isprime(p) or p == 2:
        raise ParameterError(f"p must be an odd prime, got {p}")
    if d % p == 0:
        raise NotSplitError(f"p={p} ramifies in Q(sqrt(-{d}))")
    if legendre_symbol(-d % p, p) != 1:
        raise NotSplitError(f"p={p} is inert in Q(sqrt(-{d})): -{d} is not a square mod {p}")
    if precision > cap:
        raise PrecisionError(f"requested precision {precision} exceeds cap {cap}")
    r1 = min(sqrt_mod(-d % p, p, all_roots=True))
    roots = [r1] + _hensel_lift(p, d, r1, 1, precision)
    return SplitPrimeData(p, d, tuple(roots), precision, cap)


def padic_valuation(a: FieldElement, v: SplitPrimeData) -> Valuation:
    """v_p of x + y*r; +inf for 0. Precision is raised on demand up to ``v.cap``."""
    if a.d != v.d:
        raise ParameterError(f"field mismatch: element d={a.d}, prime data d={v.d}")
    if a.is_zero():
        return INFINITY
    den = math.lcm(a.x.denominator, a.y.denominator)
    big_x = int(a.x * den)
    big_y = int(a.y * den)
    shift = multiplicity(v.p, den)
    if big_y == 0:
        return multiplicity(v.p, abs(big_x)) - shift
    # v(X + Y r) <= v(X^2 + d Y^2), so precision v(N) + 1 always separates it from 0
    needed = multiplicity(v.p, big_x * big_x + v.d * big_y * big_y) + 1
    k = min(max(v.precision, 1), needed)
    data = v
    while True:
        if k > data.precision:
            data = data.lift_to(k)
        modulus = v.p ** k
        t = (big_x + big_y * data.root_mod(k)) % modulus
        if t != 0:
            return multiplicity(v.p, t) - shift
        if k >= needed:
            raise PrecisionError(f"valuation did not stabilise at precision {k} (p={v.p})")
        k = min(2 * k, needed)


def padic_integral_element(a: FieldElement, v: SplitPrimeData) -> bool:
    return padic_valuation(a, v) >= 0
