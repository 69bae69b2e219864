"""Gauss-Manin / Kodaira-Spencer computations on the horizontal frame over H_n.

Sections are tensors in the horizontal symbols alpha_i, beta_i, alpha'_i, beta'_i
with coefficients polynomial in w (w**2 = -d), z_ij and zbar_ij. The generator
alpha of K is w, so alphabar = -w. The connection kills the horizontal symbols
and differentiates coefficients in the holomorphic directions z_ij only.

Projection modulo the splitting is done at points: du_1..du_2n, dubar_1..dubar_2n
form a basis of the fibre there, and reduction keeps the du part (or the dubar
part, for Kodaira-Spencer).
"""

from dataclasses import dataclass
from enum import IntEnum
from fractions import Fraction
from itertools import product
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from cachetools import LRUCache, cached
from loguru import logger
from sympy import QQ
from sympy.polys.orderings import lex
from sympy.polys.rings import PolyElement, PolyRing, ring

import kmatrix
from cmfield import FieldElement, QuadraticField
from errors import InvariantViolation, MathDomainError, ParameterError, ShapeError
from hermidx import is_positive_definite
from kmatrix import Matrix, Vector

Label = Tuple[int, int]
DuWord = Tuple[int, ...]


# ---------------------------------------------------------------------------
# coefficient ring
# ---------------------------------------------------------------------------


class CoordinateRing:
    """Q[w, z_ij, zbar_ij] with w reduced by w**2 = -d."""

    def __init__(self, n: int, d: int):
        if n < 1:
            raise ParameterError(f"n must be positive, got {n}")
        self.n = n
        self.d = d
        self.field = QuadraticField(d)
        names = ["w"]
        names += [f"z{i}{j}" for i in range(1, n + 1) for j in range(1, n + 1)]
        names += [f"zb{i}{j}" for i in range(1, n + 1) for j in range(1, n + 1)]
        gens = ring(",".join(names), QQ, lex)
        self.ring: PolyRing = gens[0]
        self.w: PolyElement = gens[1]
        self._z = {(i, j): gens[2 + (i - 1) * n + (j - 1)] for i in range(1, n + 1) for j in range(1, n + 1)}
        self._zb = {(i, j): gens[2 + n * n + (i - 1) * n + (j - 1)] for i in range(1, n + 1) for j in range(1, n + 1)}

    def __eq__(self, other: object) -> bool:
        return isinstance(other, CoordinateRing) and (other.n, other.d) == (self.n, self.d)

    def __hash__(self) -> int:
        return hash(("CoordinateRing", self.n, self.d))

    def __repr__(self) -> str:
        return f"CoordinateRing(n={self.n}, d={self.d})"

    @property
    def zero(self) -> PolyElement:
        return self.ring.zero

    @property
    def one(self) -> PolyElement:
        return self.ring.one

    def z(self, i: int, j: int) -> PolyElement:
        return self._z[(i, j)]

    def zbar(self, i: int, j: int) -> PolyElement:
        return self._zb[(i, j)]

    def const(self, c: Fraction) -> PolyElement:
        c = Fraction(c)
        return self.ring(QQ(c.numerator, c.denominator))

    def from_field(self, a: FieldElement) -> PolyElement:
        return self.const(a.x) + self.const(a.y) * self.w

    def reduce(self, p: PolyElement) -> PolyElement:
        """Replace w**2 by -d."""
        if all(m[0] < 2 for m in p.keys()):
            return p
        out: Dict[Tuple[int, ...], object] = {}
        for monom, coeff in p.terms():
            e = monom[0]
            new = (e % 2,) + tuple(monom[1:])
            c = coeff * QQ((-self.d) ** (e // 2))
            out[new] = out[new] + c if new in out else c
        return self.ring.from_dict({m: c for m, c in out.items() if c})

    def mul(self, p: PolyElement, q: PolyElement) -> PolyElement:
        return self.reduce(p * q)

    def diff(self, p: PolyElement, i: int, j: int) -> PolyElement:
        return p.diff(self.z(i, j))

    def evaluate(self, p: PolyElement, z: Matrix) -> FieldElement:
        k = self.field
        acc = k.zero
        n = self.n
        values = [k.omega]
        values += [z[i][j] for i in range(n) for j in range(n)]
        values += [z[i][j].conj() for i in range(n) for j in range(n)]
        for monom, coeff in p.terms():
            term = k(Fraction(int(QQ.numer(coeff)), int(QQ.denom(coeff))))
            for value, e in zip(values, monom):
                if e:
                    term = term * value ** e
            acc = acc + term
        return acc

    def is_holomorphic(self, p: PolyElement) -> bool:
        """True when p involves no zbar variable."""
        start = 1 + self.n * self.n
        return all(not any(m[start:]) for m in p.keys())


@cached(cache=LRUCache(maxsize=32))
def coordinate_ring(n: int, d: int) -> CoordinateRing:
    return CoordinateRing(n, d)


# ---------------------------------------------------------------------------
# horizontal symbols and sections
# ---------------------------------------------------------------------------


class SymbolKind(IntEnum):
    ALPHA = 0
    BETA = 1
    ALPHA_PRIME = 2
    BETA_PRIME = 3


@dataclass(frozen=True, order=True)
class HorizontalSymbol:
    kind: SymbolKind
    index: int

    def position(self, n: int) -> int:
        """Coordinate slot in the 4n-dimensional fibre."""
        return int(self.kind) * n + self.index - 1

    def __repr__(self) -> str:
        name = ("a", "b", "a'", "b'")[int(self.kind)]
        return f"{name}{self.index}"


Word = Tuple[HorizontalSymbol, ...]


def alpha(i: int) -> HorizontalSymbol:
    return HorizontalSymbol(SymbolKind.ALPHA, i)


def beta(i: int) -> HorizontalSymbol:
    return HorizontalSymbol(SymbolKind.BETA, i)


def alpha_prime(i: int) -> HorizontalSymbol:
    return HorizontalSymbol(SymbolKind.ALPHA_PRIME, i)


def beta_prime(i: int) -> HorizontalSymbol:
    return HorizontalSymbol(SymbolKind.BETA_PRIME, i)


class SymbolicSection:
    """Homogeneous tensor of fixed degree in the horizontal symbols."""

    __slots__ = ("ring", "_terms", "degree")

    def __init__(self, coords: CoordinateRing, terms: Mapping[Word, PolyElement], degree: Optional[int] = None):
        self.ring = coords
        clean: Dict[Word, PolyElement] = {}
        for word, p in terms.items():
            p = coords.reduce(p)
            if p:
                clean[tuple(word)] = p
        degrees = {len(w) for w in clean}
        if len(degrees) > 1:
            raise ShapeError(f"mixed tensor degrees {sorted(degrees)} in one section")
        if degrees:
            found = degrees.pop()
            if degree is not None and degree != found:
                raise ShapeError(f"section of degree {found} declared as degree {degree}")
            degree = found
        self.degree = degree if degree is not None else 0
        for word in clean:
            for s in word:
                if not 1 <= s.index <= coords.n:
                    raise ParameterError(f"symbol {s} outside 1..{coords.n}")
        self._terms = clean

    @classmethod
    def zero(cls, coords: CoordinateRing, degree: int = 0) -> "SymbolicSection":
        return cls(coords, {}, degree)

    @classmethod
    def scalar(cls, coords: CoordinateRing, f: PolyElement) -> "SymbolicSection":
        return cls(coords, {(): f}, 0)

    @classmethod
    def monomial(cls, coords: CoordinateRing, word: Sequence[HorizontalSymbol], f: PolyElement) -> "SymbolicSection":
        return cls(coords, {tuple(word): f}, len(word))

    @property
    def terms(self) -> Dict[Word, PolyElement]:
        return dict(self._terms)

    def items(self) -> List[Tuple[Word, PolyElement]]:
        return sorted(self._terms.items(), key=lambda kv: kv[0])

    def is_zero(self) -> bool:
        return not self._terms

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SymbolicSection):
            return NotImplemented
        return self.ring == other.ring and self._terms == other._terms

    def __hash__(self) -> int:
        return hash((self.ring, frozenset((w, frozenset(p.items())) for w, p in self._terms.items())))

    def __repr__(self) -> str:
        return "SymbolicSection(" + " + ".join(f"({p})*{list(w)}" for w, p in self.items()) + ")"

    def __add__(self, other: "SymbolicSection") -> "SymbolicSection":
        if self._terms and other._terms and self.degree != other.degree:
            raise ShapeError(f"cannot add sections of degree {self.degree} and {other.degree}")
        out = dict(self._terms)
        for w, p in other._terms.items():
            out[w] = out[w] + p if w in out else p
        return SymbolicSection(self.ring, out, self.degree if self._terms else other.degree)

    def __neg__(self) -> "SymbolicSection":
        return SymbolicSection(self.ring, {w: -p for w, p in self._terms.items()}, self.degree)

    def __sub__(self, other: "SymbolicSection") -> "SymbolicSection":
        return self + (-other)

    def scale(self, f: PolyElement) -> "SymbolicSection":
        return SymbolicSection(self.ring, {w: self.ring.mul(f, p) for w, p in self._terms.items()}, self.degree)

    def tensor(self, other: "SymbolicSection") -> "SymbolicSection":
        out: Dict[Word, PolyElement] = {}
        for w1, p1 in self._terms.items():
            for w2, p2 in other._terms.items():
                key = w1 + w2
                v = p1 * p2
                out[key] = out[key] + v if key in out else v
        return SymbolicSection(self.ring, out, self.degree + other.degree)

    def vector(self, z: Matrix) -> Vector:
        """Fibre coordinates of a degree-1 section at z (order: alpha, beta, alpha', beta')."""
        if self.degree != 1 and self._terms:
            raise ShapeError(f"point evaluation of a degree-{self.degree} section as a vector")
        n = self.ring.n
        k = self.ring.field
        out = [k.zero] * (4 * n)
        for (s,), p in self._terms.items():
            out[s.position(n)] = out[s.position(n)] + self.ring.evaluate(p, z)
        return tuple(out)


def tensor_all(sections: Sequence[SymbolicSection]) -> SymbolicSection:
    acc = sections[0]
    for s in sections[1:]:
        acc = acc.tensor(s)
    return acc


# ---------------------------------------------------------------------------
# the frames du, dubar
# ---------------------------------------------------------------------------


def _linear(coords: CoordinateRing, pairs: Iterable[Tuple[HorizontalSymbol, PolyElement]]) -> SymbolicSection:
    out: Dict[Word, PolyElement] = {}
    for s, p in pairs:
        out[(s,)] = out[(s,)] + p if (s,) in out else p
    return SymbolicSection(coords, out, 1)


def _check_du_index(coords: CoordinateRing, i: int) -> None:
    if not 1 <= i <= 2 * coords.n:
        raise ParameterError(f"du index {i} outside 1..{2 * coords.n}")


def du(coords: CoordinateRing, i: int) -> SymbolicSection:
    """du_i for i <= n, and the transposed form with alpha in place of alphabar for i > n."""
    _check_du_index(coords, i)
    n, w, one = coords.n, coords.w, coords.one
    if i <= n:
        c = -w
        zs = [coords.z(i, j) for j in range(1, n + 1)]
        k = i
    else:
        c = w
        k = i - n
        zs = [coords.z(j, k) for j in range(1, n + 1)]
    pairs = [(alpha(k), one), (alpha_prime(k), c)]
    for j, zij in enumerate(zs, start=1):
        pairs.append((beta(j), zij))
        pairs.append((beta_prime(j), c * zij))
    return _linear(coords, pairs)


def du_bar(coords: CoordinateRing, i: int) -> SymbolicSection:
    """Complex conjugate of du_i."""
    _check_du_index(coords, i)
    n, w, one = coords.n, coords.w, coords.one
    if i <= n:
        c = w
        zs = [coords.zbar(i, j) for j in range(1, n + 1)]
        k = i
    else:
        c = -w
        k = i - n
        zs = [coords.zbar(j, k) for j in range(1, n + 1)]
    pairs = [(alpha(k), one), (alpha_prime(k), c)]
    for j, zij in enumerate(zs, start=1):
        pairs.append((beta(j), zij))
        pairs.append((beta_prime(j), c * zij))
    return _linear(coords, pairs)


def a_minus(coords: CoordinateRing, k: int) -> SymbolicSection:
    return _linear(coords, [(alpha(k), coords.one), (alpha_prime(k), -coords.w)])


def a_plus(coords: CoordinateRing, k: int) -> SymbolicSection:
    return _linear(coords, [(alpha(k), coords.one), (alpha_prime(k), coords.w)])


def b_minus(coords: CoordinateRing, k: int) -> SymbolicSection:
    """beta_k + alphabar beta'_k."""
    return _linear(coords, [(beta(k), coords.one), (beta_prime(k), -coords.w)])


def b_plus(coords: CoordinateRing, k: int) -> SymbolicSection:
    """beta_k + alpha beta'_k."""
    return _linear(coords, [(beta(k), coords.one), (beta_prime(k), coords.w)])


# ---------------------------------------------------------------------------
# Gauss-Manin
# ---------------------------------------------------------------------------


def labels(n: int) -> List[Label]:
    return [(i, j) for i in range(1, n + 1) for j in range(1, n + 1)]


def format_label(label: Label) -> str:
    return f"dz_{label[0]}{label[1]}"


def gauss_manin(s: SymbolicSection) -> List[Tuple[SymbolicSection, Label]]:
    """Nonzero pieces of nabla(s) in the order of the labels dz_ij."""
    coords = s.ring
    out = []
    for label in labels(coords.n):
        piece = SymbolicSection(coords, {w: coords.diff(p, *label) for w, p in s.terms.items()}, s.degree)
        if not piece.is_zero():
            out.append((piece, label))
    return out


@dataclass(frozen=True)
class FactoredTerm:
    coefficient: PolyElement
    factors: Tuple[SymbolicSection, ...]


class FactoredSection:
    """Sum of g * (s_1 (x) ... (x) s_r) with degree-1 factors, kept unexpanded."""

    def __init__(self, coords: CoordinateRing, terms: Sequence[FactoredTerm]):
        self.ring = coords
        degrees = {len(t.factors) for t in terms}
        if len(degrees) > 1:
            raise ShapeError(f"mixed tensor degrees {sorted(degrees)} in one factored section")
        for t in terms:
            if any(f.degree != 1 for f in t.factors):
                raise ShapeError("factored sections take degree-1 factors only")
        self.terms = [t for t in terms if t.coefficient]
        self.degree = degrees.pop() if degrees else 0

    def expand(self) -> SymbolicSection:
        acc = SymbolicSection.zero(self.ring, self.degree)
        for t in self.terms:
            if t.factors:
                body = tensor_all(list(t.factors)).scale(t.coefficient)
            else:
                body = SymbolicSection.scalar(self.ring, t.coefficient)
            acc = acc + body
        return acc


def gauss_manin_product(s: FactoredSection) -> Dict[Label, FactoredSection]:
    """Product rule slot by slot; the one-form is moved to the last position."""
    coords = s.ring
    cache: Dict[int, List[Tuple[SymbolicSection, Label]]] = {}
    pieces: Dict[Label, List[FactoredTerm]] = {label: [] for label in labels(coords.n)}
    for t in s.terms:
        for label in labels(coords.n):
            dg = coords.diff(t.coefficient, *label)
            if dg:
                pieces[label].append(FactoredTerm(dg, t.factors))
        for pos, factor in enumerate(t.factors):
            key = id(factor)
            if key not in cache:
                cache[key] = gauss_manin(factor)
            for piece, label in cache[key]:
                new_factors = t.factors[:pos] + (piece,) + t.factors[pos + 1:]
                pieces[label].append(FactoredTerm(t.coefficient, new_factors))
    return {label: FactoredSection(coords, ts) for label, ts in pieces.items() if ts}


# ---------------------------------------------------------------------------
# points and fibre linear algebra
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PointOfHn:
    """z in K^(n x n) with w(z* - z) positive definite (the image of i(z* - z) > 0)."""

    z: Matrix

    def __post_init__(self) -> None:
        rows, cols = kmatrix.shape(self.z)
        if rows != cols or rows == 0:
            raise ParameterError(f"point must be a square matrix, got {rows}x{cols}")
        if not is_positive_definite(self.imaginary_form()):
            raise MathDomainError("point is not in H_n: i(z* - z) is not positive definite")

    @property
    def n(self) -> int:
        return len(self.z)

    @property
    def d(self) -> int:
        return self.z[0][0].d

    def imaginary_form(self) -> Matrix:
        omega = QuadraticField(self.z[0][0].d).omega
        return kmatrix.scale(omega, kmatrix.sub(kmatrix.conj_transpose(self.z), self.z))

    @classmethod
    def from_pairs(cls, rows: Sequence[Sequence[Sequence[str]]], d: int) -> "PointOfHn":
        return cls(kmatrix.from_pairs(rows, d))

    def to_pairs(self) -> List[List[List[str]]]:
        return kmatrix.to_pairs(self.z)


class PointFrame:
    """The basis du_1..du_2n, dubar_1..dubar_2n of the fibre at a point."""

    def __init__(self, point: PointOfHn):
        self.point = point
        self.coords = coordinate_ring(point.n, point.d)
        n = point.n
        rows = [du(self.coords, i).vector(point.z) for i in range(1, 2 * n + 1)]
        rows += [du_bar(self.coords, i).vector(point.z) for i in range(1, 2 * n + 1)]
        self.basis: Matrix = kmatrix.as_matrix(rows)
        try:
            self.inverse = kmatrix.inverse(self.basis)
        except MathDomainError as e:
            raise InvariantViolation(f"du/dubar frame is degenerate at a point of H_n: {e}")

    def coordinates(self, v: Vector) -> Vector:
        """Coefficients on du_1..du_2n, dubar_1..dubar_2n."""
        return kmatrix.mul_vec(v, self.inverse)

    def holomorphic_part(self, v: Vector) -> Vector:
        """du coordinates: the class modulo the span of the dubar."""
        return self.coordinates(v)[: 2 * self.point.n]

    def antiholomorphic_vector(self, v: Vector) -> Vector:
        """The dubar component of v, as a fibre vector."""
        n2 = 2 * self.point.n
        t = self.coordinates(v)
        k = self.coords.field
        out = [k.zero] * len(v)
        for a in range(n2, 2 * n2):
            if t[a]:
                out = [x + t[a] * y for x, y in zip(out, self.basis[a])]
        return tuple(out)


def _polar_coordinates(v: Vector, n: int) -> Tuple[List[FieldElement], List[FieldElement], List[FieldElement],
                                                     List[FieldElement]]:
    """Coefficients on a-_k, a+_k, b-_k, b+_k."""
    half = Fraction(1, 2)
    am, ap, bm, bp = [], [], [], []
    for k in range(n):
        a, a_pr = v[k], v[2 * n + k]
        b, b_pr = v[n + k], v[3 * n + k]
        omega_inv = QuadraticField(a.d).omega.inverse()
        am.append((a - a_pr * omega_inv) * half)
        ap.append((a + a_pr * omega_inv) * half)
        bm.append((b - b_pr * omega_inv) * half)
        bp.append((b + b_pr * omega_inv) * half)
    return am, ap, bm, bp


def polarization_pairing(v: Vector, u: Vector, n: int) -> FieldElement:
    """Alternating pairing with E(b-_k, a+_k) = E(b+_k, a-_k) = 1 and all other basis pairs 0."""
    vam, vap, vbm, vbp = _polar_coordinates(v, n)
    uam, uap, ubm, ubp = _polar_coordinates(u, n)
    acc = QuadraticField(v[0].d).zero
    for k in range(n):
        acc = acc + vbm[k] * uap[k] - vap[k] * ubm[k] + vbp[k] * uam[k] - vam[k] * ubp[k]
    return acc


# ---------------------------------------------------------------------------
# Kodaira-Spencer
# ---------------------------------------------------------------------------


def ks_value(i: int, j: int, frame: PointFrame) -> Dict[Label, FieldElement]:
    """KS(du_i (x) dw_j) as a combination of dz labels."""
    coords = frame.coords
    target = du(coords, j).vector(frame.point.z)
    out: Dict[Label, FieldElement] = {}
    for piece, label in gauss_manin(du(coords, i)):
        residue = frame.antiholomorphic_vector(piece.vector(frame.point.z))
        value = polarization_pairing(residue, target, coords.n)
        if value:
            out[label] = out[label] + value if label in out else value
    return {k: v for k, v in out.items() if v}


def ks_pair(i: int, j: int, point: PointOfHn, frame: Optional[PointFrame] = None) -> Optional[Label]:
    frame = frame or PointFrame(point)
    value = ks_value(i, j, frame)
    if not value:
        return None
    if len(value) != 1 or next(iter(value.values())) != 1:
        raise InvariantViolation(f"KS(du_{i} (x) dw_{j}) = {value} is not a single dz label")
    return next(iter(value))


def ks_image(element: Mapping[Label, FieldElement], frame: PointFrame) -> Dict[Label, FieldElement]:
    """KS of sum c_ij du_i (x) dw_j."""
    out: Dict[Label, FieldElement] = {}
    for (i, j), c in element.items():
        for label, v in ks_value(i, j, frame).items():
            out[label] = out[label] + c * v if label in out else c * v
    return {k: v for k, v in out.items() if v}


def ispan_elements(n: int, d: int) -> List[Dict[Label, FieldElement]]:
    """Antisymmetrizers du_i dw_j - du_j dw_i and the like-signed products du_i dw_j."""
    k = QuadraticField(d)
    out: List[Dict[Label, FieldElement]] = []
    for i in range(1, 2 * n + 1):
        for j in range(i + 1, 2 * n + 1):
            out.append({(i, j): k.one, (j, i): -k.one})
    for i in range(1, 2 * n + 1):
        for j in range(1, 2 * n + 1):
            if (i <= n) == (j <= n):
                out.append({(i, j): k.one})
    return out


def ks_kernel_check(n: int, point: PointOfHn) -> bool:
    if point.n != n:
        raise ShapeError(f"point of size {point.n} for n={n}")
    frame = PointFrame(point)
    for element in ispan_elements(n, point.d):
        image = ks_image(element, frame)
        if image:
            logger.debug(f"KS kernel element {element} maps to {image}")
            return False
    return True


def ks_table(point: PointOfHn) -> List[List[Optional[Label]]]:
    frame = PointFrame(point)
    n2 = 2 * point.n
    return [[ks_pair(i, j, point, frame) for j in range(1, n2 + 1)] for i in range(1, n2 + 1)]


def vecdui_check(frame: PointFrame) -> bool:
    """(tz - zbar)^-1 (du_(n+.) - dubar_.) = b+ and (z - z*)^-1 (du_. - dubar_(n+.)) = b-, at the point."""
    coords, z, n = frame.coords, frame.point.z, frame.point.n
    x_plus = kmatrix.inverse(kmatrix.sub(kmatrix.transpose(z), kmatrix.conj(z)))
    x_minus = kmatrix.inverse(kmatrix.sub(z, kmatrix.conj_transpose(z)))
    diff_plus = [kmatrix.sub((du(coords, n + j).vector(z),), (du_bar(coords, j).vector(z),))[0]
                 for j in range(1, n + 1)]
    diff_minus = [kmatrix.sub((du(coords, j).vector(z),), (du_bar(coords, n + j).vector(z),))[0]
                  for j in range(1, n + 1)]
    for inv, diffs, target in ((x_plus, diff_plus, b_plus), (x_minus, diff_minus, b_minus)):
        combined = kmatrix.mul(inv, kmatrix.as_matrix(diffs))
        for i in range(n):
            if combined[i] != target(coords, i + 1).vector(z):
                return False
    return True


# ---------------------------------------------------------------------------
# the operator D and its composite definition
# ---------------------------------------------------------------------------


def D_thexpl(s: SymbolicSection) -> SymbolicSection:
    """f * w  ->  sum_ij df/dz_ij * w (x) Q_j (x) P_i with P_i = du_i, Q_j = du_(n+j)."""
    coords = s.ring
    if s.is_zero():
        return SymbolicSection.zero(coords, s.degree + 2)
    if len(s.terms) != 1:
        raise ShapeError("D_thexpl takes a single horizontal word times a polynomial; split sums first")
    (word, f), = s.terms.items()
    n = coords.n
    acc = SymbolicSection.zero(coords, s.degree + 2)
    base = SymbolicSection.monomial(coords, word, coords.one)
    for i, j in labels(n):
        df = coords.diff(f, i, j)
        if df:
            acc = acc + base.tensor(du(coords, n + j)).tensor(du(coords, i)).scale(df)
    return acc


def D_operator(s: SymbolicSection) -> SymbolicSection:
    """D extended additively over the words of s."""
    acc = SymbolicSection.zero(s.ring, s.degree + 2)
    for word, f in s.items():
        acc = acc + D_thexpl(SymbolicSection.monomial(s.ring, word, f))
    return acc


def ks_inject(piece: SymbolicSection, label: Label) -> SymbolicSection:
    """dz_ij -> du_(n+j) (x) du_i appended on the right."""
    coords = piece.ring
    i, j = label
    return piece.tensor(du(coords, coords.n + j)).tensor(du(coords, i))


def gauss_manin_then_inject(s: SymbolicSection) -> SymbolicSection:
    acc = SymbolicSection.zero(s.ring, s.degree + 2)
    for piece, label in gauss_manin(s):
        acc = acc + ks_inject(piece, label)
    return acc


def cinfty_operator(s: FactoredSection, point: PointOfHn, frame: Optional[PointFrame] = None
                    ) -> Dict[DuWord, FieldElement]:
    """nabla, then every slot modulo the dubar, then dz_ij -> du_(n+j) (x) du_i, at one point.

    Keys are words in the du indices 1..2n.
    """
    frame = frame or PointFrame(point)
    coords = s.ring
    n = coords.n
    memo: Dict[int, Vector] = {}
    out: Dict[DuWord, FieldElement] = {}
    for (i, j), piece in gauss_manin_product(s).items():
        tail = (n + j, i)
        for t in piece.terms:
            g = coords.evaluate(t.coefficient, point.z)
            if not g:
                continue
            slots = []
            for factor in t.factors:
                key = id(factor)
                if key not in memo:
                    memo[key] = frame.holomorphic_part(factor.vector(point.z))
                slots.append([(a + 1, c) for a, c in enumerate(memo[key]) if c])
            for choice in product(*slots):
                word = tuple(a for a, _ in choice) + tail
                value = g
                for _, c in choice:
                    value = value * c
                out[word] = out[word] + value if word in out else value
    return {k: v for k, v in out.items() if v}
