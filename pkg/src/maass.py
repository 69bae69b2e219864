"""Maass-Shimura operators.

For n = 1 the operator is implemented on nearly holomorphic forms, polynomials in
Y = (2 pi i (z - zbar))^-1 with q-series coefficients. Dividing by 2 pi i gives

    delta_k = theta_q + k Y - Y**2 d/dY,

with rational structure constants; the weight rises from k to k + 2.

For general n the operator is evaluated at points: the closed formulas for the
weights st (x) st, Sym (x) Sym and det (x) det are computed from (z - z*)^-1 and the
derivatives of the coefficient polynomials, and compared with the composite
"Gauss-Manin, modulo the splitting, Kodaira-Spencer" from gmks.
"""

from dataclasses import dataclass, field
from enum import Enum
from itertools import permutations, product
from typing import Dict, List, Mapping, Optional, Tuple, Union

from loguru import logger
from sympy.combinatorics import Permutation
from sympy.polys.rings import PolyElement

import kmatrix
from cmfield import FieldElement, QuadraticField
from errors import ParameterError, ShapeError
from gmks import (
    CoordinateRing,
    DuWord,
    FactoredSection,
    FactoredTerm,
    PointFrame,
    PointOfHn,
    cinfty_operator,
    coordinate_ring,
    du,
    labels,
)
from models import NearlyHoloFormFile, NearlyHoloTermModel
from qexp import QExpansion
from weights import symmetrize_embed

Term = Tuple[int, int]


class NearlyHoloForm:
    """sum c(a, m) Y^a q^m of weight k, truncated at q-exponent ``trace_bound``."""

    __slots__ = ("k", "d", "trace_bound", "_coeffs")

    def __init__(self, k: int, trace_bound: int, coeffs: Mapping[Term, FieldElement], d: int = 1):
        if trace_bound < 0:
            raise ParameterError(f"trace bound must be nonnegative, got {trace_bound}")
        self.k = int(k)
        self.d = d
        self.trace_bound = trace_bound
        clean: Dict[Term, FieldElement] = {}
        for (a, m), c in coeffs.items():
            if a < 0 or m < 0:
                raise ParameterError(f"negative exponent in Y^{a} q^{m}")
            if c.d != d:
                raise ParameterError(f"coefficient of Y^{a} q^{m} over d={c.d}, expected {d}")
            if m > trace_bound or not c:
                continue
            clean[(a, m)] = c
        self._coeffs = clean

    @classmethod
    def from_qexpansion(cls, f: QExpansion, k: int) -> "NearlyHoloForm":
        return cls(k, f.trace_bound, {(0, m): c for m, c in f.series().items()}, f.d)

    @property
    def coeffs(self) -> Dict[Term, FieldElement]:
        return dict(self._coeffs)

    @property
    def y_degree(self) -> int:
        return max((a for a, _ in self._coeffs), default=0)

    def coefficient(self, a: int, m: int) -> FieldElement:
        return self._coeffs.get((a, m), QuadraticField(self.d).zero)

    def items(self) -> List[Tuple[Term, FieldElement]]:
        return sorted(self._coeffs.items())

    def is_y_free(self) -> bool:
        return all(a == 0 for a, _ in self._coeffs)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, NearlyHoloForm):
            return NotImplemented
        return (self.k, self.d, self.trace_bound, self._coeffs) == (other.k, other.d, other.trace_bound, other._coeffs)

    def __hash__(self) -> int:
        return hash((self.k, self.d, self.trace_bound, frozenset(self._coeffs.items())))

    def __repr__(self) -> str:
        return f"NearlyHoloForm(k={self.k}, bound={self.trace_bound}, terms={len(self._coeffs)})"

    def __add__(self, other: "NearlyHoloForm") -> "NearlyHoloForm":
        if self.k != other.k:
            raise ShapeError(f"cannot add forms of weight {self.k} and {other.k}")
        if self.d != other.d:
            raise ParameterError(f"field mismatch: d={self.d} vs d={other.d}")
        out = dict(self._coeffs)
        for key, c in other._coeffs.items():
            out[key] = out[key] + c if key in out else c
        return NearlyHoloForm(self.k, min(self.trace_bound, other.trace_bound), out, self.d)

    def scale(self, c: FieldElement) -> "NearlyHoloForm":
        return NearlyHoloForm(self.k, self.trace_bound, {key: c * v for key, v in self._coeffs.items()}, self.d)

    def __mul__(self, other: "NearlyHoloForm") -> "NearlyHoloForm":
        if self.d != other.d:
            raise ParameterError(f"field mismatch: d={self.d} vs d={other.d}")
        bound = min(self.trace_bound, other.trace_bound)
        out: Dict[Term, FieldElement] = {}
        for (a1, m1), c1 in self._coeffs.items():
            for (a2, m2), c2 in other._coeffs.items():
                if m1 + m2 > bound:
                    continue
                key = (a1 + a2, m1 + m2)
                v = c1 * c2
                out[key] = out[key] + v if key in out else v
        return NearlyHoloForm(self.k + other.k, bound, out, self.d)

    def to_file_model(self) -> NearlyHoloFormFile:
        return NearlyHoloFormFile(
            k=self.k, d=self.d, trace_bound=self.trace_bound,
            terms=[NearlyHoloTermModel(y=a, m=m, c=c.to_pair()) for (a, m), c in self.items()],
        )

    @classmethod
    def from_file_model(cls, model: NearlyHoloFormFile) -> "NearlyHoloForm":
        coeffs: Dict[Term, FieldElement] = {}
        for t in model.terms:
            if (t.y, t.m) in coeffs:
                raise ParameterError(f"term Y^{t.y} q^{t.m} listed twice")
            if t.m > model.trace_bound:
                raise ParameterError(f"q-exponent {t.m} exceeds trace bound {model.trace_bound}")
            coeffs[(t.y, t.m)] = FieldElement.from_pair(t.c, model.d)
        return cls(model.k, model.trace_bound, coeffs, model.d)


def delta(f: NearlyHoloForm) -> NearlyHoloForm:
    """Y^a q^m -> m Y^a q^m + (k - a) Y^(a+1) q^m."""
    out: Dict[Term, FieldElement] = {}
    for (a, m), c in f._coeffs.items():
        for key, factor in (((a, m), m), ((a + 1, m), f.k - a)):
            if factor:
                v = c * factor
                out[key] = out[key] + v if key in out else v
    return NearlyHoloForm(f.k + 2, f.trace_bound, out, f.d)


def delta_iterate(f: NearlyHoloForm, e: int) -> NearlyHoloForm:
    if e < 1:
        raise ParameterError(f"iteration count must be positive, got {e}")
    g = f
    for _ in range(e):
        g = delta(g)
    return g


def holomorphic_part(f: NearlyHoloForm) -> QExpansion:
    """The Y^0 slice as an n = 1 scalar q-expansion."""
    return QExpansion.from_series({m: c for (a, m), c in f._coeffs.items() if a == 0}, f.d, f.trace_bound)


# ---------------------------------------------------------------------------
# general n: closed formulas at points
# ---------------------------------------------------------------------------


class RhoTag(str, Enum):
    STANDARD = "st"
    SYMMETRIC = "sym"
    DETERMINANT = "det"


@dataclass(frozen=True)
class StandardWeightData:
    """sum_(a,b) f_ab du_a (x) du_(n+b)."""

    n: int
    d: int
    coefficients: Mapping[Tuple[int, int], PolyElement] = field(default_factory=dict)
    tag = RhoTag.STANDARD

    def to_factored(self, coords: CoordinateRing) -> FactoredSection:
        n = self.n
        frame = [du(coords, i) for i in range(1, 2 * n + 1)]
        terms = [FactoredTerm(f, (frame[a - 1], frame[n + b - 1])) for (a, b), f in sorted(self.coefficients.items())]
        return FactoredSection(coords, terms)


def _letters(exponents: Tuple[int, ...]) -> Tuple[int, ...]:
    return tuple(i for i, e in enumerate(exponents, start=1) for _ in range(e))


def _check_exponents(exponents: Tuple[int, ...], n: int, degree: int) -> None:
    if len(exponents) != n or any(e < 0 for e in exponents) or sum(exponents) != degree:
        raise ShapeError(f"exponent tuple {exponents} is not a degree-{degree} monomial in {n} variables")


@dataclass(frozen=True)
class SymmetricWeightData:
    """sum f_(l-, l+) syminc(x^l-) (x) syminc(x^l+) with x_i = du_i on the minus side, du_(n+i) on the plus side."""

    n: int
    d: int
    m_minus: int
    m_plus: int
    coefficients: Mapping[Tuple[Tuple[int, ...], Tuple[int, ...]], PolyElement] = field(default_factory=dict)
    tag = RhoTag.SYMMETRIC

    def __post_init__(self) -> None:
        for lm, lp in self.coefficients:
            _check_exponents(lm, self.n, self.m_minus)
            _check_exponents(lp, self.n, self.m_plus)

    def to_factored(self, coords: CoordinateRing) -> FactoredSection:
        n = self.n
        frame = [du(coords, i) for i in range(1, 2 * n + 1)]
        terms = []
        for (lm, lp), f in sorted(self.coefficients.items()):
            for wm in permutations(_letters(lm)):
                for wp in permutations(_letters(lp)):
                    factors = tuple(frame[a - 1] for a in wm) + tuple(frame[n + b - 1] for b in wp)
                    terms.append(FactoredTerm(f, factors))
        return FactoredSection(coords, terms)


def _wedge_words(n: int) -> List[Tuple[Tuple[int, ...], int]]:
    return [(tuple(p[i] + 1 for i in range(n)), Permutation(list(p)).signature()) for p in permutations(range(n))]


@dataclass(frozen=True)
class DeterminantWeightData:
    """f (du_1 ^ ... ^ du_n)^(m-) (x) (du_(n+1) ^ ... ^ du_2n)^(m+), wedges as antisymmetrized tensors."""

    n: int
    d: int
    m_minus: int
    m_plus: int
    coefficient: PolyElement
    tag = RhoTag.DETERMINANT

    def __post_init__(self) -> None:
        if self.m_minus < 0 or self.m_plus < 0:
            raise ParameterError(f"determinant powers must be nonnegative, got {(self.m_minus, self.m_plus)}")

    def words(self) -> Dict[DuWord, int]:
        """The tensor W of the weight as signed du-words."""
        n = self.n
        plus = [(tuple(n + a for a in w), s) for w, s in _wedge_words(n)]
        blocks = [_wedge_words(n)] * self.m_minus + [plus] * self.m_plus
        out: Dict[DuWord, int] = {}
        for choice in product(*blocks):
            word = tuple(a for w, _ in choice for a in w)
            sign = 1
            for _, s in choice:
                sign *= s
            out[word] = out.get(word, 0) + sign
        return {w: s for w, s in out.items() if s}

    def to_factored(self, coords: CoordinateRing) -> FactoredSection:
        frame = [du(coords, i) for i in range(1, 2 * self.n + 1)]
        terms = [FactoredTerm(self.coefficient * s, tuple(frame[a - 1] for a in w))
                 for w, s in sorted(self.words().items())]
        return FactoredSection(coords, terms)


WeightData = Union[StandardWeightData, SymmetricWeightData, DeterminantWeightData]


def _accumulate(out: Dict[DuWord, FieldElement], word: DuWord, value: FieldElement) -> None:
    if value:
        out[word] = out[word] + value if word in out else value


def _split_matrix(point: PointOfHn) -> kmatrix.Matrix:
    """M = (z - z*)^-1."""
    return kmatrix.inverse(kmatrix.sub(point.z, kmatrix.conj_transpose(point.z)))


def _standard_formula(data: StandardWeightData, coords: CoordinateRing, point: PointOfHn,
                      m: kmatrix.Matrix) -> Dict[DuWord, FieldElement]:
    n = data.n
    out: Dict[DuWord, FieldElement] = {}
    for (a, b), f in data.coefficients.items():
        fz = coords.evaluate(f, point.z)
        for i, j in labels(n):
            _accumulate(out, (a, n + b, n + j, i), coords.evaluate(coords.diff(f, i, j), point.z))
        if not fz:
            continue
        for k, l in labels(n):
            _accumulate(out, (l, n + b, n + k, a), fz * m[k - 1][l - 1])
            _accumulate(out, (a, n + l, n + b, k), fz * m[l - 1][k - 1])
    return out


def _embed_sym(poly: Mapping[Tuple[Tuple[int, ...], Tuple[int, ...]], FieldElement], n: int, d: int,
               tail: DuWord, out: Dict[DuWord, FieldElement]) -> None:
    for (lm, lp), c in poly.items():
        minus = symmetrize_embed(_letters(lm), d, "minus")
        plus = symmetrize_embed(_letters(lp), d, "minus")
        for (wm, _), cm in minus.items():
            for (wp, _), cp in plus.items():
                _accumulate(out, wm + tuple(n + b for b in wp) + tail, c * cm * cp)


def _shift(exponents: Tuple[int, ...], remove: int, add: int) -> Tuple[int, ...]:
    e = list(exponents)
    e[remove - 1] -= 1
    e[add - 1] += 1
    return tuple(e)


def _symmetric_formula(data: SymmetricWeightData, coords: CoordinateRing, point: PointOfHn,
                       m: kmatrix.Matrix) -> Dict[DuWord, FieldElement]:
    """Slot derivations of the symmetric tensors, written on exponent tuples and embedded afterwards."""
    n = data.n
    by_tail: Dict[DuWord, Dict[Tuple[Tuple[int, ...], Tuple[int, ...]], FieldElement]] = {}

    def add(tail: DuWord, key: Tuple[Tuple[int, ...], Tuple[int, ...]], value: FieldElement) -> None:
        if value:
            bucket = by_tail.setdefault(tail, {})
            bucket[key] = bucket[key] + value if key in bucket else value

    for (lm, lp), f in data.coefficients.items():
        fz = coords.evaluate(f, point.z)
        for i, j in labels(n):
            add((n + j, i), (lm, lp), coords.evaluate(coords.diff(f, i, j), point.z))
        if not fz:
            continue
        for a in range(1, n + 1):
            if lm[a - 1]:
                for k, l in labels(n):
                    add((n + k, a), (_shift(lm, a, l), lp), fz * m[k - 1][l - 1] * lm[a - 1])
        for b in range(1, n + 1):
            if lp[b - 1]:
                for k, l in labels(n):
                    add((n + b, k), (lm, _shift(lp, b, l)), fz * m[l - 1][k - 1] * lp[b - 1])
    out: Dict[DuWord, FieldElement] = {}
    for tail, poly in by_tail.items():
        _embed_sym(poly, n, data.d, tail, out)
    return out


def _determinant_formula(data: DeterminantWeightData, coords: CoordinateRing, point: PointOfHn,
                         m: kmatrix.Matrix) -> Dict[DuWord, FieldElement]:
    """(df/dz_ij + (m- + m+) M_ji f) W (x) du_(n+j) (x) du_i."""
    n = data.n
    f = data.coefficient
    fz = coords.evaluate(f, point.z)
    total = data.m_minus + data.m_plus
    words = data.words()
    out: Dict[DuWord, FieldElement] = {}
    for i, j in labels(n):
        scalar = coords.evaluate(coords.diff(f, i, j), point.z) + fz * m[j - 1][i - 1] * total
        if not scalar:
            continue
        for w, s in words.items():
            _accumulate(out, w + (n + j, i), scalar * s)
    return out


def _check_point(data: WeightData, point: PointOfHn) -> CoordinateRing:
    if point.n != data.n:
        raise ShapeError(f"point of size {point.n} for weight data with n={data.n}")
    if point.d != data.d:
        raise ParameterError(f"point over d={point.d}, weight data over d={data.d}")
    return coordinate_ring(data.n, data.d)


def shimura_closed_formula(data: WeightData, point: PointOfHn) -> Dict[DuWord, FieldElement]:
    """Closed-formula value of the C-infinity operator at a point, as du-words."""
    coords = _check_point(data, point)
    m = _split_matrix(point)
    if isinstance(data, StandardWeightData):
        return _standard_formula(data, coords, point, m)
    if isinstance(data, SymmetricWeightData):
        return _symmetric_formula(data, coords, point, m)
    return _determinant_formula(data, coords, point, m)


def shimura_composite(data: WeightData, point: PointOfHn, frame: Optional[PointFrame] = None
                      ) -> Dict[DuWord, FieldElement]:
    coords = _check_point(data, point)
    value = cinfty_operator(data.to_factored(coords), point, frame)
    logger.debug(f"composite {data.tag.value} operator at n={data.n}: {len(value)} du-words")
    return value
