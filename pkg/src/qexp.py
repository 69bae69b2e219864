"""Truncated vector-valued q-expansions sum_h c(h) q^h over Hermitian exponents.

Coefficients are TensorCoefficients of a fixed degree (d-, d+). Every operation
states its output trace bound; indices above it are dropped.
"""

from typing import Dict, Iterable, List, Mapping, Optional, Tuple, Union

from loguru import logger
import kmatrix
from cmfield import FieldElement, QuadraticField, SplitPrimeData, in_z_omega, padic_valuation
from errors import ParameterError, ShapeError, UnsupportedError
from hermidx import HermitianIndex, trace_pair, validate_support
from kmatrix import Matrix
from models import CoefficientEntryModel, QExpansionFile, TensorTermModel
from weights import TensorCoefficient, check_word

Degree = Tuple[int, int]


class QExpansion:
    """Immutable truncated q-expansion.

    ``commutative`` marks data living in the commutative quotient of the tensor
    algebra; such coefficients are kept with sorted words and may be multiplied.
    """

    __slots__ = ("n", "d", "trace_bound", "degree", "_coefficients", "commutative")

    def __init__(
        self,
        n: int,
        d: int,
        trace_bound: int,
        degree: Degree,
        coefficients: Mapping[HermitianIndex, TensorCoefficient],
        commutative: bool = False,
    ):
        if n < 1:
            raise ParameterError(f"n must be positive, got {n}")
        if trace_bound < 0:
            raise ParameterError(f"trace bound must be nonnegative, got {trace_bound}")
        self.n = n
        self.d = d
        self.trace_bound = trace_bound
        self.degree: Degree = (int(degree[0]), int(degree[1]))
        self.commutative = commutative
        clean: Dict[HermitianIndex, TensorCoefficient] = {}
        for h, c in coefficients.items():
            if h.n != n or h.d != d:
                raise ParameterError(f"index {h} does not match n={n}, d={d}")
            validate_support(h, trace_bound)
            if c.d != d:
                raise ParameterError(f"coefficient at {h} is over d={c.d}, expected {d}")
            if c.is_zero():
                continue
            deg = c.degree()
            if deg != self.degree:
                raise ShapeError(f"coefficient at {h} has degree {deg}, expected {self.degree}")
            for wm, wp in c.terms:
                check_word(wm, n)
                check_word(wp, n)
            clean[h] = c.commutative() if commutative else c
        self._coefficients = clean

    # -- constructors -------------------------------------------------------
    @classmethod
    def zero(cls, n: int, d: int, trace_bound: int, degree: Degree = (0, 0), commutative: bool = False) -> "QExpansion":
        return cls(n, d, trace_bound, degree, {}, commutative)

    @classmethod
    def constant(cls, c: FieldElement, n: int, trace_bound: int, commutative: bool = False) -> "QExpansion":
        return cls(n, c.d, trace_bound, (0, 0), {HermitianIndex.zero(n, c.d): TensorCoefficient.scalar(c)},
                   commutative)

    @classmethod
    def monomial(cls, h: HermitianIndex, c: TensorCoefficient, trace_bound: int,
                 commutative: bool = False) -> "QExpansion":
        deg = c.degree() or (0, 0)
        return cls(h.n, h.d, trace_bound, deg, {h: c}, commutative)

    @classmethod
    def from_scalars(cls, n: int, d: int, trace_bound: int, values: Mapping[HermitianIndex, FieldElement],
                     commutative: bool = False) -> "QExpansion":
        return cls(n, d, trace_bound, (0, 0), {h: TensorCoefficient.scalar(c) for h, c in values.items()},
                   commutative)

    @classmethod
    def from_series(cls, values: Mapping[int, FieldElement], d: int, trace_bound: int,
                    commutative: bool = False) -> "QExpansion":
        """n = 1 scalar series from {m: c(m)}."""
        return cls.from_scalars(1, d, trace_bound, {HermitianIndex.diag([m], d): c for m, c in values.items()
                                                    if m <= trace_bound}, commutative)

    # -- access -------------------------------------------------------------
    @property
    def coefficients(self) -> Mapping[HermitianIndex, TensorCoefficient]:
        return dict(self._coefficients)

    def coefficient(self, h: HermitianIndex) -> TensorCoefficient:
        return self._coefficients.get(h, TensorCoefficient.zero(self.d))

    def items(self) -> List[Tuple[HermitianIndex, TensorCoefficient]]:
        return sorted(self._coefficients.items(), key=lambda kv: kv[0].sort_key())

    def is_scalar(self) -> bool:
        return self.degree == (0, 0)

    def is_zero(self) -> bool:
        return not self._coefficients

    def erase_degree(self) -> Dict[HermitianIndex, FieldElement]:
        """Coefficient tensors collapsed to the sum of their values."""
        out = {}
        for h, c in self.items():
            t = c.total()
            if t:
                out[h] = t
        return out

    def series(self) -> Dict[int, FieldElement]:
        """n = 1 view {m: c(m)} with the degree erased."""
        if self.n != 1:
            raise ShapeError(f"series view needs n=1, got n={self.n}")
        return {int(h.trace()): c for h, c in self.erase_degree().items()}

    def truncate(self, trace_bound: int) -> "QExpansion":
        bound = min(trace_bound, self.trace_bound)
        kept = {h: c for h, c in self._coefficients.items() if h.trace() <= bound}
        return QExpansion(self.n, self.d, bound, self.degree, kept, self.commutative)

    def with_flag(self, commutative: bool) -> "QExpansion":
        return QExpansion(self.n, self.d, self.trace_bound, self.degree, self._coefficients, commutative)

    def __eq__(self, other: object) -> bool:
        # the flag only normalizes coefficients on construction, so it is not compared
        if not isinstance(other, QExpansion):
            return NotImplemented
        return (self.n, self.d, self.trace_bound, self.degree) == (
            other.n, other.d, other.trace_bound, other.degree) and self._coefficients == other._coefficients

    def __hash__(self) -> int:
        return hash((self.n, self.d, self.trace_bound, self.degree, frozenset(self._coefficients.items())))

    def __repr__(self) -> str:
        return (f"QExpansion(n={self.n}, d={self.d}, bound={self.trace_bound}, degree={self.degree}, "
                f"terms={len(self._coefficients)})")

    # -- serialization ------------------------------------------------------
    def to_file_model(self) -> QExpansionFile:
        entries = []
        for h, c in self.items():
            terms = [TensorTermModel(wm=list(wm), wp=list(wp), c=v.to_pair()) for (wm, wp), v in c.items()]
            entries.append(CoefficientEntryModel(h=h.to_pairs(), c=terms))
        return QExpansionFile(n=self.n, d=self.d, trace_bound=self.trace_bound, degree=list(self.degree),
                              coefficients=entries, commutative=self.commutative or None)

    @classmethod
    def from_file_model(cls, model: QExpansionFile) -> "QExpansion":
        coefficients: Dict[HermitianIndex, TensorCoefficient] = {}
        for entry in model.coefficients:
            h = HermitianIndex.from_pairs(entry.h, model.d)
            if h in coefficients:
                raise ParameterError(f"index {h} listed twice")
            terms = {}
            for t in entry.c:
                key = (tuple(t.wm), tuple(t.wp))
                if key in terms:
                    raise ParameterError(f"word pair {key} listed twice at {h}")
                terms[key] = FieldElement.from_pair(t.c, model.d)
            coefficients[h] = TensorCoefficient(terms, model.d)
        return cls(model.n, model.d, model.trace_bound, (model.degree[0], model.degree[1]), coefficients,
                   bool(model.commutative))


def _check_compatible(f: QExpansion, g: QExpansion) -> None:
    if f.n != g.n:
        raise ShapeError(f"dimension mismatch: n={f.n} vs n={g.n}")
    if f.d != g.d:
        raise ParameterError(f"field mismatch: d={f.d} vs d={g.d}")


def add_scale(f: QExpansion, g: QExpansion, a: FieldElement) -> QExpansion:
    """f + a*g on the common truncation."""
    _check_compatible(f, g)
    if f.degree != g.degree:
        raise ShapeError(f"degree mismatch: {f.degree} vs {g.degree}")
    bound = min(f.trace_bound, g.trace_bound)
    out: Dict[HermitianIndex, TensorCoefficient] = {}
    for h, c in f._coefficients.items():
        if h.trace() <= bound:
            out[h] = c
    for h, c in g._coefficients.items():
        if h.trace() <= bound:
            scaled = c.scale(a)
            out[h] = out[h] + scaled if h in out else scaled
    return QExpansion(f.n, f.d, bound, f.degree, out, f.commutative and g.commutative)


def multiply(f: QExpansion, g: QExpansion) -> QExpansion:
    """Cauchy product in the commutative quotient."""
    _check_compatible(f, g)
    for factor in (f, g):
        if not (factor.is_scalar() or factor.commutative):
            raise UnsupportedError("product of non-scalar q-expansions needs the commutative quotient "
                                   "(mark the inputs as commutative)")
    bound = min(f.trace_bound, g.trace_bound)
    degree = (f.degree[0] + g.degree[0], f.degree[1] + g.degree[1])
    out: Dict[HermitianIndex, TensorCoefficient] = {}
    dropped = 0
    for h1, c1 in f._coefficients.items():
        t1 = h1.trace()
        if t1 > bound:
            continue
        for h2, c2 in g._coefficients.items():
            if t1 + h2.trace() > bound:
                dropped += 1
                continue
            h = h1 + h2
            c = c1.commutative_product(c2)
            out[h] = out[h] + c if h in out else c
    if dropped:
        logger.debug(f"multiply dropped {dropped} products above trace bound {bound}")
    return QExpansion(f.n, f.d, bound, degree, out, f.commutative or g.commutative)


def derivation_D(gamma: Matrix, f: QExpansion) -> QExpansion:
    """c(h) -> tr(h gamma) c(h)."""
    if kmatrix.shape(gamma) != (f.n, f.n):
        raise ShapeError(f"gamma must be {f.n}x{f.n}, got {kmatrix.shape(gamma)}")
    for row in gamma:
        for x in row:
            if x.d != f.d:
                raise ParameterError(f"gamma over d={x.d}, series over d={f.d}")
            if not in_z_omega(x):
                raise ParameterError(f"gamma entry {x} is not in Z[w]")
    out = {}
    for h, c in f._coefficients.items():
        t = trace_pair(h, gamma)
        if t:
            out[h] = c.scale(t)
    return QExpansion(f.n, f.d, f.trace_bound, f.degree, out, f.commutative)


def frobenius(f: QExpansion, p: int, trace_bound: Optional[int] = None) -> QExpansion:
    """(Ff)(q) = f(q^p); the output bound defaults to p times the input bound.

    p is usually prime, but any product of primes is accepted so that F_pp' can be
    compared with F_p o F_p' directly. The frobenius command itself only takes primes.
    """
    if p < 1:
        raise ParameterError(f"p must be a positive integer, got {p}")
    bound = p * f.trace_bound if trace_bound is None else trace_bound
    out = {}
    for h, c in f._coefficients.items():
        ph = h.scale(p)
        if ph.trace() <= bound:
            out[ph] = c
        else:
            logger.debug(f"frobenius dropped index of trace {ph.trace()} above bound {bound}")
    return QExpansion(f.n, f.d, bound, f.degree, out, f.commutative)


def coefficient_values(f: QExpansion) -> Iterable[FieldElement]:
    for c in f._coefficients.values():
        yield from c.terms.values()


def padic_integral(f: QExpansion, v: SplitPrimeData) -> bool:
    if v.d != f.d:
        raise ParameterError(f"prime data for d={v.d}, series over d={f.d}")
    return all(padic_valuation(c, v) >= 0 for c in coefficient_values(f))


def sum_all(items: Iterable[QExpansion], like: QExpansion) -> QExpansion:
    """Sum of expansions with the degree and bound of ``like`` (which is not itself added)."""
    one = QuadraticField(like.d).one
    acc = QExpansion.zero(like.n, like.d, like.trace_bound, like.degree, like.commutative)
    for item in items:
        acc = add_scale(acc, item, one)
    return acc


def scalar_series(values: Mapping[int, Union[int, FieldElement]], d: int, trace_bound: int,
                  commutative: bool = False) -> QExpansion:
    """Convenience n = 1 constructor from integer or field coefficients."""
    k = QuadraticField(d)
    return QExpansion.from_series({m: v if isinstance(v, FieldElement) else k(v) for m, v in values.items()},
                                  d, trace_bound, commutative)
