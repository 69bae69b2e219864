"""Hermitian exponents h of q-expansions: validation, dual lattice, enumeration."""

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import isqrt
from typing import Iterator, List, Sequence, Tuple, Union

from loguru import logger

import kmatrix
from cmfield import FieldElement, QuadraticField
from errors import ParameterError, ShapeError, UnsupportedError
from kmatrix import Matrix

MAX_ENUMERATION_N = 3


@dataclass(frozen=True)
class HermitianIndex:
    n: int
    entries: Matrix

    def __post_init__(self) -> None:
        rows, cols = kmatrix.shape(self.entries)
        if rows != self.n or cols != self.n:
            raise ShapeError(f"expected a {self.n}x{self.n} matrix, got {rows}x{cols}")
        ds = {x.d for row in self.entries for x in row}
        if len(ds) != 1:
            raise ParameterError(f"mixed field parameters in index: {sorted(ds)}")
        for i in range(self.n):
            if not self.entries[i][i].is_rational():
                raise ParameterError(f"diagonal entry ({i + 1},{i + 1}) is not rational")
            for j in range(i + 1, self.n):
                if self.entries[j][i] != self.entries[i][j].conj():
                    raise ParameterError(f"index is not Hermitian at ({i + 1},{j + 1})")

    @property
    def d(self) -> int:
        return self.entries[0][0].d

    @classmethod
    def zero(cls, n: int, d: int) -> "HermitianIndex":
        return cls(n, kmatrix.zeros(n, n, d))

    @classmethod
    def diag(cls, values: Sequence[int], d: int) -> "HermitianIndex":
        k = QuadraticField(d)
        n = len(values)
        return cls(n, tuple(tuple(k(values[i]) if i == j else k.zero for j in range(n)) for i in range(n)))

    @classmethod
    def from_pairs(cls, rows: Sequence[Sequence[Sequence[str]]], d: int) -> "HermitianIndex":
        m = kmatrix.from_pairs(rows, d)
        return cls(len(m), m)

    def to_pairs(self) -> List[List[List[str]]]:
        return kmatrix.to_pairs(self.entries)

    def entry(self, i: int, j: int) -> FieldElement:
        """1-based access."""
        return self.entries[i - 1][j - 1]

    def trace(self) -> Fraction:
        return kmatrix.trace(self.entries).x

    def __add__(self, other: "HermitianIndex") -> "HermitianIndex":
        return HermitianIndex(self.n, kmatrix.add(self.entries, other.entries))

    def scale(self, c: int) -> "HermitianIndex":
        k = QuadraticField(self.d)
        return HermitianIndex(self.n, kmatrix.scale(k(c), self.entries))

    def is_zero(self) -> bool:
        return kmatrix.is_zero(self.entries)

    def conj_transpose(self) -> "HermitianIndex":
        return HermitianIndex(self.n, kmatrix.conj_transpose(self.entries))

    def permute(self, perm: Sequence[int]) -> "HermitianIndex":
        """Simultaneous row/column permutation; ``perm`` is 0-based."""
        return HermitianIndex(self.n, tuple(tuple(self.entries[perm[i]][perm[j]] for j in range(self.n))
                                            for i in range(self.n)))

    def sort_key(self) -> Tuple[Fraction, ...]:
        return tuple(c for row in self.entries for x in row for c in (x.x, x.y))

    def __lt__(self, other: "HermitianIndex") -> bool:
        return self.sort_key() < other.sort_key()

    def __repr__(self) -> str:
        return f"HermitianIndex({[list(r) for r in self.entries]})"


def is_psd(h: HermitianIndex) -> bool:
    # minors of a Hermitian matrix are real, hence rational here
    return all(m.x >= 0 for m in kmatrix.principal_minors(h.entries))


def is_positive_definite(entries: Matrix) -> bool:
    return all(m.is_rational() and m.x > 0 for m in kmatrix.leading_minors(entries))


def generating_set(n: int, d: int) -> List[Matrix]:
    """Z-basis of Her_n(Z[w]): e_ii, e_ij + e_ji, w e_ij - w e_ji."""
    k = QuadraticField(d)
    out = [kmatrix.unit(n, i, i, d) for i in range(1, n + 1)]
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            out.append(kmatrix.add(kmatrix.unit(n, i, j, d), kmatrix.unit(n, j, i, d)))
            out.append(kmatrix.sub(kmatrix.scale(k.omega, kmatrix.unit(n, i, j, d)),
                                   kmatrix.scale(k.omega, kmatrix.unit(n, j, i, d))))
    return out


def _is_integral(x: FieldElement) -> bool:
    return x.is_rational() and x.x.denominator == 1


def dual_membership(h: HermitianIndex) -> bool:
    omega = QuadraticField(h.d).omega
    for i in range(h.n):
        if h.entries[i][i].x.denominator != 1:
            return False
        for j in range(i + 1, h.n):
            e = h.entries[i][j]
            if e.trace().denominator != 1 or (e * omega).trace().denominator != 1:
                return False
    return True


def dual_membership_by_generators(h: HermitianIndex) -> bool:
    return all(_is_integral(trace_pair(h, m)) for m in generating_set(h.n, h.d))


def trace_pair(h: HermitianIndex, gamma: Union[HermitianIndex, Matrix]) -> FieldElement:
    g = gamma.entries if isinstance(gamma, HermitianIndex) else gamma
    if kmatrix.shape(g) != (h.n, h.n):
        raise ShapeError(f"pairing needs a {h.n}x{h.n} matrix, got {kmatrix.shape(g)}")
    return kmatrix.trace(kmatrix.mul(h.entries, g))


def _diagonals(n: int, bound: int) -> Iterator[Tuple[int, ...]]:
    for diag in product(range(bound + 1), repeat=n):
        if sum(diag) <= bound:
            yield diag


def _off_diagonal_candidates(bound_sq: int, d: int) -> List[FieldElement]:
    """x + y w with 2x, 2dy integral and x^2 + d y^2 <= bound_sq."""
    k = QuadraticField(d)
    out = []
    amax = isqrt(4 * bound_sq)
    for a in range(-amax, amax + 1):
        x = Fraction(a, 2)
        rest = bound_sq - x * x
        if rest < 0:
            continue
        # (b / 2d)^2 d <= rest  <=>  b^2 <= 4 d rest
        bmax = isqrt(int(4 * d * rest))
        for b in range(-bmax, bmax + 1):
            y = Fraction(b, 2 * d)
            if x * x + d * y * y <= bound_sq:
                out.append(k(x, y))
    return out


def enumerate_indices(n: int, trace_bound: int, d: int = 1) -> List[HermitianIndex]:
    if n < 1:
        raise ParameterError(f"n must be positive, got {n}")
    if n > MAX_ENUMERATION_N:
        raise UnsupportedError(f"enumeration is limited to n <= {MAX_ENUMERATION_N}, got n={n}")
    if trace_bound < 0:
        raise ParameterError(f"trace bound must be nonnegative, got {trace_bound}")
    k = QuadraticField(d)
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    found = []
    for diag in _diagonals(n, trace_bound):
        choices = [_off_diagonal_candidates(diag[i] * diag[j], d) for i, j in pairs]
        for off in product(*choices):
            rows = [[k(diag[i]) if i == j else k.zero for j in range(n)] for i in range(n)]
            for (i, j), e in zip(pairs, off):
                rows[i][j] = e
                rows[j][i] = e.conj()
            h = HermitianIndex(n, kmatrix.as_matrix(rows))
            if is_psd(h):
                found.append(h)
    found.sort(key=HermitianIndex.sort_key)
    logger.debug(f"enumerated {len(found)} indices for n={n}, d={d}, bound={trace_bound}")
    return found


def validate_support(h: HermitianIndex, trace_bound: int) -> None:
    """Raise ParameterError naming the first failed condition."""
    if not is_psd(h):
        raise ParameterError(f"index {h} is not positive semidefinite")
    if not dual_membership(h):
        raise ParameterError(f"index {h} is not in the dual lattice")
    if h.trace() > trace_bound:
        raise ParameterError(f"index {h} has trace {h.trace()} above bound {trace_bound}")
