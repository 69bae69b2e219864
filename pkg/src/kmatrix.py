"""Exact matrices over K, stored as tuples of tuples of FieldElement.

Row operations follow the usual Gauss-Jordan scheme on an augmented block.
A singular pivot column raises MathDomainError.
"""

from itertools import combinations
from typing import Iterable, List, Sequence, Tuple

from cmfield import FieldElement, QuadraticField, Rational
from errors import MathDomainError, ShapeError

Matrix = Tuple[Tuple[FieldElement, ...], ...]
Vector = Tuple[FieldElement, ...]


def as_matrix(rows: Iterable[Iterable[FieldElement]]) -> Matrix:
    m = tuple(tuple(r) for r in rows)
    if m and any(len(r) != len(m[0]) for r in m):
        raise ShapeError("ragged matrix")
    return m


def from_rationals(rows: Sequence[Sequence[Rational]], d: int) -> Matrix:
    k = QuadraticField(d)
    return as_matrix((k(v) for v in row) for row in rows)


def shape(m: Matrix) -> Tuple[int, int]:
    return len(m), (len(m[0]) if m else 0)


def identity(n: int, d: int) -> Matrix:
    k = QuadraticField(d)
    return tuple(tuple(k.one if i == j else k.zero for j in range(n)) for i in range(n))


def zeros(rows: int, cols: int, d: int) -> Matrix:
    z = QuadraticField(d).zero
    return tuple(tuple(z for _ in range(cols)) for _ in range(rows))


def unit(n: int, i: int, j: int, d: int) -> Matrix:
    """e_ij with 1-based indices."""
    k = QuadraticField(d)
    return tuple(tuple(k.one if (a, b) == (i - 1, j - 1) else k.zero for b in range(n)) for a in range(n))


def add(a: Matrix, b: Matrix) -> Matrix:
    if shape(a) != shape(b):
        raise ShapeError(f"cannot add {shape(a)} and {shape(b)} matrices")
    return tuple(tuple(x + y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def sub(a: Matrix, b: Matrix) -> Matrix:
    if shape(a) != shape(b):
        raise ShapeError(f"cannot subtract {shape(a)} and {shape(b)} matrices")
    return tuple(tuple(x - y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def scale(c: FieldElement, a: Matrix) -> Matrix:
    return tuple(tuple(c * x for x in row) for row in a)


def mul(a: Matrix, b: Matrix) -> Matrix:
    ra, ca = shape(a)
    rb, cb = shape(b)
    if ca != rb:
        raise ShapeError(f"cannot multiply {ra}x{ca} by {rb}x{cb}")
    cols = list(zip(*b))
    out = []
    for row in a:
        out_row = []
        for col in cols:
            acc = row[0] * col[0]
            for x, y in zip(row[1:], col[1:]):
                if x and y:
                    acc = acc + x * y
            out_row.append(acc)
        out.append(tuple(out_row))
    return tuple(out)


def mul_vec(v: Vector, a: Matrix) -> Vector:
    """Row vector times matrix."""
    return mul((tuple(v),), a)[0]


def transpose(a: Matrix) -> Matrix:
    return tuple(zip(*a)) if a else ()


def conj(a: Matrix) -> Matrix:
    return tuple(tuple(x.conj() for x in row) for row in a)


def conj_transpose(a: Matrix) -> Matrix:
    return transpose(conj(a))


def trace(a: Matrix) -> FieldElement:
    acc = a[0][0]
    for i in range(1, len(a)):
        acc = acc + a[i][i]
    return acc


def is_zero(a: Matrix) -> bool:
    return all(x.is_zero() for row in a for x in row)


def det(a: Matrix) -> FieldElement:
    n, m = shape(a)
    if n != m:
        raise ShapeError(f"determinant of non-square {n}x{m} matrix")
    rows: List[List[FieldElement]] = [list(r) for r in a]
    result = rows[0][0] * 0 + 1
    for i in range(n):
        pivot = next((j for j in range(i, n) if rows[j][i]), None)
        if pivot is None:
            return result * 0
        if pivot != i:
            rows[i], rows[pivot] = rows[pivot], rows[i]
            result = -result
        p = rows[i][i]
        result = result * p
        inv = p.inverse()
        for j in range(i + 1, n):
            if rows[j][i]:
                f = rows[j][i] * inv
                rows[j] = [x - f * y for x, y in zip(rows[j], rows[i])]
    return result


def inverse(a: Matrix) -> Matrix:
    n, m = shape(a)
    if n != m:
        raise ShapeError(f"inverse of non-square {n}x{m} matrix")
    d = a[0][0].d
    ident = identity(n, d)
    rows: List[List[FieldElement]] = [list(a[i]) + list(ident[i]) for i in range(n)]
    for i in range(n):
        pivot = next((j for j in range(i, n) if rows[j][i]), None)
        if pivot is None:
            raise MathDomainError("matrix is singular")
        if pivot != i:
            rows[i], rows[pivot] = rows[pivot], rows[i]
        inv = rows[i][i].inverse()
        rows[i] = [x * inv for x in rows[i]]
        for j in range(n):
            if j != i and rows[j][i]:
                f = rows[j][i]
                rows[j] = [x - f * y for x, y in zip(rows[j], rows[i])]
    return tuple(tuple(r[n:]) for r in rows)


def submatrix(a: Matrix, rows: Sequence[int], cols: Sequence[int]) -> Matrix:
    return tuple(tuple(a[i][j] for j in cols) for i in rows)


def principal_minors(a: Matrix) -> List[FieldElement]:
    """All 2**n - 1 principal minors, ordered by subset size then lexicographically."""
    n = len(a)
    out = []
    for size in range(1, n + 1):
        for idx in combinations(range(n), size):
            out.append(det(submatrix(a, idx, idx)))
    return out


def leading_minors(a: Matrix) -> List[FieldElement]:
    return [det(submatrix(a, range(k), range(k))) for k in range(1, len(a) + 1)]


def block(a: Matrix, row0: int, col0: int, size: int) -> Matrix:
    return tuple(tuple(a[row0 + i][col0 + j] for j in range(size)) for i in range(size))


def from_blocks(a: Matrix, b: Matrix, c: Matrix, d: Matrix) -> Matrix:
    top = tuple(ra + rb for ra, rb in zip(a, b))
    bottom = tuple(rc + rd for rc, rd in zip(c, d))
    return top + bottom


def to_pairs(a: Matrix) -> List[List[List[str]]]:
    return [[x.to_pair() for x in row] for row in a]


def from_pairs(rows: Sequence[Sequence[Sequence[str]]], d: int) -> Matrix:
    return as_matrix((FieldElement.from_pair(p, d) for p in row) for row in rows)
