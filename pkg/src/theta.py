"""The p-adic theta operator on q-expansions, its iterates and projected iterates.

theta multiplies c(h) by h_ij and appends T_j (x) T_i: letter j on the right of
the minus word, letter i on the right of the plus word.
"""

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from itertools import permutations, product
from math import factorial
from typing import Dict, List, Mapping, Optional, Tuple

from loguru import logger
from sympy.combinatorics import Permutation

import kmatrix
from cmfield import FieldElement, QuadraticField
from errors import ParameterError, ShapeError
from hermidx import HermitianIndex
from qexp import QExpansion, derivation_D
from weights import TensorCoefficient, TensorWord, WordPair

IDEMPOTENCE_CHECK_LIMIT = 4096


def _theta_coefficient(h: HermitianIndex, c: TensorCoefficient) -> TensorCoefficient:
    out = TensorCoefficient.zero(c.d)
    for i in range(1, h.n + 1):
        for j in range(1, h.n + 1):
            hij = h.entry(i, j)
            if hij:
                out = out + c.append((j,), (i,)).scale(hij)
    return out


def theta(f: QExpansion) -> QExpansion:
    out = {h: _theta_coefficient(h, c) for h, c in f.coefficients.items()}
    return QExpansion(f.n, f.d, f.trace_bound, (f.degree[0] + 1, f.degree[1] + 1), out, f.commutative)


def theta_power(f: QExpansion, e: int) -> QExpansion:
    if e < 1:
        raise ParameterError(f"theta power must be positive, got {e}")
    g = f
    for _ in range(e):
        g = theta(g)
    return g


def theta_via_derivations(f: QExpansion) -> QExpansion:
    """sum_(k,l) D(e_kl) f with T_k (x) T_l appended; tr(h e_kl) = h_lk."""
    total: Dict[HermitianIndex, TensorCoefficient] = {}
    for k in range(1, f.n + 1):
        for l in range(1, f.n + 1):
            part = derivation_D(kmatrix.unit(f.n, k, l, f.d), f)
            for h, c in part.coefficients.items():
                shifted = c.append((k,), (l,))
                total[h] = total[h] + shifted if h in total else shifted
    return QExpansion(f.n, f.d, f.trace_bound, (f.degree[0] + 1, f.degree[1] + 1), total, f.commutative)


class ProjectorKind(str, Enum):
    IDENTITY = "none"
    SYMMETRIZE = "sym"
    DET = "det"
    USER = "user"


def block_basis(n: int, e: int) -> List[Tuple[TensorWord, TensorWord]]:
    """Word pairs of length e on each side, lexicographic in (minus, plus)."""
    words = list(product(range(1, n + 1), repeat=e))
    return [(wm, wp) for wm in words for wp in words]


@dataclass(frozen=True)
class Projector:
    """Linear map on the last ``e`` letters of both words of every term."""

    kind: ProjectorKind
    e: int
    n: Optional[int] = None
    matrix: Mapping[Tuple[int, int], FieldElement] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.e < 1:
            raise ParameterError(f"projector block must be positive, got {self.e}")
        if self.kind == ProjectorKind.USER and self.n is None:
            raise ParameterError("a user projector needs n")

    @classmethod
    def identity(cls, e: int) -> "Projector":
        return cls(ProjectorKind.IDENTITY, e)

    @classmethod
    def symmetrize(cls, e: int) -> "Projector":
        return cls(ProjectorKind.SYMMETRIZE, e)

    @classmethod
    def det(cls, e: int) -> "Projector":
        return cls(ProjectorKind.DET, e)

    @classmethod
    def from_matrix(cls, n: int, e: int, entries: Mapping[Tuple[int, int], FieldElement]) -> "Projector":
        size = n ** (2 * e)
        for row, col in entries:
            if not (0 <= row < size and 0 <= col < size):
                raise ShapeError(f"projector entry ({row},{col}) outside the {size}x{size} block basis")
        proj = cls(ProjectorKind.USER, e, n, {k: v for k, v in entries.items() if v})
        proj.check_idempotent(n, next(iter(entries.values())).d if entries else 1)
        return proj

    def _apply_block(self, bm: TensorWord, bp: TensorWord, d: int) -> Dict[WordPair, FieldElement]:
        k = QuadraticField(d)
        if self.kind == ProjectorKind.IDENTITY:
            return {(bm, bp): k.one}
        out: Dict[WordPair, FieldElement] = {}
        if self.kind == ProjectorKind.SYMMETRIZE:
            w = k(Fraction(1, factorial(self.e)))
            for sigma in permutations(range(self.e)):
                key = (tuple(bm[s] for s in sigma), tuple(bp[s] for s in sigma))
                out[key] = out[key] + w if key in out else w
            return out
        if self.kind == ProjectorKind.DET:
            w = Fraction(1, factorial(self.e) ** 2)
            perms = [(p, Permutation(list(p)).signature()) for p in permutations(range(self.e))]
            for sigma, s1 in perms:
                for pi, s2 in perms:
                    key = (tuple(bm[s] for s in sigma), tuple(bp[s] for s in pi))
                    v = k(w * s1 * s2)
                    out[key] = out[key] + v if key in out else v
            return out
        basis = block_basis(self.n or 0, self.e)
        col = basis.index((bm, bp))
        for (row, c_), v in self.matrix.items():
            if c_ == col:
                out[basis[row]] = v
        return out

    def apply(self, c: TensorCoefficient) -> TensorCoefficient:
        e = self.e
        out: Dict[WordPair, FieldElement] = {}
        for (wm, wp), value in c.terms.items():
            if len(wm) < e or len(wp) < e:
                raise ShapeError(f"projector block of {e} letters does not fit word pair {(wm, wp)}")
            if self.kind == ProjectorKind.USER and max(wm[-e:] + wp[-e:]) > (self.n or 0):
                raise ShapeError(f"user projector for n={self.n} applied to letters above {self.n}")
            for (bm, bp), v in self._apply_block(wm[-e:], wp[-e:], c.d).items():
                key = (wm[:-e] + bm, wp[:-e] + bp)
                x = value * v
                out[key] = out[key] + x if key in out else x
        return TensorCoefficient(out, c.d)

    def check_idempotent(self, n: int, d: int = 1) -> None:
        basis = block_basis(n, self.e)
        if len(basis) > IDEMPOTENCE_CHECK_LIMIT:
            logger.debug(f"skipping idempotence check on {len(basis)} basis words")
            return
        one = QuadraticField(d).one
        for wm, wp in basis:
            once = self.apply(TensorCoefficient.single(wm, wp, one))
            if self.apply(once) != once:
                raise ParameterError(f"projector is not idempotent on basis word {(wm, wp)}")


def theta_Z(f: QExpansion, e: int, z: Projector) -> QExpansion:
    """Projector applied coefficient-wise to theta^e f.

    The result is never flagged commutative: sorting the words would undo the projection.
    """
    if z.e != e:
        raise ShapeError(f"projector acts on {z.e} slots, theta power is {e}")
    if z.kind == ProjectorKind.USER and z.n != f.n:
        raise ShapeError(f"projector built for n={z.n}, series has n={f.n}")
    powered = theta_power(f.with_flag(False), e)
    out = {h: z.apply(c) for h, c in powered.coefficients.items()}
    return QExpansion(f.n, f.d, f.trace_bound, powered.degree, out, False)
