"""The unitary similitude group GU(n, n) acting on H_n.

g is stored as a 2n x 2n matrix with n x n blocks A, B, C, D, and belongs to
GU(n, n) when g eta g* = nu eta for a nonzero rational nu, where eta has blocks
[[0, -1], [1, 0]].
"""

from dataclasses import dataclass
from typing import Optional, Tuple

import kmatrix
from cmfield import FieldElement, QuadraticField, in_z_omega
from errors import InvariantViolation, MathDomainError, ParameterError, ShapeError
from gmks import PointOfHn
from kmatrix import Matrix


@dataclass(frozen=True)
class GroupElement:
    g: Matrix

    def __post_init__(self) -> None:
        rows, cols = kmatrix.shape(self.g)
        if rows != cols or rows == 0 or rows % 2:
            raise ShapeError(f"GU(n,n) elements are 2n x 2n, got {rows}x{cols}")

    @property
    def n(self) -> int:
        return len(self.g) // 2

    @property
    def d(self) -> int:
        return self.g[0][0].d

    @property
    def blocks(self) -> Tuple[Matrix, Matrix, Matrix, Matrix]:
        n = self.n
        a = tuple(tuple(r[:n]) for r in self.g[:n])
        b = tuple(tuple(r[n:]) for r in self.g[:n])
        c = tuple(tuple(r[:n]) for r in self.g[n:])
        d = tuple(tuple(r[n:]) for r in self.g[n:])
        return a, b, c, d

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        return GroupElement(kmatrix.mul(self.g, other.g))

    def inverse(self) -> "GroupElement":
        return GroupElement(kmatrix.inverse(self.g))


def eta(n: int, d: int) -> GroupElement:
    k = QuadraticField(d)
    zero = kmatrix.zeros(n, n, d)
    one = kmatrix.identity(n, d)
    return GroupElement(kmatrix.from_blocks(zero, kmatrix.scale(-k.one, one), one, zero))


def unipotent(sigma: Matrix) -> GroupElement:
    """[[1, sigma], [0, 1]] for Hermitian sigma."""
    if sigma != kmatrix.conj_transpose(sigma):
        raise ParameterError("unipotent translation must be Hermitian")
    n, d = len(sigma), sigma[0][0].d
    return GroupElement(kmatrix.from_blocks(kmatrix.identity(n, d), sigma, kmatrix.zeros(n, n, d),
                                            kmatrix.identity(n, d)))


def levi(a: Matrix) -> GroupElement:
    """diag(a, (a*)^-1)."""
    n, d = len(a), a[0][0].d
    return GroupElement(kmatrix.from_blocks(a, kmatrix.zeros(n, n, d), kmatrix.zeros(n, n, d),
                                            kmatrix.inverse(kmatrix.conj_transpose(a))))


def scalar(c: FieldElement, n: int) -> GroupElement:
    """c times the identity; its similitude factor is N(c)."""
    return GroupElement(kmatrix.scale(c, kmatrix.identity(2 * n, c.d)))


def gu_check(g: GroupElement) -> Optional[FieldElement]:
    """nu(g) if g eta g* = nu eta for a nonzero scalar nu (necessarily rational), else None."""
    e = eta(g.n, g.d).g
    lhs = kmatrix.mul(kmatrix.mul(g.g, e), kmatrix.conj_transpose(g.g))
    nu = lhs[g.n][0]
    if not nu.is_rational() or nu.is_zero():
        return None
    if lhs != kmatrix.scale(nu, e):
        return None
    return nu


def is_integral(g: GroupElement) -> bool:
    return all(in_z_omega(x) for row in g.g for x in row)


def _validated(g: GroupElement, z: PointOfHn) -> Tuple[Matrix, Matrix, Matrix, Matrix]:
    if g.n != z.n:
        raise ShapeError(f"GU({g.n},{g.n}) cannot act on a point of size {z.n}")
    if g.d != z.d:
        raise ParameterError(f"group element over d={g.d}, point over d={z.d}")
    nu = gu_check(g)
    if nu is None:
        raise ParameterError("matrix is not in GU(n,n)")
    if nu.x < 0:
        raise ParameterError(f"similitude factor {nu} is negative; g does not preserve H_n")
    return g.blocks


def moebius(g: GroupElement, z: PointOfHn) -> PointOfHn:
    """(Az + B)(Cz + D)^-1."""
    a, b, c, d = _validated(g, z)
    denominator = kmatrix.add(kmatrix.mul(c, z.z), d)
    try:
        inv = kmatrix.inverse(denominator)
    except MathDomainError as e:
        raise MathDomainError(f"Cz + D is singular: {e}")
    image = kmatrix.mul(kmatrix.add(kmatrix.mul(a, z.z), b), inv)
    try:
        return PointOfHn(image)
    except MathDomainError as e:
        raise InvariantViolation(f"image of a point of H_n left H_n: {e}")


def automorphy_factor(g: GroupElement, z: PointOfHn) -> Tuple[Matrix, Matrix]:
    """(mu, lambda) = (Cz + D, Cbar tz + Dbar)."""
    _, _, c, d = _validated(g, z)
    mu = kmatrix.add(kmatrix.mul(c, z.z), d)
    lam = kmatrix.add(kmatrix.mul(kmatrix.conj(c), kmatrix.transpose(z.z)), kmatrix.conj(d))
    return mu, lam
