"""Seeded property checks, grouped by module family.

Every check takes a ``random.Random`` and a sample count and raises
InvariantViolation on the first counterexample. ``run_suites`` turns the checks
into a SuiteReport for the ``check`` command; the tests call the generators here
directly.
"""

import random
import time
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from loguru import logger
from sympy import binomial, divisor_sigma

import kmatrix
from cmfield import (
    FieldElement,
    QuadraticField,
    in_maximal_order,
    in_z_omega,
    padic_valuation,
    split_prime_data,
    trace_norm,
)
from errors import InvariantViolation, MathDomainError
from gmks import (
    CoordinateRing,
    HorizontalSymbol,
    PointFrame,
    PointOfHn,
    SymbolKind,
    SymbolicSection,
    D_operator,
    D_thexpl,
    b_minus,
    b_plus,
    coordinate_ring,
    du,
    du_bar,
    gauss_manin,
    gauss_manin_then_inject,
    ks_image,
    ks_kernel_check,
    ks_table,
    vecdui_check,
)
from hermidx import HermitianIndex, dual_membership, dual_membership_by_generators, enumerate_indices
from kmatrix import Matrix
from maass import (
    DeterminantWeightData,
    NearlyHoloForm,
    StandardWeightData,
    SymmetricWeightData,
    WeightData,
    delta,
    delta_iterate,
    holomorphic_part,
    shimura_closed_formula,
    shimura_composite,
)
from models import CheckResult, ErrorModel, SuiteReport
from qexp import QExpansion, add_scale, derivation_D, frobenius, multiply, padic_integral, scalar_series
from theta import theta, theta_via_derivations
from unitary import GroupElement, automorphy_factor, eta, gu_check, is_integral, levi, moebius, scalar, unipotent
from weights import (
    HighestWeight,
    TensorCoefficient,
    dimension,
    highest_weight_index,
    rho_matrix,
    symmetrize_embed,
    transform_frame,
)

Check = Callable[[random.Random, int], None]
RngFactory = Callable[[Optional[str]], random.Random]

WEIGHTS_N2 = [(1, 0), (2, 0), (1, 1), (2, 1), (1, -1)]
WEIGHTS_N3 = [(1, 0, 0), (2, 0, 0), (1, 1, 0), (2, 1, 0), (1, 0, -1)]


def expect(condition: bool, message: str) -> None:
    if not condition:
        raise InvariantViolation(message)


# ---------------------------------------------------------------------------
# random inputs
# ---------------------------------------------------------------------------


def random_field_element(rng: random.Random, d: int, size: int = 5, integral: bool = False) -> FieldElement:
    k = QuadraticField(d)
    if integral:
        return k(rng.randint(-size, size), rng.randint(-size, size))
    return k(Fraction(rng.randint(-size, size), rng.choice([1, 1, 2, 3])),
             Fraction(rng.randint(-size, size), rng.choice([1, 1, 2])))


def random_integer_matrix(rng: random.Random, n: int, d: int, size: int = 3, invertible: bool = False) -> Matrix:
    while True:
        m = kmatrix.as_matrix([[random_field_element(rng, d, size, integral=True) for _ in range(n)]
                               for _ in range(n)])
        if not invertible or kmatrix.det(m):
            return m


def random_hermitian(rng: random.Random, n: int, d: int, size: int = 3, integral: bool = False) -> Matrix:
    k = QuadraticField(d)
    rows = [[k.zero] * n for _ in range(n)]
    for i in range(n):
        rows[i][i] = k(rng.randint(-size, size) if integral else Fraction(rng.randint(-size, size), rng.choice([1, 2])))
        for j in range(i + 1, n):
            x = random_field_element(rng, d, size, integral)
            rows[i][j] = x
            rows[j][i] = x.conj()
    return kmatrix.as_matrix(rows)


def random_point(rng: random.Random, n: int, d: int) -> PointOfHn:
    """z = X + t w P with X Hermitian and P = A A* + 1, so that w(z* - z) = 2 t d P."""
    k = QuadraticField(d)
    a = random_integer_matrix(rng, n, d, 2)
    p = kmatrix.add(kmatrix.mul(a, kmatrix.conj_transpose(a)), kmatrix.identity(n, d))
    t = k(Fraction(1, rng.randint(1, 3)))
    return PointOfHn(kmatrix.add(random_hermitian(rng, n, d), kmatrix.scale(t * k.omega, p)))


def random_tensor(rng: random.Random, n: int, d: int, degree: Tuple[int, int], terms: int = 2) -> TensorCoefficient:
    out: Dict = {}
    for _ in range(rng.randint(1, terms)):
        key = (tuple(rng.randint(1, n) for _ in range(degree[0])), tuple(rng.randint(1, n) for _ in range(degree[1])))
        out[key] = random_field_element(rng, d)
    return TensorCoefficient(out, d)


_INDEX_CACHE: Dict[Tuple[int, int, int], List[HermitianIndex]] = {}


def _indices(n: int, bound: int, d: int) -> List[HermitianIndex]:
    key = (n, bound, d)
    if key not in _INDEX_CACHE:
        _INDEX_CACHE[key] = enumerate_indices(n, bound, d)
    return _INDEX_CACHE[key]


def random_qexpansion(rng: random.Random, n: int, d: int, bound: int, degree: Tuple[int, int] = (0, 0),
                      terms: int = 4, commutative: bool = False) -> QExpansion:
    pool = _indices(n, bound, d)
    chosen = rng.sample(pool, min(terms, len(pool)))
    coefficients = {h: random_tensor(rng, n, d, degree) for h in chosen}
    return QExpansion(n, d, bound, degree, coefficients, commutative)


def random_group_element(rng: random.Random, n: int, d: int, length: int = 3) -> GroupElement:
    """Product of unipotent, Weyl, Levi and scalar generators with entries in Z[w]."""
    k = QuadraticField(d)
    g = GroupElement(kmatrix.identity(2 * n, d))
    for _ in range(length):
        kind = rng.choice(["unipotent", "eta", "levi", "scalar"])
        if kind == "unipotent":
            factor = unipotent(random_hermitian(rng, n, d, 2, integral=True))
        elif kind == "eta":
            factor = eta(n, d)
        elif kind == "levi":
            rows = [[k.zero] * n for _ in range(n)]
            for i in range(n):
                rows[i][i] = k(rng.choice([1, -1]))
                for j in range(i + 1, n):
                    rows[i][j] = random_field_element(rng, d, 2, integral=True)
            a = kmatrix.as_matrix(rows)
            factor = levi(kmatrix.transpose(a) if rng.random() < 0.5 else a)
        else:
            c = k.zero
            while not c:
                c = random_field_element(rng, d, 2, integral=True)
            factor = scalar(c, n)
        g = g * factor
    return g


def random_polynomial(coords: CoordinateRing, rng: random.Random, terms: int = 3, degree: int = 2):
    acc = coords.zero
    n = coords.n
    for _ in range(rng.randint(1, terms)):
        mono = coords.from_field(random_field_element(rng, coords.d, 4))
        for _ in range(rng.randint(0, degree)):
            mono = mono * coords.z(rng.randint(1, n), rng.randint(1, n))
        acc = acc + mono
    return coords.reduce(acc)


def random_word(rng: random.Random, n: int, length: int) -> Tuple[HorizontalSymbol, ...]:
    return tuple(HorizontalSymbol(rng.choice(list(SymbolKind)), rng.randint(1, n)) for _ in range(length))


def random_section(coords: CoordinateRing, rng: random.Random, degree: int = 1, words: int = 2) -> SymbolicSection:
    acc = SymbolicSection.zero(coords, degree)
    for _ in range(rng.randint(1, words)):
        acc = acc + SymbolicSection.monomial(coords, random_word(rng, coords.n, degree), random_polynomial(coords, rng))
    return acc


def random_nearly_holomorphic(rng: random.Random, k: int, bound: int, y_degree: int = 2, terms: int = 5,
                              d: int = 1) -> NearlyHoloForm:
    coeffs = {(rng.randint(0, y_degree), rng.randint(0, bound)): random_field_element(rng, d) for _ in range(terms)}
    return NearlyHoloForm(k, bound, coeffs, d)


def random_weight_data(rng: random.Random, tag: str, n: int, d: int) -> WeightData:
    coords = coordinate_ring(n, d)
    if tag == "st":
        pairs = [(a, b) for a in range(1, n + 1) for b in range(1, n + 1)]
        chosen = rng.sample(pairs, rng.randint(1, len(pairs)))
        return StandardWeightData(n, d, {ab: random_polynomial(coords, rng) for ab in chosen})
    if tag == "sym":
        m_minus, m_plus = rng.randint(1, 2), rng.randint(1, 2)
        coefficients = {}
        for _ in range(rng.randint(1, 2)):
            lm = _random_exponents(rng, n, m_minus)
            lp = _random_exponents(rng, n, m_plus)
            coefficients[(lm, lp)] = random_polynomial(coords, rng)
        return SymmetricWeightData(n, d, m_minus, m_plus, coefficients)
    return DeterminantWeightData(n, d, rng.randint(0, 2), rng.randint(0, 2), random_polynomial(coords, rng))


def _random_exponents(rng: random.Random, n: int, degree: int) -> Tuple[int, ...]:
    e = [0] * n
    for _ in range(degree):
        e[rng.randrange(n)] += 1
    return tuple(e)


def scaled(f: QExpansion, a: FieldElement) -> QExpansion:
    return add_scale(QExpansion.zero(f.n, f.d, f.trace_bound, f.degree, f.commutative), f, a)


def theta_oracle(f: QExpansion) -> Dict[HermitianIndex, TensorCoefficient]:
    """Straight-line recomputation of theta from the coefficient law."""
    out: Dict[HermitianIndex, TensorCoefficient] = {}
    for h, c in f.coefficients.items():
        terms: Dict = {}
        for (wm, wp), v in c.terms.items():
            for i in range(1, h.n + 1):
                for j in range(1, h.n + 1):
                    x = h.entry(i, j) * v
                    key = (wm + (j,), wp + (i,))
                    terms[key] = terms[key] + x if key in terms else x
        t = TensorCoefficient(terms, f.d)
        if not t.is_zero():
            out[h] = t
    return out


def eisenstein_e4(bound: int) -> QExpansion:
    values = {0: 1}
    values.update({m: 240 * int(divisor_sigma(m, 3)) for m in range(1, bound + 1)})
    return scalar_series(values, 1, bound)


# ---------------------------------------------------------------------------
# theta / qexp / cmfield
# ---------------------------------------------------------------------------


def check_theta_law(rng: random.Random, samples: int) -> None:
    for _ in range(samples):
        n, d = rng.choice([1, 2]), rng.choice([1, 2])
        degree = (rng.randint(0, 2), rng.randint(0, 2))
        f = random_qexpansion(rng, n, d, rng.randint(0, 8 if n == 1 else 4), degree)
        g = theta(f)
        expect(g.degree == (degree[0] + 1, degree[1] + 1), f"theta degree {g.degree} from {degree}")
        expect(g.coefficients == theta_oracle(f), f"theta disagrees with the coefficient law on {f}")


def check_theta_derivation(rng: random.Random, samples: int) -> None:
    for _ in range(samples):
        n, d = rng.choice([1, 2]), rng.choice([1, 2])
        bound = rng.randint(1, 6 if n == 1 else 3)
        f = random_qexpansion(rng, n, d, bound, commutative=True)
        g = random_qexpansion(rng, n, d, bound, commutative=True)
        one = QuadraticField(d).one
        lhs = theta(multiply(f, g))
        rhs = add_scale(multiply(theta(f), g), multiply(f, theta(g)), one)
        expect(lhs == rhs, f"theta(fg) != theta(f)g + f theta(g) for n={n}, d={d}")


def check_theta_frobenius(rng: random.Random, samples: int) -> None:
    for _ in range(samples):
        n, d, p = rng.choice([1, 2]), rng.choice([1, 2]), rng.choice([2, 3, 5])
        f = random_qexpansion(rng, n, d, rng.randint(0, 6 if n == 1 else 3), (rng.randint(0, 1), rng.randint(0, 1)))
        lhs = theta(frobenius(f, p))
        rhs = scaled(frobenius(theta(f), p), QuadraticField(d)(p))
        expect(lhs == rhs, f"theta o F != p F o theta for p={p}")


def check_theta_via_derivations(rng: random.Random, samples: int) -> None:
    for _ in range(samples):
        n, d = rng.choice([1, 2]), rng.choice([1, 2])
        f = random_qexpansion(rng, n, d, rng.randint(0, 6 if n == 1 else 3), (rng.randint(0, 1), rng.randint(0, 1)))
        expect(theta(f) == theta_via_derivations(f), "theta differs from its expression through D(e_kl)")


def check_derivation_d(rng: random.Random, samples: int) -> None:
    for _ in range(samples):
        n, d = rng.choice([1, 2]), rng.choice([1, 2])
        bound = rng.randint(1, 6 if n == 1 else 3)
        f = random_qexpansion(rng, n, d, bound, commutative=True)
        g = random_qexpansion(rng, n, d, bound, commutative=True)
        gamma = random_integer_matrix(rng, n, d)
        one = QuadraticField(d).one
        lhs = derivation_D(gamma, multiply(f, g))
        rhs = add_scale(multiply(derivation_D(gamma, f), g), multiply(f, derivation_D(gamma, g)), one)
        expect(lhs == rhs, "D(gamma) is not a derivation")
        gamma2 = random_integer_matrix(rng, n, d)
        expect(derivation_D(kmatrix.add(gamma, gamma2), f) == add_scale(derivation_D(gamma, f),
                                                                          derivation_D(gamma2, f), one),
               "D(gamma1 + gamma2) != D(gamma1) + D(gamma2)")
        p = rng.choice([2, 3, 5])
        expect(derivation_D(gamma, frobenius(f, p)) == scaled(frobenius(derivation_D(gamma, f), p),
                                                              QuadraticField(d)(p)),
               "D(gamma) o F != p F o D(gamma)")


def check_frobenius_composition(rng: random.Random, samples: int) -> None:
    for _ in range(samples):
        p, q = rng.choice([2, 3, 5]), rng.choice([2, 3])
        f = random_qexpansion(rng, rng.choice([1, 2]), 1, 2)
        expected = frobenius(f, p * q)
        expect(frobenius(frobenius(f, p), q) == expected, "F_q o F_p != F_pq")
        expect(frobenius(frobenius(f, q), p) == expected, "F_p o F_q != F_pq")


def check_ramanujan(rng: random.Random, samples: int) -> None:
    g = theta(eisenstein_e4(20))
    for m in range(0, 21):
        expected = 240 * m * int(divisor_sigma(m, 3)) if m else 0
        got = g.coefficient(HermitianIndex.diag([m], 1))
        want = TensorCoefficient.single((1,), (1,), QuadraticField(1)(expected)) if expected else \
            TensorCoefficient.zero(1)
        expect(got == want, f"theta(E4) at q^{m}: {got} != 240*{m}*sigma3({m})")


def check_padic_integrality(rng: random.Random, samples: int) -> None:
    k = QuadraticField(1)
    v = split_prime_data(5, 1, 8)
    vbar = v.conjugate()
    a = (k(2) - k.omega) / 5
    expect(padic_valuation(k(2) - k.omega, v) + padic_valuation(k(2) - k.omega, vbar) == 1,
           "v(2 - w) + vbar(2 - w) should be the 5-adic valuation of N(2 - w) = 5")
    f = QExpansion.from_series({0: k.one, 1: a}, 1, 2)
    expect(padic_integral(f, v) != padic_integral(f, vbar), "(2 - w)/5 must be integral at exactly one prime over 5")
    expect(not padic_integral(scalar_series({1: k(Fraction(1, 5))}, 1, 2), v), "(1/5)q is not 5-integral")


def check_field_integrality(rng: random.Random, samples: int) -> None:
    for _ in range(samples):
        d = rng.choice([1, 2, 3, 7])
        a = random_field_element(rng, d)
        t, nm = trace_norm(a)
        # a is integral iff its minimal polynomial x^2 - t x + nm has integer coefficients
        expect(in_maximal_order(a) == (t.denominator == 1 and nm.denominator == 1),
               f"{a} in O_K disagrees with its trace {t} and norm {nm}")
        expect(not in_z_omega(a) or in_maximal_order(a), f"{a} lies in Z[w] but not in O_K")


def check_dual_lattice(rng: random.Random, samples: int) -> None:
    for _ in range(samples):
        n, d = rng.choice([1, 2, 3]), rng.choice([1, 2, 3])
        h = HermitianIndex(n, random_hermitian(rng, n, d))
        expect(dual_membership(h) == dual_membership_by_generators(h),
               f"dual lattice membership of {h.entries} depends on the test used")


# ---------------------------------------------------------------------------
# weights
# ---------------------------------------------------------------------------


def check_rho_multiplicative(rng: random.Random, samples: int) -> None:
    for n, weights in ((2, WEIGHTS_N2), (3, WEIGHTS_N3)):
        for lam in weights:
            w = HighestWeight(lam)
            for _ in range(max(1, samples // 4)):
                g = random_integer_matrix(rng, n, 1, 2, invertible=True)
                h = random_integer_matrix(rng, n, 1, 2, invertible=True)
                expect(rho_matrix(w, kmatrix.mul(g, h)) == kmatrix.mul(rho_matrix(w, g), rho_matrix(w, h)),
                       f"rho_{lam} is not multiplicative")


def check_torus_eigenvalue(rng: random.Random, samples: int) -> None:
    k = QuadraticField(1)
    for n, weights in ((2, WEIGHTS_N2), (3, WEIGHTS_N3)):
        for lam in weights:
            w = HighestWeight(lam)
            for _ in range(max(1, samples // 4)):
                t = [k(rng.choice([-3, -2, -1, 1, 2, 3])) for _ in range(n)]
                diag = kmatrix.as_matrix([[t[i] if i == j else k.zero for j in range(n)] for i in range(n)])
                m = rho_matrix(w, diag)
                hw = highest_weight_index(w)
                eigen = k.one
                for ti, li in zip(t, lam):
                    eigen = eigen * ti ** li
                column = [m[r][hw] for r in range(len(m))]
                expect(all(c == (eigen if r == hw else 0) for r, c in enumerate(column)),
                       f"highest weight vector of {lam} is not an eigenvector with eigenvalue {eigen}")


def check_symmetrize_invariance(rng: random.Random, samples: int) -> None:
    for _ in range(samples):
        e = rng.randint(1, 4)
        letters = [rng.randint(1, 3) for _ in range(e)]
        s = symmetrize_embed(letters, 1)
        for t in range(e - 1):
            swapped: Dict = {}
            for (wm, wp), c in s.terms.items():
                w = list(wm)
                w[t], w[t + 1] = w[t + 1], w[t]
                swapped[(tuple(w), wp)] = c
            expect(TensorCoefficient(swapped, 1) == s, f"symmetrized {letters} changes under slot swap {t}")


def check_dimensions(rng: random.Random, samples: int) -> None:
    expect(dimension(HighestWeight((2, 0))) == 3, "dim V_(2,0) for n=2 should be 3")
    expect(dimension(HighestWeight((1, 1))) == 1, "dim V_(1,1) for n=2 should be 1")
    # (2,1,0) is realized reducibly as st (x) wedge^2 st, not as the 8-dimensional irreducible
    expect(dimension(HighestWeight((2, 1, 0))) == 9, "dim V_(2,1,0) for n=3 should be 9")
    for _ in range(samples):
        n = rng.randint(1, 3)
        lam = tuple(sorted((rng.randint(-1, 3) for _ in range(n)), reverse=True))
        expected = 1
        for k, m in enumerate(HighestWeight(lam).multiplicities(), start=1):
            expected *= binomial(binomial(n, k) + m - 1, m)
        expect(dimension(HighestWeight(lam)) == expected, f"dim V_{lam} should be {expected}")


def check_frame_composition(rng: random.Random, samples: int) -> None:
    for _ in range(samples):
        n = rng.choice([1, 2])
        degree = (rng.randint(0, 2), rng.randint(0, 2))
        v = random_tensor(rng, n, 1, degree)
        alpha = (random_integer_matrix(rng, n, 1, 2, True), random_integer_matrix(rng, n, 1, 2, True))
        beta = (random_integer_matrix(rng, n, 1, 2, True), random_integer_matrix(rng, n, 1, 2, True))
        both = (kmatrix.mul(alpha[0], beta[0]), kmatrix.mul(alpha[1], beta[1]))
        lhs = transform_frame(degree, alpha, transform_frame(degree, beta, v))
        expect(lhs == transform_frame(degree, both, v), "frame change does not compose")


# ---------------------------------------------------------------------------
# unitary
# ---------------------------------------------------------------------------


def check_cocycle(rng: random.Random, samples: int) -> None:
    for _ in range(samples):
        n, d = rng.choice([1, 2]), rng.choice([1, 2])
        g, h = random_group_element(rng, n, d), random_group_element(rng, n, d)
        z = random_point(rng, n, d)
        hz = moebius(h, z)
        mu_gh, lam_gh = automorphy_factor(g * h, z)
        mu_g, lam_g = automorphy_factor(g, hz)
        mu_h, lam_h = automorphy_factor(h, z)
        expect(mu_gh == kmatrix.mul(mu_g, mu_h), "mu is not a cocycle")
        expect(lam_gh == kmatrix.mul(lam_g, lam_h), "lambda is not a cocycle")
        nu_g, nu_h, nu_gh = gu_check(g), gu_check(h), gu_check(g * h)
        expect(None not in (nu_g, nu_h, nu_gh) and nu_gh == nu_g * nu_h, "nu is not multiplicative")
        expect(moebius(g * h, z) == moebius(g, hz), "Moebius action is not an action")


def check_generators(rng: random.Random, samples: int) -> None:
    for _ in range(samples):
        n, d = rng.choice([1, 2]), rng.choice([1, 2])
        g = random_group_element(rng, n, d)
        expect(is_integral(g), "product of generators over Z[w] has a non-integral entry")
        nu = gu_check(g)
        inv = g.inverse()
        expect(g * inv == GroupElement(kmatrix.identity(2 * n, d)), "g g^-1 is not the identity")
        expect(nu is not None and gu_check(inv) == nu.inverse(), "nu(g^-1) != nu(g)^-1")
        z = random_point(rng, n, d)
        expect(moebius(inv, moebius(g, z)) == z, "g^-1 does not undo the action of g")


# ---------------------------------------------------------------------------
# gmks
# ---------------------------------------------------------------------------


def check_gauss_manin_frame(rng: random.Random, samples: int) -> None:
    for n in (1, 2, 3):
        coords = coordinate_ring(n, rng.choice([1, 2]))
        for i in range(1, n + 1):
            expected = [(b_minus(coords, j), (i, j)) for j in range(1, n + 1)]
            expect(gauss_manin(du(coords, i)) == expected, f"nabla(du_{i}) for n={n}")
            expected = [(b_plus(coords, j), (j, i)) for j in range(1, n + 1)]
            expect(gauss_manin(du(coords, n + i)) == expected, f"nabla(du_{n + i}) for n={n}")
            expect(gauss_manin(du_bar(coords, i)) == [] and gauss_manin(du_bar(coords, n + i)) == [],
                   f"dubar_{i} is not horizontal in the holomorphic directions")


def expected_ks(i: int, j: int, n: int) -> Optional[Tuple[int, int]]:
    if i <= n < j:
        return (i, j - n)
    if j <= n < i:
        return (j, i - n)
    return None


def check_ks_table(rng: random.Random, samples: int) -> None:
    for n in (1, 2):
        for _ in range(max(1, samples // 2)):
            z = random_point(rng, n, rng.choice([1, 2]))
            table = ks_table(z)
            for i in range(1, 2 * n + 1):
                for j in range(1, 2 * n + 1):
                    expect(table[i - 1][j - 1] == expected_ks(i, j, n),
                           f"KS(du_{i} (x) dw_{j}) = {table[i - 1][j - 1]} at n={n}")
            expect(ks_kernel_check(n, z), f"KS kernel check failed at n={n}")
            expect(vecdui_check(PointFrame(z)), "inversion identities for b+ and b- fail")
    z = random_point(rng, 2, 1)
    one = QuadraticField(1).one
    expect(ks_image({(1, 3): one}, PointFrame(z)) == {(1, 1): one}, "du_1 (x) dw_3 must map to dz_11")


def check_d_operator(rng: random.Random, samples: int) -> None:
    for _ in range(samples):
        n = rng.choice([1, 2])
        coords = coordinate_ring(n, rng.choice([1, 2]))
        degree = rng.randint(0, 2)
        s = SymbolicSection.monomial(coords, random_word(rng, n, degree), random_polynomial(coords, rng))
        expect(D_thexpl(s) == gauss_manin_then_inject(s), "D differs from nabla followed by the KS injection")
        t = random_section(coords, rng, degree)
        u = random_section(coords, rng, degree)
        expect(D_operator(t + u) == D_operator(t) + D_operator(u), "D is not additive")


# ---------------------------------------------------------------------------
# maass
# ---------------------------------------------------------------------------


def check_leibniz(rng: random.Random, samples: int) -> None:
    for _ in range(samples * 5):
        bound = rng.randint(0, 10)
        f = random_nearly_holomorphic(rng, rng.randint(-4, 8), bound)
        g = random_nearly_holomorphic(rng, rng.randint(-4, 8), bound)
        expect(delta(f * g) == delta(f) * g + f * delta(g), "delta is not a derivation on nearly holomorphic forms")


def check_holomorphic_part(rng: random.Random, samples: int) -> None:
    for bound in range(0, 51, max(1, 50 // max(1, samples))):
        f = random_qexpansion(rng, 1, 1, bound, terms=6)
        k = rng.randint(-4, 12)
        lhs = holomorphic_part(delta(NearlyHoloForm.from_qexpansion(f, k)))
        expect(lhs.series() == theta(f).series(), f"Y^0 slice of delta differs from theta at bound {bound}")


def check_iterate(rng: random.Random, samples: int) -> None:
    for _ in range(samples):
        f = random_nearly_holomorphic(rng, rng.randint(-2, 6), rng.randint(0, 10))
        e = rng.randint(1, 3)
        expect(delta_iterate(f, e + 1) == delta(delta_iterate(f, e)), "delta^(e+1) != delta o delta^e")


def check_closed_formulas(rng: random.Random, samples: int) -> None:
    for tag in ("st", "sym", "det"):
        for n in (1, 2):
            for _ in range(max(1, samples // 4)):
                d = rng.choice([1, 2])
                z = random_point(rng, n, d)
                data = random_weight_data(rng, tag, n, d)
                expect(shimura_closed_formula(data, z) == shimura_composite(data, z),
                       f"closed formula for {tag} at n={n} differs from the composite")


SUITES: Dict[str, List[Tuple[str, Check]]] = {
    "theta": [
        ("theta_coefficient_law", check_theta_law),
        ("theta_derivation", check_theta_derivation),
        ("theta_frobenius", check_theta_frobenius),
        ("theta_via_derivations", check_theta_via_derivations),
        ("derivation_d", check_derivation_d),
        ("frobenius_composition", check_frobenius_composition),
        ("ramanujan_e4", check_ramanujan),
        ("padic_integrality", check_padic_integrality),
        ("field_integrality", check_field_integrality),
        ("dual_lattice", check_dual_lattice),
    ],
    "weights": [
        ("rho_multiplicative", check_rho_multiplicative),
        ("torus_eigenvalue", check_torus_eigenvalue),
        ("symmetrize_invariance", check_symmetrize_invariance),
        ("dimensions", check_dimensions),
        ("frame_composition", check_frame_composition),
    ],
    "unitary": [
        ("cocycle", check_cocycle),
        ("generators", check_generators),
    ],
    "gmks": [
        ("gauss_manin_frame", check_gauss_manin_frame),
        ("ks_table", check_ks_table),
        ("d_operator", check_d_operator),
    ],
    "maass": [
        ("leibniz", check_leibniz),
        ("holomorphic_part", check_holomorphic_part),
        ("iterate", check_iterate),
        ("closed_formulas", check_closed_formulas),
    ],
}

SUITE_NAMES = list(SUITES)


def run_check(suite: str, name: str, check: Check, rng_factory: RngFactory, samples: int) -> CheckResult:
    start_ms = int(time.time() * 1000)
    rng = rng_factory(f"{suite}:{name}")
    try:
        check(rng, samples)
        passed, detail = True, None
    except (InvariantViolation, MathDomainError) as e:
        passed, detail = False, str(e)
    except Exception as e:
        logger.exception(f"check {suite}.{name} raised")
        passed, detail = False, f"{type(e).__name__}: {e}"
    duration = int(time.time() * 1000) - start_ms
    logger.debug(f"check {suite}.{name}: {'ok' if passed else 'FAILED'} in {duration} ms")
    return CheckResult(suite=suite, name=name, passed=passed, detail=detail, duration_ms=duration)


def run_suites(names: Sequence[str], rng_factory: RngFactory, samples: int) -> SuiteReport:
    """Run every check of the named suites; each check draws from its own labelled random source."""
    unknown = [n for n in names if n not in SUITES]
    if unknown:
        return SuiteReport(suites=list(names), error=ErrorModel(error_code="InvalidParameter",
                                                                error_message=f"unknown suites {unknown}"))
    report = SuiteReport(suites=list(names))
    for suite in names:
        for name, check in SUITES[suite]:
            result = run_check(suite, name, check, rng_factory, samples)
            report.results.append(result)
            if result.passed:
                report.passed += 1
            else:
                report.failed += 1
    return report
