"""GL_n x GL_n weight data: tensor words, highest-weight realizations, frame changes.

A vector-valued coefficient is a K-linear combination of word pairs (w-, w+), one
word for each GL_n factor. Letters are 1-based.

V_L for a highest weight L = (l_1 >= ... >= l_n) is realized as

    Sym^(l_1-l_2)(K^n) (x) Sym^(l_2-l_3)(wedge^2 K^n) (x) ... (x) det^(l_n)

with basis the products of multisets of k-subsets, ordered lexicographically.
"""

from dataclasses import dataclass
from itertools import combinations, combinations_with_replacement, permutations, product
from types import MappingProxyType
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

from cachetools import LRUCache, cached

import kmatrix
from cmfield import FieldElement, QuadraticField
from errors import MathDomainError, ParameterError, ShapeError
from kmatrix import Matrix

TensorWord = Tuple[int, ...]
WordPair = Tuple[TensorWord, TensorWord]


def check_word(word: Sequence[int], n: int) -> TensorWord:
    w = tuple(int(c) for c in word)
    for c in w:
        if not 1 <= c <= n:
            raise ParameterError(f"letter {c} outside 1..{n} in word {w}")
    return w


class TensorCoefficient:
    """Immutable finite map (w-, w+) -> FieldElement without zero values."""

    __slots__ = ("_terms", "d")

    def __init__(self, terms: Mapping[WordPair, FieldElement], d: int):
        clean: Dict[WordPair, FieldElement] = {}
        for (wm, wp), c in terms.items():
            if c.d != d:
                raise ParameterError(f"coefficient over d={c.d} in a d={d} tensor")
            if c:
                clean[(tuple(wm), tuple(wp))] = c
        self._terms = clean
        self.d = d

    @classmethod
    def zero(cls, d: int) -> "TensorCoefficient":
        return cls({}, d)

    @classmethod
    def scalar(cls, c: FieldElement) -> "TensorCoefficient":
        return cls({((), ()): c}, c.d)

    @classmethod
    def single(cls, wm: Sequence[int], wp: Sequence[int], c: FieldElement) -> "TensorCoefficient":
        return cls({(tuple(wm), tuple(wp)): c}, c.d)

    @property
    def terms(self) -> Mapping[WordPair, FieldElement]:
        return MappingProxyType(self._terms)

    def items(self) -> List[Tuple[WordPair, FieldElement]]:
        return sorted(self._terms.items(), key=lambda kv: kv[0])

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TensorCoefficient):
            return NotImplemented
        return self.d == other.d and self._terms == other._terms

    def __hash__(self) -> int:
        return hash(frozenset(self._terms.items()))

    def __repr__(self) -> str:
        return "TensorCoefficient(" + ", ".join(f"{c}*{wm}|{wp}" for (wm, wp), c in self.items()) + ")"

    def degree(self) -> Optional[Tuple[int, int]]:
        """The common (len w-, len w+), or None for the zero tensor."""
        degs = {(len(wm), len(wp)) for wm, wp in self._terms}
        if not degs:
            return None
        if len(degs) > 1:
            raise ShapeError(f"inhomogeneous tensor with degrees {sorted(degs)}")
        return degs.pop()

    def max_letter(self) -> int:
        return max((c for wm, wp in self._terms for c in wm + wp), default=0)

    def __add__(self, other: "TensorCoefficient") -> "TensorCoefficient":
        out = dict(self._terms)
        for k, c in other._terms.items():
            out[k] = out[k] + c if k in out else c
        return TensorCoefficient(out, self.d)

    def __neg__(self) -> "TensorCoefficient":
        return TensorCoefficient({k: -c for k, c in self._terms.items()}, self.d)

    def __sub__(self, other: "TensorCoefficient") -> "TensorCoefficient":
        return self + (-other)

    def scale(self, a: FieldElement) -> "TensorCoefficient":
        if not a:
            return TensorCoefficient.zero(self.d)
        return TensorCoefficient({k: a * c for k, c in self._terms.items()}, self.d)

    def append(self, minus: Sequence[int], plus: Sequence[int]) -> "TensorCoefficient":
        """Append letters on the right of every word."""
        return TensorCoefficient({(wm + tuple(minus), wp + tuple(plus)): c for (wm, wp), c in self._terms.items()},
                                 self.d)

    def tensor(self, other: "TensorCoefficient") -> "TensorCoefficient":
        """Free-algebra product on each side: words concatenate."""
        out: Dict[WordPair, FieldElement] = {}
        for (wm, wp), c in self._terms.items():
            for (vm, vp), e in other._terms.items():
                k = (wm + vm, wp + vp)
                out[k] = out[k] + c * e if k in out else c * e
        return TensorCoefficient(out, self.d)

    def commutative(self) -> "TensorCoefficient":
        """Image in the commutative quotient: letters of each word sorted."""
        out: Dict[WordPair, FieldElement] = {}
        for (wm, wp), c in self._terms.items():
            k = (tuple(sorted(wm)), tuple(sorted(wp)))
            out[k] = out[k] + c if k in out else c
        return TensorCoefficient(out, self.d)

    def commutative_product(self, other: "TensorCoefficient") -> "TensorCoefficient":
        return self.tensor(other).commutative()

    def is_commutative_normal(self) -> bool:
        return all(list(wm) == sorted(wm) and list(wp) == sorted(wp) for wm, wp in self._terms)

    def total(self) -> FieldElement:
        """Sum of all coefficient values (the word structure erased)."""
        acc = QuadraticField(self.d).zero
        for c in self._terms.values():
            acc = acc + c
        return acc

    def map_words(self, minus: Mapping[int, Mapping[int, FieldElement]],
                  plus: Mapping[int, Mapping[int, FieldElement]]) -> "TensorCoefficient":
        """Apply letter substitutions T_j -> sum_i m[j][i] T_i independently to every slot."""
        one = QuadraticField(self.d).one
        out: Dict[WordPair, FieldElement] = {}
        for (wm, wp), c in self._terms.items():
            for new_m, cm in _expand_word(wm, minus, one):
                for new_p, cp in _expand_word(wp, plus, one):
                    k = (new_m, new_p)
                    v = c * cm * cp
                    out[k] = out[k] + v if k in out else v
        return TensorCoefficient(out, self.d)


def _expand_word(word: TensorWord, sub: Mapping[int, Mapping[int, FieldElement]],
                 one: FieldElement) -> Iterable[Tuple[TensorWord, FieldElement]]:
    if not word:
        yield (), one
        return
    for choice in product(*(sorted(sub[c].items()) for c in word)):
        coeff = choice[0][1]
        for _, e in choice[1:]:
            coeff = coeff * e
        yield tuple(i for i, _ in choice), coeff


@dataclass(frozen=True)
class HighestWeight:
    lam: Tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "lam", tuple(int(x) for x in self.lam))
        if not self.lam:
            raise ParameterError("highest weight must have at least one entry")
        if any(a < b for a, b in zip(self.lam, self.lam[1:])):
            raise ParameterError(f"highest weight {self.lam} is not weakly decreasing")

    @property
    def n(self) -> int:
        return len(self.lam)

    def multiplicities(self) -> Tuple[int, ...]:
        """m_k = l_k - l_(k+1) for k = 1..n-1."""
        return tuple(a - b for a, b in zip(self.lam, self.lam[1:]))


BasisElement = Tuple[Tuple[Tuple[int, ...], ...], ...]


@cached(cache=LRUCache(maxsize=128))
def weight_basis(weight: HighestWeight) -> Tuple[BasisElement, ...]:
    n = weight.n
    factors = []
    for k, m in enumerate(weight.multiplicities(), start=1):
        subsets = list(combinations(range(n), k))
        factors.append(list(combinations_with_replacement(subsets, m)))
    return tuple(product(*factors))


def dimension(weight: HighestWeight) -> int:
    return len(weight_basis(weight))


def highest_weight_index(weight: HighestWeight) -> int:
    hw = tuple(tuple(tuple(range(k)) for _ in range(m)) for k, m in enumerate(weight.multiplicities(), start=1))
    return weight_basis(weight).index(hw)


def _compound(g: Matrix, k: int) -> Dict[Tuple[int, ...], Dict[Tuple[int, ...], FieldElement]]:
    """k-th compound: image of e_S is sum_T det(g[T, S]) e_T, returned as image[S][T]."""
    n = len(g)
    subsets = list(combinations(range(n), k))
    out: Dict[Tuple[int, ...], Dict[Tuple[int, ...], FieldElement]] = {}
    for s in subsets:
        col = {}
        for t in subsets:
            m = kmatrix.det(kmatrix.submatrix(g, t, s))
            if m:
                col[t] = m
        out[s] = col
    return out


def _sym_image(monomial: Tuple[Tuple[int, ...], ...], image: Dict) -> Dict[Tuple, FieldElement]:
    result: Dict[Tuple, FieldElement] = {(): None}  # type: ignore[dict-item]
    for s in monomial:
        nxt: Dict[Tuple, FieldElement] = {}
        for mono, c in result.items():
            for t, e in image[s].items():
                key = tuple(sorted(mono + (t,)))
                v = e if c is None else c * e
                nxt[key] = nxt[key] + v if key in nxt else v
        result = nxt
    return result


def rho_matrix(weight: HighestWeight, g: Matrix) -> Matrix:
    n = weight.n
    if kmatrix.shape(g) != (n, n):
        raise ShapeError(f"weight {weight.lam} needs a {n}x{n} matrix, got {kmatrix.shape(g)}")
    d = g[0][0].d
    k_field = QuadraticField(d)
    det_power = weight.lam[-1]
    det_g = kmatrix.det(g)
    if det_power < 0 and not det_g:
        raise MathDomainError(f"singular matrix with negative determinant power {det_power}")
    det_factor = det_g ** det_power if det_power else k_field.one
    basis = weight_basis(weight)
    position = {b: i for i, b in enumerate(basis)}
    compounds = {k: _compound(g, k) for k, m in enumerate(weight.multiplicities(), start=1) if m}
    dim = len(basis)
    rows = [[k_field.zero] * dim for _ in range(dim)]
    for col, element in enumerate(basis):
        images = []
        for k, mono in enumerate(element, start=1):
            if not mono:
                images.append({(): k_field.one})
            else:
                images.append(_sym_image(mono, compounds[k]))
        for choice in product(*(img.items() for img in images)):
            key = tuple(mono for mono, _ in choice)
            coeff = det_factor
            for _, c in choice:
                coeff = coeff * c
            rows[position[key]][col] = rows[position[key]][col] + coeff
    return kmatrix.as_matrix(rows)


def symmetrize_embed(monomial: Sequence[int], d: int, side: str = "minus") -> TensorCoefficient:
    """x_(i_1)...x_(i_e) -> sum over all e! orderings, repeated letters accumulating."""
    one = QuadraticField(d).one
    out: Dict[WordPair, FieldElement] = {}
    for word in permutations(tuple(monomial)):
        key: WordPair = (word, ()) if side == "minus" else ((), word)
        out[key] = out[key] + one if key in out else one
    return TensorCoefficient(out, d)


Rho = Union[Tuple[int, int], Tuple[HighestWeight, HighestWeight]]


def _letter_map(m: Matrix) -> Dict[int, Dict[int, FieldElement]]:
    """Column j of m as the image of letter j."""
    size = len(m)
    return {j + 1: {i + 1: m[i][j] for i in range(size) if m[i][j]} for j in range(size)}


def transform_frame(rho: Rho, alpha: Tuple[Matrix, Matrix], v: TensorCoefficient) -> TensorCoefficient:
    """Apply rho(transpose(alpha))^-1 to v, factor by factor.

    With ``rho`` a degree pair the action is letter by letter on free tensors. With a
    pair of HighestWeight tags every word has length one and its letter is the 1-based
    position in ``weight_basis``.
    """
    a_minus, a_plus = alpha
    g_minus = kmatrix.inverse(kmatrix.transpose(a_minus))
    g_plus = kmatrix.inverse(kmatrix.transpose(a_plus))
    if isinstance(rho[0], HighestWeight) and isinstance(rho[1], HighestWeight):
        m_minus = rho_matrix(rho[0], g_minus)
        m_plus = rho_matrix(rho[1], g_plus)
        expected = (1, 1)
    else:
        m_minus, m_plus = g_minus, g_plus
        expected = (int(rho[0]), int(rho[1]))  # type: ignore[arg-type]
    deg = v.degree()
    if deg is not None and deg != expected:
        raise ShapeError(f"tensor of degree {deg} does not match {expected}")
    for letter in (c for wm, wp in v.terms for c in wm):
        if letter > len(m_minus):
            raise ShapeError(f"letter {letter} outside the minus representation of dimension {len(m_minus)}")
    for letter in (c for wm, wp in v.terms for c in wp):
        if letter > len(m_plus):
            raise ShapeError(f"letter {letter} outside the plus representation of dimension {len(m_plus)}")
    return v.map_words(_letter_map(m_minus), _letter_map(m_plus))
