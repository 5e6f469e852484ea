"""Exact symmetric functions in the Schur basis.

Characters of polynomial GL-representations are stored as finite integer
combinations of Schur functions.  Conversions to the monomial basis go
through Kostka numbers, so nothing here depends on a number of variables
unless a ``var_cap`` is asked for explicitly.
"""
from __future__ import annotations

import itertools
import re
from collections import defaultdict
from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Iterable, Mapping, Sequence

from .partitions import (
    Partition,
    check_prime,
    dominates,
    format_partition,
    partitions_of,
    sort_weight,
)


class CharacterElement:
    """Finite Z-linear combination of Schur functions s_lambda."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping | Iterable = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict = defaultdict(int)
        for lam, c in items:
            acc[Partition(lam)] += int(c)
        self._terms = {lam: c for lam, c in acc.items() if c}

    # -- basic protocol -------------------------------------------------
    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def coefficient(self, lam) -> int:
        return self._terms.get(Partition(lam), 0)

    def __iter__(self):
        return iter(sorted(self._terms.items(), key=lambda kv: (-kv[0].size, _neg(kv[0]))))

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def __eq__(self, other):
        if isinstance(other, CharacterElement):
            return self._terms == other._terms
        if other == 0:
            return not self._terms
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    def __add__(self, other: "CharacterElement") -> "CharacterElement":
        acc = dict(self._terms)
        for lam, c in other._terms.items():
            acc[lam] = acc.get(lam, 0) + c
        return CharacterElement(acc)

    def __neg__(self):
        return CharacterElement({lam: -c for lam, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rmul__(self, k: int):
        return CharacterElement({lam: k * c for lam, c in self._terms.items()})

    def __mul__(self, other):
        if isinstance(other, int):
            return k_times(other, self)
        return multiply(self, other)

    def degrees(self) -> list[int]:
        return sorted({lam.size for lam in self._terms})

    def degree_components(self) -> dict:
        out: dict = defaultdict(dict)
        for lam, c in self._terms.items():
            out[lam.size][lam] = c
        return {d: CharacterElement(t) for d, t in sorted(out.items())}

    def truncate(self, max_degree: int) -> "CharacterElement":
        return CharacterElement({l: c for l, c in self._terms.items() if l.size <= max_degree})

    def __repr__(self):
        return f"CharacterElement({format_character(self)})"

    def __str__(self):
        return format_character(self)

    def to_json(self) -> list:
        return [{"partition": list(lam), "coefficient": c} for lam, c in self]

    @classmethod
    def from_json(cls, data: list) -> "CharacterElement":
        return cls({tuple(item["partition"]): item["coefficient"] for item in data})


def k_times(k: int, a: CharacterElement) -> CharacterElement:
    return CharacterElement({lam: k * c for lam, c in a.terms.items()})


def _neg(lam):
    return tuple(-x for x in lam)


def schur_basis(lam: Sequence[int]) -> CharacterElement:
    return CharacterElement({Partition(lam): 1})


ONE = schur_basis(())


def format_character(a: CharacterElement) -> str:
    if not a:
        return "0"
    pieces = []
    for lam, c in a:
        body = "s" + format_partition(lam)
        if c == 1:
            term = body
        elif c == -1:
            term = "-" + body
        else:
            term = f"{c}*{body}"
        pieces.append(term)
    text = pieces[0]
    for piece in pieces[1:]:
        text += " - " + piece[1:] if piece.startswith("-") else " + " + piece
    return text


_TERM = re.compile(r"\s*([+-])?\s*(?:(\d+)\s*\*\s*)?s\s*\[([\d,\s]*)\]\s*")


def parse_character(text: str) -> CharacterElement:
    """Parse expressions such as ``"s[2,1] + 2*s[1,1,1] - s[3]"``."""
    src = text.strip()
    if src in ("0", ""):
        return CharacterElement()
    acc: dict = defaultdict(int)
    pos = 0
    while pos < len(src):
        m = _TERM.match(src, pos)
        if not m or m.end() == pos or (pos > 0 and m.group(1) is None):
            raise ValueError(f"cannot parse character expression {text!r}")
        sign = -1 if m.group(1) == "-" else 1
        coeff = int(m.group(2)) if m.group(2) else 1
        inner = m.group(3).strip()
        lam = Partition(int(x) for x in inner.split(",")) if inner else Partition()
        acc[lam] += sign * coeff
        pos = m.end()
    return CharacterElement(acc)


# ---------------------------------------------------------------------------
# Kostka numbers and the monomial basis
# ---------------------------------------------------------------------------


def _horizontal_strips_removed(lam: tuple, k: int):
    """All mu subset lam with lam/mu a horizontal strip of size k, as plain tuples."""
    n = len(lam)
    out = []

    def rec(i, remaining, acc):
        if i == n:
            if remaining == 0:
                while acc and acc[-1] == 0:
                    acc = acc[:-1]
                out.append(tuple(acc))
            return
        nxt = lam[i + 1] if i + 1 < n else 0
        for r in range(0, min(remaining, lam[i] - nxt) + 1):
            rec(i + 1, remaining - r, acc + [lam[i] - r])

    rec(0, k, [])
    return out


@lru_cache(maxsize=None)
def _partitions_tuple(n: int) -> tuple:
    return tuple(tuple(mu) for mu in partitions_of(n))


@lru_cache(maxsize=None)
def kostka(lam: tuple, mu: tuple) -> int:
    """Number of semistandard tableaux of shape lam and content mu (mu any composition)."""
    if sum(lam) != sum(mu):
        return 0
    mu = tuple(mu)
    while mu and mu[-1] == 0:
        mu = mu[:-1]
    if not mu:
        return 1 if not lam else 0
    if len(lam) > len(mu):
        return 0
    last = mu[-1]
    return sum(kostka(nu, mu[:-1]) for nu in _horizontal_strips_removed(tuple(lam), last))


def schur_to_monomial(a: CharacterElement) -> dict:
    """Coefficients c_mu with a = sum c_mu m_mu (exact, all partitions)."""
    out: dict = defaultdict(int)
    for lam, c in a.terms.items():
        for mu in _partitions_tuple(lam.size):
            if not dominates(lam, mu):
                continue
            k = kostka(tuple(lam), mu)
            if k:
                out[Partition(mu)] += c * k
    return {mu: c for mu, c in out.items() if c}


def monomial_to_schur(mcoeffs: Mapping) -> CharacterElement:
    """Invert the unitriangular Kostka matrix by peeling lex-largest terms."""
    work = {Partition(mu): int(c) for mu, c in mcoeffs.items() if c}
    out: dict = {}
    while work:
        lead = max(work, key=lambda mu: (mu.size, tuple(mu)))
        c = work[lead]
        out[lead] = out.get(lead, 0) + c
        for mu in _partitions_tuple(lead.size):
            if not dominates(lead, mu):
                continue
            k = kostka(tuple(lead), mu)
            if k:
                v = work.get(mu, 0) - c * k
                if v:
                    work[Partition(mu)] = v
                else:
                    work.pop(mu, None)
    return CharacterElement(out)


class MonomialExpansion:
    """Weight multiplicities of a character in ``var_cap`` variables.

    Keys are dominant weights written as partitions (trailing zeros dropped);
    the multiplicity of any weight is that of its sorted representative.
    """

    def __init__(self, coeffs: Mapping, var_cap: int):
        self.var_cap = var_cap
        self.coeffs = {Partition(mu): c for mu, c in coeffs.items() if c}

    def multiplicity(self, weight: Sequence[int]) -> int:
        if sum(1 for w in weight if w) > self.var_cap:
            return 0
        return self.coeffs.get(sort_weight(weight), 0)

    def items(self):
        return sorted(self.coeffs.items(), key=lambda kv: (kv[0].size, _neg(kv[0])))

    def is_nonnegative(self) -> bool:
        return all(c >= 0 for c in self.coeffs.values())

    def full_weights(self) -> dict:
        """Expand to every weight in N^var_cap (orbit of each dominant weight)."""
        out = {}
        for mu, c in self.coeffs.items():
            padded = tuple(mu) + (0,) * (self.var_cap - len(mu))
            for w in set(itertools.permutations(padded)):
                out[w] = c
        return out

    def __eq__(self, other):
        return isinstance(other, MonomialExpansion) and self.coeffs == other.coeffs

    def __repr__(self):
        return f"MonomialExpansion({self.coeffs}, var_cap={self.var_cap})"


def monomial_expand(a: CharacterElement, var_cap: int) -> MonomialExpansion:
    if var_cap < 1:
        raise ValueError("var_cap must be >= 1")
    m = schur_to_monomial(a)
    return MonomialExpansion({mu: c for mu, c in m.items() if len(mu) <= var_cap}, var_cap)


# ---------------------------------------------------------------------------
# Products
# ---------------------------------------------------------------------------


def _lr_coefficients(lam: tuple, mu: tuple) -> dict:
    """Littlewood-Richardson rule: fill nu/lam with mu_1 ones, mu_2 twos, ...

    Each letter is added as a horizontal strip; a filling is kept when its
    reverse reading word (right to left, top to bottom) is a lattice word.
    """
    results: dict = defaultdict(int)

    def add_strips(shape, filling, letter):
        if letter > len(mu):
            word = []
            for row in range(len(shape)):
                for col in range(shape[row] - 1, -1, -1):
                    if (row, col) in filling:
                        word.append(filling[(row, col)])
            counts = [0] * (len(mu) + 2)
            for x in word:
                counts[x] += 1
                if x > 1 and counts[x] > counts[x - 1]:
                    return
            results[Partition(shape)] += 1
            return
        k = mu[letter - 1]
        ext = list(shape) + [0]
        # distribute k boxes as a horizontal strip on top of shape
        def rec(row, remaining, new_shape):
            if row == len(ext):
                if remaining == 0:
                    grown = tuple(x for x in new_shape if x)
                    fill = dict(filling)
                    for r in range(len(grown)):
                        old = shape[r] if r < len(shape) else 0
                        for c in range(old, grown[r]):
                            fill[(r, c)] = letter
                    add_strips(grown, fill, letter + 1)
                return
            # horizontal strip: new row length may not pass the old row above
            limit = remaining if row == 0 else min(remaining, ext[row - 1] - ext[row])
            for r in range(limit + 1):
                rec(row + 1, remaining - r, new_shape + [ext[row] + r])

        rec(0, k, [])

    add_strips(tuple(lam), {}, 1)
    return dict(results)


@lru_cache(maxsize=None)
def lr_product(lam: tuple, mu: tuple) -> tuple:
    if len(mu) > len(lam) or (len(mu) == len(lam) and mu > lam):
        lam, mu = mu, lam
    return tuple(sorted(_lr_coefficients(lam, mu).items()))


def multiply(a: CharacterElement, b: CharacterElement) -> CharacterElement:
    """Product of characters via the Littlewood-Richardson rule."""
    acc: dict = defaultdict(int)
    for lam, c in a.terms.items():
        for mu, d in b.terms.items():
            for nu, n in lr_product(tuple(lam), tuple(mu)):
                acc[nu] += c * d * n
    return CharacterElement(acc)


def multiply_via_monomials(a: CharacterElement, b: CharacterElement) -> CharacterElement:
    """Second route for products: convolve weight multiplicities, back-solve.

    The coefficient of m_nu in a*b is sum over nu = alpha + beta (as vectors)
    of a_{sort alpha} b_{sort beta}; only dominant nu need to be visited.
    """
    ma, mb = schur_to_monomial(a), schur_to_monomial(b)
    degs = {la.size + mu.size for la in a.terms for mu in b.terms}
    out: dict = defaultdict(int)
    for d in degs:
        for nu in partitions_of(d):
            total = 0
            for alpha in itertools.product(*(range(x + 1) for x in nu)):
                ca = ma.get(sort_weight(alpha), 0)
                if not ca:
                    continue
                beta = tuple(x - y for x, y in zip(nu, alpha))
                total += ca * mb.get(sort_weight(beta), 0)
            if total:
                out[nu] += total
    return monomial_to_schur(out)


# ---------------------------------------------------------------------------
# Schur derivative, Frobenius twist, Adams operations, plethysm
# ---------------------------------------------------------------------------


def corners_removed(lam: Sequence[int]) -> list[Partition]:
    lam = tuple(lam)
    out = []
    for i in range(len(lam)):
        if i + 1 == len(lam) or lam[i] > lam[i + 1]:
            out.append(Partition(lam[:i] + (lam[i] - 1,) + lam[i + 1:]))
    return out


def schur_derivative(a: CharacterElement) -> CharacterElement:
    acc: dict = defaultdict(int)
    for lam, c in a.terms.items():
        for mu in corners_removed(lam):
            acc[mu] += c
    return CharacterElement(acc)


def schur_derivative_via_monomials(a: CharacterElement) -> CharacterElement:
    """t-linear part of a(t, x): m_mu contributes m_{mu minus one part 1}."""
    out: dict = defaultdict(int)
    for mu, c in schur_to_monomial(a).items():
        if 1 in mu:
            rest = list(mu)
            rest.remove(1)
            out[Partition(rest)] += c
    return monomial_to_schur(out)


def adams(a: CharacterElement, k: int) -> CharacterElement:
    """Substitute x_i -> x_i^k (power-map operation)."""
    if k < 1:
        raise ValueError("k must be positive")
    m = schur_to_monomial(a)
    return monomial_to_schur({Partition(k * x for x in mu): c for mu, c in m.items()})


def frobenius_twist(a: CharacterElement, p: int, r: int = 1) -> CharacterElement:
    check_prime(p)
    if r < 1:
        raise ValueError("r must be >= 1")
    return adams(a, p ** r)


def power_sum(k: int) -> CharacterElement:
    return monomial_to_schur({Partition((k,)): 1})


@lru_cache(maxsize=None)
def _power_product(rho: tuple) -> CharacterElement:
    out = ONE
    for part in rho:
        out = multiply(out, power_sum(part))
    return out


def _z(rho: Sequence[int]) -> int:
    z = 1
    for part in set(rho):
        m = list(rho).count(part)
        z *= part ** m * factorial(m)
    return z


def character_value(lam: Sequence[int], rho: Sequence[int]) -> int:
    """chi^lam(rho) read off as the s_lam coefficient of p_rho."""
    return _power_product(tuple(Partition(rho))).coefficient(lam)


def check_representation_character(a: CharacterElement, name: str = "character") -> None:
    bad = {mu: c for mu, c in schur_to_monomial(a).items() if c < 0}
    if bad:
        raise ValueError(f"{name} has negative weight multiplicities: {bad}")


def plethysm_compose(f: CharacterElement, g: CharacterElement, var_cap: int | None = None) -> CharacterElement:
    """Plethysm f[g] via the power-sum expansion s_lam = sum chi^lam(rho) p_rho / z_rho.

    p_rho[g] is a product of power-map images of g, so the computation is
    exact in every degree; ``var_cap`` only drops Schur terms with more
    rows than variables.
    """
    check_representation_character(f, "outer character")
    check_representation_character(g, "inner character")
    acc: dict = defaultdict(Fraction)
    adams_cache: dict = {}
    for lam, c in f.terms.items():
        for rho in partitions_of(lam.size):
            chi = character_value(lam, rho)
            if not chi:
                continue
            prod = ONE
            for part in rho:
                if part not in adams_cache:
                    adams_cache[part] = adams(g, part)
                prod = multiply(prod, adams_cache[part])
            weight = Fraction(c * chi, _z(rho))
            for nu, d in prod.terms.items():
                acc[nu] += weight * d
    out = {}
    for nu, v in acc.items():
        if v.denominator != 1:
            raise AssertionError(f"non-integral plethysm coefficient at {nu}: {v}")
        if v and (var_cap is None or len(nu) <= var_cap):
            out[nu] = int(v)
    return CharacterElement(out)


def exterior_algebra_character(max_degree: int) -> CharacterElement:
    return CharacterElement({Partition((1,) * i): 1 for i in range(max_degree + 1)})


def divided_power_character(lam: Sequence[int]) -> CharacterElement:
    """ch Div^lam = product of s_(lam_i)."""
    out = ONE
    for part in lam:
        out = multiply(out, schur_basis((part,)))
    return out
