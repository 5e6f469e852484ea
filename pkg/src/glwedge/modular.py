"""Simple characters in characteristic p from Gram ranks on Weyl modules.

The Weyl module of shape lam is realized as the image of the
Akin-Buchsbaum-Weyman map

    Div^{lam_1} (x) ... (x) Div^{lam_k}  -->  Lambda^{lam'_1} (x) ... (x) Lambda^{lam'_c}

(comultiply each divided power into letters, distribute row i's letters over
the columns, wedge down each column).  The target carries the orthonormal
form on wedge-basis tensors, which restricts to the contravariant form on
the image; its radical mod p is the unique maximal submodule, so the rank of
the Gram matrix on each weight space is the weight multiplicity of L_lam.

Rows of the Gram matrix are indexed by semistandard tableaux.  Any integral
generating set of the weight lattice gives the same p-rank, which the tests
use as a cross-check against the full set of row fillings.
"""
from __future__ import annotations

import itertools
from collections import defaultdict
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

import numpy as np

from . import linalg
from .characters import (
    CharacterElement,
    format_character,
    frobenius_twist,
    kostka,
    monomial_to_schur,
    multiply,
    schur_basis,
    ONE,
)
from .partitions import (
    Partition,
    check_prime,
    dominates,
    format_partition,
    partitions_of,
    steinberg_decompose,
)

DEFAULT_DEGREE_CAP = 10

# A large prime used to certify rank over Q: the rank mod any prime is at most
# the rank over Q, which is at most the Kostka number.
_CERT_PRIME = 1_000_003


# ---------------------------------------------------------------------------
# Tableaux and the ABW map
# ---------------------------------------------------------------------------


def row_fillings(lam: Sequence[int], content: Sequence[int], semistandard: bool = True):
    """Row contents of fillings of shape lam with the given content.

    Each filling is a tuple of rows; a row is a tuple of per-letter counts.
    With ``semistandard`` only semistandard tableaux are produced (each letter
    forms a horizontal strip); otherwise every distribution of the letters
    into rows with the right row lengths.
    """
    lam = tuple(lam)
    k = len(lam)
    letters = len(content)

    def rec(letter, filled, rows):
        if letter == letters:
            if filled == lam:
                yield tuple(tuple(r) for r in rows)
            return
        need = content[letter]
        for dist in _distributions(need, filled, lam, semistandard):
            new_filled = tuple(f + d for f, d in zip(filled, dist))
            for i, d in enumerate(dist):
                rows[i].append(d)
            yield from rec(letter + 1, new_filled, rows)
            for i in range(k):
                rows[i].pop()

    yield from rec(0, (0,) * k, [[] for _ in range(k)])


def _distributions(n, filled, lam, semistandard):
    k = len(lam)

    def rec(i, remaining, acc):
        if i == k:
            if remaining == 0:
                yield tuple(acc)
            return
        cap = lam[i] - filled[i]
        if semistandard and i > 0:
            # horizontal strip: new boxes in row i sit below filled boxes of row i-1
            cap = min(cap, filled[i - 1] - filled[i])
        for d in range(min(cap, remaining), -1, -1):
            acc.append(d)
            yield from rec(i + 1, remaining - d, acc)
            acc.pop()

    yield from rec(0, n, [])


def _arrangements(counts: Sequence[int]) -> list[tuple]:
    letters = [a for a, c in enumerate(counts) for _ in range(c)]
    return sorted(set(itertools.permutations(letters)))


def _sort_sign(seq: Sequence[int]) -> tuple[int, tuple]:
    """Sign of the permutation sorting seq ascending (0 if a letter repeats)."""
    if len(set(seq)) < len(seq):
        return 0, ()
    inv = sum(1 for a in range(len(seq)) for b in range(a + 1, len(seq)) if seq[a] > seq[b])
    return (-1 if inv % 2 else 1), tuple(sorted(seq))


def abw_image(lam: Sequence[int], filling) -> dict:
    """Image of a divided-power row filling as {column-wedge tuple: coeff}."""
    ncols = lam[0] if lam else 0
    per_row = [_arrangements(row) for row in filling]
    out: dict = defaultdict(int)
    for words in itertools.product(*per_row):
        sign = 1
        key = []
        for j in range(ncols):
            col = [w[j] for w in words if len(w) > j]
            s, srt = _sort_sign(col)
            if not s:
                sign = 0
                break
            sign *= s
            key.append(srt)
        if sign:
            out[tuple(key)] += sign
    return {k: v for k, v in out.items() if v}


@dataclass
class WeylRealization:
    """Weyl module of a given shape in ``rank`` variables, one weight at a time."""

    shape: Partition
    rank: int
    _blocks: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        self.shape = Partition(self.shape)

    def basis(self, weight: Sequence[int], semistandard: bool = True) -> list:
        weight = tuple(weight)
        if len(weight) > self.rank or sum(weight) != self.shape.size:
            return []
        return list(row_fillings(self.shape, weight, semistandard))

    def dimension(self, weight: Sequence[int]) -> int:
        return len(self.basis(weight))

    def image_matrix(self, weight: Sequence[int], semistandard: bool = True) -> np.ndarray:
        """Rows = ABW images of the chosen fillings, in a common column basis."""
        key = (tuple(weight), semistandard)
        if key in self._blocks:
            return self._blocks[key]
        images = [abw_image(self.shape, f) for f in self.basis(weight, semistandard)]
        cols = sorted({c for im in images for c in im})
        index = {c: i for i, c in enumerate(cols)}
        mat = np.zeros((len(images), len(cols)), dtype=np.int64)
        for r, im in enumerate(images):
            for c, v in im.items():
                mat[r, index[c]] = v
        self._blocks[key] = mat
        return mat

    def gram(self, weight: Sequence[int], semistandard: bool = True) -> np.ndarray:
        b = self.image_matrix(weight, semistandard)
        return b @ b.T

    def gram_rank(self, weight: Sequence[int], p: int, semistandard: bool = True) -> int:
        g = self.gram(weight, semistandard)
        return linalg.rank(g % p, p) if g.size else 0


# ---------------------------------------------------------------------------
# Simple characters
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SimpleCharacter:
    shape: Partition
    prime: int
    character: CharacterElement

    def __str__(self):
        return format_character(self.character)


def gram_rank_character(lam: Sequence[int], p: int, m: int | None = None) -> SimpleCharacter:
    """ch L_lam in characteristic p from Gram ranks at every dominant weight."""
    check_prime(p)
    lam = Partition(lam)
    if m is None:
        m = max(lam.size, 1)
    if m < lam.size:
        raise ValueError(f"rank m={m} must be at least |lam|={lam.size}")
    return SimpleCharacter(lam, p, _simple_character(lam, p, m))


@lru_cache(maxsize=None)
def _simple_character(lam: Partition, p: int, m: int) -> CharacterElement:
    weyl = WeylRealization(lam, m)
    mults = {}
    for mu in partitions_of(lam.size):
        if len(mu) > m or not dominates(lam, mu):
            continue
        r = weyl.gram_rank(mu, p)
        if r:
            mults[mu] = r
    ch = monomial_to_schur(mults)
    check_unitriangular(lam, ch)
    return ch


def check_unitriangular(lam: Partition, ch: CharacterElement) -> None:
    if ch.coefficient(lam) != 1:
        raise AssertionError(f"leading coefficient of ch L{format_partition(lam)} is not 1: {ch}")
    for mu, _ in ch:
        if mu != lam and not dominates(lam, mu):
            raise AssertionError(f"ch L{format_partition(lam)} has non-dominated term {mu}")


def weyl_rank_over_q_matches_kostka(lam: Sequence[int], mu: Sequence[int]) -> bool:
    """Sanity check of the realization: the image has rank K_{lam,mu}."""
    weyl = WeylRealization(Partition(lam), max(len(mu), 1))
    b = weyl.image_matrix(mu)
    return linalg.rank(b % _CERT_PRIME, _CERT_PRIME) == kostka(tuple(Partition(lam)), tuple(Partition(mu)))


def simple_character(lam: Sequence[int], p: int) -> CharacterElement:
    return gram_rank_character(lam, p).character


# ---------------------------------------------------------------------------
# Decompositions
# ---------------------------------------------------------------------------


def decompose_into_simples(a: CharacterElement, p: int, degree_cap: int = DEFAULT_DEGREE_CAP) -> dict:
    """Multiplicities n_mu with a = sum n_mu ch L_mu.

    The lex-largest remaining term always leads a simple character, so peeling
    it off terminates.
    """
    check_prime(p)
    if a and max(a.degrees()) > degree_cap:
        raise ValueError(f"degree {max(a.degrees())} exceeds cap {degree_cap}")
    work = a
    out: dict = {}
    while work:
        lead, c = max(work, key=lambda t: (t[0].size, tuple(t[0])))
        if c < 0:
            raise ValueError(f"negative multiplicity {c} of L{format_partition(lead)}: not a representation character")
        out[lead] = c
        work = work - c * simple_character(lead, p)
    return dict(sorted(out.items(), key=lambda kv: (kv[0].size, tuple(-x for x in kv[0]))))


@dataclass(frozen=True)
class DecompositionMatrix:
    prime: int
    degree: int
    shapes: tuple
    entries: tuple

    def entry(self, lam, mu) -> int:
        return self.entries[self.shapes.index(Partition(lam))][self.shapes.index(Partition(mu))]

    def to_json(self) -> dict:
        return {
            "prime": self.prime,
            "degree": self.degree,
            "rows": [format_partition(s) for s in self.shapes],
            "columns": [format_partition(s) for s in self.shapes],
            "entries": [list(r) for r in self.entries],
        }


def decomposition_matrix(d: int, p: int, degree_cap: int = 6) -> DecompositionMatrix:
    """Entry (lam, mu) = [s_lam : ch L_mu]; rows and columns lex descending."""
    if d > degree_cap:
        raise ValueError(f"degree {d} exceeds cap {degree_cap}")
    shapes = tuple(partitions_of(d))
    rows = []
    for lam in shapes:
        dec = decompose_into_simples(schur_basis(lam), p, degree_cap)
        rows.append(tuple(dec.get(mu, 0) for mu in shapes))
    return DecompositionMatrix(p, d, shapes, tuple(rows))


@dataclass(frozen=True)
class SteinbergReport:
    shape: Partition
    prime: int
    layers: tuple
    simple: CharacterElement
    product: CharacterElement

    @property
    def ok(self) -> bool:
        return self.simple == self.product

    @property
    def difference(self) -> CharacterElement:
        return self.simple - self.product

    def to_json(self) -> dict:
        return {
            "partition": format_partition(self.shape),
            "prime": self.prime,
            "layers": [format_partition(x) for x in self.layers],
            "simple": format_character(self.simple),
            "twisted_product": format_character(self.product),
            "verdict": "pass" if self.ok else "fail",
        }


def verify_steinberg(lam: Sequence[int], p: int, degree_cap: int = DEFAULT_DEGREE_CAP) -> SteinbergReport:
    """Compare ch L_lam with the product of Frobenius-twisted layer characters."""
    lam = Partition(lam)
    if lam.size > degree_cap:
        raise ValueError(f"|lam|={lam.size} exceeds cap {degree_cap}")
    dec = steinberg_decompose(lam, p)
    product = ONE
    for i, layer in enumerate(dec.layers):
        ch = simple_character(layer, p)
        product = multiply(product, ch if i == 0 else frobenius_twist(ch, p, i))
    return SteinbergReport(lam, p, dec.layers, simple_character(lam, p), product)


def find_period(seq: Sequence[int]) -> tuple[int, int] | None:
    """Smallest (period, start) with seq eventually periodic, seen at least twice."""
    n = len(seq)
    for q in range(1, n // 2 + 1):
        for s in range(0, n - 2 * q + 1):
            if all(seq[k] == seq[k + q] for k in range(s, n - q)):
                return q, s
    return None


def wedge_tensor_length_report(n: int, i_max: int, p: int, degree_cap: int = DEFAULT_DEGREE_CAP) -> dict:
    """Composition lengths of Lambda^i (x) V^{(x)n} for i <= i_max."""
    if n > 2:
        raise ValueError("only n <= 2 is supported")
    if i_max + n > degree_cap:
        raise ValueError(f"degree {i_max + n} exceeds cap {degree_cap}")
    tensor = ONE
    for _ in range(n):
        tensor = multiply(tensor, schur_basis((1,)))
    rows = []
    for i in range(i_max + 1):
        ch = multiply(schur_basis((1,) * i), tensor)
        dec = decompose_into_simples(ch, p, degree_cap)
        rows.append({
            "i": i,
            "length": sum(dec.values()),
            "simples": {format_partition(k): v for k, v in dec.items()},
        })
    lengths = [r["length"] for r in rows]
    period = find_period(lengths)
    return {
        "n": n,
        "prime": p,
        "i_max": i_max,
        "lengths": lengths,
        "rows": rows,
        "period": None if period is None else {"period": period[0], "start": period[1]},
    }
