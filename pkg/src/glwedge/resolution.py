"""Graded module values over an exterior algebra and their minimal resolutions.

A module is described lazily by its graded pieces: ``dim(g)`` is the
dimension of the piece of grade ``g`` and ``act(j, g)`` is the matrix of
multiplication by the j-th variable from grade g to ``grading.up(g, j)``.
Vectors are rows; a linear map is applied as ``v @ A``.

Two gradings are provided.  :class:`DegreeGrading` is the plain N-grading
of a module over E_m.  :class:`WeightGrading` grades by weights (finitely
supported tuples, trailing zeros stripped); because every operation only
touches weights below the one requested, the same code serves finite rank
and the rank-free (polynomial functor) setting.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from math import comb, factorial
from typing import Callable, Sequence

import numpy as np

from . import linalg

# ---------------------------------------------------------------------------
# Weights
# ---------------------------------------------------------------------------


def normalize(w: Sequence[int]) -> tuple:
    w = tuple(w)
    end = len(w)
    while end and w[end - 1] == 0:
        end -= 1
    return w[:end]


def add_unit(w: tuple, j: int, k: int = 1) -> tuple:
    if j >= len(w):
        w = w + (0,) * (j + 1 - len(w))
    return normalize(w[:j] + (w[j] + k,) + w[j + 1:])


def add_indicator(w: tuple, positions: Sequence[int], k: int = 1) -> tuple:
    for j in positions:
        w = add_unit(w, j, k)
    return w


def support(w: Sequence[int]) -> tuple:
    return tuple(i for i, x in enumerate(w) if x)


def compositions(total: int, parts: int):
    """Weak compositions of ``total`` into ``parts`` parts, lex descending."""
    if parts == 0:
        if total == 0:
            yield ()
        return
    for first in range(total, -1, -1):
        for rest in compositions(total - first, parts - 1):
            yield (first,) + rest


def weights_of_degree(d: int, rank: int) -> list:
    """All weights of degree d with support inside the first ``rank`` positions."""
    return [normalize(c) for c in compositions(d, rank)]


def bounded_below(w: Sequence[int], total: int):
    """Weights nu <= w (componentwise) of the given degree, as full-length tuples."""
    w = tuple(w)

    def rec(i, remaining):
        if i == len(w):
            if remaining == 0:
                yield ()
            return
        tail = sum(w[i + 1:])
        for x in range(min(w[i], remaining), -1, -1):
            if remaining - x <= tail:
                for rest in rec(i + 1, remaining - x):
                    yield (x,) + rest

    yield from rec(0, total)


def orbit_size(w: Sequence[int], rank: int) -> int:
    """Number of weights in N^rank that sort to the partition ``w``."""
    w = [x for x in w if x]
    if len(w) > rank:
        return 0
    counts = [w.count(v) for v in set(w)] + [rank - len(w)]
    out = factorial(rank)
    for c in counts:
        out //= factorial(c)
    return out


def wedge_sign(j: int, subset: Sequence[int]) -> int:
    """Sign of x_j ^ x_S after sorting (S sorted ascending, j not in S)."""
    return -1 if sum(1 for s in subset if s < j) % 2 else 1


def merge_sign(a: Sequence[int], b: Sequence[int]) -> int:
    """Sign of x_A ^ x_B rewritten with indices ascending (A, B disjoint)."""
    inv = 0
    for x in a:
        for y in b:
            if x > y:
                inv += 1
    return -1 if inv % 2 else 1


# ---------------------------------------------------------------------------
# Gradings
# ---------------------------------------------------------------------------


class DegreeGrading:
    """N-grading of a module over E_m; a grade is the integer degree."""

    weighted = False

    def __init__(self, nvars: int):
        self.nvars = nvars

    def degree(self, g: int) -> int:
        return g

    def up(self, g: int, j: int) -> int:
        return g + 1

    def down(self, g: int) -> list:
        return [(j, g - 1) for j in range(self.nvars)] if g > 0 else []

    def faces(self, g: int):
        for k in range(min(g, self.nvars) + 1):
            for s in itertools.combinations(range(self.nvars), k):
                yield s, g - k

    def cofaces(self, h: int, g: int):
        if g < h:
            return []
        return list(itertools.combinations(range(self.nvars), g - h))

    def koszul(self, g: int, i: int):
        """(divided monomial exponent, grade of the module factor) pairs."""
        if g - i < 0:
            return []
        return [(nu, g - i) for nu in compositions(i, self.nvars)]

    def grades(self, d: int) -> list:
        return [d]

    def grades_up_to(self, d_max: int) -> list:
        return list(range(d_max + 1))


class WeightGrading:
    """Grading by weights; ``nvars`` (None = unbounded) only limits enumeration."""

    weighted = True

    def __init__(self, nvars: int | None = None):
        self.nvars = nvars

    def degree(self, g: tuple) -> int:
        return sum(g)

    def up(self, g: tuple, j: int) -> tuple:
        return add_unit(g, j)

    def down(self, g: tuple) -> list:
        return [(j, add_unit(g, j, -1)) for j in support(g)]

    def faces(self, g: tuple):
        supp = support(g)
        for k in range(len(supp) + 1):
            for s in itertools.combinations(supp, k):
                yield s, add_indicator(g, s, -1)

    def cofaces(self, h: tuple, g: tuple):
        n = max(len(h), len(g))
        diff = [(g[i] if i < len(g) else 0) - (h[i] if i < len(h) else 0) for i in range(n)]
        if any(x not in (0, 1) for x in diff):
            return []
        return [tuple(i for i, x in enumerate(diff) if x)]

    def koszul(self, g: tuple, i: int):
        out = []
        for nu in bounded_below(g, i):
            out.append((normalize(nu), normalize(tuple(a - b for a, b in zip(g, nu)))))
        return out

    def grades(self, d: int) -> list:
        if self.nvars is None:
            raise ValueError("enumerating weights needs a finite rank")
        return weights_of_degree(d, self.nvars)

    def grades_up_to(self, d_max: int) -> list:
        return [g for d in range(d_max + 1) for g in self.grades(d)]


# ---------------------------------------------------------------------------
# Module values
# ---------------------------------------------------------------------------


class ModuleValues:
    """Base class: subclasses implement ``_dim`` and ``_act`` (memoized here)."""

    def __init__(self, grading, p: int):
        self.grading = grading
        self.p = p
        self._dims: dict = {}
        self._acts: dict = {}

    def dim(self, g) -> int:
        if g not in self._dims:
            self._dims[g] = self._dim(g)
        return self._dims[g]

    def act(self, j: int, g) -> np.ndarray:
        key = (j, g)
        if key not in self._acts:
            a = self._act(j, g)
            assert a.shape == (self.dim(g), self.dim(self.grading.up(g, j))), (type(self), key, a.shape)
            self._acts[key] = a
        return self._acts[key]

    def apply(self, j: int, g, vecs: np.ndarray) -> np.ndarray:
        """Rows of ``vecs`` (vectors at grade g) multiplied by x_j."""
        return (vecs @ self.act(j, g)) % self.p

    def relabel(self, sigma: Sequence[int], g) -> np.ndarray:
        raise NotImplementedError(f"{type(self).__name__} does not support relabelling")

    def _dim(self, g) -> int:
        raise NotImplementedError

    def _act(self, j: int, g) -> np.ndarray:
        raise NotImplementedError

    def multiply_chain(self, positions: Sequence[int], g, vecs: np.ndarray) -> tuple:
        """x_{s1} ... x_{sk} applied to rows of vecs (highest index acts first)."""
        cur = g
        out = vecs
        for j in sorted(positions, reverse=True):
            out = self.apply(j, cur, out)
            cur = self.grading.up(cur, j)
        return out, cur


def relabel_weight(sigma: Sequence[int], g: tuple) -> tuple:
    """Weight after moving coordinate t to position sigma[t]."""
    out: tuple = ()
    for t, x in enumerate(g):
        if x:
            out = add_unit(out, sigma[t], x)
    return out


class FreeValues(ModuleValues):
    """E (x) W for graded generator spaces W; basis (S, generator grade, k)."""

    def __init__(self, grading, p: int, gen_dim: Callable, gen_relabel: Callable | None = None):
        super().__init__(grading, p)
        self.gen_dim = gen_dim
        self.gen_relabel = gen_relabel
        self._bases: dict = {}
        self._moves: dict = {}

    def basis(self, g) -> tuple:
        if g not in self._bases:
            items = []
            for s, h in self.grading.faces(g):
                n = self.gen_dim(h)
                items.extend((s, h, k) for k in range(n))
            self._bases[g] = (items, {b: i for i, b in enumerate(items)})
        return self._bases[g]

    def _dim(self, g) -> int:
        return len(self.basis(g)[0])

    def _move(self, j: int, g) -> tuple:
        """x_j on basis vectors as (source rows, target columns, signs)."""
        key = (j, g)
        if key not in self._moves:
            src, _ = self.basis(g)
            _, index = self.basis(self.grading.up(g, j))
            rows, cols, signs = [], [], []
            for r, (s, h, k) in enumerate(src):
                if j in s:
                    continue
                rows.append(r)
                cols.append(index[(tuple(sorted(s + (j,))), h, k)])
                signs.append(wedge_sign(j, s) % self.p)
            self._moves[key] = (np.array(rows, dtype=np.int64), np.array(cols, dtype=np.int64),
                                np.array(signs, dtype=np.int64), len(index))
        return self._moves[key]

    def act(self, j: int, g) -> np.ndarray:
        return self._act(j, g)

    def _act(self, j: int, g) -> np.ndarray:
        rows, cols, signs, n = self._move(j, g)
        a = np.zeros((self.dim(g), n), dtype=np.int64)
        a[rows, cols] = signs
        return a

    def apply(self, j: int, g, vecs: np.ndarray) -> np.ndarray:
        rows, cols, signs, n = self._move(j, g)
        out = np.zeros((vecs.shape[0], n), dtype=np.int64)
        if rows.size:
            out[:, cols] = (vecs[:, rows] * signs) % self.p
        return out

    def relabel(self, sigma: Sequence[int], g) -> np.ndarray:
        if self.gen_relabel is None:
            raise NotImplementedError("generators cannot be relabelled")
        src, _ = self.basis(g)
        _, index = self.basis(relabel_weight(sigma, g))
        a = np.zeros((len(src), len(index)), dtype=np.int64)
        for r, (s, h, k) in enumerate(src):
            h2, k2 = self.gen_relabel(sigma, h, k)
            a[r, index[(tuple(sigma[x] for x in s), h2, k2)]] = 1
        return a

    def empty_component(self, g) -> list:
        """Basis indices with empty exterior part (the generators themselves)."""
        src, _ = self.basis(g)
        return [i for i, (s, _, _) in enumerate(src) if not s]


class SubValues(ModuleValues):
    """Graded subspace family closed under the action; coordinates = pivots."""

    def __init__(self, parent: ModuleValues, subspace: Callable):
        super().__init__(parent.grading, parent.p)
        self.parent = parent
        self._subspace = subspace
        self._subs: dict = {}

    def space(self, g) -> linalg.Subspace:
        if g not in self._subs:
            self._subs[g] = self._subspace(g)
        return self._subs[g]

    def _dim(self, g) -> int:
        return self.space(g).dim

    def _map_in(self, rows: np.ndarray, tgt: linalg.Subspace) -> np.ndarray:
        if tgt.dim == 0 or rows.shape[0] == 0:
            return np.zeros((rows.shape[0], tgt.dim), dtype=np.int64)
        assert not np.any(tgt.reduce(rows)), "subspace family is not closed under the action"
        return tgt.coords(rows)

    def _act(self, j: int, g) -> np.ndarray:
        src = self.space(g)
        tgt_grade = self.grading.up(g, j)
        tgt = self.space(tgt_grade)
        if src.dim == 0:
            return np.zeros((0, tgt.dim), dtype=np.int64)
        return self._map_in(self.parent.apply(j, g, src.rows), tgt)

    def relabel(self, sigma, g) -> np.ndarray:
        src = self.space(g)
        tgt = self.space(relabel_weight(sigma, g))
        if src.dim == 0:
            return np.zeros((0, tgt.dim), dtype=np.int64)
        rows = (src.rows @ self.parent.relabel(sigma, g)) % self.p
        return self._map_in(rows, tgt)

    def inclusion(self, g) -> np.ndarray:
        """Rows: basis of the piece as vectors of the parent."""
        return self.space(g).rows


class QuotientValues(ModuleValues):
    """Quotient of ``parent`` by a graded subspace family; basis = non-pivot classes."""

    def __init__(self, parent: ModuleValues, subspace: Callable):
        super().__init__(parent.grading, parent.p)
        self.parent = parent
        self._subspace = subspace
        self._subs: dict = {}

    def space(self, g) -> linalg.Subspace:
        if g not in self._subs:
            s = self._subspace(g)
            assert s.n == self.parent.dim(g)
            self._subs[g] = s
        return self._subs[g]

    def _dim(self, g) -> int:
        return self.space(g).codim

    def lift(self, g) -> np.ndarray:
        """Rows: chosen representatives in the parent of the quotient basis."""
        return self.space(g).complement_basis()

    def project(self, g, vecs: np.ndarray) -> np.ndarray:
        return self.space(g).quotient_coords(vecs)

    def _act(self, j: int, g) -> np.ndarray:
        tgt_grade = self.grading.up(g, j)
        space = self.space(g)
        units = space.complement_basis()
        return self.project(tgt_grade, self.parent.apply(j, g, units))

    def relabel(self, sigma, g) -> np.ndarray:
        rows = self.parent.relabel(sigma, g)[self.space(g).nonpivots]
        return self.project(relabel_weight(sigma, g), rows)


def zero_subspace(values: ModuleValues) -> Callable:
    return lambda g: linalg.Subspace(values.dim(g), values.p)


def generated_below(values: ModuleValues, n: int) -> SubValues:
    """The submodule generated by all pieces of degree < n."""
    grading = values.grading

    def space(g):
        dim = values.dim(g)
        if grading.degree(g) < n:
            return linalg.Subspace.full(dim, values.p)
        rows = [values.apply(j, h, sub.space(h).rows) for j, h in grading.down(g) if sub.space(h).dim]
        return linalg.Subspace(dim, values.p, np.vstack(rows) if rows else None)

    sub = SubValues(values, space)
    return sub


def maximal_ideal_times(values: ModuleValues) -> SubValues:
    """m.M: the span of x_j M in each grade."""
    grading = values.grading

    def space(g):
        rows = [values.act(j, h) for j, h in grading.down(g) if values.dim(h)]
        return linalg.Subspace(values.dim(g), values.p, np.vstack(rows) if rows else None)

    return SubValues(values, space)


# ---------------------------------------------------------------------------
# Minimal free resolutions
# ---------------------------------------------------------------------------


class MinimalResolution:
    """Minimal free resolution built grade by grade.

    Level i has a module K_i (K_0 is the input).  Its minimal generators at
    grade g are a complement of m.K_i inside K_i (Nakayama), the free module
    F_i = E (x) W_i maps onto K_i, and K_{i+1} is the kernel.
    """

    def __init__(self, module: ModuleValues):
        self.module = module
        self.grading = module.grading
        self.p = module.p
        self._levels: list = [module]
        self._gens: list = [dict()]
        self._free: list = []
        self.minimality_violations: list = []

    def level(self, i: int) -> ModuleValues:
        while len(self._levels) <= i:
            self._extend()
        return self._levels[i]

    def free(self, i: int) -> FreeValues:
        self.level(i + 1)
        return self._free[i]

    def _extend(self):
        i = len(self._levels) - 1
        free = FreeValues(self.grading, self.p, lambda g, i=i: self.generators(i, g).shape[0])
        self._free.append(free)

        def kernel(g, i=i, free=free):
            d = self.differential(i, g)
            n = free.dim(g)
            if d.shape[1] == 0:
                return linalg.Subspace.full(n, self.p)
            ker = linalg.Subspace(n, self.p, linalg.nullspace(d.T, self.p))
            empty = free.empty_component(g)
            if ker.dim and empty and np.any(ker.rows[:, empty]):
                self.minimality_violations.append((i, g))
            return ker

        self._levels.append(SubValues(free, kernel))
        self._gens.append({})

    def generators(self, i: int, g) -> np.ndarray:
        """Rows: minimal generators of K_i at grade g (coordinates of K_i)."""
        gens = self._gens[i] if i < len(self._gens) else None
        if gens is None:
            self.level(i)
            gens = self._gens[i]
        if g not in gens:
            mod = self.level(i)
            n = mod.dim(g)
            if n == 0:
                gens[g] = np.zeros((0, 0), dtype=np.int64)
            else:
                rows = [mod.act(j, h) for j, h in self.grading.down(g) if mod.dim(h)]
                m_part = linalg.Subspace(n, self.p, np.vstack(rows) if rows else None)
                gens[g] = m_part.complement_basis()
        return gens[g]

    def differential(self, i: int, g) -> np.ndarray:
        """Matrix of F_i -> K_i at grade g."""
        mod = self.level(i)
        free = self._free[i]
        basis, _ = free.basis(g)
        out = np.zeros((len(basis), mod.dim(g)), dtype=np.int64)
        r = 0
        for s, h in self.grading.faces(g):
            w = self.generators(i, h)
            if w.shape[0] == 0:
                continue
            block, _ = mod.multiply_chain(s, h, w)
            out[r:r + w.shape[0]] = block
            r += w.shape[0]
        assert r == len(basis)
        return out

    def betti(self, i: int, g) -> int:
        return self.generators(i, g).shape[0]


def cartan_betti(module: ModuleValues, i: int, g) -> int:
    """dim Tor_i(M, k) at grade g from the complex M (x) Div^i (independent route).

    Differential: m (x) y^(nu) -> sum_j x_j m (x) y^(nu - e_j).
    """
    grading = module.grading
    p = module.p

    def blocks(k):
        out = []
        offset = 0
        for nu, h in grading.koszul(g, k):
            n = module.dim(h)
            if n:
                out.append((nu, h, offset, n))
                offset += n
        return out, offset

    def boundary(k):
        src, n_src = blocks(k)
        tgt, n_tgt = blocks(k - 1)
        mat = np.zeros((n_src, n_tgt), dtype=np.int64)
        where = {(nu, h): (off, n) for nu, h, off, n in tgt}
        for nu, h, off, n in src:
            for j, x in enumerate(nu):
                if not x:
                    continue
                nu2 = nu[:j] + (x - 1,) + nu[j + 1:]
                if grading.weighted:
                    nu2 = normalize(nu2)
                h2 = grading.up(h, j)
                if (nu2, h2) not in where:
                    continue
                toff, tn = where[(nu2, h2)]
                mat[off:off + n, toff:toff + tn] = (mat[off:off + n, toff:toff + tn] + module.act(j, h)) % p
        return mat, n_src, n_tgt

    _, n_i = blocks(i)
    if n_i == 0:
        return 0
    if i > 0:
        d_i, _, _ = boundary(i)
        ker = n_i - linalg.rank(d_i, p) if d_i.size else n_i
    else:
        ker = n_i
    d_next, n_next, _ = boundary(i + 1)
    im = linalg.rank(d_next, p) if d_next.size else 0
    return ker - im


# ---------------------------------------------------------------------------
# Betti tables
# ---------------------------------------------------------------------------


@dataclass
class BettiTable:
    """Graded Betti numbers beta_{i, grade} for i <= i_max, degree <= d_max.

    ``complete[i]`` records whether level i is known to have no entries
    beyond the window; when false, t_i and the regularity are lower bounds.
    """

    i_max: int
    d_max: int
    weighted: bool
    entries: dict = field(default_factory=dict)
    complete: tuple = ()
    dominant_only: bool = False
    rank: int | None = None

    def value(self, i: int, g) -> int:
        return self.entries.get((i, g), 0)

    def by_degree(self) -> dict:
        """{(i, j): total}; with dominant-only weights, totals at ``rank``."""
        out: dict = {}
        for (i, g), v in self.entries.items():
            if not v:
                continue
            j = sum(g) if self.weighted else g
            mult = orbit_size(g, self.rank) if self.dominant_only else 1
            if mult:
                out[(i, j)] = out.get((i, j), 0) + v * mult
        return dict(sorted(out.items()))

    def degrees(self, i: int) -> list:
        return sorted({(sum(g) if self.weighted else g) for (k, g), v in self.entries.items() if k == i and v})

    def t(self, i: int) -> int:
        """Top degree of Tor_i in the window, -1 if it vanishes there."""
        ds = self.degrees(i)
        return ds[-1] if ds else -1

    def vanishes(self, i: int) -> bool:
        return self.t(i) == -1

    def is_complete(self, i: int) -> bool:
        return i < len(self.complete) and self.complete[i]

    def regularity(self) -> tuple:
        """(max_i t_i - i over nonvanishing i, is_lower_bound)."""
        vals = [self.t(i) - i for i in range(self.i_max + 1) if not self.vanishes(i)]
        reg = max(vals) if vals else -1
        lower = not all(self.is_complete(i) for i in range(self.i_max + 1))
        return reg, lower

    def to_json(self) -> list:
        out = []
        for (i, g), v in sorted(self.entries.items(), key=lambda kv: (kv[0][0], _grade_key(kv[0][1]))):
            if not v:
                continue
            row = {"i": i, "j": sum(g) if self.weighted else g}
            if self.weighted:
                row["weight"] = list(g)
            row["value"] = v
            out.append(row)
        return out

    def summary(self) -> dict:
        return {
            "i_max": self.i_max,
            "d_max": self.d_max,
            "complete": list(self.complete),
            "t": [self.t(i) for i in range(self.i_max + 1)],
            "totals": [{"i": i, "j": j, "value": v} for (i, j), v in self.by_degree().items()],
        }


def _grade_key(g):
    return (sum(g), tuple(-x for x in g)) if isinstance(g, tuple) else (g,)


def betti_table(res: MinimalResolution, i_max: int, grades: list, d_max: int,
                complete: Sequence[bool] = (), dominant_only: bool = False,
                rank: int | None = None) -> BettiTable:
    table = BettiTable(i_max, d_max, res.grading.weighted, complete=tuple(complete),
                       dominant_only=dominant_only, rank=rank)
    for i in range(i_max + 1):
        for g in grades:
            if res.grading.degree(g) < i:
                continue
            v = res.betti(i, g)
            if v:
                table.entries[(i, g)] = v
    return table


def koszul_dimension(m: int, i: int) -> int:
    return comb(m + i - 1, i)
