"""Finitely presented graded modules over E_m = Lambda(F_p^m).

Exterior monomials are bit sets (bit j = variable x_{j+1}); products sort
the indices ascending and count inversions for the sign.  Modules are
presented by generators (degree, optional weight) and relations given as
sparse term lists; everything homological goes through the lazy value
machinery in :mod:`glwedge.resolution`.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import linalg
from .partitions import check_prime
from .resolution import (
    BettiTable,
    DegreeGrading,
    FreeValues,
    MinimalResolution,
    ModuleValues,
    QuotientValues,
    WeightGrading,
    betti_table,
    generated_below,
    normalize,
)


def mask_of(indices: Sequence[int]) -> int:
    out = 0
    for j in indices:
        if out >> j & 1:
            raise ValueError(f"repeated index {j}")
        out |= 1 << j
    return out


def indices_of(mask: int) -> tuple:
    out = []
    j = 0
    while mask:
        if mask & 1:
            out.append(j)
        mask >>= 1
        j += 1
    return tuple(out)


def popcount(mask: int) -> int:
    return bin(mask).count("1")


class ExteriorAlgebraRank:
    """E_m over F_p with monomials as bit sets."""

    def __init__(self, m: int, p: int):
        if m < 0:
            raise ValueError("m must be nonnegative")
        self.m = m
        self.p = check_prime(p)

    def __eq__(self, other):
        return isinstance(other, ExteriorAlgebraRank) and (self.m, self.p) == (other.m, other.p)

    def __hash__(self):
        return hash((self.m, self.p))

    def __repr__(self):
        return f"ExteriorAlgebraRank(m={self.m}, p={self.p})"

    def monomials(self, degree: int | None = None) -> list:
        out = [s for s in range(1 << self.m) if degree is None or popcount(s) == degree]
        return sorted(out, key=lambda s: (popcount(s), indices_of(s)))

    def multiply(self, a: int, b: int) -> tuple:
        """x_a ^ x_b = sign * x_{a|b}; sign 0 if they share a variable."""
        if a & b:
            return 0, 0
        inv = 0
        for j in indices_of(b):
            inv += popcount(a >> (j + 1))
        return (-1 if inv % 2 else 1), a | b

    def dimension(self, degree: int) -> int:
        return len(self.monomials(degree))


@dataclass(frozen=True)
class Generator:
    degree: int
    weight: tuple | None = None


class GradedModule:
    """Graded E_m-module given by generators and homogeneous relations.

    A relation is a list of terms (generator index, exterior monomial mask,
    coefficient).  When every generator carries a weight, all pieces are
    weight graded as well.
    """

    def __init__(self, algebra: ExteriorAlgebraRank, generators: Sequence, relations: Sequence = ()):
        self.algebra = algebra
        self.p = algebra.p
        gens = []
        for g in generators:
            if isinstance(g, Generator):
                gens.append(g)
            elif isinstance(g, int):
                gens.append(Generator(g))
            else:
                deg, wt = g
                gens.append(Generator(deg, None if wt is None else normalize(wt)))
        self.generators = tuple(gens)
        weighted = [g.weight is not None for g in gens]
        if any(weighted) and not all(weighted):
            raise ValueError("either all generators carry weights or none do")
        self.weighted = bool(gens) and all(weighted)
        for g in gens:
            if g.weight is not None and (len(g.weight) > algebra.m or sum(g.weight) != g.degree or min(g.weight, default=0) < 0):
                raise ValueError(f"generator weight {g.weight} incompatible with degree {g.degree} / rank {algebra.m}")
        rels = []
        for rel in relations:
            terms = {}
            for gen, mask, c in rel:
                if not 0 <= gen < len(gens):
                    raise ValueError(f"relation refers to missing generator {gen}")
                if mask >> algebra.m:
                    raise ValueError(f"monomial {indices_of(mask)} outside rank {algebra.m}")
                key = (gen, mask)
                terms[key] = (terms.get(key, 0) + c) % self.p
            terms = {k: v for k, v in terms.items() if v}
            if terms:
                rels.append(tuple(sorted((g, s, c) for (g, s), c in terms.items())))
        self.relations = tuple(rels)
        self._grades_of_relations = [self._relation_grade(r) for r in self.relations]
        self._values = None

    # grades -------------------------------------------------------------

    def term_grade(self, gen: int, mask: int):
        g = self.generators[gen]
        if self.weighted:
            w = list(g.weight) + [0] * (self.algebra.m - len(g.weight))
            for j in indices_of(mask):
                w[j] += 1
            return normalize(w)
        return g.degree + popcount(mask)

    def _relation_grade(self, rel):
        grades = {self.term_grade(g, s) for g, s, _ in rel}
        if len(grades) != 1:
            raise ValueError(f"relation {rel} is not homogeneous: grades {grades}")
        return grades.pop()

    @property
    def grading(self):
        return WeightGrading(self.algebra.m) if self.weighted else DegreeGrading(self.algebra.m)

    def degree_of_grade(self, g) -> int:
        return sum(g) if self.weighted else g

    def max_generator_degree(self) -> int:
        return max((g.degree for g in self.generators), default=-1)

    def top_degree_bound(self) -> int:
        return self.max_generator_degree() + self.algebra.m

    # values -------------------------------------------------------------

    def values(self) -> ModuleValues:
        if self._values is None:
            self._values = _PresentationValues(self)
        return self._values

    def __repr__(self):
        return (f"GradedModule(m={self.algebra.m}, p={self.p}, generators={len(self.generators)}, "
                f"relations={len(self.relations)}, weighted={self.weighted})")

    # serialization ------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "prime": self.p,
            "nvars": self.algebra.m,
            "generators": [
                {"degree": g.degree, **({"weight": list(g.weight)} if g.weight is not None else {})}
                for g in self.generators
            ],
            "relations": [
                [{"generator": g, "monomial": [j + 1 for j in indices_of(s)], "coeff": c} for g, s, c in rel]
                for rel in self.relations
            ],
        }

    @classmethod
    def from_json(cls, data: dict) -> "GradedModule":
        alg = ExteriorAlgebraRank(int(data["nvars"]), int(data["prime"]))
        gens = [(int(g["degree"]), tuple(g["weight"]) if "weight" in g else None) for g in data["generators"]]
        rels = [[(int(t["generator"]), mask_of([j - 1 for j in t["monomial"]]), int(t["coeff"])) for t in rel]
                for rel in data.get("relations", [])]
        return cls(alg, gens, rels)

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


class _PresentationValues(QuotientValues):
    def __init__(self, module: GradedModule):
        grading = module.grading
        self.module = module
        by_grade: dict = {}
        for idx, g in enumerate(module.generators):
            grade = normalize(g.weight) if module.weighted else g.degree
            by_grade.setdefault(grade, []).append(idx)
        self.gens_by_grade = by_grade
        self.gen_position = {idx: (grade, k) for grade, lst in by_grade.items() for k, idx in enumerate(lst)}
        free = FreeValues(grading, module.p, lambda h: len(by_grade.get(h, ())))
        self.free = free
        super().__init__(free, self._relations_at)

    def relation_vector(self, rel, grade) -> np.ndarray:
        _, index = self.free.basis(grade)
        v = np.zeros(len(index), dtype=np.int64)
        for gen, mask, c in rel:
            h, k = self.gen_position[gen]
            v[index[(indices_of(mask), h, k)]] += c
        return v % self.p

    def _relations_at(self, g) -> linalg.Subspace:
        grading = self.grading
        rows = []
        for rel, h in zip(self.module.relations, self.module._grades_of_relations):
            for t in grading.cofaces(h, g):
                vec = self.relation_vector(rel, h).reshape(1, -1)
                out, _ = self.free.multiply_chain(t, h, vec)
                rows.append(out[0])
        return linalg.Subspace(self.free.dim(g), self.p, np.array(rows) if rows else None)


# ---------------------------------------------------------------------------
# Operations
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ComponentDimension:
    degree: int
    dim: int
    weights: dict | None = None


def component_dimensions(module: GradedModule, d_max: int) -> list:
    vals = module.values()
    out = []
    for d in range(d_max + 1):
        if module.weighted:
            weights = {}
            for g in vals.grading.grades(d):
                n = vals.dim(g)
                if n:
                    weights[g] = n
            out.append(ComponentDimension(d, sum(weights.values()), weights))
        else:
            out.append(ComponentDimension(d, vals.dim(d)))
    return out


def _grades(module: GradedModule, d_max: int) -> list:
    return module.grading.grades_up_to(d_max)


def _completeness(res: MinimalResolution, module: GradedModule, i_max: int, d_max: int, grades) -> list:
    """Level i is complete when its generators provably sit in degrees <= d_max.

    Generators of M sit in degrees <= the largest presented generator degree;
    level i+1 lies inside a free module generated in degrees <= t_i, which
    vanishes above t_i + m.
    """
    out = []
    bound = module.max_generator_degree()
    for i in range(i_max + 1):
        ok = bound <= d_max and (i == 0 or out[-1])
        out.append(ok)
        if ok:
            degs = [module.degree_of_grade(g) for g in grades if res.betti(i, g)]
            bound = (max(degs) if degs else -1) + module.algebra.m
        else:
            bound = float("inf")
        if bound < 0:
            bound = -1
    return out


def minimal_free_resolution(module: GradedModule, i_max: int, d_max: int) -> BettiTable:
    if i_max < 0 or d_max < 0:
        raise ValueError("i_max and d_max must be nonnegative")
    res = MinimalResolution(module.values())
    grades = _grades(module, d_max)
    complete = _completeness(res, module, i_max, d_max, grades)
    table = betti_table(res, i_max, grades, d_max, complete)
    if res.minimality_violations:
        raise AssertionError(f"non-minimal differential at {res.minimality_violations}")
    table.resolution = res
    return table


@dataclass(frozen=True)
class TorDimensions:
    i: int
    by_degree: dict
    by_weight: dict | None
    complete: bool

    def total(self) -> int:
        return sum(self.by_degree.values())


def tor_with_k(module: GradedModule, i: int, d_max: int) -> TorDimensions:
    table = minimal_free_resolution(module, i, d_max)
    by_degree = {j: v for (k, j), v in table.by_degree().items() if k == i}
    by_weight = None
    if module.weighted:
        by_weight = {g: v for (k, g), v in table.entries.items() if k == i and v}
    return TorDimensions(i, by_degree, by_weight, table.is_complete(i))


@dataclass(frozen=True)
class RegularityResult:
    value: int
    lower_bound: bool
    t: tuple

    def to_json(self) -> dict:
        return {"regularity": self.value, "lower_bound": self.lower_bound, "t": list(self.t)}


def regularity(module: GradedModule, i_max: int, d_max: int) -> RegularityResult:
    table = minimal_free_resolution(module, i_max, d_max)
    reg, lower = table.regularity()
    return RegularityResult(reg, lower, tuple(table.t(i) for i in range(i_max + 1)))


def presentation_from_values(values: ModuleValues, algebra: ExteriorAlgebraRank, d_top: int,
                             grades: list | None = None) -> GradedModule:
    """Minimal presentation of a module given by values, read off levels 0 and 1.

    ``d_top`` must bound the degrees of generators and relations; ``grades``
    overrides the enumeration (needed for rank-free weight gradings).
    """
    grading = values.grading
    res = MinimalResolution(values)
    if grades is None:
        grades = grading.grades_up_to(d_top)
    gens = []
    gen_index = {}
    for g in grades:
        for k in range(res.betti(0, g)):
            gen_index[(g, k)] = len(gens)
            if grading.weighted:
                gens.append((sum(g), g))
            else:
                gens.append((g, None))
    free = res.free(0)
    rels = []
    for g in grades:
        w = res.generators(1, g)
        if w.shape[0] == 0:
            continue
        kernel_rows = (w @ res.level(1).space(g).rows) % values.p
        basis, _ = free.basis(g)
        for row in kernel_rows:
            terms = [(gen_index[(h, k)], mask_of(s), int(c)) for (s, h, k), c in zip(basis, row) if c]
            rels.append(terms)
    return GradedModule(algebra, gens, rels)


def submodule_generated_below(module: GradedModule, n: int) -> tuple:
    """(M^{<n}, M / M^{<n}) as presented modules."""
    sub_values = generated_below(module.values(), n)
    sub = presentation_from_values(sub_values, module.algebra, module.top_degree_bound() + 1)
    extra = [[(idx, 0, 1)] for idx, g in enumerate(module.generators) if g.degree < n]
    killed = GradedModule(module.algebra, module.generators, list(module.relations) + extra)
    quotient = presentation_from_values(killed.values(), module.algebra, module.top_degree_bound() + 1)
    return sub, quotient


# ---------------------------------------------------------------------------
# Standard examples
# ---------------------------------------------------------------------------


def free_module(algebra: ExteriorAlgebraRank, degrees: Sequence[int] = (0,), weighted: bool = False) -> GradedModule:
    if weighted:
        if any(d != 0 for d in degrees):
            raise ValueError("weighted free modules here are generated in degree 0")
        return GradedModule(algebra, [(0, ())] * len(degrees))
    return GradedModule(algebra, list(degrees))


def residue_field(algebra: ExteriorAlgebraRank, weighted: bool = False) -> GradedModule:
    """k = E_m / (x_1, ..., x_m)."""
    rels = [[(0, 1 << j, 1)] for j in range(algebra.m)]
    return GradedModule(algebra, [(0, ()) if weighted else 0], rels)


def truncation(algebra: ExteriorAlgebraRank, power: int, weighted: bool = False) -> GradedModule:
    """E_m / m^power."""
    rels = [[(0, s, 1)] for s in algebra.monomials(power)]
    return GradedModule(algebra, [(0, ()) if weighted else 0], rels)
