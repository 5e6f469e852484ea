"""Explicit rank evaluations M(k^r) as graded modules over E_r.

This is an independent route to the weight spaces of an equivariant
presentation: generators are written out one by one and the stored
relations are placed by every increasing injection into the first r
positions, after which the finite-rank engine does all the work.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .. import linalg
from ..exterior import ExteriorAlgebraRank, GradedModule, component_dimensions, mask_of, presentation_from_values
from ..resolution import ModuleValues, weights_of_degree
from .functors import PresentedValues, difference, iterate_shift, natural_map
from .gl import placements_in_rank
from .presentation import EquivariantPresentation, div_monomials, div_weight, relabel_term


@dataclass
class RankEvaluation:
    rank: int
    module: GradedModule
    labels: list = field(default_factory=list)
    natural_map_ranks: dict | None = None

    def dims(self, d_max: int) -> list:
        return [c.dim for c in component_dimensions(self.module, d_max)]

    def weight_dims(self, d_max: int) -> dict:
        out = {}
        for c in component_dimensions(self.module, d_max):
            out.update(c.weights or {})
        return out

    def to_json(self, d_max: int) -> dict:
        out = {"rank": self.rank, "dims": self.dims(d_max), "presentation": self.module.to_json()}
        if self.natural_map_ranks is not None:
            out["natural_map_ranks"] = [{"weight": list(w), "rank": v} for w, v in sorted(self.natural_map_ranks.items())]
        return out


def _div_monomials_in_rank(lam, r: int) -> list:
    out = []
    for w in weights_of_degree(sum(lam), r):
        out.extend(div_monomials(lam, w))
    return out


def evaluate(pres: EquivariantPresentation, r: int) -> RankEvaluation:
    """M(k^r): blocks E_r (x) Div^lam(k^r), relations placed by increasing injections."""
    if r < 1:
        raise ValueError("rank must be at least 1")
    alg = ExteriorAlgebraRank(r, pres.prime)
    gens, labels, index = [], [], {}
    for b, lam in enumerate(pres.blocks):
        for d in _div_monomials_in_rank(lam, r):
            index[(b, d)] = len(gens)
            gens.append((sum(lam), div_weight(d)))
            labels.append({"block": b, "div_monomial": [list(a) for a in d]})
    rels = []
    for rel, omega in zip(pres.relations, pres.relation_weights):
        if len(omega) > r:
            continue
        for sigma in placements_in_rank(omega, r):
            terms = []
            for t in rel:
                wedge, div = relabel_term(sigma, t.wedge, t.div)
                terms.append((index[(t.block, div)], mask_of(wedge), t.coeff))
            rels.append(terms)
    return RankEvaluation(r, GradedModule(alg, gens, rels), labels)


def _grades(r: int, d_top: int, entry_cap: int) -> list:
    out = []
    for d in range(d_top + 1):
        out.extend(w for w in weights_of_degree(d, r) if max(w, default=0) <= entry_cap)
    return out


def values_at_rank(values: ModuleValues, r: int, d_top: int, entry_cap: int) -> RankEvaluation:
    alg = ExteriorAlgebraRank(r, values.p)
    mod = presentation_from_values(values, alg, d_top, grades=_grades(r, d_top, entry_cap))
    return RankEvaluation(r, mod)


def _caps(pres: EquivariantPresentation, r: int) -> tuple:
    b = max(pres.max_block_degree(), 0)
    return r + b + 1, b + 1


def shift_evaluate(pres: EquivariantPresentation, r: int, values: ModuleValues | None = None) -> RankEvaluation:
    """Sh(M)(k^r): the slice of M(k^{r+1}) of weight exactly one in the first position."""
    vals = values or PresentedValues(pres)
    d_top, cap = _caps(pres, r)
    ev = values_at_rank(iterate_shift(vals, 1), r, d_top, cap)
    ranks = {}
    for w in _grades(r, d_top, cap):
        if vals.dim(w):
            ranks[w] = linalg.rank(natural_map(vals, w, 1), vals.p)
    ev.natural_map_ranks = ranks
    return ev


def delta_evaluate(pres: EquivariantPresentation, r: int, s: int = 1, values: ModuleValues | None = None) -> RankEvaluation:
    """Delta_s(M)(k^r) = coker(M -> Sh^s(M)) at rank r."""
    if s < 1:
        raise ValueError("s must be at least 1")
    vals = values or PresentedValues(pres)
    d_top, cap = _caps(pres, r)
    return values_at_rank(difference(vals, s), r, d_top, cap)
