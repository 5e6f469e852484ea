"""Weight-local values of equivariant modules and the functors between them.

Every module here is rank free: ``dim(mu)`` is the dimension of the weight-mu
space for any finitely supported weight mu, and evaluating at rank r simply
means looking at weights supported in the first r positions.  Besides the
action of the variables, modules support ``relabel(sigma, mu)``, the map
induced by an increasing relabelling of positions.
"""
from __future__ import annotations

from typing import Callable

import numpy as np

from .. import linalg
from ..resolution import (
    FreeValues,
    ModuleValues,
    QuotientValues,
    SubValues,
    WeightGrading,
    normalize,
    relabel_weight,
    support,
)
from .presentation import (
    EquivariantPresentation,
    div_monomials,
    div_weight,
    relabel_term,
)

GRADING = WeightGrading()


def shift_map(n: int, s: int = 1) -> dict:
    return {t: t + s for t in range(n)}


class PresentedValues(QuotientValues):
    """Weight spaces of an equivariant presentation F / N.

    F_mu has basis (S, generator weight, k), the k-th generator being the
    k-th divided-power monomial (over all blocks) of that weight.  N_mu is
    spanned by u . sigma(v) over stored relations v, increasing placements
    sigma and exterior monomials u.
    """

    def __init__(self, pres: EquivariantPresentation):
        self.pres = pres
        self._gens: dict = {}
        free = FreeValues(GRADING, pres.prime, lambda h: len(self.generators_at(h)[0]), self._gen_relabel)
        self.free = free
        super().__init__(free, self._relations_at)

    def generators_at(self, h: tuple) -> tuple:
        if h not in self._gens:
            items = [(b, d) for b, lam in enumerate(self.pres.blocks) for d in div_monomials(lam, h)]
            self._gens[h] = (items, {x: i for i, x in enumerate(items)})
        return self._gens[h]

    def _gen_relabel(self, sigma, h, k) -> tuple:
        b, d = self.generators_at(h)[0][k]
        d2 = tuple(relabel_weight(sigma, a) for a in d)
        h2 = relabel_weight(sigma, h)
        return h2, self.generators_at(h2)[1][(b, d2)]

    def vector(self, terms: dict, weight: tuple) -> np.ndarray:
        """Vector in F_weight of {(block, S, D): coeff}."""
        _, index = self.free.basis(weight)
        v = np.zeros(len(index), dtype=np.int64)
        for (b, wedge, div), c in terms.items():
            h = div_weight(div)
            k = self.generators_at(h)[1][(b, div)]
            v[index[(wedge, h, k)]] += c
        return v % self.pres.prime

    def terms(self, vec: np.ndarray, weight: tuple) -> dict:
        basis, _ = self.free.basis(weight)
        out = {}
        for (s, h, k), c in zip(basis, vec):
            if c % self.pres.prime:
                b, d = self.generators_at(h)[0][k]
                out[(b, s, d)] = int(c) % self.pres.prime
        return out

    def _relations_at(self, mu: tuple) -> linalg.Subspace:
        """N_mu = sum_j x_j N_(mu - e_j) plus the relations placed exactly onto mu."""
        rows = [self.free.apply(j, h, self.space(h).rows) for j, h in GRADING.down(mu) if self.space(h).dim]
        for rel, omega in zip(self.pres.relations, self.pres.relation_weights):
            sigma = exact_placement(omega, mu)
            if sigma is None:
                continue
            placed = {}
            for t in rel:
                w2, d2 = relabel_term(sigma, t.wedge, t.div)
                placed[(t.block, w2, d2)] = t.coeff
            rows.append(self.vector(placed, mu).reshape(1, -1))
        return linalg.Subspace(self.free.dim(mu), self.p, np.vstack(rows) if rows else None)


def exact_placement(omega: tuple, mu: tuple) -> dict | None:
    """The increasing placement sigma with sigma(omega) = mu, if one exists."""
    src, tgt = support(omega), support(mu)
    if len(src) != len(tgt) or sum(omega) != sum(mu):
        return None
    prev_t, prev_img = -1, -1
    for t, img in zip(src, tgt):
        if img - prev_img < t - prev_t or omega[t] != mu[img]:
            return None
        prev_t, prev_img = t, img
    return dict(zip(src, tgt))


class Shifted(ModuleValues):
    """Sh(M): weight mu of Sh(M) is weight (1, mu) of M; positions move up by one."""

    def __init__(self, base: ModuleValues):
        super().__init__(GRADING, base.p)
        self.base = base

    @staticmethod
    def lift_weight(mu: tuple) -> tuple:
        return (1,) + tuple(mu)

    def _dim(self, mu):
        return self.base.dim(self.lift_weight(mu))

    def _act(self, j, mu):
        return self.base.act(j + 1, self.lift_weight(mu))

    def relabel(self, sigma, mu):
        lifted = {0: 0}
        for t in range(len(mu)):
            lifted[t + 1] = sigma[t] + 1
        return self.base.relabel(lifted, self.lift_weight(mu))


def iterate_shift(values: ModuleValues, times: int) -> ModuleValues:
    for _ in range(times):
        values = Shifted(values)
    return values


def natural_map(values: ModuleValues, mu: tuple, s: int = 1) -> np.ndarray:
    """M_mu -> Sh^s(M)_mu: move positions up by s, then multiply by x_0 ... x_{s-1}.

    For s = 1 this is i_M; for larger s it agrees with the composite of the
    i maps up to sign.
    """
    if s == 0:
        return np.eye(values.dim(mu), dtype=np.int64)
    moved = relabel_weight(shift_map(len(mu), s), mu)
    a = values.relabel(shift_map(len(mu), s), mu)
    out, grade = values.multiply_chain(range(s), moved, a)
    assert grade == normalize((1,) * s + tuple(mu))
    return out


def image_family(source: ModuleValues, target: ModuleValues, maps: Callable) -> Callable:
    def space(mu):
        a = maps(mu)
        return linalg.Subspace(target.dim(mu), target.p, a if a.shape[0] else None)
    return space


def kernel_family(source: ModuleValues, maps: Callable) -> Callable:
    def space(mu):
        a = maps(mu)
        n = source.dim(mu)
        if a.shape[1] == 0:
            return linalg.Subspace.full(n, source.p)
        return linalg.Subspace(n, source.p, linalg.nullspace(a.T, source.p))
    return space


def difference(values: ModuleValues, s: int = 1) -> QuotientValues:
    """Delta_s(M) = coker(M -> Sh^s(M))."""
    target = iterate_shift(values, s)
    return QuotientValues(target, image_family(values, target, lambda mu: natural_map(values, mu, s)))


def kernel_of_natural_map(values: ModuleValues, s: int = 1) -> SubValues:
    return SubValues(values, kernel_family(values, lambda mu: natural_map(values, mu, s)))


def fresh_kill_map(values: ModuleValues, mu: tuple, s: int, start: int | None = None) -> np.ndarray:
    """Multiplication by x_start ... x_{start+s-1} on M_mu (fresh positions)."""
    if start is None:
        start = len(mu)
    if start < len(mu):
        raise ValueError("fresh positions must lie outside the support")
    out, _ = values.multiply_chain(range(start, start + s), mu, np.eye(values.dim(mu), dtype=np.int64))
    return out


def torsion_values(values: ModuleValues, s: int) -> SubValues:
    """Gamma(M) detected with s fresh variables: ker(M_mu -> M_(mu, 1^s))."""
    return SubValues(values, kernel_family(values, lambda mu: fresh_kill_map(values, mu, s)))


def direct_sum_presentation(*parts: EquivariantPresentation) -> EquivariantPresentation:
    blocks, rels = [], []
    for part in parts:
        offset = len(blocks)
        blocks.extend(part.blocks)
        for rel in part.relations:
            rels.append([(t.block + offset, t.wedge, t.div, t.coeff) for t in rel])
    return EquivariantPresentation(parts[0].prime, blocks, rels, name="+".join(p.name for p in parts))


def induced_dimension(lam, mu: tuple) -> int:
    """dim (R (x) Div^lam)_mu counted directly: sum over S of #Div^lam monomials of weight mu - 1_S."""
    total = 0
    for _, h in GRADING.faces(mu):
        total += len(div_monomials(lam, h))
    return total
