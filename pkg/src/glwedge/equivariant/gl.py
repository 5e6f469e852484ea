"""GL-stability checks and GL-closures of relation spaces.

A weight-homogeneous span is stable under the algebraic group GL_r iff it
is stable under every transvection e_j -> e_j + t e_i for all t, i.e. under
each t-homogeneous piece E_ij^(k).  Those pieces are exactly the weight
components of the t = 1 transvection, so checking each component separately
is the same as checking the transvection over every field extension.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass


from .. import linalg
from ..resolution import relabel_weight, support
from .functors import PresentedValues
from .presentation import (
    EquivariantPresentation,
    hyper_apply,
    relabel_terms,
    terms_of,
    terms_weight,
)


def placements_in_rank(weight: tuple, rank: int):
    """Increasing placements of the support of ``weight`` inside positions < rank."""
    supp = support(weight)
    for image in itertools.combinations(range(rank), len(supp)):
        prev_t, prev_img, ok = -1, -1, True
        for t, img in zip(supp, image):
            if img - prev_img < t - prev_t:
                ok = False
                break
            prev_t, prev_img = t, img
        if ok:
            yield dict(zip(supp, image))


@dataclass(frozen=True)
class GLStabilityResult:
    stable: bool
    rank: int
    witness: dict | None = None

    def __bool__(self):
        return self.stable


def check_gl_stability(pres: EquivariantPresentation, r: int, values: PresentedValues | None = None) -> GLStabilityResult:
    """Every E_ij^(k) image of every placed relation must lie in the relation module."""
    if r < pres.support_width + 1:
        raise ValueError(f"rank {r} must exceed the support width {pres.support_width}")
    vals = values or PresentedValues(pres)
    p = pres.prime
    for idx, (rel, omega) in enumerate(zip(pres.relations, pres.relation_weights)):
        base = terms_of(rel)
        for sigma in placements_in_rank(omega, r):
            placed = relabel_terms(base, sigma)
            w = relabel_weight(sigma, omega)
            for i in range(r):
                for j in range(r):
                    if i == j or j >= len(w) or not w[j]:
                        continue
                    for k in range(1, w[j] + 1):
                        image = hyper_apply(placed, i, j, k, p)
                        if not image:
                            continue
                        target = terms_weight(image)
                        vec = vals.vector(image, target)
                        if not vals.space(target).contains(vec):
                            return GLStabilityResult(False, r, {
                                "relation": idx,
                                "placement": {str(a + 1): b + 1 for a, b in sigma.items()},
                                "operator": {"i": i + 1, "j": j + 1, "k": k},
                            })
    return GLStabilityResult(True, r)


def gl_closure(blocks, prime: int, seeds: list, rank: int) -> dict:
    """GL_rank-span of the given term dicts: {weight: Subspace of F_weight}."""
    free = PresentedValues(EquivariantPresentation(prime, blocks))
    spans: dict = {}
    queue = []

    def add(terms):
        if not terms:
            return
        w = terms_weight(terms)
        if len(w) > rank:
            raise ValueError("seed lies outside the closure rank")
        vec = free.vector(terms, w)
        cur = spans.get(w)
        if cur is None:
            cur = linalg.Subspace(free.free.dim(w), prime)
        if cur.contains(vec):
            return
        spans[w] = cur + linalg.Subspace(cur.n, prime, vec.reshape(1, -1))
        queue.append(terms)

    for s in seeds:
        add(s)
    while queue:
        terms = queue.pop()
        w = terms_weight(terms)
        for i in range(rank):
            for j in range(len(w)):
                if i == j or not w[j]:
                    continue
                for k in range(1, w[j] + 1):
                    add(hyper_apply(terms, i, j, k, prime))
    return {w: (s, free) for w, s in spans.items()}


def is_zero_free(w: tuple) -> bool:
    return all(x > 0 for x in w)


def closure_relations(blocks, prime: int, seeds: list, rank: int) -> list:
    """Inc-generators of the GL-closure: basis vectors at zero-free weights."""
    out = []
    closure = gl_closure(blocks, prime, seeds, rank)
    for w in sorted(closure, key=lambda x: (sum(x), len(x), tuple(-y for y in x))):
        if not is_zero_free(w):
            continue
        span, free = closure[w]
        for row in span.rows:
            out.append(free.terms(row, w))
    return out


def minimize_relations(blocks, prime: int, relations: list) -> list:
    """Drop relations already in the module generated by earlier ones (by degree)."""
    def degree(t):
        return sum(terms_weight(t))

    kept: list = []
    for terms in sorted(relations, key=degree):
        pres = EquivariantPresentation(prime, blocks, [_as_rel(t) for t in kept])
        vals = PresentedValues(pres)
        w = terms_weight(terms)
        if not vals.space(w).contains(vals.vector(terms, w)):
            kept.append(terms)
    return kept


def _as_rel(terms: dict) -> list:
    return [(b, s, d, c) for (b, s, d), c in sorted(terms.items())]


def gl_closed_presentation(blocks, prime: int, seeds: list, name: str = "") -> EquivariantPresentation:
    """Presentation whose relations generate the GL-submodule spanned by the seeds."""
    rels = []
    for seed in seeds:
        rank = max(sum(terms_weight(seed)), 1)
        rels.extend(closure_relations(blocks, prime, [seed], rank))
    rels = minimize_relations(blocks, prime, rels)
    return EquivariantPresentation(prime, blocks, [_as_rel(t) for t in rels], name=name)
