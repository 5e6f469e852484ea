"""Inc-equivariant presentations by induced blocks R (x) Div^lam.

A basis element of a block is (block, S, D): an exterior monomial x_S
(sorted 0-based positions) times a divided-power monomial D, one exponent
vector per part of lam.  Its weight is 1_S + sum(D).  Relations are stored
once and extended to every rank by increasing relabelling of positions.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from math import comb
from typing import Iterable, Sequence

from ..partitions import Partition, check_prime, format_partition, parse_partition
from ..resolution import bounded_below, normalize, relabel_weight, support


def div_weight(div: Sequence[tuple]) -> tuple:
    out: tuple = ()
    for alpha in div:
        n = max(len(out), len(alpha))
        out = normalize(tuple((out[i] if i < len(out) else 0) + (alpha[i] if i < len(alpha) else 0) for i in range(n)))
    return out


def div_monomials(lam: Sequence[int], weight: tuple) -> list:
    """Divided-power monomials of Div^lam with the given weight (deterministic order)."""
    lam = tuple(lam)
    if sum(lam) != sum(weight):
        return []
    out = []

    def rec(i, remaining, acc):
        if i == len(lam):
            if not any(remaining):
                out.append(tuple(acc))
            return
        for alpha in bounded_below(remaining, lam[i]):
            acc.append(normalize(alpha))
            rest = tuple(a - b for a, b in zip(remaining, alpha))
            rec(i + 1, rest, acc)
            acc.pop()

    rec(0, tuple(weight), [])
    return out


def relabel_term(sigma, wedge: tuple, div: tuple) -> tuple:
    return tuple(sigma[t] for t in wedge), tuple(relabel_weight(sigma, a) for a in div)


@dataclass(frozen=True)
class RelationTerm:
    block: int
    wedge: tuple
    div: tuple
    coeff: int


class EquivariantPresentation:
    """Quotient of sum_b R (x) Div^{lam_b} by the Inc-orbits of finitely many relations."""

    def __init__(self, prime: int, blocks: Sequence, relations: Sequence = (), support_width: int | None = None,
                 name: str = ""):
        self.prime = check_prime(prime)
        self.blocks = tuple(Partition(b) for b in blocks)
        self.name = name
        rels = []
        for rel in relations:
            terms: dict = {}
            for t in rel:
                if not isinstance(t, RelationTerm):
                    t = RelationTerm(*t)
                if not 0 <= t.block < len(self.blocks):
                    raise ValueError(f"relation refers to missing block {t.block}")
                wedge = tuple(t.wedge)
                if list(wedge) != sorted(set(wedge)):
                    raise ValueError(f"wedge indices must be strictly increasing: {wedge}")
                div = tuple(normalize(a) for a in t.div)
                if tuple(sum(a) for a in div) != tuple(self.blocks[t.block]):
                    raise ValueError(f"divided monomial {div} does not match block {self.blocks[t.block]}")
                key = (t.block, wedge, div)
                terms[key] = (terms.get(key, 0) + t.coeff) % self.prime
            terms = {k: c for k, c in terms.items() if c}
            if terms:
                rels.append(tuple(RelationTerm(b, s, d, c) for (b, s, d), c in sorted(terms.items())))
        self.relations = tuple(rels)
        weights = [self._relation_weight(r) for r in self.relations]
        self.relation_weights = tuple(weights)
        width = max((len(w) for w in weights), default=0)
        if support_width is None:
            support_width = width
        if support_width < width:
            raise ValueError(f"support width {support_width} smaller than relation support {width}")
        self.support_width = support_width

    @staticmethod
    def term_weight(t: RelationTerm) -> tuple:
        w = div_weight(t.div)
        for j in t.wedge:
            n = max(len(w), j + 1)
            w = tuple((w[i] if i < len(w) else 0) + (1 if i == j else 0) for i in range(n))
        return normalize(w)

    def _relation_weight(self, rel) -> tuple:
        ws = {self.term_weight(t) for t in rel}
        if len(ws) != 1:
            raise ValueError(f"relation is not weight homogeneous: {sorted(ws)}")
        return ws.pop()

    def relation_degree(self, k: int) -> int:
        return sum(self.relation_weights[k])

    def max_block_degree(self) -> int:
        return max((b.size for b in self.blocks), default=-1)

    def max_relation_degree(self) -> int:
        return max((sum(w) for w in self.relation_weights), default=-1)

    def degenerate_relations(self) -> list:
        """Indices of relations sitting in the generator degree of a block they touch."""
        out = []
        for k, rel in enumerate(self.relations):
            if any(not t.wedge for t in rel):
                out.append(k)
        return out

    def with_relations(self, extra: Iterable, name: str | None = None) -> "EquivariantPresentation":
        return EquivariantPresentation(self.prime, self.blocks, list(self.relations) + list(extra),
                                       None, self.name if name is None else name)

    def __repr__(self):
        blocks = ",".join(format_partition(b) for b in self.blocks)
        return f"EquivariantPresentation({self.name or '?'}: p={self.prime}, blocks=[{blocks}], relations={len(self.relations)})"

    # serialization ------------------------------------------------------

    def to_json(self) -> dict:
        def div_json(div, width):
            return [list(a) + [0] * (width - len(a)) for a in div]

        width = self.support_width
        out = {
            "prime": self.prime,
            "blocks": [format_partition(b) for b in self.blocks],
            "support_width": width,
            "relations": [
                [{"block": t.block, "div_monomial": div_json(t.div, width),
                  "wedge_monomial": [j + 1 for j in t.wedge], "coeff": t.coeff} for t in rel]
                for rel in self.relations
            ],
        }
        if self.name:
            out["name"] = self.name
        return out

    @classmethod
    def from_json(cls, data: dict) -> "EquivariantPresentation":
        try:
            blocks = [parse_partition(b) if isinstance(b, str) else Partition(b) for b in data["blocks"]]
            rels = []
            for rel in data.get("relations", []):
                terms = []
                for t in rel:
                    wedge = tuple(sorted(int(j) - 1 for j in t.get("wedge_monomial", [])))
                    if any(j < 0 for j in wedge):
                        raise ValueError("wedge indices are 1-based")
                    div = tuple(tuple(int(x) for x in a) for a in t.get("div_monomial", []))
                    raw = [int(j) - 1 for j in t.get("wedge_monomial", [])]
                    inv = sum(1 for a in range(len(raw)) for b in range(a + 1, len(raw)) if raw[a] > raw[b])
                    sign = -1 if inv % 2 else 1
                    terms.append(RelationTerm(int(t["block"]), wedge, div, sign * int(t.get("coeff", 1))))
                rels.append(terms)
            return cls(int(data["prime"]), blocks, rels, data.get("support_width"), data.get("name", ""))
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed presentation: {exc}") from exc

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)

    @classmethod
    def load(cls, path) -> "EquivariantPresentation":
        with open(path) as fh:
            return cls.from_json(json.load(fh))


# ---------------------------------------------------------------------------
# Hyperalgebra action (divided powers of the elementary matrices)
# ---------------------------------------------------------------------------


def hyper_apply(terms: dict, i: int, j: int, k: int, p: int) -> dict:
    """Apply E_ij^(k) (the t^k part of e_j -> e_j + t e_i) to {(block, S, D): coeff}.

    The coproduct splits k over the exterior part (at most 1, replacing x_j
    by x_i) and the divided-power factors, where
    E^(c) e^(alpha) = C(alpha_i + c, c) e^(alpha - c e_j + c e_i).
    """
    out: dict = {}
    for (b, wedge, div), coeff in terms.items():
        for a in (0, 1):
            if a > k:
                break
            if a == 1:
                if j not in wedge or i in wedge:
                    continue
                new = [i if x == j else x for x in wedge]
                inv = sum(1 for u in range(len(new)) for v in range(u + 1, len(new)) if new[u] > new[v])
                w_sign = -1 if inv % 2 else 1
                new_wedge = tuple(sorted(new))
            else:
                w_sign, new_wedge = 1, wedge
            for split in _splits(k - a, len(div)):
                c = coeff * w_sign
                new_div = []
                for alpha, cf in zip(div, split):
                    if cf == 0:
                        new_div.append(alpha)
                        continue
                    n = max(len(alpha), i + 1, j + 1)
                    full = list(alpha) + [0] * (n - len(alpha))
                    if full[j] < cf:
                        c = 0
                        break
                    c *= comb(full[i] + cf, cf)
                    full[j] -= cf
                    full[i] += cf
                    new_div.append(normalize(full))
                c %= p
                if c:
                    key = (b, new_wedge, tuple(new_div))
                    out[key] = (out.get(key, 0) + c) % p
    return {key: c for key, c in out.items() if c}


def _splits(total: int, parts: int):
    if parts == 0:
        if total == 0:
            yield ()
        return
    for first in range(total, -1, -1):
        for rest in _splits(total - first, parts - 1):
            yield (first,) + rest


def terms_of(rel) -> dict:
    return {(t.block, t.wedge, t.div): t.coeff for t in rel}


def terms_weight(terms: dict) -> tuple:
    (b, wedge, div) = next(iter(terms))
    return EquivariantPresentation.term_weight(RelationTerm(b, wedge, div, 1))


def relabel_terms(terms: dict, sigma) -> dict:
    out = {}
    for (b, wedge, div), c in terms.items():
        w2, d2 = relabel_term(sigma, wedge, div)
        out[(b, w2, d2)] = c
    return out


def increasing_placements(weight: tuple, target: tuple):
    """Increasing maps sigma of the support of ``weight`` (an Inc(N) orbit) into ``target``.

    Yields (sigma as dict, exterior positions U) with target = sigma(weight) + 1_U.
    The Inc(N) constraint sigma(t) - sigma(s) >= t - s (and sigma(t0) >= t0) keeps
    the orbit of a weight with internal zeros faithful.
    """
    supp = support(weight)
    cand = [pos for pos in support(target)]
    for image in itertools.combinations(cand, len(supp)):
        ok = True
        prev_t, prev_img = -1, -1
        for t, img in zip(supp, image):
            if img - prev_img < t - prev_t:
                ok = False
                break
            prev_t, prev_img = t, img
        if not ok:
            continue
        sigma = dict(zip(supp, image))
        placed = relabel_weight(sigma, weight)
        n = max(len(placed), len(target))
        diff = [(target[x] if x < len(target) else 0) - (placed[x] if x < len(placed) else 0) for x in range(n)]
        if all(d in (0, 1) for d in diff):
            yield sigma, tuple(x for x, d in enumerate(diff) if d)
