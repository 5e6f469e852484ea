"""Named presentations and the seeded corpus used by experiments and tests."""
from __future__ import annotations

import random

import numpy as np

from .. import linalg
from ..characters import CharacterElement, ONE, exterior_algebra_character, frobenius_twist, multiply, schur_basis
from ..partitions import Partition, format_partition
from ..resolution import compositions
from .functors import PresentedValues
from .gl import _as_rel, check_gl_stability, gl_closed_presentation, is_zero_free, minimize_relations
from .presentation import EquivariantPresentation, div_monomials


def free_ring(p: int) -> EquivariantPresentation:
    return EquivariantPresentation(p, [()], [], name="R")


def induced(p: int, lam) -> EquivariantPresentation:
    lam = Partition(lam)
    return EquivariantPresentation(p, [lam], [], name=f"R*Div{format_partition(lam)}")


def residue_field(p: int) -> EquivariantPresentation:
    return EquivariantPresentation(p, [()], [[(0, (0,), (), 1)]], name="k")


def ring_truncation(p: int, power: int) -> EquivariantPresentation:
    """R / m^power."""
    return EquivariantPresentation(p, [()], [[(0, tuple(range(power)), (), 1)]], name=f"R/m^{power}")


def maximal_ideal(p: int) -> EquivariantPresentation:
    """m as the quotient of R (x) V by x_1 e_1 and x_1 e_2 + x_2 e_1."""
    rels = [
        [(0, (0,), ((1,),), 1)],
        [(0, (1,), ((1,),), 1), (0, (0,), ((0, 1),), 1)],
    ]
    return EquivariantPresentation(p, [(1,)], rels, name="m")


# ---------------------------------------------------------------------------
# Kernels of maps into R
# ---------------------------------------------------------------------------


def kernel_to_ring(p: int, blocks, image, degree_cap: int, name: str = "") -> EquivariantPresentation:
    """Presentation of the image of an equivariant map sum_b R (x) Div^{lam_b} -> R.

    ``image(block, S, D)`` returns (sign, positions) with the basis element
    mapping to sign * x_positions, or None for zero.  Relations are the
    kernel at zero-free weights of degree <= degree_cap, minimized.
    """
    free = PresentedValues(EquivariantPresentation(p, blocks))
    found = []
    width_cap = degree_cap
    for d in range(1, degree_cap + 1):
        for n in range(1, min(d, width_cap) + 1):
            for w in compositions(d, n):
                if not is_zero_free(w) or max(w) > max(b.size for b in free.pres.blocks) + 1:
                    continue
                basis, _ = free.free.basis(w)
                if not basis:
                    continue
                cols = {}
                rows = []
                for (s, h, k) in basis:
                    b, div = free.generators_at(h)[0][k]
                    got = image(b, s, div)
                    rows.append(got)
                    if got is not None:
                        cols.setdefault(got[1], len(cols))
                a = np.zeros((len(basis), max(len(cols), 1)), dtype=np.int64)
                for r, got in enumerate(rows):
                    if got is not None:
                        a[r, cols[got[1]]] = got[0] % p
                for vec in linalg.nullspace(a.T, p) if len(cols) else np.eye(len(basis), dtype=np.int64):
                    found.append(free.terms(vec, w))
    rels = minimize_relations(free.pres.blocks, p, found)
    return EquivariantPresentation(p, free.pres.blocks, [_as_rel(t) for t in rels], name=name)


def _wedge_image(b, s, div):
    positions = list(s)
    for alpha in div:
        support = [i for i, a in enumerate(alpha) if a]
        if len(support) != 1 or alpha[support[0]] != 1:
            raise ValueError("wedge map needs blocks of ones")
        positions.append(support[0])
    if len(set(positions)) < len(positions):
        return None
    ordered = tuple(sorted(positions))
    inv = sum(1 for a in range(len(positions)) for c in range(a + 1, len(positions)) if positions[a] > positions[c])
    return (-1 if inv % 2 else 1), ordered


def maximal_ideal_power(p: int, power: int = 2, degree_cap: int = 5) -> EquivariantPresentation:
    """m^power as the image of R (x) V^{(x) power} -> R, e_I -> x_I."""
    return kernel_to_ring(p, [(1,) * power], _wedge_image, degree_cap, name=f"m^{power}")


# ---------------------------------------------------------------------------
# Frobenius-twisted induced modules
# ---------------------------------------------------------------------------


def _concentrated(alpha) -> bool:
    return sum(1 for a in alpha if a) <= 1


def twisted_induced(p: int, factors: int = 1, width_cap: int | None = None) -> EquivariantPresentation:
    """R (x) (V^{(x) factors})^{(1)} as a quotient of R (x) Div^{(p, ..., p)}.

    Div^p V -> V^{(1)} sends e^{(p e_i)} to e_i^{(1)} and every other divided
    monomial to zero; the relations are the Inc-generators of the kernel.
    """
    lam = (p,) * factors
    width_cap = p * factors if width_cap is None else width_cap
    rels = []
    for width in range(1, width_cap + 1):
        for w in compositions(p * factors, width):
            if not is_zero_free(w):
                continue
            for div in div_monomials(lam, w):
                if all(_concentrated(a) for a in div):
                    continue
                rels.append([(0, (), div, 1)])
    name = "R*V(1)" if factors == 1 else f"R*(V^{factors})(1)"
    return EquivariantPresentation(p, [lam], rels, name=name)


def ring_character(degree_cap: int) -> CharacterElement:
    return exterior_algebra_character(degree_cap)


def twisted_character(p: int, factors: int, degree_cap: int) -> CharacterElement:
    """ch R * ch (V^{(x) factors})^{(1)}, truncated."""
    w = ONE
    for _ in range(factors):
        w = multiply(w, frobenius_twist(schur_basis((1,)), p))
    return multiply(ring_character(degree_cap), w).truncate(degree_cap)


# ---------------------------------------------------------------------------
# Seeded corpus
# ---------------------------------------------------------------------------


CORPUS_BLOCKS = [(), (1,), (2,), (1, 1), (3,), (2, 1), (1, 1, 1)]


def _random_seed_vector(rng: random.Random, p: int, blocks, max_degree: int, max_width: int):
    free = PresentedValues(EquivariantPresentation(p, blocks))
    low = min(Partition(b).size for b in blocks)
    for _ in range(50):
        d = rng.randint(low + 1, max_degree)
        n = rng.randint(1, min(d, max_width))
        w = rng.choice([c for c in compositions(d, n) if is_zero_free(c)])
        basis, _ = free.free.basis(w)
        if not basis:
            continue
        vec = np.array([rng.randrange(p) for _ in basis], dtype=np.int64)
        if not vec.any():
            vec[rng.randrange(len(basis))] = 1
        return free.terms(vec, w)
    return None


def random_presentation(seed: int, p: int, max_blocks: int = 2, max_seeds: int = 2, max_degree: int = 4,
                        max_width: int = 4, max_block_degree: int = 3) -> EquivariantPresentation:
    rng = random.Random(seed)
    choices = [b for b in CORPUS_BLOCKS if sum(b) <= min(max_block_degree, max_degree - 1)]
    blocks = [rng.choice(choices) for _ in range(rng.randint(1, max_blocks))]
    blocks.sort(key=lambda b: (sum(b), b))
    seeds = []
    for _ in range(rng.randint(1, max_seeds)):
        v = _random_seed_vector(rng, p, blocks, max_degree, max_width)
        if v:
            seeds.append(v)
    return gl_closed_presentation(blocks, p, seeds, name=f"seed{seed}-p{p}")


def corpus(size: int = 50, seed: int = 0, primes=(2, 3), max_relation_degree: int = 4,
           max_width: int = 4) -> list:
    """Deterministic list of GL-stable presentations within the corpus bounds."""
    out = []
    k = 0
    while len(out) < size:
        p = primes[k % len(primes)]
        pres = random_presentation(seed * 100003 + k, p, max_degree=max_relation_degree, max_width=max_width)
        k += 1
        if pres.max_relation_degree() > max_relation_degree or pres.support_width > max_width:
            continue
        if not check_gl_stability(pres, pres.support_width + 1):
            raise AssertionError(f"closure of {pres.name} is not GL-stable")
        out.append(pres)
    return out


def named_fixtures(p: int) -> dict:
    return {
        "R": free_ring(p),
        "k": residue_field(p),
        "m": maximal_ideal(p),
        "R/m^2": ring_truncation(p, 2),
        "R/m^3": ring_truncation(p, 3),
        "m^2": maximal_ideal_power(p, 2),
    }


def curated(p: int = 2, seeded: int = 10, seed: int = 7) -> list:
    """The shift-theorem sub-corpus: m, R/m^2, R/m^3, m^2 and seeded presentations."""
    fx = named_fixtures(p)
    out = [fx["m"], fx["R/m^2"], fx["R/m^3"], fx["m^2"]]
    out.extend(corpus(seeded, seed=seed, primes=(p,), max_relation_degree=3, max_width=3))
    return out
