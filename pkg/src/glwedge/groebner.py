"""Monomials of R (x) V^{(x) n}, their Inc(N) action, initial terms and ACC experiments.

Indices are 1-based throughout, matching the text form "x3^x1 | e1,e4,e1".
A monomial is stored with its wedge indices strictly decreasing; products
and relabellings that would break this are normalized with a sign.

Order: the word (I, J) is compared lexicographically, wedge word first.  A
word that is a proper prefix of another is the smaller one; on Python
tuples this is the built-in comparison.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping

import numpy as np

from . import linalg
from .partitions import check_prime


class AmbientMismatch(ValueError):
    pass


def _sort_desc(indices) -> tuple:
    """(sign, strictly decreasing tuple) or (0, ()) when an index repeats."""
    idx = list(indices)
    if len(set(idx)) < len(idx):
        return 0, ()
    inv = sum(1 for a in range(len(idx)) for b in range(a + 1, len(idx)) if idx[a] < idx[b])
    return (-1 if inv % 2 else 1), tuple(sorted(idx, reverse=True))


@dataclass(frozen=True, order=False)
class PModMonomial:
    """(x_{i1} ^ ... ^ x_{ir}) (x) (e_{j1} (x) ... (x) e_{jn}) with i1 > ... > ir."""

    wedge: tuple
    tensor: tuple

    def __post_init__(self):
        if any(a <= b for a, b in zip(self.wedge, self.wedge[1:])):
            raise ValueError(f"wedge indices must be strictly decreasing: {self.wedge}")
        if any(i < 1 for i in self.wedge + self.tensor):
            raise ValueError("indices are 1-based")

    @property
    def n(self) -> int:
        return len(self.tensor)

    @property
    def degree(self) -> int:
        return len(self.wedge)

    def key(self) -> tuple:
        return (self.wedge, self.tensor)

    def indices(self) -> tuple:
        return tuple(sorted(set(self.wedge) | set(self.tensor)))

    def max_index(self) -> int:
        return max(self.wedge + self.tensor, default=0)

    def __str__(self):
        return format_monomial(self)


@dataclass(frozen=True)
class QModMonomial:
    """(x_{i1} x_{i2} ... x_{ir}) (x) e_J in B (x) V^{(x) n}, B = S / (x_i^2)."""

    support: tuple
    tensor: tuple

    @property
    def n(self) -> int:
        return len(self.tensor)


def make_monomial(wedge: Iterable[int], tensor: Iterable[int]) -> tuple:
    """(sign, PModMonomial) for an unordered wedge; sign 0 (and None) if it vanishes."""
    sign, w = _sort_desc(wedge)
    if sign == 0:
        return 0, None
    return sign, PModMonomial(w, tuple(tensor))


def format_monomial(m: PModMonomial) -> str:
    wedge = "^".join(f"x{i}" for i in m.wedge) or "1"
    return f"{wedge} | {','.join(f'e{j}' for j in m.tensor)}"


def parse_monomial(text: str) -> tuple:
    """Parse "x3^x1 | e1,e4,e1" into (sign, PModMonomial)."""
    try:
        left, right = text.split("|")
        left, right = left.strip(), right.strip()
        wedge = [] if left in ("", "1") else [int(t.strip().lstrip("x")) for t in left.split("^")]
        tensor = [] if not right else [int(t.strip().lstrip("e")) for t in right.split(",")]
    except ValueError as exc:
        raise ValueError(f"cannot parse monomial {text!r}") from exc
    sign, m = make_monomial(wedge, tensor)
    if sign == 0:
        raise ValueError(f"monomial {text!r} repeats a wedge index")
    return sign, m


def compare(a: PModMonomial, b: PModMonomial) -> int:
    """-1, 0, 1 under the lexicographic order on words (I, J)."""
    if a.n != b.n:
        raise AmbientMismatch(f"monomials live in P_{a.n} and P_{b.n}")
    ka, kb = a.key(), b.key()
    return (ka > kb) - (ka < kb)


def multiply_wedge(u: Iterable[int], m: PModMonomial) -> tuple:
    """x_u ^ m as (sign, monomial); (0, None) when the wedges overlap."""
    u = tuple(u)
    sign, w = _sort_desc(u + m.wedge)
    if sign == 0:
        return 0, None
    return sign, PModMonomial(w, m.tensor)


# ---------------------------------------------------------------------------
# Inc(N) action
# ---------------------------------------------------------------------------


def extends_to_inc(sigma: Mapping) -> bool:
    """Whether a finite increasing graph is the restriction of an increasing map N -> N.

    Room is needed for the skipped indices: sigma(d1) >= d1 and
    sigma(b) - sigma(a) >= b - a for consecutive domain points a < b.
    """
    prev_d, prev_v = 0, 0
    for d, v in sorted(sigma.items()):
        if v - prev_v < d - prev_d:
            return False
        prev_d, prev_v = d, v
    return True


def _as_map(sigma) -> Callable:
    if callable(sigma):
        return sigma
    if isinstance(sigma, Mapping):
        if not extends_to_inc(sigma):
            raise ValueError("sigma must be the restriction of an increasing map of N")

        def f(i):
            if i not in sigma:
                raise ValueError(f"sigma is not defined at {i} (domain gap)")
            return sigma[i]
        return f
    raise TypeError("sigma must be a mapping or a callable")


def shift(k: int = 1) -> Callable:
    return lambda i: i + k


def inc_apply(sigma, m: PModMonomial) -> PModMonomial:
    """Relabel every index by sigma; an increasing sigma keeps the wedge decreasing."""
    f = _as_map(sigma)
    return PModMonomial(tuple(f(i) for i in m.wedge), tuple(f(j) for j in m.tensor))


def psi(m: PModMonomial) -> QModMonomial:
    return QModMonomial(m.wedge, m.tensor)


def psi_inverse(q: QModMonomial) -> PModMonomial:
    return PModMonomial(tuple(sorted(q.support, reverse=True)), q.tensor)


# ---------------------------------------------------------------------------
# Elements and initial terms
# ---------------------------------------------------------------------------


@dataclass
class PModElement:
    prime: int
    terms: dict = field(default_factory=dict)

    def __post_init__(self):
        check_prime(self.prime)
        clean: dict = {}
        n = None
        for m, c in self.terms.items():
            if n is not None and m.n != n:
                raise AmbientMismatch("terms from different P_n")
            n = m.n
            c %= self.prime
            if c:
                clean[m] = (clean.get(m, 0) + c) % self.prime
        self.terms = {m: c for m, c in clean.items() if c}

    @classmethod
    def from_pairs(cls, prime: int, pairs: Iterable) -> "PModElement":
        """Build from (coefficient, wedge, tensor) with unordered wedges."""
        terms: dict = {}
        for c, wedge, tensor in pairs:
            sign, m = make_monomial(wedge, tensor)
            if sign:
                terms[m] = (terms.get(m, 0) + sign * c) % prime
        return cls(prime, terms)

    def is_zero(self) -> bool:
        return not self.terms

    def monomials(self) -> list:
        return sorted(self.terms, key=PModMonomial.key, reverse=True)

    def apply(self, sigma) -> "PModElement":
        return PModElement(self.prime, {inc_apply(sigma, m): c for m, c in self.terms.items()})

    def wedge_multiply(self, u) -> "PModElement":
        out: dict = {}
        for m, c in self.terms.items():
            sign, mm = multiply_wedge(u, m)
            if sign:
                out[mm] = (out.get(mm, 0) + sign * c) % self.prime
        return PModElement(self.prime, out)

    def max_index(self) -> int:
        return max((m.max_index() for m in self.terms), default=0)


def initial_term(v: PModElement) -> tuple:
    """(coefficient, largest monomial) of a nonzero element."""
    if v.is_zero():
        raise ValueError("the zero element has no initial term")
    m = max(v.terms, key=PModMonomial.key)
    return v.terms[m], m


# ---------------------------------------------------------------------------
# Monomial modules and membership
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MembershipWitness:
    generator: PModMonomial
    sigma: dict
    u: tuple
    sign: int

    def to_json(self) -> dict:
        return {"generator": format_monomial(self.generator), "sigma": {str(a): b for a, b in self.sigma.items()},
                "u": list(self.u), "sign": self.sign}


def increasing_maps(domain: tuple, bound: int):
    """Restrictions to the sorted ``domain`` of elements of Inc(N) with image in 1..bound."""
    for image in itertools.combinations(range(1, bound + 1), len(domain)):
        sigma = dict(zip(domain, image))
        if extends_to_inc(sigma):
            yield sigma


@dataclass
class MonomialModule:
    """Inc(N)-stable monomial submodule of P_n generated by the orbits of ``generators``."""

    n: int
    generators: tuple
    truncated: bool = False
    window: tuple | None = None
    prime: int | None = None

    def __post_init__(self):
        self.generators = tuple(sorted(set(self.generators), key=PModMonomial.key))
        for g in self.generators:
            if g.n != self.n:
                raise AmbientMismatch(f"generator {g} is not in P_{self.n}")

    def membership(self, m: PModMonomial) -> MembershipWitness | None:
        """A witness u . sigma(g) = +-m, or None."""
        if m.n != self.n:
            raise AmbientMismatch(f"{m} is not in P_{self.n}")
        target = set(m.wedge)
        for g in self.generators:
            if len(g.wedge) > len(m.wedge):
                continue
            for sigma in increasing_maps(g.indices(), m.max_index()):
                image = inc_apply(sigma, g)
                if image.tensor != m.tensor or not set(image.wedge) <= target:
                    continue
                u = tuple(sorted(target - set(image.wedge), reverse=True))
                sign, prod = multiply_wedge(u, image)
                assert prod == m
                return MembershipWitness(g, sigma, u, sign)
        return None

    def contains(self, m: PModMonomial) -> bool:
        return self.membership(m) is not None

    def contains_module(self, other: "MonomialModule") -> bool:
        return all(self.contains(g) for g in other.generators)

    def minimized(self) -> "MonomialModule":
        keep: list = []
        for g in sorted(self.generators, key=lambda x: (x.degree, x.max_index(), x.key())):
            if not MonomialModule(self.n, tuple(keep)).contains(g):
                keep.append(g)
        return MonomialModule(self.n, tuple(keep), self.truncated, self.window, self.prime)

    def to_json(self) -> dict:
        out = {"n": self.n, "prime": self.prime, "generators": [format_monomial(g) for g in self.generators],
               "truncated": self.truncated}
        if self.window:
            out["window"] = {"degree_cap": self.window[0], "index_cap": self.window[1]}
        return out


def module_from_json(data: dict) -> MonomialModule:
    """Read {"n": ..., "prime": ..., "generators": ["x3^x1 | e1", ...]}."""
    try:
        n = int(data["n"])
        gens = tuple(parse_monomial(t)[1] for t in data.get("generators", []))
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed module file: {exc}") from exc
    prime = data.get("prime")
    return MonomialModule(n, gens, prime=None if prime is None else check_prime(int(prime)))


def window_monomials(n: int, degree_cap: int, index_cap: int) -> list:
    """Every monomial of P_n with wedge length <= degree_cap and indices <= index_cap."""
    idx = range(1, index_cap + 1)
    out = []
    for r in range(degree_cap + 1):
        for wedge in itertools.combinations(sorted(idx, reverse=True), r):
            for tensor in itertools.product(idx, repeat=n):
                out.append(PModMonomial(wedge, tensor))
    return out


def orbit_closure(generators: Iterable[PModMonomial], degree_cap: int, index_cap: int) -> set:
    """All u . sigma(g) inside the window, by exhaustive enumeration (the oracle route)."""
    out = set()
    idx = list(range(1, index_cap + 1))
    for g in generators:
        for sigma in increasing_maps(g.indices(), index_cap):
            image = inc_apply(sigma, g)
            free = [i for i in idx if i not in image.wedge]
            for r in range(degree_cap - image.degree + 1):
                for u in itertools.combinations(free, r):
                    sign, prod = multiply_wedge(u, image)
                    if sign:
                        out.add(prod)
    return out


def q_orbit_closure(generators: Iterable[QModMonomial], degree_cap: int, index_cap: int) -> set:
    """Same enumeration on the B side, multiplying supports as squarefree monomials."""
    out = set()
    for g in generators:
        dom = tuple(sorted(set(g.support) | set(g.tensor)))
        for image in itertools.combinations(range(1, index_cap + 1), len(dom)):
            # an increasing map of N never moves an index down by more than it already has
            if any(v - d < vp - dp for (dp, vp), (d, v) in zip([(0, 0)] + list(zip(dom, image)), zip(dom, image))):
                continue
            s = dict(zip(dom, image))
            supp = frozenset(s[i] for i in g.support)
            tensor = tuple(s[j] for j in g.tensor)
            rest = [i for i in range(1, index_cap + 1) if i not in supp]
            for r in range(degree_cap - len(supp) + 1):
                for u in itertools.combinations(rest, r):
                    out.add(QModMonomial(tuple(sorted(supp | set(u), reverse=True)), tensor))
    return out


# ---------------------------------------------------------------------------
# Initial modules
# ---------------------------------------------------------------------------


def inc_span(generators: list, degree_cap: int, index_cap: int) -> list:
    """The elements u . sigma(g) spanning the Inc-submodule inside the window."""
    out = []
    for g in generators:
        idx = sorted({i for m in g.terms for i in m.indices()})
        for sigma in increasing_maps(tuple(idx), index_cap):
            image = g.apply(sigma)
            low = min(m.degree for m in image.terms)
            for r in range(degree_cap - low + 1):
                for u in itertools.combinations(range(1, index_cap + 1), r):
                    v = image.wedge_multiply(u)
                    v = PModElement(v.prime, {m: c for m, c in v.terms.items() if m.degree <= degree_cap})
                    if not v.is_zero():
                        out.append(v)
    return out


def initial_module_truncated(generators: list, degree_cap: int, index_cap: int) -> MonomialModule:
    """init of the Inc-submodule generated by ``generators``, seen inside the window.

    The spanning set is eliminated with columns ordered from the largest
    monomial down, so the pivot columns are exactly the initial monomials of
    the span.
    """
    generators = [g for g in generators if not g.is_zero()]
    if not generators:
        return MonomialModule(0, (), True, (degree_cap, index_cap))
    n = next(iter(generators[0].terms)).n
    p = generators[0].prime
    for g in generators:
        if g.max_index() > index_cap or max(m.degree for m in g.terms) > degree_cap:
            raise ValueError("window too small to contain the generators")
    span = inc_span(generators, degree_cap, index_cap)
    cols = sorted({m for v in span for m in v.terms}, key=PModMonomial.key, reverse=True)
    index = {m: i for i, m in enumerate(cols)}
    mat = np.zeros((len(span), len(cols)), dtype=np.int64)
    for r, v in enumerate(span):
        for m, c in v.terms.items():
            mat[r, index[m]] = c
    _, pivots = linalg.rref(mat, p)
    leading = [cols[c] for c in pivots]
    return MonomialModule(n, tuple(leading), True, (degree_cap, index_cap), p).minimized()


# ---------------------------------------------------------------------------
# ACC experiments
# ---------------------------------------------------------------------------


@dataclass
class ACCReport:
    stabilization_index: int | None
    steps: int
    escapes: list
    cap_reached: bool
    saturation_step: int | None = None
    verified: bool | None = None

    def to_json(self) -> dict:
        return {"stabilization_index": self.stabilization_index, "steps": self.steps,
                "escapes": self.escapes, "cap_reached": self.cap_reached,
                "saturation_step": self.saturation_step, "verified": self.verified}


def acc_experiment(chain: Callable[[int], Iterable[PModMonomial]], n: int, step_cap: int,
                   limit: Iterable[PModMonomial] | None = None) -> ACCReport:
    """Run an ascending chain M_0 <= M_1 <= ... given by the generators added at each step.

    The stabilization index is one past the last step whose new generators
    escape the module built so far; it equals 1 for a constant chain.  With
    ``limit`` (generators of the union of the whole chain, known in advance)
    the report also records the first step whose module contains the limit:
    past that step nothing can escape, so the index is verified rather than
    only observed up to the cap.
    """
    limit = list(limit) if limit is not None else None
    gens: list = []
    escapes = []
    saturation = None
    for step in range(step_cap + 1):
        new = list(chain(step))
        module = MonomialModule(n, tuple(gens))
        escaped = [g for g in new if not module.contains(g)]
        if escaped or step == 0:
            escapes.append(step)
        gens.extend(escaped)
        if limit is not None and saturation is None and escaped:
            grown = MonomialModule(n, tuple(gens))
            if all(grown.contains(m) for m in limit):
                saturation = step
    if limit is not None and saturation is None and not limit:
        saturation = 0
    last = escapes[-1] if escapes else 0
    cap = last == step_cap and step_cap > 0
    index = None if cap else last + 1
    verified = None if limit is None else (saturation is not None and index == saturation + 1)
    return ACCReport(index, step_cap, escapes, cap, saturation, verified)


def random_monomial(rng: random.Random, n: int, index_cap: int, degree_cap: int) -> PModMonomial:
    r = rng.randint(0, min(degree_cap, index_cap))
    wedge = tuple(sorted(rng.sample(range(1, index_cap + 1), r), reverse=True))
    tensor = tuple(rng.randint(1, index_cap) for _ in range(n))
    return PModMonomial(wedge, tensor)


def random_chain(seed: int, n: int = 1, index_cap: int = 6, degree_cap: int = 3, per_step: int = 2) -> Callable:
    """Deterministic chain adding ``per_step`` random monomials of the window at each step.

    Every window monomial is drawn eventually, so the union of the chain is
    the module generated by ``window_monomials(n, degree_cap, index_cap)``.
    """
    def chain(step: int):
        rng = random.Random(seed * 7919 + step)
        return [random_monomial(rng, n, index_cap, degree_cap) for _ in range(per_step)]
    return chain


def translate_chain(generator: PModMonomial) -> Callable:
    """Step k adds the k-fold shift of a fixed generator."""
    return lambda step: [inc_apply(shift(step), generator)]


def constant_chain(generators: Iterable[PModMonomial]) -> Callable:
    gens = list(generators)
    return lambda step: gens if step == 0 else []
