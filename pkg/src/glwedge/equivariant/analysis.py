"""Homological experiments on equivariant modules.

All functions accept either an :class:`EquivariantPresentation` or any
rank-free module values object.  Results are computed at dominant weights
(GL-stable modules have permutation-symmetric weight spaces); the Betti
certificate checks that symmetry explicitly on every weight of two ranks.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ..characters import format_character, monomial_to_schur
from ..partitions import Partition, partitions_of, sort_weight
from ..resolution import (
    BettiTable,
    MinimalResolution,
    ModuleValues,
    QuotientValues,
    SubValues,
    betti_table,
    normalize,
    generated_below,
    weights_of_degree,
)
from .. import linalg
from .functors import (
    PresentedValues,
    Shifted,
    difference,
    fresh_kill_map,
    image_family,
    iterate_shift,
    natural_map,
    torsion_values,
)
from .presentation import EquivariantPresentation


# Fresh variables used by the wedge-kill torsion test unless a caller asks
# for more; long weights make larger exponents expensive.
DEFAULT_KILL_EXPONENT = 3


class StabilizationError(RuntimeError):
    """Betti numbers failed the symmetry / two-rank agreement certificate."""


def as_values(module) -> ModuleValues:
    """Weight-space values of a presentation, memoized on the presentation itself."""
    if isinstance(module, ModuleValues):
        return module
    if isinstance(module, EquivariantPresentation):
        if getattr(module, "_values", None) is None:
            module._values = PresentedValues(module)
        return module._values
    raise TypeError(f"cannot evaluate {type(module).__name__}")


def dominant_weights(d_max: int, rank: int | None = None, d_min: int = 0) -> list:
    out = []
    for d in range(d_min, d_max + 1):
        for lam in partitions_of(d):
            if rank is None or len(lam) <= rank:
                out.append(tuple(lam))
    return out


def dims_by_degree(module, d_max: int, rank: int) -> list:
    """dim M(k^rank)_d for d <= d_max, summing dominant weights times orbit sizes."""
    from ..resolution import orbit_size

    vals = as_values(module)
    out = [0] * (d_max + 1)
    for mu in dominant_weights(d_max, rank):
        out[sum(mu)] += vals.dim(mu) * orbit_size(mu, rank)
    return out


def is_zero(module, d_max: int) -> bool:
    vals = as_values(module)
    return all(vals.dim(mu) == 0 for mu in dominant_weights(d_max))


def top_degree(module, d_max: int) -> int:
    vals = as_values(module)
    degs = [sum(mu) for mu in dominant_weights(d_max) if vals.dim(mu)]
    return max(degs) if degs else -1


def generator_degree(module, d_max: int) -> int:
    """t_0 within the window: top degree of M / m.M."""
    vals = as_values(module)
    res = MinimalResolution(vals)
    degs = [sum(mu) for mu in dominant_weights(d_max) if res.betti(0, mu)]
    return max(degs) if degs else -1


def _level_bounds(module, i_max: int, d_max: int) -> tuple:
    """Which levels are provably complete within the window (presentations only)."""
    if isinstance(module, EquivariantPresentation):
        gens_ok = module.max_block_degree() <= d_max
        rels_ok = gens_ok and module.max_relation_degree() <= d_max
        return tuple([gens_ok, rels_ok] + [False] * max(0, i_max - 1))[: i_max + 1]
    return tuple(False for _ in range(i_max + 1))


# ---------------------------------------------------------------------------
# Betti numbers
# ---------------------------------------------------------------------------


@dataclass
class EquivariantBetti:
    table: BettiTable
    certificate: dict

    def t(self, i: int) -> int:
        return self.table.t(i)

    def tor_character(self, i: int) -> dict:
        """Tor_i as a GL-character per degree (dominant weight data re-expanded)."""
        by_deg: dict = {}
        for (k, mu), v in self.table.entries.items():
            if k == i and v:
                by_deg.setdefault(sum(mu), {})[Partition(mu)] = v
        return {d: monomial_to_schur(m) for d, m in sorted(by_deg.items())}

    def vanishes(self, i: int) -> bool:
        return self.table.vanishes(i)

    def to_json(self) -> dict:
        return {
            "betti": self.table.to_json(),
            "summary": self.table.summary(),
            "tor_characters": {
                str(i): {str(d): format_character(c) for d, c in self.tor_character(i).items()}
                for i in range(self.table.i_max + 1)
            },
            "certificate": self.certificate,
        }


def _class_representatives(lam: tuple, rank: int) -> list:
    """Dominant lam, and lam reversed and pushed against the last position."""
    rev = tuple(reversed(lam))
    return [lam, (0,) * (rank - len(rev)) + rev]


def equivariant_betti(module, i_max: int, d_max: int, certify: bool = True,
                      exhaustive: bool = False) -> EquivariantBetti:
    """Tor_i^R(M, k) in degrees <= d_max with a stabilization certificate.

    Betti numbers are tabulated at dominant weights of degree <= d_max.  The
    certificate compares each weight class at ranks d_max + 1 and d_max + 2:
    by default the dominant weight against its reversal placed in the last
    positions of the larger rank; with ``exhaustive`` every weight of both
    ranks is computed and each permutation class must be constant.
    """
    vals = as_values(module)
    res = MinimalResolution(vals)
    dom = dominant_weights(d_max, d_max + 1)
    complete = _level_bounds(module, i_max, d_max)
    table = betti_table(res, i_max, dom, d_max, complete, dominant_only=True, rank=d_max + 1)
    ranks = (d_max + 1, d_max + 2)
    cert = {"ranks": list(ranks), "exhaustive": exhaustive, "weights_checked": 0,
            "symmetric": None, "ranks_agree": None}
    if certify:
        if exhaustive:
            weights = [(r, w) for r in ranks for d in range(d_max + 1) for w in weights_of_degree(d, r)]
        else:
            weights = [(ranks[1], w) for lam in dom for w in _class_representatives(lam, ranks[1])]
        checked = 0
        for r, w in weights:
            key = tuple(sort_weight(w))
            for i in range(min(i_max, sum(w)) + 1):
                v = res.betti(i, normalize(w))
                checked += 1
                if v != table.value(i, key):
                    raise StabilizationError(
                        f"Tor_{i} at weight {list(w)} (rank {r}) is {v}, class value {table.value(i, key)}")
        cert.update(weights_checked=checked, symmetric=True, ranks_agree=True)
    if res.minimality_violations:
        raise AssertionError(f"non-minimal differential at {res.minimality_violations[:3]}")
    return EquivariantBetti(table, cert)


# ---------------------------------------------------------------------------
# Semi-induced detection
# ---------------------------------------------------------------------------


class _Subquotient(QuotientValues):
    """big / small for nested submodule families of the same module."""

    def __init__(self, big: SubValues, small: SubValues):
        self.big, self.small = big, small
        super().__init__(big, self._inside)

    def _inside(self, mu):
        rows = self.small.space(mu).rows
        big = self.big.space(mu)
        if rows.shape[0] == 0:
            return linalg.Subspace(big.dim, big.p)
        return linalg.Subspace(big.dim, big.p, big.coords(rows))


def induced_dims_from_generators(vals: ModuleValues, mu: tuple, gens_at) -> int:
    """dim (R (x) W)_mu for the generator spaces ``gens_at``."""
    return sum(gens_at(h) for _, h in vals.grading.faces(mu))


@dataclass
class SemiInducedResult:
    semi_induced: bool
    tor1_vanishes: bool
    filtration: list
    d_max: int
    truncated: bool

    def __bool__(self):
        return self.semi_induced

    def to_json(self) -> dict:
        return {"semi_induced": self.semi_induced, "tor1_vanishes": self.tor1_vanishes,
                "filtration": self.filtration, "d_max": self.d_max, "truncated": self.truncated}


def peel_off(module, d_max: int) -> list:
    """Check that each M^{<n+1} / M^{<n} is induced (free on its degree-n part).

    Returns one record per generator degree n with the generator count and
    whether the dimension count of a free module matches at every weight.
    """
    vals = as_values(module)
    res = MinimalResolution(vals)
    weights = dominant_weights(d_max)
    gen_degrees = sorted({sum(mu) for mu in weights if res.betti(0, mu)})
    out = []
    for n in gen_degrees:
        big = generated_below(vals, n + 1)
        small = generated_below(vals, n)
        piece = _Subquotient(big, small)

        def gens_at(h, piece=piece, n=n):
            return piece.dim(h) if sum(h) == n else 0

        ok = True
        for mu in weights:
            if sum(mu) < n:
                continue
            if piece.dim(mu) != induced_dims_from_generators(vals, mu, gens_at):
                ok = False
                break
        out.append({"degree": n, "generators": sum(piece.dim(mu) for mu in weights if sum(mu) == n), "induced": ok})
    return out


def is_semi_induced(module, d_max: int, betti: EquivariantBetti | None = None, certify: bool = False) -> SemiInducedResult:
    if betti is None:
        betti = equivariant_betti(module, 1, d_max, certify=certify)
    tor1 = betti.vanishes(1)
    filtration = peel_off(module, d_max) if tor1 else []
    ok = tor1 and all(f["induced"] for f in filtration)
    return SemiInducedResult(ok, tor1, filtration, d_max, not betti.table.is_complete(1))


# ---------------------------------------------------------------------------
# Torsion
# ---------------------------------------------------------------------------


@dataclass
class TorsionReport:
    rank: int
    s_max: int
    elements: list
    dims_by_degree: dict
    inconclusive: bool
    stabilized: bool

    def degrees(self) -> list:
        return sorted(d for d, v in self.dims_by_degree.items() if v)

    def max_kill_exponent(self) -> int:
        return max((e["kill_exponent"] for e in self.elements), default=0)

    def to_json(self) -> dict:
        return {
            "rank": self.rank,
            "s_max": self.s_max,
            "dims_by_degree": {str(k): v for k, v in sorted(self.dims_by_degree.items())},
            "elements": self.elements,
            "inconclusive": self.inconclusive,
            "stabilized": self.stabilized,
        }


def _torsion_at_rank(vals: ModuleValues, r: int, s_max: int, d_max: int) -> tuple:
    from ..resolution import orbit_size

    elements, dims, inconclusive = [], {}, False
    for mu in dominant_weights(d_max, r):
        n = vals.dim(mu)
        if not n:
            continue
        prev = linalg.Subspace(n, vals.p)
        for s in range(1, s_max + 1):
            kill = fresh_kill_map(vals, mu, s, start=r)
            ker = linalg.Subspace(n, vals.p, linalg.nullspace(kill.T, vals.p)) if kill.shape[1] else linalg.Subspace.full(n, vals.p)
            new = linalg.Subspace(n, vals.p, prev.reduce(ker.rows)) if ker.dim > prev.dim else None
            if new is not None:
                for row in new.rows:
                    elements.append({"weight": list(mu), "degree": sum(mu), "vector": [int(x) for x in row],
                                     "kill_exponent": s})
            if s == s_max and ker.dim > prev.dim and ker.dim < n and s > 1:
                inconclusive = True
            prev = ker
        if prev.dim:
            dims[sum(mu)] = dims.get(sum(mu), 0) + prev.dim * orbit_size(mu, r)
    return elements, dims, inconclusive


def torsion_submodule(module, r: int, s_max: int, d_max: int | None = None) -> TorsionReport:
    """Torsion classes of M(k^r): those killed by x_{r+1} ^ ... ^ x_{r+s} for some s <= s_max.

    Degrees are scanned up to ``d_max`` (default r + largest block degree, the
    top degree of M(k^r)); the report is stabilized when the torsion degrees
    at rank r + 1 agree with those at rank r.
    """
    vals = as_values(module)
    if d_max is None:
        d_max = r + (module.max_block_degree() if isinstance(module, EquivariantPresentation) else r)
    elements, dims, inconclusive = _torsion_at_rank(vals, r, s_max, d_max)
    _, dims_next, _ = _torsion_at_rank(vals, r + 1, s_max, d_max)
    stabilized = sorted(d for d, v in dims.items() if v) == sorted(d for d, v in dims_next.items() if v)
    return TorsionReport(r, s_max, elements, dims, inconclusive, stabilized)


def torsion_degrees(module, d_max: int, s_max: int) -> list:
    """Degrees (<= d_max) carrying torsion, fresh variables placed after the support."""
    vals = as_values(module)
    out = set()
    for mu in dominant_weights(d_max):
        n = vals.dim(mu)
        if not n:
            continue
        kill = fresh_kill_map(vals, mu, s_max)
        if linalg.rank(kill, vals.p) < n:
            out.add(sum(mu))
    return sorted(out)


def kernel_is_torsion(vals: ModuleValues, maps, d_max: int, s_max: int) -> list:
    """Weights where ker(maps) contains a class not killed by s_max fresh variables."""
    bad = []
    for mu in dominant_weights(d_max):
        n = vals.dim(mu)
        if not n:
            continue
        a = maps(mu)
        ker = linalg.nullspace(a.T, vals.p) if a.shape[1] else np.eye(n, dtype=np.int64)
        if ker.shape[0] == 0:
            continue
        kill = fresh_kill_map(vals, mu, s_max)
        if np.any((ker @ kill) % vals.p):
            bad.append(mu)
    return bad


# ---------------------------------------------------------------------------
# Shift theorem and resolution theorem experiments
# ---------------------------------------------------------------------------


@dataclass
class ShiftTheoremResult:
    l: int | None
    trace: list
    d_max: int
    l_max: int

    @property
    def found(self) -> bool:
        return self.l is not None

    def monotone(self) -> bool:
        """t_0, t_1 and the top torsion degree never increase along the trace."""
        for a, b in zip(self.trace, self.trace[1:]):
            for key in ("t0", "t1", "torsion_top"):
                if b[key] > a[key]:
                    return False
        return True

    def to_json(self) -> dict:
        return {"l": self.l, "found": self.found, "trace": self.trace, "d_max": self.d_max,
                "l_max": self.l_max, "monotone": self.monotone()}


def shift_theorem_experiment(module, l_max: int, d_max: int, s_max: int | None = None) -> ShiftTheoremResult:
    """Smallest l <= l_max with Sh^l(M) semi-induced in degrees <= d_max."""
    vals = as_values(module)
    s_max = DEFAULT_KILL_EXPONENT if s_max is None else s_max
    trace = []
    for l in range(l_max + 1):
        shifted = iterate_shift(vals, l)
        betti = equivariant_betti(shifted, 1, d_max, certify=False)
        semi = is_semi_induced(shifted, d_max, betti)
        tors = torsion_degrees(shifted, d_max, s_max)
        trace.append({"l": l, "t0": betti.t(0), "t1": betti.t(1),
                      "torsion_top": max(tors) if tors else -1, "semi_induced": semi.semi_induced})
        if semi.semi_induced:
            return ShiftTheoremResult(l, trace, d_max, l_max)
    return ShiftTheoremResult(None, trace, d_max, l_max)


@dataclass
class ResolutionReport:
    t0: int
    steps: list
    length: int
    checks: dict
    inconclusive: bool

    @property
    def ok(self) -> bool:
        return not self.inconclusive and all(self.checks.values())

    def to_json(self) -> dict:
        return {"t0": self.t0, "steps": self.steps, "length": self.length, "checks": self.checks,
                "inconclusive": self.inconclusive, "ok": self.ok}


def resolution_experiment(module, d_max: int, l_max: int = 6, s_max: int | None = None) -> ResolutionReport:
    """Build 0 -> M -> P^0 -> P^1 -> ... with P^i = Sh^{l_i}(N_i), N_{i+1} = coker(N_i -> P^i).

    The cohomology at P^i is ker(N_{i+1} -> P^{i+1}) and at M it is
    ker(M -> P^0); each is tested with the fresh-variable kill map.
    """
    vals = as_values(module)
    s_max = DEFAULT_KILL_EXPONENT if s_max is None else s_max
    t0 = generator_degree(vals, d_max)
    steps = []
    current = vals
    inconclusive = False
    for i in range(max(t0, 0) + 3):
        if is_zero(current, d_max):
            break
        shift = shift_theorem_experiment(current, l_max, d_max, s_max)
        if shift.l is None:
            inconclusive = True
            steps.append({"i": i, "l": None})
            break
        l = shift.l
        target = iterate_shift(current, l)
        maps = (lambda mu, c=current, l=l: natural_map(c, mu, l))
        bad = kernel_is_torsion(current, maps, d_max, s_max)
        steps.append({
            "i": i,
            "l": l,
            "t0_P": generator_degree(target, d_max),
            "P_zero": is_zero(target, d_max),
            "cohomology_torsion": not bad,
            "cohomology_dims": [current.dim(mu) - linalg.rank(maps(mu), vals.p) if current.dim(mu) else 0
                                for mu in dominant_weights(d_max)],
        })
        current = QuotientValues(target, image_family(current, target, maps))
    nonzero = [s["i"] for s in steps if s.get("l") is not None and not s["P_zero"]]
    length = max(nonzero) if nonzero else 0
    checks = {
        "length_le_t0": length <= max(t0, 0),
        "generator_degrees_drop": all(s["t0_P"] <= t0 - s["i"] for s in steps if s.get("l") is not None),
        "cohomology_torsion": all(s["cohomology_torsion"] for s in steps if s.get("l") is not None),
    }
    return ResolutionReport(t0, steps, length, checks, inconclusive)


# ---------------------------------------------------------------------------
# Regularity
# ---------------------------------------------------------------------------


@dataclass
class RegularityReport:
    t: list
    regularity: int
    bound: int
    ok: bool
    lower_bound: bool
    induced_corner: bool

    def to_json(self) -> dict:
        return dict(self.__dict__)


def regularity_bound_check(module, i_max: int, d_max: int, betti: EquivariantBetti | None = None) -> RegularityReport:
    """reg = max_i (t_i - i) versus t_0 + t_1.

    With Tor_1 = 0 (t_1 = -1) the bound reads t_0 - 1, which no nonzero
    induced module meets; reg = t_0 is accepted there.
    """
    if betti is None:
        betti = equivariant_betti(module, i_max, d_max, certify=False)
    t = [betti.t(i) for i in range(i_max + 1)]
    vals = [t[i] - i for i in range(i_max + 1) if t[i] >= 0]
    reg = max(vals) if vals else -1
    bound = t[0] + t[1] if i_max >= 1 else t[0]
    corner = i_max >= 1 and t[1] == -1
    ok = reg <= bound or (corner and reg == t[0])
    lower = not all(betti.table.is_complete(i) for i in range(i_max + 1))
    return RegularityReport(t, reg, bound, ok, lower, corner)


# ---------------------------------------------------------------------------
# Structural checks on one module
# ---------------------------------------------------------------------------


def support_bound_violations(module, t0: int, ranks: Sequence[int], top: int) -> list:
    """Weights mu with len(mu) <= n, |mu| > n + t0 and M_mu != 0."""
    vals = as_values(module)
    bad = []
    for n in ranks:
        for mu in dominant_weights(n + top, n, d_min=n + t0 + 1):
            if vals.dim(mu):
                bad.append({"rank": n, "weight": list(mu)})
    return bad


def commutation_mismatches(left: ModuleValues, right: ModuleValues, d_max: int, rank: int) -> list:
    bad = []
    for d in range(d_max + 1):
        for w in weights_of_degree(d, rank):
            if left.dim(w) != right.dim(w):
                bad.append({"weight": list(w), "left": left.dim(w), "right": right.dim(w)})
    return bad


@dataclass
class StructuralReport:
    t0: int
    violations: dict

    @property
    def ok(self) -> bool:
        return not any(self.violations.values())

    def to_json(self) -> dict:
        return {"t0": self.t0, "ok": self.ok, "violations": self.violations}


def structural_checks(module, d_max: int, rank: int, s_max: int | None = None) -> StructuralReport:
    """Behaviour of i_M, Sh, Delta and torsion on one module within a window.

    * ker(i_M) is torsion, and i_M is injective exactly when M is torsion-free;
    * t_0(Delta M), t_0(Delta_2 M) <= t_0(M) - 1 for M != 0;
    * Sh o Delta and Delta o Sh, Sh o Gamma and Gamma o Sh agree dimension-wise;
    * M(k^n)_i = 0 for n + t_0 < i (n <= rank).
    """
    vals = as_values(module)
    s_max = DEFAULT_KILL_EXPONENT if s_max is None else s_max
    t0 = generator_degree(vals, d_max)
    out: dict = {}
    out["kernel_not_torsion"] = [list(w) for w in
                                 kernel_is_torsion(vals, lambda mu: natural_map(vals, mu, 1), d_max, s_max)]
    injective = all(linalg.rank(natural_map(vals, mu, 1), vals.p) == vals.dim(mu)
                    for mu in dominant_weights(d_max) if vals.dim(mu))
    torsion_free = not torsion_degrees(vals, d_max, s_max)
    out["injectivity_vs_torsion"] = [] if injective == torsion_free else [{"injective": injective, "torsion_free": torsion_free}]
    drops = []
    if t0 >= 0:
        for s in (1, 2):
            t = generator_degree(difference(vals, s), d_max)
            if t > t0 - 1:
                drops.append({"s": s, "t0_delta": t})
    out["delta_generator_degree"] = drops
    out["shift_delta_commute"] = commutation_mismatches(Shifted(difference(vals)), difference(Shifted(vals)),
                                                        d_max - 1, rank)
    out["shift_torsion_commute"] = commutation_mismatches(Shifted(torsion_values(vals, s_max)),
                                                          torsion_values(Shifted(vals), s_max), d_max - 1, rank)
    top = max(module.max_block_degree(), 0) if isinstance(module, EquivariantPresentation) else d_max
    out["support_bound"] = support_bound_violations(vals, t0, range(1, rank + 1), top) if t0 >= 0 else []
    return StructuralReport(t0, out)
