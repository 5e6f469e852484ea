import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from glwedge.characters import divided_power_character, monomial_expand, multiply, schur_derivative
from glwedge.equivariant import analysis, fixtures, functors, gl, rank
from glwedge.equivariant.presentation import EquivariantPresentation
from glwedge.resolution import weights_of_degree

from conftest import STRUCTURAL_DEGREE, STRUCTURAL_RANK


def padded(weight_dims: dict, r: int) -> dict:
    return {tuple(w) + (0,) * (r - len(w)): v for w, v in weight_dims.items() if v}


def expansion_by_weight(ch, r: int, d_max: int) -> dict:
    full = monomial_expand(ch, r).full_weights()
    return {w: c for w, c in full.items() if c and sum(w) <= d_max}


def non_symmetric(p: int) -> EquivariantPresentation:
    # x_1 (x) e_2 alone: its Inc-orbit is not closed under e_2 -> e_1
    return EquivariantPresentation(p, [(1,)], [[(0, (0,), ((0, 1),), 1)]], name="x1e2")


@pytest.fixture(params=[2, 3])
def fx(request):
    return fixtures.named_fixtures(request.param)


# ---------------------------------------------------------------------------
# Evaluation and GL stability
# ---------------------------------------------------------------------------


def test_evaluate_examples(fx):
    assert rank.evaluate(fx["R"], 2).dims(2) == [1, 2, 1]
    assert rank.evaluate(fx["m"], 3).dims(3)[1:] == [3, 3, 1]
    assert rank.evaluate(fx["R/m^2"], 3).dims(3) == [1, 3, 0, 0]


def test_evaluate_rejects_rank_zero(fx):
    with pytest.raises(ValueError):
        rank.evaluate(fx["R"], 0)


def test_gl_stability_examples(fx):
    assert gl.check_gl_stability(fx["R/m^2"], 3)
    assert gl.check_gl_stability(fx["R"], 2)
    assert gl.check_gl_stability(fx["m"], 3)


@pytest.mark.parametrize("p", [2, 3])
def test_non_symmetric_relation_is_caught(p):
    res = gl.check_gl_stability(non_symmetric(p), 3)
    assert not res
    assert res.witness["relation"] == 0
    assert res.witness["operator"]["i"] != res.witness["operator"]["j"]


def test_gl_stability_needs_room():
    with pytest.raises(ValueError):
        gl.check_gl_stability(non_symmetric(2), 1)


def test_asymmetric_weights_fail_betti_certificate():
    # x_1 (x) e_2^(2) has weight (1, 2); nothing kills the (2, 1) weight space
    lopsided = EquivariantPresentation(2, [(2,)], [[(0, (0,), ((0, 2),), 1)]], name="x1e22")
    assert not gl.check_gl_stability(lopsided, 3)
    with pytest.raises(analysis.StabilizationError):
        analysis.equivariant_betti(lopsided, 1, 3)


@pytest.mark.parametrize("r", [1, 2, 3, 4])
def test_weight_values_agree_with_explicit_evaluation(fx, r):
    for name, pres in fx.items():
        assert analysis.dims_by_degree(pres, r + 2, r) == rank.evaluate(pres, r).dims(r + 2), (name, r)


@pytest.mark.parametrize("lam", [(), (1,), (2,), (1, 1), (2, 1), (3,)])
@pytest.mark.parametrize("p", [2, 3])
def test_induced_character_consistency(lam, p):
    r = 3
    d_max = r + sum(lam)
    ev = rank.evaluate(fixtures.induced(p, lam), r)
    ch = multiply(fixtures.ring_character(d_max), divided_power_character(lam))
    assert padded(ev.weight_dims(d_max), r) == expansion_by_weight(ch, r, d_max)


def test_presentation_json_round_trip(fx, tmp_path):
    for pres in fx.values():
        again = EquivariantPresentation.from_json(pres.to_json())
        assert again.dumps() == pres.dumps()
        path = tmp_path / "m.json"
        path.write_text(pres.dumps())
        assert EquivariantPresentation.load(path).dumps() == pres.dumps()


# ---------------------------------------------------------------------------
# Shift and difference functors
# ---------------------------------------------------------------------------


def test_shift_of_ring(fx):
    ev = rank.shift_evaluate(fx["R"], 3)
    assert ev.dims(4) == [1, 3, 3, 1, 0]
    full = {w: 1 for d in range(4) for w in weights_of_degree(d, 3) if max(w, default=0) <= 1}
    assert len(ev.natural_map_ranks) == len(full)
    assert all(v == 1 for v in ev.natural_map_ranks.values())
    assert rank.delta_evaluate(fx["R"], 3).dims(4) == [0] * 5


def test_shift_and_delta_of_residue_field(fx):
    assert rank.shift_evaluate(fx["k"], 3).dims(3) == [0] * 4
    assert rank.delta_evaluate(fx["k"], 3).dims(3) == [0] * 4
    ker = functors.kernel_of_natural_map(analysis.as_values(fx["k"]))
    assert ker.dim(()) == 1


@pytest.mark.parametrize("r", [2, 3, 4])
def test_shift_and_delta_of_maximal_ideal(fx, r):
    assert rank.shift_evaluate(fx["m"], r).dims(r + 1) == rank.evaluate(fx["R"], r).dims(r + 1)
    assert rank.delta_evaluate(fx["m"], r).dims(r + 1) == [1] + [0] * (r + 1)


def test_delta_of_induced_by_standard_rep(fx):
    p = fx["R"].prime
    assert rank.delta_evaluate(fixtures.induced(p, (1,)), 3).dims(4) == rank.evaluate(fx["R"], 3).dims(4)


@pytest.mark.parametrize("r", [1, 2, 3])
def test_delta_of_twisted_induced_vanishes(r):
    tw = fixtures.twisted_induced(2)
    assert rank.delta_evaluate(tw, r).dims(r + 2) == [0] * (r + 3)


def test_twisted_fixture_has_twisted_character():
    tw = fixtures.twisted_induced(2)
    r, d_max = 3, 5
    ev = rank.evaluate(tw, r)
    expected = expansion_by_weight(fixtures.twisted_character(2, 1, d_max), r, d_max)
    assert padded(ev.weight_dims(d_max), r) == expected


@pytest.mark.parametrize("lam", [(1,), (2,), (1, 1), (2, 1)])
def test_delta_of_induced_is_ring_times_derivative(lam):
    r = 3
    d_max = r + sum(lam) - 1
    ev = rank.delta_evaluate(fixtures.induced(2, lam), r)
    ch = multiply(fixtures.ring_character(d_max), schur_derivative(divided_power_character(lam)))
    assert padded(ev.weight_dims(d_max), r) == expansion_by_weight(ch, r, d_max)


def test_delta_needs_positive_exponent(fx):
    with pytest.raises(ValueError):
        rank.delta_evaluate(fx["R"], 2, s=0)


def test_shift_is_weight_one_slice_of_explicit_evaluation(corpus):
    # Sh(M)(k^r)_w = M(k^{r+1})_{(1, w)}, read off the explicit rank evaluation
    for pres in corpus[:12]:
        r = 2
        top = r + 1 + max(pres.max_block_degree(), 0)
        big = padded(rank.evaluate(pres, r + 1).weight_dims(top), r + 1)
        sliced = {w[1:]: v for w, v in big.items() if w[0] == 1}
        sh = padded(rank.shift_evaluate(pres, r).weight_dims(top - 1), r)
        assert sh == sliced, pres.name


# ---------------------------------------------------------------------------
# Torsion
# ---------------------------------------------------------------------------


def test_ring_is_torsion_free(fx):
    for r in (1, 2, 3):
        rep = analysis.torsion_submodule(fx["R"], r, 3)
        assert rep.dims_by_degree == {} and rep.stabilized and not rep.inconclusive


def test_truncation_is_all_torsion(fx):
    rep = analysis.torsion_submodule(fx["R/m^2"], 3, 3)
    assert rep.dims_by_degree == {0: 1, 1: 3}
    assert rep.max_kill_exponent() <= 2 and rep.stabilized


def test_torsion_of_direct_sum_is_second_summand(fx):
    total = functors.direct_sum_presentation(fx["R"], fx["k"])
    rep = analysis.torsion_submodule(total, 3, 3)
    assert rep.dims_by_degree == {0: 1}
    assert all(e["weight"] == [] for e in rep.elements)
    assert len(rep.elements) == 1 and rep.elements[0]["vector"][0] == 0


def test_torsion_elements_are_killed(fx):
    vals = analysis.as_values(fx["R/m^3"])
    rep = analysis.torsion_submodule(fx["R/m^3"], 3, 3)
    for e in rep.elements:
        kill = functors.fresh_kill_map(vals, tuple(e["weight"]), e["kill_exponent"], start=3)
        assert not np.any((np.array(e["vector"]) @ kill) % vals.p)


def test_enough_shifts_kill_torsion(fx):
    for name in ("R/m^2", "R/m^3", "k"):
        vals = analysis.as_values(fx[name])
        top = max(analysis.torsion_degrees(vals, 4, 3))
        assert analysis.torsion_degrees(functors.iterate_shift(vals, top + 1), 4, 3) == [], name


# ---------------------------------------------------------------------------
# Betti numbers, semi-induced, experiments
# ---------------------------------------------------------------------------


def test_betti_of_induced_module():
    b = analysis.equivariant_betti(fixtures.induced(2, (2, 1)), 3, 5)
    assert [b.t(i) for i in range(4)] == [3, -1, -1, -1]
    assert b.certificate["symmetric"] and b.certificate["ranks_agree"]


def test_betti_of_residue_field(fx):
    b = analysis.equivariant_betti(fx["k"], 3, 4)
    assert [b.t(i) for i in range(4)] == [0, 1, 2, 3]
    assert all(v > 0 for (i, mu), v in b.table.entries.items() if v and sum(mu) == i)
    assert all(sum(mu) == i for (i, mu), v in b.table.entries.items() if v)


def test_betti_of_maximal_ideal(fx):
    b = analysis.equivariant_betti(fx["m"], 2, 4)
    assert b.t(0) == 1 and b.t(1) <= b.t(0) + 1 and b.t(1) == 2


def test_exhaustive_certificate_agrees(fx):
    quick = analysis.equivariant_betti(fx["R/m^2"], 2, 3)
    full = analysis.equivariant_betti(fx["R/m^2"], 2, 3, exhaustive=True)
    assert quick.table.entries == full.table.entries
    assert full.certificate["weights_checked"] > quick.certificate["weights_checked"]


def test_semi_induced_examples(fx):
    p = fx["R"].prime
    for lam in [(), (1,), (2,), (2, 1)]:
        res = analysis.is_semi_induced(fixtures.induced(p, lam), 4)
        assert res and res.filtration == [{"degree": sum(lam), "generators": res.filtration[0]["generators"],
                                           "induced": True}]
    assert not analysis.is_semi_induced(fx["R/m^2"], 4)
    zero = EquivariantPresentation(p, [()], [[(0, (), (), 1)]], name="0")
    assert analysis.is_semi_induced(zero, 4)


def test_shift_theorem_examples(fx):
    assert analysis.shift_theorem_experiment(fx["m"], 6, 4).l == 1
    q = analysis.shift_theorem_experiment(fx["R/m^2"], 6, 4)
    assert q.l == 2 and q.monotone() and q.trace[-1]["t0"] == -1
    assert analysis.shift_theorem_experiment(fixtures.induced(fx["R"].prime, (1,)), 6, 4).l == 0


def test_shift_theorem_reports_inconclusive(fx):
    res = analysis.shift_theorem_experiment(fx["R/m^3"], 1, 4)
    assert res.l is None and not res.found and len(res.trace) == 2


def test_resolution_examples(fx):
    p = fx["R"].prime
    rep = analysis.resolution_experiment(fixtures.induced(p, (1,)), 4)
    assert rep.ok and [s["l"] for s in rep.steps] == [0] and not any(rep.steps[0]["cohomology_dims"])
    rep = analysis.resolution_experiment(fx["m"], 4)
    assert rep.ok and rep.steps[0]["t0_P"] == 0
    assert rep.steps[1]["cohomology_dims"][0] == 1 and sum(rep.steps[1]["cohomology_dims"]) == 1
    rep = analysis.resolution_experiment(fx["R/m^2"], 4)
    assert rep.ok and rep.steps[0]["P_zero"] and rep.steps[0]["cohomology_torsion"]


def test_regularity_examples(fx):
    rep = analysis.regularity_bound_check(fx["k"], 3, 4)
    assert rep.regularity == 0 and rep.bound == 1 and rep.ok
    rep = analysis.regularity_bound_check(fixtures.induced(fx["R"].prime, (2,)), 3, 5)
    assert rep.regularity == 2 and rep.induced_corner and rep.ok
    rep = analysis.regularity_bound_check(fx["R/m^2"], 3, 5)
    assert rep.regularity <= 1 and rep.ok


def test_structural_checks_on_named_fixtures(fx):
    for name, pres in fx.items():
        rep = analysis.structural_checks(pres, STRUCTURAL_DEGREE - 1, STRUCTURAL_RANK - 1)
        assert rep.ok, (name, rep.violations)


# ---------------------------------------------------------------------------
# Corpus properties
# ---------------------------------------------------------------------------


def test_corpus_is_deterministic_and_gl_stable(corpus):
    again = fixtures.corpus(5, seed=0, primes=(2, 3))
    assert [p.dumps() for p in again] == [p.dumps() for p in corpus[:5]]
    assert {p.prime for p in corpus} == {2, 3}


corpus_index = st.integers(0, 49)


@settings(max_examples=25, deadline=None)
@given(corpus_index, st.integers(1, 3))
def test_corpus_values_agree_with_explicit_evaluation(corpus, idx, r):
    pres = corpus[idx]
    d = r + max(pres.max_block_degree(), 0)
    assert analysis.dims_by_degree(pres, d, r) == rank.evaluate(pres, r).dims(d)


@settings(max_examples=25, deadline=None)
@given(corpus_index)
def test_shift_preserves_torsion_freeness(corpus, idx):
    vals = analysis.as_values(corpus[idx])
    if not analysis.torsion_degrees(vals, 4, 3):
        assert not analysis.torsion_degrees(functors.Shifted(vals), 3, 3)


@settings(max_examples=25, deadline=None)
@given(corpus_index)
def test_generators_of_delta_drop(corpus, idx):
    vals = analysis.as_values(corpus[idx])
    t0 = analysis.generator_degree(vals, 5)
    for s in (1, 2):
        assert analysis.generator_degree(functors.difference(vals, s), 5) <= t0 - 1
