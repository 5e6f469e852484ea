import random

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from glwedge import linalg
from glwedge.groebner import (
    AmbientMismatch,
    MonomialModule,
    PModElement,
    PModMonomial,
    QModMonomial,
    acc_experiment,
    compare,
    constant_chain,
    format_monomial,
    inc_apply,
    inc_span,
    increasing_maps,
    initial_module_truncated,
    initial_term,
    make_monomial,
    module_from_json,
    multiply_wedge,
    orbit_closure,
    parse_monomial,
    psi,
    psi_inverse,
    q_orbit_closure,
    random_chain,
    random_monomial,
    shift,
    translate_chain,
    window_monomials,
)

from oracles import windowed_leading_monomials


def mono(text: str) -> PModMonomial:
    sign, m = parse_monomial(text)
    assert sign == 1
    return m


def elem(p: int, *pairs) -> PModElement:
    return PModElement(p, {mono(t): c for c, t in pairs})


# ---------------------------------------------------------------------------
# Order, text form, action
# ---------------------------------------------------------------------------


def test_compare_examples():
    a = mono("x3^x1 | e1,e4,e1")
    assert compare(a, mono("x2^x1 | e7,e2,e4")) == 1
    assert compare(a, mono("x5 | e1,e1,e1")) == -1
    assert compare(a, a) == 0


def test_prefix_is_smaller():
    assert compare(mono("x3 | e1"), mono("x3^x1 | e1")) == -1
    assert compare(mono("1 | e9"), mono("x1 | e1")) == -1


def test_compare_rejects_different_ambients():
    with pytest.raises(AmbientMismatch):
        compare(mono("x1 | e1"), mono("x1 | e1,e1"))


def test_text_form():
    sign, m = parse_monomial("x1^x3 | e1,e4,e1")
    assert sign == -1 and format_monomial(m) == "x3^x1 | e1,e4,e1"
    assert format_monomial(mono("1 | e2")) == "1 | e2"
    for bad in ("x1 e1", "x1^x1 | e1", "xa | e1"):
        with pytest.raises(ValueError):
            parse_monomial(bad)
    with pytest.raises(ValueError):
        PModMonomial((1, 3), (1,))
    assert make_monomial([2, 2], [1]) == (0, None)


def test_inc_apply_examples():
    assert inc_apply(shift(1), mono("x2 | e1")) == mono("x3 | e2")
    m = mono("x3^x1 | e3")
    assert inc_apply(lambda i: i, m) == m
    assert inc_apply({1: 2, 3: 5}, m) == mono("x5^x2 | e5")


def test_inc_apply_rejects_bad_maps():
    with pytest.raises(ValueError, match="domain gap"):
        inc_apply({1: 2}, mono("x3^x1 | e3"))
    with pytest.raises(ValueError):
        inc_apply({1: 5, 3: 2}, mono("x3^x1 | e3"))
    # 2 -> 1 and 1 -> 2, 3 -> 3 leave no room for the skipped indices
    with pytest.raises(ValueError):
        inc_apply({2: 1}, mono("x2 | e2"))
    with pytest.raises(ValueError):
        inc_apply({1: 2, 3: 3}, mono("x3^x1 | e3"))


def test_orbits_only_move_indices_up():
    mod = MonomialModule(1, (mono("x2 | e2"),))
    assert not mod.contains(mono("x1 | e1"))
    assert mod.contains(mono("x3 | e5")) is False
    assert mod.contains(mono("x5 | e5"))
    assert mono("x1 | e1") not in orbit_closure([mono("x2 | e2")], 2, 4)
    assert len(list(increasing_maps((2, 4), 4))) == 1


def test_psi_examples():
    m = mono("x3^x1 | e1,e4")
    assert psi(m) == QModMonomial((3, 1), (1, 4))
    pure = mono("1 | e2,e2")
    assert psi(pure).support == () and psi_inverse(psi(pure)) == pure
    assert psi_inverse(psi(m)) == m


def test_initial_term_examples():
    m = mono("x2 | e1")
    assert initial_term(PModElement(3, {m: 2})) == (2, m)
    v = elem(2, (1, "x3^x1 | e1,e4,e1"), (1, "x2^x1 | e7,e2,e4"))
    assert initial_term(v)[1] == mono("x3^x1 | e1,e4,e1")
    with pytest.raises(ValueError):
        initial_term(PModElement(2, {}))


def test_element_normalizes():
    v = PModElement.from_pairs(3, [(1, (1, 2), (1,)), (1, (2, 1), (1,))])
    assert v.is_zero()
    with pytest.raises(AmbientMismatch):
        PModElement(2, {mono("x1 | e1"): 1, mono("x1 | e1,e1"): 1})


# ---------------------------------------------------------------------------
# Membership
# ---------------------------------------------------------------------------


def test_membership_examples():
    g = mono("x1 | e1")
    mod = MonomialModule(1, (g,))
    w = mod.membership(g)
    assert w.generator == g and w.sigma == {1: 1} and w.u == ()
    w = mod.membership(mono("x2^x1 | e1"))
    assert w.u == (2,)
    assert w.to_json()["u"] == [2]
    assert not mod.contains(mono("x2 | e1"))
    assert not mod.contains(mono("1 | e1"))
    with pytest.raises(AmbientMismatch):
        mod.contains(mono("x1 | e1,e1"))


def test_minimized_drops_redundant_generators():
    mod = MonomialModule(1, (mono("x1 | e1"), mono("x3 | e3"), mono("x4^x2 | e2")))
    assert mod.minimized().generators == (mono("x1 | e1"),)


def test_module_json_round_trip():
    mod = MonomialModule(2, (mono("x2 | e1,e2"),), prime=2)
    again = module_from_json(mod.to_json())
    assert again.generators == mod.generators and again.n == 2
    with pytest.raises(ValueError):
        module_from_json({"generators": []})


# ---------------------------------------------------------------------------
# Initial modules
# ---------------------------------------------------------------------------


def test_initial_module_of_monomials_is_the_module():
    gens = [elem(2, (1, "x1 | e1")), elem(2, (1, "x2 | e1"))]
    init = initial_module_truncated(gens, 2, 4)
    assert init.truncated and init.window == (2, 4)
    assert set(init.generators) == {mono("x1 | e1"), mono("x2 | e1")}


def test_initial_module_sum_example_p2():
    # x2 kills the second term, so x2^x1 (x) e1 = x2 . (x1 (x) e1 + x2 (x) e2) is in the span too
    init = initial_module_truncated([elem(2, (1, "x1 | e1"), (1, "x2 | e2"))], 2, 4)
    assert set(init.generators) == {mono("x2 | e2"), mono("x2^x1 | e1")}


def test_initial_module_sum_example_p3():
    # over F_3 the differences of translates reach x1 (x) e1 itself
    init = initial_module_truncated([elem(3, (1, "x1 | e1"), (1, "x2 | e2"))], 2, 4)
    assert init.generators == (mono("x1 | e1"),)


def test_initial_module_edge_cases():
    assert initial_module_truncated([], 2, 3).generators == ()
    with pytest.raises(ValueError):
        initial_module_truncated([elem(2, (1, "x5 | e1"))], 2, 3)


# ---------------------------------------------------------------------------
# ACC
# ---------------------------------------------------------------------------


def test_acc_examples():
    g = mono("x2 | e1")
    assert acc_experiment(constant_chain([g]), 1, 10).stabilization_index == 1
    assert acc_experiment(translate_chain(g), 1, 10).stabilization_index == 1


def test_acc_random_chains_stabilize_verifiably():
    limit = window_monomials(1, 3, 6)
    for seed in range(10):
        rep = acc_experiment(random_chain(seed), 1, 64, limit=limit)
        assert not rep.cap_reached and rep.verified
        assert rep.stabilization_index == rep.saturation_step + 1 == rep.escapes[-1] + 1


def test_acc_limit_on_constant_chain():
    g = mono("x2 | e1")
    assert acc_experiment(constant_chain([g]), 1, 5, limit=[g]).verified
    rep = acc_experiment(constant_chain([g]), 1, 5, limit=[mono("x1 | e1")])
    assert rep.verified is False and rep.saturation_step is None


def test_acc_reports_cap():
    # pure tensors with different equality patterns never reach each other
    patterns = [(1, 1, 1), (1, 1, 2), (1, 2, 1), (2, 1, 1), (1, 2, 3)]
    rep = acc_experiment(lambda step: [PModMonomial((), patterns[step])], 3, 4)
    assert rep.escapes == [0, 1, 2, 3, 4]
    assert rep.cap_reached and rep.stabilization_index is None


# ---------------------------------------------------------------------------
# Properties
# ---------------------------------------------------------------------------


def monomials(n: int, index_cap: int = 5, degree_cap: int = 3):
    return st.integers(0, 10 ** 6).map(lambda s: random_monomial(random.Random(s), n, index_cap, degree_cap))


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 2).flatmap(lambda n: st.tuples(monomials(n), monomials(n))), st.integers(0, 10 ** 6))
def test_order_is_compatible_with_disjoint_multiplication(pair, seed):
    a, b = pair
    assume(a != b)
    used = set(a.wedge) | set(b.wedge)
    free = [i for i in range(1, 9) if i not in used]
    u = random.Random(seed).sample(free, random.randint(1, 2))
    _, ua = multiply_wedge(u, a)
    _, ub = multiply_wedge(u, b)
    assert compare(ua, ub) == compare(a, b)


@settings(max_examples=100, deadline=None)
@given(st.lists(monomials(1, 4, 2), min_size=1, max_size=3), monomials(1, 5, 3))
def test_membership_matches_orbit_enumeration(gens, m):
    mod = MonomialModule(1, tuple(gens))
    closure = orbit_closure(gens, 3, max(m.max_index(), 1))
    assert mod.contains(m) == (m in closure)


@settings(max_examples=60, deadline=None)
@given(st.lists(monomials(1, 4, 2), min_size=1, max_size=2), st.lists(monomials(1, 4, 2), max_size=2))
def test_psi_transfer_preserves_membership_and_inclusion(small, extra):
    window = (3, 5)
    big = small + extra
    p_small = orbit_closure(small, *window)
    p_big = orbit_closure(big, *window)
    q_small = q_orbit_closure([psi(g) for g in small], *window)
    q_big = q_orbit_closure([psi(g) for g in big], *window)
    assert {psi(m) for m in p_small} == q_small
    assert {psi(m) for m in p_big} == q_big
    assert p_small <= p_big and q_small <= q_big
    assert (p_small == p_big) == (q_small == q_big)
    assert (p_small == p_big) == MonomialModule(1, tuple(small)).contains_module(MonomialModule(1, tuple(big)))


def random_element(seed: int, p: int, n: int = 1, index_cap: int = 3, degree_cap: int = 2) -> PModElement:
    rng = random.Random(seed)
    terms = {random_monomial(rng, n, index_cap, degree_cap): rng.randint(1, p - 1) for _ in range(rng.randint(1, 3))}
    return PModElement(p, terms)


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 10 ** 6), st.sampled_from([2, 3]), st.integers(0, 10 ** 6))
def test_initial_term_commutes_with_inc(seed, p, sseed):
    v = random_element(seed, p, n=2, index_cap=5, degree_cap=3)
    assume(not v.is_zero())
    image = sorted(random.Random(sseed).sample(range(1, 12), 5))
    sigma = dict(zip(range(1, 6), image))
    c, m = initial_term(v)
    assert initial_term(v.apply(sigma)) == (c, inc_apply(sigma, m))


def span_dimension(elements, window, p) -> int:
    span = inc_span(elements, *window)
    cols = sorted({m for v in span for m in v.terms}, key=PModMonomial.key)
    mat = np.array([[v.terms.get(m, 0) for m in cols] for v in span], dtype=np.int64).reshape(len(span), len(cols))
    return linalg.rank(mat, p)


def leading_set(elements, window, p) -> set:
    raw = [{m.key(): c for m, c in g.terms.items()} for g in elements]
    return {PModMonomial(w, t) for w, t in windowed_leading_monomials(raw, *window, p)}


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 10 ** 6), st.integers(0, 10 ** 6), st.sampled_from([2, 3]))
def test_initial_modules_detect_strict_inclusion(seed_a, seed_b, p):
    window = (2, 3)
    small = [random_element(seed_a, p)]
    big = small + [random_element(seed_b, p)]
    assume(not any(g.is_zero() for g in big))
    init_small = initial_module_truncated(small, *window)
    init_big = initial_module_truncated(big, *window)
    lead_small = leading_set(small, window, p)
    lead_big = leading_set(big, window, p)
    # the windowed span is not Inc-closed at the boundary, so the leading set
    # sits between the minimized init generators and their window closure
    for init, lead in ((init_small, lead_small), (init_big, lead_big)):
        assert set(init.generators) <= lead <= orbit_closure(init.generators, *window)
    assert lead_small <= lead_big
    assert init_big.contains_module(init_small)
    dims = [span_dimension(gens, window, p) for gens in (small, big)]
    assert (len(lead_small), len(lead_big)) == tuple(dims)
    assert (lead_small < lead_big) == (dims[0] < dims[1])


def test_increasing_maps_count():
    assert len(list(increasing_maps((1, 3), 4))) == 3
