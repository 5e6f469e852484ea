import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from glwedge.partitions import (
    Partition,
    check_prime,
    conjugate,
    enumerate_partitions,
    format_partition,
    is_p_restricted,
    parse_partition,
    partition_count,
    steinberg_decompose,
)

from oracles import all_partitions, steinberg_layers_by_search


def test_partition_normalizes_and_validates():
    assert Partition([2, 1, 0]) == (2, 1)
    assert Partition(()).size == 0
    with pytest.raises(ValueError):
        Partition([1, 2])
    with pytest.raises(ValueError):
        Partition([2, -1])


@pytest.mark.parametrize("lam,p,expected", [((2, 1), 2, True), ((2,), 2, False), ((), 2, True), ((), 5, True)])
def test_is_p_restricted_examples(lam, p, expected):
    assert is_p_restricted(lam, p) is expected


@pytest.mark.parametrize("lam,p,layers", [
    ((4, 2), 2, [(), (2, 1)]),
    ((1,), 2, [(1,)]),
    ((1,), 3, [(1,)]),
    ((2,), 2, [(), (1,)]),
    ((), 3, []),
])
def test_steinberg_examples(lam, p, layers):
    assert [tuple(x) for x in steinberg_decompose(lam, p).layers] == layers


def test_steinberg_unique_and_matches_search():
    for n in range(9):
        for lam in all_partitions(n):
            for p in (2, 3):
                found = steinberg_layers_by_search(lam, p)
                ours = [tuple(x) for x in steinberg_decompose(lam, p).layers]
                assert len(found) == 1, (lam, p, found)
                trimmed = list(found[0])
                while trimmed and not trimmed[-1]:
                    trimmed.pop()
                assert ours == trimmed, (lam, p)


def test_conjugate_examples():
    assert conjugate((3, 1)) == (2, 1, 1)
    assert conjugate(()) == ()
    assert conjugate((1, 1, 1)) == (3,)


def test_enumerate_partitions_examples():
    assert enumerate_partitions(0) == [()]
    assert enumerate_partitions(2) == [(), (1,), (2,), (1, 1)]
    assert len(enumerate_partitions(3)) == 7
    assert [partition_count(n) for n in range(8)] == [1, 1, 2, 3, 5, 7, 11, 15]


def test_text_form_round_trip():
    assert format_partition((4, 2)) == "[4,2]"
    assert format_partition(()) == "[]"
    assert parse_partition("[4,2]") == (4, 2)
    assert parse_partition("[]") == ()
    with pytest.raises(ValueError):
        parse_partition("[1,x]")


def test_check_prime():
    assert check_prime(3) == 3
    for bad in (0, 1, 4, 9):
        with pytest.raises(ValueError):
            check_prime(bad)


partitions_up_to_10 = st.integers(0, 10).flatmap(lambda n: st.sampled_from(list(all_partitions(n))))


@settings(max_examples=200, deadline=None)
@given(partitions_up_to_10, st.sampled_from([2, 3, 5]))
def test_steinberg_reconstructs_with_restricted_layers(lam, p):
    dec = steinberg_decompose(lam, p)
    assert dec.reconstruct() == lam
    assert all(is_p_restricted(x, p) for x in dec.layers)
    assert (list(dec.layers) == [Partition(lam)]) == (is_p_restricted(lam, p) and bool(lam))


@settings(max_examples=100, deadline=None)
@given(partitions_up_to_10)
def test_conjugate_is_an_involution(lam):
    assert conjugate(conjugate(lam)) == lam
    assert conjugate(lam).size == sum(lam)
