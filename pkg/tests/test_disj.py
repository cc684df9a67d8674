import itertools

import pytest
from hypothesis import given, strategies as st

from ordlab.disj import Disj, cantor, disj, embed_from_chain
from ordlab.errors import WitnessError
from ordlab.orders import (Finite, Omega, OmegaPower, OmegaStar, check_embedding, enumerate_prefix,
                           find_descending, member, order_size)
from ordlab.sexpr import parse_order

from oracles import cantor_pair, descending_chains


def test_cantor_matches_oracle():
    for x, y in itertools.product(range(20), repeat=2):
        assert cantor(x, y) == cantor_pair(x, y)
    assert len({cantor(x, y) for x, y in itertools.product(range(30), repeat=2)}) == 900


def test_empty_and_singleton():
    assert order_size(disj(Finite(()), Finite(()))) == 0
    d = disj(Finite((0,)), Finite((0,)))
    assert enumerate_prefix(d, 5) == [((0, 0),)]


def test_membership_examples():
    d = disj(Finite((0, 1)), Finite((0, 1)))
    assert member(d, [(1, 1), (0, 0)])
    assert not member(d, [(0, 1), (1, 0)])
    assert not member(d, [])


def test_proper_extension_is_smaller():
    d = disj(Finite((0, 1)), Finite((0, 1)))
    assert d.less(((1, 1), (0, 0)), ((1, 1),))
    assert not d.less(((1, 1),), ((1, 1), (0, 0)))


FINITE = [Finite(tuple(range(n))) for n in range(5)]


@pytest.mark.parametrize("a,b", list(itertools.product(FINITE, repeat=2)),
                         ids=lambda o: o.to_sexpr())
def test_disj_of_finite_orders_is_finite_total_order(a, b):
    d = disj(a, b)
    expected = set(descending_chains(list(a.elems), list(b.elems), 4))
    elems = enumerate_prefix(d, 10_000)
    assert set(elems) == expected
    assert order_size(d) == len(expected)
    for x in elems:
        assert not d.less(x, x)
    for x, y in itertools.combinations(elems, 2):
        assert d.less(x, y) != d.less(y, x)
    if len(elems) <= 40:
        for x, y, z in itertools.permutations(elems, 3):
            if d.less(x, y) and d.less(y, z):
                assert d.less(x, z)


@given(st.lists(st.tuples(st.integers(0, 3), st.integers(0, 3)), min_size=1, max_size=4))
def test_membership_agrees_with_exhaustive_descent(chain):
    a = b = Finite((0, 1, 2, 3))
    expected = tuple(chain) in set(descending_chains([0, 1, 2, 3], [0, 1, 2, 3], 4))
    assert Disj(a, b).member(tuple(chain)) == expected


def test_sexpr_round_trip():
    d = disj(Omega(), OmegaStar())
    assert parse_order(d.to_sexpr()) == d
    for x in enumerate_prefix(d, 30):
        assert d.decode(d.encode(x)) == x


# -- embeddings ------------------------------------------------------------------

def test_embed_single_element():
    f = embed_from_chain(Finite((0,)), OmegaStar(), iter(range(100)), 1)
    assert f == {0: ((0, 0),)}


def test_embed_case_one_new_maximum():
    a = Finite((5, 7))
    f = embed_from_chain(a, OmegaStar(), iter(range(100)), 2)
    d = Disj(a, OmegaStar())
    assert len(f[7]) == 1
    assert d.pair_code(f[7][0]) > d.pair_code(f[5][0])
    assert check_embedding(f, a, d)


def test_embed_case_two_extends_chain():
    a = Finite((5, 7))
    f = embed_from_chain(a, OmegaStar(), iter(range(100)), 2, elements=[7, 5])
    assert f[7] == ((7, 0),)
    assert f[5][:-1] == f[7] and len(f[5]) == 2
    assert check_embedding(f, a, Disj(a, OmegaStar()))


def test_embed_rejects_non_descending_chain():
    # listing the elements downwards forces one new chain index per element
    down = list(range(9, -1, -1))
    with pytest.raises(WitnessError):
        embed_from_chain(Omega(), OmegaStar(), iter([0, 1, 1, 2, 3, 4, 5]), 10, elements=down)
    with pytest.raises(WitnessError):
        embed_from_chain(Omega(), OmegaStar(), iter([0, 1]), 10, elements=down)


def test_chain_is_read_lazily():
    # only the indices actually used are validated
    f = embed_from_chain(Omega(), OmegaStar(), iter([0, 0]), 5)
    assert len(f) == 5


@pytest.mark.parametrize("a", [Omega(), OmegaPower(Finite((0,))), OmegaPower(Finite((0, 1)))],
                         ids=lambda o: o.to_sexpr())
@pytest.mark.parametrize("prefix", [1, 7, 25, 50])
def test_embedding_from_witness_chain(a, prefix):
    b = OmegaStar()
    assert find_descending(b, prefix) is not None
    f = embed_from_chain(a, b, b.descend(), prefix)
    assert len(f) == prefix
    assert check_embedding(f, a, Disj(a, b))


@given(st.permutations(list(range(8))))
def test_embedding_for_any_listing(listing):
    a = Finite(tuple(range(8)))
    f = embed_from_chain(a, OmegaStar(), iter(range(10_000)), 8, elements=listing)
    assert check_embedding(f, a, Disj(a, OmegaStar()))
