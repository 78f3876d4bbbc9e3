import itertools
import math

import pytest
from hypothesis import given, settings, strategies as st

from dyerlashof.op_expr.words import (
    AdmissibleSequence,
    WordError,
    adem_normalize,
    adem_pair,
    excess,
    first_inadmissible,
    is_admissible,
    make_word,
    op_degree,
    pair_admissible,
    passes_excess_gate,
    word_degree,
)


def test_degrees_and_excess():
    assert excess(2, make_word(2, [2])) == 2
    assert excess(2, make_word(2, [2, 1])) == 1
    assert op_degree(3, (1, 3)) == 11
    assert 4 + op_degree(3, (1, 3)) == 2 * 9 - 3
    assert excess(2, ()) == math.inf
    seq = AdmissibleSequence.of(3, [(1, 3), (0, 1)])
    assert seq.degree == 11 + 4
    assert seq.is_admissible
    assert str(seq) == "b Q^3 Q^1"


def test_make_word():
    assert make_word(2, [3, 1]) == ((0, 3), (0, 1))
    with pytest.raises(WordError):
        make_word(2, [(1, 1)])
    with pytest.raises(WordError):
        make_word(3, [(2, 1)])


def test_admissibility_inequalities():
    assert pair_admissible(2, (0, 2), (0, 1))
    assert not pair_admissible(2, (0, 3), (0, 1))
    # odd p: s_j <= p s_{j+1} - e_{j+1}
    assert pair_admissible(3, (0, 3), (0, 1))
    assert not pair_admissible(3, (0, 3), (1, 1))
    assert not pair_admissible(3, (0, 4), (0, 1))


def test_excess_gate():
    # Q^I x is a new generator when excess(I) + e_1 > |x|
    assert passes_excess_gate(3, ((1, 3),), 4)
    assert not passes_excess_gate(3, ((0, 2),), 4)
    assert passes_excess_gate(2, ((0, 2),), 1)
    assert not passes_excess_gate(2, ((0, 1),), 1)


def test_known_relations_p2():
    assert adem_normalize(2, ((0, 3), (0, 1))) == {}
    assert adem_normalize(2, ((0, 4), (0, 1))) == {((0, 3), (0, 2)): 1}
    assert adem_normalize(2, ((0, 6), (0, 2))) == {((0, 5), (0, 3)): 1}


def test_known_relations_p3():
    assert adem_normalize(3, ((0, 3), (1, 1))) == {((1, 3), (0, 1)): 1}
    assert adem_normalize(3, ((1, 3), (1, 1))) == {}


def test_admissible_pair_refused():
    with pytest.raises(WordError):
        adem_pair(2, (0, 2), (0, 1))


@pytest.mark.parametrize("r,s", [(r, s) for r in range(12) for s in range(12) if r <= 2 * s])
def test_admissible_unchanged_p2(r, s):
    w = ((0, r), (0, s))
    assert adem_normalize(2, w) == {w: 1}


def _all_pairs(p, top):
    eps = (0,) if p == 2 else (0, 1)
    for e1, s1, e2, s2 in itertools.product(eps, range(top + 1), eps, range(top + 1)):
        yield ((e1, s1), (e2, s2))


@pytest.mark.parametrize("p,top", [(2, 20), (3, 8)])
def test_termination_and_degree_on_all_pairs(p, top):
    for w in _all_pairs(p, top):
        out = adem_normalize(p, w)
        for v in out:
            assert is_admissible(p, v)
            assert word_degree(p, v) == word_degree(p, w)


def _word3(p, top):
    eps = st.just(0) if p == 2 else st.integers(0, 1)
    op = st.tuples(eps, st.integers(0, top))
    return st.tuples(op, op, op)


@settings(max_examples=250)
@given(_word3(2, 20))
def test_confluence_length3_p2(w):
    assert adem_normalize(2, w, "left") == adem_normalize(2, w, "right")


@settings(max_examples=250)
@given(_word3(3, 8))
def test_confluence_length3_p3(w):
    assert adem_normalize(3, w, "left") == adem_normalize(3, w, "right")


@given(st.sampled_from([2, 3]), st.data())
def test_rewrites_preserve_degree(p, data):
    w = data.draw(_word3(p, 12 if p == 2 else 6))
    for v in adem_normalize(p, w):
        assert word_degree(p, v) == word_degree(p, w)
        assert first_inadmissible(p, v) is None
