import pytest
from hypothesis import given, strategies as st

from dyerlashof.dual_steenrod import SteenrodDual
from dyerlashof.fp_graded import FreeAlgebra
from dyerlashof.op_expr import act, ActionContext
from dyerlashof.op_expr.words import excess, is_admissible, op_degree, passes_excess_gate, word_degree
from dyerlashof.unstable_free import (
    brute_force_generators,
    enumerate_generators,
    first_difference,
    free_poincare,
    free_unstable_poincare,
    lowest_new_generator,
    subalgebra_poincare,
)


@pytest.mark.parametrize("p,n", [(2, 1), (2, 4), (3, 1), (3, 6), (5, 9)])
def test_truncation_is_exterior(p, n):
    gens = enumerate_generators(p, [("x", n)], n)
    assert [g.text for g in gens] == ["x"]


def test_empty_generators():
    assert enumerate_generators(3, [], 10) == []
    assert free_unstable_poincare(3, [], 4) == [1, 0, 0, 0, 0]


def test_single_even_generator():
    assert free_unstable_poincare(3, [("x", 2)], 2) == [1, 0, 1]


def test_lowest_new_generator_p3():
    g = lowest_new_generator(3, [("zeta1", 4), ("taubar1", 5)], 16)
    assert (g.text, g.degree, g.parity) == ("b Q^3 zeta1", 15, "odd")


def test_series_against_integral_homology_p3():
    bound = 16
    series = free_unstable_poincare(3, [("zeta1", 4), ("taubar1", 5)], bound)
    target = free_poincare(3, [4, 5, 16], bound)
    assert series[:15] == target[:15]
    assert first_difference(series, target) == 15


def test_degree_bound_respected():
    for g in enumerate_generators(2, [("x", 1), ("y", 3)], 12):
        assert g.degree <= 12
        assert g.degree == g.atom.degree + word_degree(2, g.word)


@pytest.mark.parametrize("p,gens,bound", [
    (2, [("x", 1)], 14),
    (2, [("x", 2), ("y", 3)], 12),
    (3, [("zeta1", 4), ("taubar1", 5)], 18),
    (3, [("t", 1)], 20),
    (5, [("t", 1), ("x", 8)], 40),
])
def test_enumeration_matches_brute_force(p, gens, bound):
    fast = [(g.word, g.atom.name) for g in enumerate_generators(p, gens, bound)]
    slow = [(g.word, g.atom.name) for g in brute_force_generators(p, gens, bound)]
    assert fast == slow
    assert len(set(fast)) == len(fast)


@given(st.sampled_from([2, 3]), st.integers(1, 6), st.integers(4, 16), st.integers(1, 8))
def test_monotone_in_bound(p, deg, n, extra):
    small = enumerate_generators(p, [("x", deg)], n)
    big = [g for g in enumerate_generators(p, [("x", deg)], n + extra) if g.degree <= n]
    assert small == big


@given(st.sampled_from([2, 3]), st.integers(1, 7))
def test_excess_gate_per_word(p, deg):
    for g in enumerate_generators(p, [("x", deg)], 30):
        if not g.word:
            continue
        assert is_admissible(p, g.word)
        e1, s1 = g.word[0]
        below = g.degree - op_degree(p, g.word[0])
        lead = s1 if p == 2 else 2 * s1 - e1
        assert below < lead + (0 if p == 2 else e1)
        assert passes_excess_gate(p, g.word, deg)


def test_parity_rule():
    for g in enumerate_generators(3, [("t", 1), ("x", 4)], 20):
        assert g.parity == ("odd" if g.degree % 2 else "even")


def test_rejected_boundary_words_are_powers():
    # words failing the gate with equality are p-th powers of their tails, never new generators
    p = 2
    A = FreeAlgebra(p, [("x", 3)], 12)
    ctx = ActionContext(A, lambda w, g: None)
    x = A.gen("x")
    assert not passes_excess_gate(p, ((0, 3),), 3)
    assert act(ctx, [(0, 3)], x) == x**2
    p = 3
    B = FreeAlgebra(p, [("z", 4)], 12)
    ctx = ActionContext(B, lambda w, g: None)
    assert act(ctx, [(0, 2)], B.gen("z")) == B.gen("z") ** 3


def test_integral_subalgebras_are_free():
    sd = SteenrodDual(2, 15)
    elems = [sd.xi(1) ** 2] + [sd.zeta(i) for i in range(2, 5)]
    span, free = subalgebra_poincare(elems, 15)
    assert span == free
    sd3 = SteenrodDual(3, 18)
    elems = [sd3.zeta(1), sd3.taubar(1), sd3.zeta(2), sd3.taubar(2)]
    span, free = subalgebra_poincare(elems, 18)
    assert span == free

