import random

import pytest
from hypothesis import given, settings, strategies as st

from dyerlashof.dual_steenrod import SteenrodDual
from dyerlashof.fp_graded import FreeAlgebra, GradedIdeal, Quotient
from dyerlashof.r_algebra import (
    AlgebraPresentation,
    ExtendedModule,
    GradedModule,
    PresentationError,
    SearchBudgetExceeded,
    check_morphism,
    compose,
    extend_and_transfer,
    find_isomorphisms,
    from_dual_steenrod,
    invert_map,
    kill_element,
    module_from_presentation,
    postnikov_truncate,
    random_module,
    tor_exterior,
)
from dyerlashof.scenarios import counterexample_transfer, direct_example_ring, example_pair, toy_transfer


@pytest.fixture(scope="module")
def pair2():
    return example_pair(2)


@pytest.fixture(scope="module")
def pair3():
    return example_pair(3)


def test_truncation_p2():
    A = from_dual_steenrod(SteenrodDual(2, 31))
    P = postnikov_truncate(A, 3)
    F = FreeAlgebra(2, [("xi1", 1), ("xi2", 3)], 3)
    x1, x2 = F.gen("xi1"), F.gen("xi2")
    assert P.free == F
    assert P.quotient.ideal.same_as(GradedIdeal(F, [x1**4, x2**2, x1 * x2]))
    assert postnikov_truncate(A, 0).poincare_series() == [1]
    assert postnikov_truncate(A, A.bound).poincare_series() == A.poincare_series()


def test_truncation_drops_high_operation_data():
    A = from_dual_steenrod(SteenrodDual(2, 31))
    assert len(postnikov_truncate(A, 3).q_data) == 1
    assert len(postnikov_truncate(A, 2).q_data) == 0


def test_kill_p2(pair2):
    X = pair2.killed
    assert X.poincare_series() == [1, 1, 1, 1]
    assert X.quotient.ideal.same_as(direct_example_ring(2).quotient.ideal)
    assert pair2.tor0_matches


def test_kill_p3(pair3):
    assert pair3.killed.poincare_series() == [1, 1, 0, 0, 1, 1]
    assert pair3.killed.quotient.ideal.same_as(direct_example_ring(3).quotient.ideal)


def test_kill_zero_is_identity(pair2):
    rep = kill_element(pair2.truncated, pair2.truncated.free.zero())
    assert rep.result is pair2.truncated


def test_kill_needs_top_degree(pair2):
    P = pair2.truncated
    with pytest.raises(PresentationError):
        kill_element(P, P.gen("xi1") ** 2)


def test_instability_checked_at_load():
    F = FreeAlgebra(2, [("x", 2)], 6)
    x = F.gen("x")
    with pytest.raises(PresentationError):
        AlgebraPresentation(F, [], [([(0, 1)], x, x)])
    with pytest.raises(PresentationError):
        AlgebraPresentation(F, [], [([(0, 2)], x, F.zero())])
    X = AlgebraPresentation(F, [], [([(0, 2)], x, x**2), ([(0, 1)], x, F.zero())])
    assert X.q_value([(0, 2)], x) == x**2
    with pytest.raises(PresentationError):
        AlgebraPresentation(F, [], [([(0, 3)], x, x**2)])


def test_identity_accepted(pair2):
    X = pair2.left
    ident = {g.name: X.gen(g.name) for g in X.free.generators}
    assert check_morphism(ident, X, X)


def test_identity_rejected_between_structures(pair2):
    X1, X2 = pair2.left, pair2.right
    ident = {g.name: X1.gen(g.name) for g in X1.free.generators}
    v = check_morphism(ident, X1, X2)
    assert not v
    assert (v.violation["kind"], v.violation["word"], v.violation["arg"]) == ("operation", "Q^2", "xi1")
    assert check_morphism(ident, X1.bare(), X2.bare())


def test_degree_mismatch_rejected(pair2):
    X = pair2.left
    with pytest.raises(PresentationError):
        check_morphism({"xi1": X.gen("xi1") ** 2, "xi2": X.gen("xi2")}, X, X)


@pytest.mark.parametrize("which", [2, 3])
def test_structures_not_isomorphic(which, pair2, pair3):
    pair = pair2 if which == 2 else pair3
    assert find_isomorphisms(pair.left, pair.right) == []
    assert find_isomorphisms(pair.right, pair.left) == []
    assert find_isomorphisms(pair.left.bare(), pair.right.bare())


def test_self_isomorphisms_contain_identity(pair3):
    X = pair3.left
    ident = {g.name: X.reduce(X.gen(g.name)) for g in X.free.generators}
    assert ident in find_isomorphisms(X, X)


def test_search_budget():
    F = FreeAlgebra(3, [("a", 2), ("b", 2), ("c", 2)], 2)
    X = AlgebraPresentation(F)
    with pytest.raises(SearchBudgetExceeded) as exc:
        find_isomorphisms(X, X, budget=100)
    assert exc.value.size == 27**3


@pytest.mark.parametrize("which", [2, 3])
def test_iso_search_soundness(which, pair2, pair3):
    pair = pair2 if which == 2 else pair3
    for X, Y in ((pair.left, pair.left), (pair.left.bare(), pair.right.bare())):
        for f in find_isomorphisms(X, Y):
            inv = invert_map(f, X, Y)
            assert check_morphism(f, X, Y)
            assert check_morphism(inv, Y, X)
            there_and_back = compose(f, inv, X, Y, X)
            assert all(X.reduce(there_and_back[g] - X.gen(g)).is_zero() for g in there_and_back)
            back_and_there = compose(inv, f, Y, X, Y)
            assert all(Y.reduce(back_and_there[g] - Y.gen(g)).is_zero() for g in back_and_there)


def test_tor_free_and_trivial():
    n = 3
    free = GradedModule(3, n, [1, 0, 0, 1], {0: [[1]]})
    assert {k: v for k, v in tor_exterior(free, n, 3, 12).items() if v} == {(0, 0): 1}
    triv = GradedModule(3, n, [1])
    assert {k: v for k, v in tor_exterior(triv, n, 3, 12).items() if v} == {(k, 3 * k): 1 for k in range(4)}


def test_tor_needs_data():
    M = GradedModule(2, 2, [1, 0, 1], {0: [[1]]}, known_through=2)
    with pytest.raises(PresentationError):
        tor_exterior(M, 2, 2, 6)


@settings(max_examples=20)
@given(st.integers(0, 10**6), st.sampled_from([2, 3, 5]), st.integers(1, 6))
def test_tor_band_on_random_modules(seed, p, n):
    M = random_module(random.Random(seed), p, n, top=14)
    M.check()
    tor = tor_exterior(M, n, 3, 14)
    assert all(v == 0 for (k, l), v in tor.items() if k > 0 and l < n)
    assert all(v >= 0 for v in tor.values())


def test_kill_agrees_with_ideal_quotient_on_random_algebras():
    rng = random.Random(11)
    for _ in range(20):
        p = rng.choice([2, 3])
        n = rng.randint(3, 6)
        F = FreeAlgebra(p, [("a", rng.randint(1, 2)), ("b", rng.randint(2, n))], n)
        X = AlgebraPresentation(F)
        basis = X.quotient.basis(n)
        if not basis:
            continue
        x = X.quotient.from_vector([rng.randrange(p) for _ in basis], n)
        rep = kill_element(X, x)
        direct = Quotient(F, [x]) if x else X.quotient
        assert rep.result.poincare_series() == direct.poincare_series()
        assert rep.tor0_matches


def test_extended_module_maps(pair2):
    E = ExtendedModule(pair2.right)
    X = pair2.right
    for d in range(X.bound + 1):
        for m in X.quotient.basis(d):
            x = X.free.monomial_element(m)
            assert E.mu(E.eta(x)) == X.reduce(x)
    assert E.mu(E.a(E.A.xi(1))) == X.free.zero()


def test_transfer_certificate():
    X, phi, psi = toy_transfer(3)
    r = extend_and_transfer(X, X, phi, psi)
    assert r.verdict == "certificate"
    assert all(s.holds for s in r.steps)
    assert r.y1_zero


def test_transfer_counterexample():
    X1, X2, phi, psi = counterexample_transfer()
    r = extend_and_transfer(X1, X2, phi, psi)
    assert r.verdict == "counterexample"
    assert r.first_failure.equation == "μ_Y∘ψ(τ_0⊗1) = 0"
    assert not r.y1_zero


def test_transfer_rejects_non_unital_psi():
    X, phi, psi = toy_transfer(3)
    E = ExtendedModule(X)
    bad = dict(psi, **{"x:taubar1": E.free.zero()})
    with pytest.raises(PresentationError):
        extend_and_transfer(X, X, phi, bad)
