import math

import pytest
from hypothesis import given, strategies as st

from dyerlashof.classify import (
    ClassificationError,
    ThhRing,
    classification_table,
    comparison_collapse,
    comparison_image,
    format_table,
    orbit_count,
    postnikov_classes,
)


@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_hz_counts(p):
    assert postnikov_classes("HZ", p, 3).count == 1
    assert postnikov_classes("HZ", p, 4).count == 2
    r = postnikov_classes("HZ", p, 0)
    assert r.count == 2
    assert r.annotations == ["HΛ_{F_p}(x_0)", "HZ/p^2"]


def test_representatives():
    assert postnikov_classes("HZ", 3, 4).representatives == ["0", "sigma2^3"]
    assert postnikov_classes("S", 3, 4).representatives == ["0", "gamma3"]
    assert postnikov_classes("HZ", 3, 1).representatives == ["0"]


def test_s_counts_follow_the_ring():
    r = postnikov_classes("S", 3, 2)
    assert r.count == 2
    assert "transposed" in r.note
    assert postnikov_classes("S", 3, 3).count == 1


def test_bad_input():
    with pytest.raises(ClassificationError):
        postnikov_classes("HZ", 2, -1)
    with pytest.raises(ClassificationError):
        postnikov_classes("ku", 2, 1)
    with pytest.raises(ClassificationError):
        ThhRing("polynomial", 4)


@pytest.mark.parametrize("p,n,verdict", [(2, 2, "COLLAPSE"), (3, 4, "COLLAPSE"), (5, 2, "NO COLLAPSE")])
def test_collapse_examples(p, n, verdict):
    v = comparison_collapse(p, n)
    assert v.label == verdict


def test_collapse_images():
    assert comparison_collapse(2, 2).image_coefficient == 0
    assert comparison_collapse(3, 4).image_coefficient == 0
    assert comparison_collapse(5, 2).image_coefficient == 2
    assert comparison_collapse(3, 4).provenance == "paper"
    assert comparison_collapse(3, 6).provenance == "derived"


@pytest.mark.parametrize("n", [-2, 0, 1, 3])
def test_collapse_rejects(n):
    with pytest.raises(ClassificationError):
        comparison_collapse(3, n)


@pytest.mark.parametrize("p", [2, 3, 5])
def test_module_ranks_agree(p):
    a, b = ThhRing("polynomial", p, 40), ThhRing("divided", p, 40)
    assert [a.dimension(d) for d in range(41)] == [b.dimension(d) for d in range(41)]


@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_divided_power_relation(p):
    for k in range(2 * p + 1):
        c = comparison_image(p, k)
        assert c == math.factorial(k) % p
        assert (c == 0) == (k >= p)


@given(st.sampled_from([2, 3, 5]), st.integers(0, 8), st.integers(0, 8))
def test_comparison_is_a_ring_map(p, a, b):
    # phi(sigma^a sigma^b) = phi(sigma^a) phi(sigma^b) in Gamma: a! b! binom(a+b, a) = (a+b)!
    G = ThhRing("divided", p, 2 * (a + b))
    lhs = comparison_image(p, a + b)
    rhs = comparison_image(p, a) * comparison_image(p, b) * G.multiply(a, b) % p
    assert lhs == rhs


@pytest.mark.parametrize("p", [2, 3, 5])
def test_orbit_formula(p):
    for n in range(21):
        dim = ThhRing("polynomial", p, n + 2).dimension(n + 2)
        assert postnikov_classes("HZ", p, n).count == orbit_count(p, dim) == (2 if dim else 1)


def test_table_and_format():
    rows = classification_table(2, 6)
    assert rows[2]["collapse"]["verdict"] == "COLLAPSE"
    text = format_table(2, rows)
    assert "COLLAPSE (0 gamma2, paper)" in text
