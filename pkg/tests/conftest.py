import pytest
from hypothesis import settings, strategies as st

from dyerlashof.dual_steenrod import SteenrodDual
from dyerlashof.fp_graded import AlgElement, FreeAlgebra

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


@pytest.fixture(scope="session")
def sd2():
    return SteenrodDual(2, 31)


@pytest.fixture(scope="session")
def sd3():
    return SteenrodDual(3, 18)


def mixed_algebra(p):
    """Two even and two odd generators (exterior at odd p), small bound."""
    return FreeAlgebra(p, [("a", 1), ("b", 2), ("c", 3), ("d", 4)], 12)


@st.composite
def homogeneous(draw, algebra, max_degree=None):
    top = algebra.bound if max_degree is None else max_degree
    d = draw(st.integers(0, top))
    basis = algebra.basis(d)
    if not basis:
        return algebra.zero()
    coeffs = draw(st.lists(st.integers(0, algebra.p - 1), min_size=len(basis), max_size=len(basis)))
    return algebra.from_vector(coeffs, d)


@st.composite
def element(draw, algebra, max_degree=None):
    parts = draw(st.lists(homogeneous(algebra, max_degree), max_size=3))
    out = algebra.zero()
    for x in parts:
        out = out + x
    return out
