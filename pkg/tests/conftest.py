from fractions import Fraction

from hypothesis import settings, strategies as st

from latticestat.density import AP, SQUARES, Cofinite, Complement, Finite, Intersection, Union
from latticestat.lattice import LatticeVector, finite
from latticestat.operators import Operator
from latticestat.ratfunc import Poly, RationalFunction

settings.register_profile("repo", deadline=None, max_examples=60)
settings.load_profile("repo")

rationals = st.builds(Fraction, st.integers(-20, 20), st.sampled_from([1, 2, 3, 4]))
small_ints = st.integers(1, 40)


def matrices(m, k, elems=rationals):
    return st.lists(st.lists(elems, min_size=k, max_size=k), min_size=m, max_size=m).map(
        lambda rows: Operator.from_rows(rows, finite(k), finite(m))
    )


@st.composite
def any_matrix(draw, max_dim=3):
    m, k = draw(st.integers(1, max_dim)), draw(st.integers(1, max_dim))
    return draw(matrices(m, k))


@st.composite
def matrix_pair(draw, max_dim=4):
    m, k = draw(st.integers(1, max_dim)), draw(st.integers(1, max_dim))
    return draw(matrices(m, k)), draw(matrices(m, k))


def positive_vectors(k):
    return st.lists(st.builds(Fraction, st.integers(0, 10), st.sampled_from([1, 2, 3])), min_size=k, max_size=k).map(
        lambda xs: LatticeVector(finite(k), xs)
    )


atoms = st.one_of(
    st.lists(small_ints, max_size=4).map(Finite),
    st.lists(small_ints, max_size=3).map(Cofinite),
    st.builds(AP, st.integers(1, 6), st.integers(1, 5)),
    st.just(SQUARES),
)

index_sets = st.recursive(
    atoms,
    lambda inner: st.one_of(
        st.builds(Union, inner, inner),
        st.builds(Intersection, inner, inner),
        st.builds(Complement, inner),
    ),
    max_leaves=5,
)


@st.composite
def rational_functions(draw):
    num = draw(st.lists(rationals, min_size=1, max_size=4))
    den = draw(st.lists(rationals, min_size=1, max_size=3))
    if all(x == 0 for x in den):
        den = [Fraction(1)]
    f = RationalFunction(Poly(num), Poly(den))
    if not f.pole_free():
        f = RationalFunction(Poly(num), Poly([1]))
    return f


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "CRITERIA", None)
    if not lines:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(lines):
        terminalreporter.write_line(lines[k])
