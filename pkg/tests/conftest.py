import sys
from fractions import Fraction
from pathlib import Path

from hypothesis import strategies as st

sys.path.insert(0, str(Path(__file__).parent))

from posmon.elements import Q, Q2, T, Z2, GroupElement

small_fractions = st.fractions(
    min_value=-50, max_value=50, max_denominator=40
)
positive_fractions = st.fractions(
    min_value=Fraction(1, 40), max_value=50, max_denominator=40
)


def rationals():
    return small_fractions.map(lambda f: GroupElement(Q, f))


def lex_ints(group=Z2):
    coords = st.tuples(*(st.integers(-100, 100) for _ in range(group.rank)))
    return coords.map(lambda c: GroupElement(group, c))


def lex_rationals(group=Q2):
    coords = st.tuples(*(small_fractions for _ in range(group.rank)))
    return coords.map(lambda c: GroupElement(group, c))


def triples():
    return st.tuples(small_fractions, small_fractions, small_fractions).map(
        lambda c: GroupElement(T, c)
    )


def elements_of(group):
    if group.kind == "Q":
        return rationals()
    if group.kind == "sqrt23":
        return triples()
    if group.rational_coords:
        return lex_rationals(group)
    return lex_ints(group)
