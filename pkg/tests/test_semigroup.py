"""Composition, action, and projection of the three nested semigroups.

Word order is load-bearing everywhere else in the package: the product
xy must act as "x first, then y", and every relation between the step
generators below is what makes the flow DPs correct.
"""

from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from signflows.errors import InvalidParameter, InvariantViolation
from signflows.semigroup import (
    G1_UNIT,
    G2_UNIT,
    G3_UNIT,
    G1Element,
    G2Element,
    G3Element,
    STEP_DOWN,
    STEP_UP,
    STEP_UP_STICKY,
    act,
    compose,
    element_from_json,
    element_to_json,
    is_unit,
    project,
    trap_step_down,
)

small = st.integers(min_value=-4, max_value=4)
barrier = st.integers(min_value=0, max_value=4)


def g2_elements():
    return st.tuples(st.integers(min_value=-4, max_value=8), barrier).filter(
        lambda ab: ab[0] + ab[1] >= 0).map(lambda ab: G2Element(*ab))


def g3_elements():
    return st.tuples(st.integers(min_value=-4, max_value=8), barrier,
                     st.integers(min_value=0, max_value=12)).filter(
        lambda abc: abc[0] + abc[1] >= 0).map(
        lambda abc: G3Element(abc[0], abc[1], min(abc[2], abc[0] + abc[1])))


class TestGeneratorRelations:
    """The one-step words that the flow laws are built from."""

    def test_up_then_down_is_unit(self):
        assert is_unit(compose(STEP_UP, STEP_DOWN))

    def test_sticky_then_down_is_unit(self):
        assert is_unit(compose(STEP_UP_STICKY, STEP_DOWN))

    def test_down_then_up_reflects(self):
        assert compose(STEP_DOWN, STEP_UP) == G3Element(0, 1, 0)

    def test_sticky_then_up_keeps_plateau(self):
        assert compose(STEP_UP_STICKY, STEP_UP) == G3Element(2, 0, 2)
        assert compose(STEP_UP_STICKY, STEP_UP_STICKY) == G3Element(2, 0, 2)

    def test_trap_generator_shape(self):
        assert trap_step_down(3) == G3Element(-1, 3, 0)
        with pytest.raises(InvalidParameter):
            trap_step_down(0)


class TestComposition:
    """Associativity and unit laws, exhaustive and randomized."""

    def test_g2_associative_exhaustive(self):
        elems = [G2Element(a, b) for a in range(-2, 3) for b in range(0, 3)
                 if a + b >= 0]
        for x in elems:
            for y in elems:
                for z in elems:
                    assert compose(compose(x, y), z) == compose(x, compose(y, z))

    @given(g3_elements(), g3_elements(), g3_elements())
    def test_g3_associative(self, x, y, z):
        assert compose(compose(x, y), z) == compose(x, compose(y, z))

    @given(g3_elements())
    def test_units(self, x):
        assert compose(x, G3_UNIT) == x
        assert compose(G3_UNIT, x) == x
        assert compose(G1_UNIT, G1_UNIT) == G1_UNIT
        assert compose(G2_UNIT, G2_UNIT) == G2_UNIT

    def test_mixed_layers_rejected(self):
        with pytest.raises(InvalidParameter):
            compose(G2Element(0, 0), G3Element(0, 0, 0))

    def test_rational_flavor(self):
        x = G2Element(Fraction(-1, 2), Fraction(3, 4))
        y = G2Element(Fraction(1, 2), Fraction(1, 4))
        z = compose(x, y)
        assert z == G2Element(0, Fraction(3, 4))


class TestAction:
    """compose must stay faithful to function composition on the half line."""

    @given(g2_elements(), g2_elements(), st.integers(min_value=0, max_value=9))
    def test_g2_word_order(self, x, y, v):
        assert act(compose(x, y), v) == act(y, act(x, v))

    @given(g3_elements(), g3_elements(), st.integers(min_value=0, max_value=9))
    def test_g3_word_order(self, x, y, v):
        assert act(compose(x, y), v) == act(y, act(x, v))

    def test_plateau_values(self):
        x = G3Element(1, 2, 3)
        assert act(x, 0) == 3
        assert act(x, 2) == 3
        assert act(x, 3) == 4

    def test_negative_input_rejected(self):
        with pytest.raises(InvalidParameter):
            act(G3Element(0, 0, 0), -1)


class TestProjection:
    """Forgetting the plateau, then the barrier, is a homomorphism."""

    @given(g3_elements())
    def test_layers(self, x):
        y = project(x)
        assert isinstance(y, G2Element) and (y.a, y.b) == (x.a, x.b)
        z = project(y)
        assert isinstance(z, G1Element) and z.a == x.a

    @given(g3_elements(), g3_elements())
    def test_commutes_with_composition(self, x, y):
        assert project(compose(x, y)) == compose(project(x), project(y))
        assert project(project(compose(x, y))) == compose(
            project(project(x)), project(project(y)))

    def test_nothing_below_g1(self):
        with pytest.raises(InvalidParameter):
            project(G1Element(0))


class TestValidation:
    """Malformed elements must fail at construction, not during a DP."""

    def test_negative_barrier(self):
        with pytest.raises(InvariantViolation):
            G2Element(0, -1)

    def test_barrier_image_below_zero(self):
        with pytest.raises(InvariantViolation):
            G2Element(-2, 1)

    def test_negative_plateau(self):
        with pytest.raises(InvariantViolation):
            G3Element(0, 0, -1)

    def test_plateau_above_image(self):
        with pytest.raises(InvariantViolation):
            G3Element(1, 0, 2)

    def test_frozen(self):
        x = G2Element(1, 0)
        with pytest.raises(Exception):
            x.a = 2


class TestSerialization:
    """Elements round-trip through their list form."""

    @given(g3_elements())
    def test_g3_round_trip(self, x):
        assert element_from_json(element_to_json(x)) == x

    @given(g2_elements())
    def test_g2_round_trip(self, x):
        assert element_from_json(element_to_json(x)) == x

    def test_shapes(self):
        assert element_to_json(G1Element(3)) == [3]
        assert element_to_json(G2Element(1, 2)) == [1, 2]
        assert element_to_json(G3Element(1, 2, 3)) == [1, 2, 3]
