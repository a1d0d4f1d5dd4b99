"""Three nested transformation semigroups acting on the half line.

G1 holds the shifts x -> x + a.  G2 holds the shifted maxima
x -> a + max(x, b), the maps a simple walk reflected at a moving
barrier induces.  G3 refines G2 with a plateau value: x -> c on
[0, b] and x -> x + a above b, recording where mass stuck at the
barrier is sent.  Elements compose in word order, so the product
xy acts by "x first, then y".

Parameters may be integers (the lattice flavor) or exact rationals /
floats (the continuous flavor); composition and action only ever use
+, max, and comparisons, so both flavors share one code path.
Equality is exact in both flavors.
"""

from dataclasses import dataclass

from .errors import InvalidParameter, InvariantViolation


@dataclass(frozen=True)
class G1Element:
    """Shift x -> x + a."""

    a: object

    def __str__(self):
        return "shift(%s)" % (self.a,)


@dataclass(frozen=True)
class G2Element:
    """Reflected shift x -> a + max(x, b); needs b >= 0 and a + b >= 0."""

    a: object
    b: object

    def __post_init__(self):
        if self.b < 0:
            raise InvariantViolation("G2 element needs b >= 0, got b=%s" % (self.b,))
        if self.a + self.b < 0:
            raise InvariantViolation(
                "G2 element needs a + b >= 0, got a=%s b=%s" % (self.a, self.b))

    def __str__(self):
        return "reflectedshift(%s,%s)" % (self.a, self.b)


@dataclass(frozen=True)
class G3Element:
    """Plateau map x -> c on [0, b], x -> x + a above b.

    Needs b >= 0 and 0 <= c <= a + b; c < a + b means the plateau is
    sent strictly below the reflected-shift image.
    """

    a: object
    b: object
    c: object

    def __post_init__(self):
        if self.b < 0:
            raise InvariantViolation("G3 element needs b >= 0, got b=%s" % (self.b,))
        if self.c < 0:
            raise InvariantViolation("G3 element needs c >= 0, got c=%s" % (self.c,))
        if self.c > self.a + self.b:
            raise InvariantViolation(
                "G3 element needs c <= a + b, got a=%s b=%s c=%s"
                % (self.a, self.b, self.c))

    def __str__(self):
        return "plateaumap(%s,%s,%s)" % (self.a, self.b, self.c)


G1_UNIT = G1Element(0)
G2_UNIT = G2Element(0, 0)
G3_UNIT = G3Element(0, 0, 0)

# One-step generators: down, up, and up-with-restart.
STEP_DOWN = G3Element(-1, 1, 0)
STEP_UP = G3Element(1, 0, 0)
STEP_UP_STICKY = G3Element(1, 0, 1)


def trap_step_down(m):
    """Down generator of the depth-m trap flow: barrier m, plateau to 0."""
    if m < 1:
        raise InvalidParameter("trap depth m must be >= 1, got %s" % (m,))
    return G3Element(-1, m, 0)


def is_unit(x):
    if isinstance(x, G1Element):
        return x.a == 0
    if isinstance(x, G2Element):
        return x.a == 0 and x.b == 0
    if isinstance(x, G3Element):
        return x.a == 0 and x.b == 0 and x.c == 0
    raise InvalidParameter("not a semigroup element: %r" % (x,))


def compose_g1(x, y):
    """Word-order product xy in G1: apply x, then y."""
    return G1Element(x.a + y.a)


def compose_g2(x, y):
    """Word-order product xy in G2: apply x, then y."""
    return G2Element(x.a + y.a, max(x.b, y.b - x.a))


def compose_g3(x, y):
    """Word-order product xy in G3: apply x, then y.

    The plateau of x lands at x.c; if that clears y's barrier it is
    shifted by y.a, otherwise it is captured onto y's plateau.
    """
    a = x.a + y.a
    b = max(x.b, y.b - x.a)
    c = y.a + x.c if x.c > y.b else y.c
    return G3Element(a, b, c)


def compose(x, y):
    """Dispatch on element type; both factors must live in the same semigroup."""
    if isinstance(x, G3Element) and isinstance(y, G3Element):
        return compose_g3(x, y)
    if isinstance(x, G2Element) and isinstance(y, G2Element):
        return compose_g2(x, y)
    if isinstance(x, G1Element) and isinstance(y, G1Element):
        return compose_g1(x, y)
    raise InvalidParameter("cannot compose %r with %r" % (x, y))


def act_g1(x, v):
    return v + x.a


def act_g2(x, v):
    if v < 0:
        raise InvalidParameter("G2 acts on v >= 0, got %s" % (v,))
    return x.a + max(v, x.b)


def act_g3(x, v):
    if v < 0:
        raise InvalidParameter("G3 acts on v >= 0, got %s" % (v,))
    return x.c if v <= x.b else v + x.a


def act(x, v):
    if isinstance(x, G3Element):
        return act_g3(x, v)
    if isinstance(x, G2Element):
        return act_g2(x, v)
    if isinstance(x, G1Element):
        return act_g1(x, v)
    raise InvalidParameter("not a semigroup element: %r" % (x,))


def project(x):
    """Forget the finest layer of structure: G3 -> G2 -> G1."""
    if isinstance(x, G3Element):
        return G2Element(x.a, x.b)
    if isinstance(x, G2Element):
        return G1Element(x.a)
    raise InvalidParameter("nothing to project %r onto" % (x,))


def element_to_json(x):
    """[a], [a, b], or [a, b, c] depending on the layer."""
    if isinstance(x, G1Element):
        return [x.a]
    if isinstance(x, G2Element):
        return [x.a, x.b]
    if isinstance(x, G3Element):
        return [x.a, x.b, x.c]
    raise InvalidParameter("not a semigroup element: %r" % (x,))


def element_from_json(payload):
    if not isinstance(payload, (list, tuple)) or not 1 <= len(payload) <= 3:
        raise InvalidParameter("element payload must be a list of 1-3 numbers")
    if len(payload) == 1:
        return G1Element(payload[0])
    if len(payload) == 2:
        return G2Element(payload[0], payload[1])
    return G3Element(payload[0], payload[1], payload[2])
