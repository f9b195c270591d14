"""Exact rationals extended with +/- infinity, plus the line and Moebius primitives.

Everything above this module computes with ``ExtRat``; floats never enter the exact path.
"""
import enum
import logging
from dataclasses import dataclass
from decimal import Decimal, localcontext
from fractions import Fraction
from typing import Literal, NamedTuple

from errors import (
    CoincidentPoints,
    DegenerateMap,
    GeometryError,
    IndeterminateForm,
    PoleInInterval,
    RationalParseError,
)

logger = logging.getLogger(__name__)

_DIGITS = "0123456789"
_POS_INF_TOKENS = {"inf", "+inf", "∞", "+∞"}
_NEG_INF_TOKENS = {"-inf", "-∞"}


class ExtRat:
    """A reduced fraction or one of +inf / -inf.

    Indeterminate forms raise ``IndeterminateForm``; the conventions 1/0 = inf and 1/inf = 0 live
    only in :func:`reciprocal`.
    """

    __slots__ = ("_q", "_inf")

    def __init__(self, value=0, denominator=None):
        if isinstance(value, ExtRat):
            if denominator is not None:
                raise TypeError("denominator not allowed with an ExtRat value")
            self._q, self._inf = value._q, value._inf
            return
        if isinstance(value, str):
            if denominator is not None:
                raise TypeError("denominator not allowed with a string value")
            parsed = parse_rational(value)
            self._q, self._inf = parsed._q, parsed._inf
            return
        if isinstance(value, float):
            raise TypeError("floats are not exact; pass a Fraction, int or string")
        if denominator is None:
            self._q = Fraction(value)
        else:
            self._q = Fraction(value, denominator)
        self._inf = 0

    @classmethod
    def infinity(cls, sign=1):
        obj = cls.__new__(cls)
        obj._q = Fraction(0)
        obj._inf = 1 if sign > 0 else -1
        return obj

    @classmethod
    def of(cls, value):
        return value if isinstance(value, ExtRat) else cls(value)

    # --- inspection ---------------------------------------------------------------------

    @property
    def is_finite(self):
        return self._inf == 0

    @property
    def is_infinite(self):
        return self._inf != 0

    @property
    def fraction(self):
        if self._inf:
            raise IndeterminateForm(f"{self} has no finite value")
        return self._q

    @property
    def numerator(self):
        return self.fraction.numerator

    @property
    def denominator(self):
        return self.fraction.denominator

    @property
    def sign(self):
        if self._inf:
            return self._inf
        return (self._q > 0) - (self._q < 0)

    def _key(self):
        return (self._inf, self._q)

    # --- arithmetic ---------------------------------------------------------------------

    def __neg__(self):
        if self._inf:
            return ExtRat.infinity(-self._inf)
        return ExtRat(-self._q)

    def __pos__(self):
        return self

    def __abs__(self):
        return -self if self.sign < 0 else self

    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        if self._inf and other._inf and self._inf != other._inf:
            raise IndeterminateForm("inf - inf")
        if self._inf:
            return self
        if other._inf:
            return other
        return ExtRat(self._q + other._q)

    __radd__ = __add__

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        if self._inf or other._inf:
            if self.sign == 0 or other.sign == 0:
                raise IndeterminateForm("0 * inf")
            return ExtRat.infinity(self.sign * other.sign)
        return ExtRat(self._q * other._q)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        if other._inf:
            raise IndeterminateForm(f"{self} / {other}; use reciprocal() for 1/inf")
        if other._q == 0:
            raise IndeterminateForm(f"{self} / 0; use reciprocal() for 1/0")
        if self._inf:
            return ExtRat.infinity(self._inf * other.sign)
        return ExtRat(self._q / other._q)

    def __rtruediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return other / self

    # --- ordering -----------------------------------------------------------------------

    def __eq__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return self._key() == other._key()

    def __lt__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return self._key() < other._key()

    def __le__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return self._key() <= other._key()

    def __gt__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return self._key() > other._key()

    def __ge__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return self._key() >= other._key()

    def __hash__(self):
        if self._inf:
            return hash(("ExtRat.inf", self._inf))
        return hash(self._q)

    def __bool__(self):
        return self.sign != 0

    def __float__(self):
        if self._inf:
            return float("inf") * self._inf
        return float(self._q)

    def __str__(self):
        if self._inf:
            return "inf" if self._inf > 0 else "-inf"
        if self._q.denominator == 1:
            return str(self._q.numerator)
        return f"{self._q.numerator}/{self._q.denominator}"

    def __repr__(self):
        return f"ExtRat('{self}')"


def _coerce(value):
    if isinstance(value, ExtRat):
        return value
    if isinstance(value, (int, Fraction)):
        return ExtRat(value)
    return NotImplemented


INF = ExtRat.infinity(1)
NEG_INF = ExtRat.infinity(-1)
ZERO = ExtRat(0)
ONE = ExtRat(1)


def ext(value):
    """Shorthand for ``ExtRat.of``."""
    return ExtRat.of(value)


def reciprocal(x):
    x = ext(x)
    if x.is_infinite:
        return ZERO
    if x.sign == 0:
        return INF
    return ExtRat(1 / x.fraction)


def parse_rational(text):
    """Parse ``a/b``, an integer literal or an infinity token; errors carry the character position."""
    if not isinstance(text, str):
        raise RationalParseError(repr(text), 0, "expected a string")
    stripped = text.strip()
    offset = len(text) - len(text.lstrip())
    if not stripped:
        raise RationalParseError(text, 0, "empty input")
    if stripped in _POS_INF_TOKENS:
        return INF
    if stripped in _NEG_INF_TOKENS:
        return NEG_INF

    i = 0
    if stripped[0] in "+-":
        i = 1
    start = i
    while i < len(stripped) and stripped[i] in _DIGITS:
        i += 1
    if i == start:
        raise RationalParseError(text, offset + i, "expected a digit")
    numerator = int(stripped[:i])
    if i == len(stripped):
        return ExtRat(numerator)
    if stripped[i] != "/":
        raise RationalParseError(text, offset + i, f"unexpected character {stripped[i]!r}")
    i += 1
    start = i
    while i < len(stripped) and stripped[i] in _DIGITS:
        i += 1
    if i == start:
        raise RationalParseError(text, offset + i, "expected denominator digits")
    if i != len(stripped):
        raise RationalParseError(text, offset + i, f"unexpected character {stripped[i]!r}")
    denominator = int(stripped[start:i])
    if denominator == 0:
        raise RationalParseError(text, offset + start, "zero denominator")
    return ExtRat(numerator, denominator)


def to_decimal(x, digits=6):
    x = ext(x)
    if x.is_infinite:
        return str(x)
    with localcontext() as ctx:
        ctx.prec = digits
        value = Decimal(x.numerator) / Decimal(x.denominator)
        return format(value.normalize(), "f")


# --- diagram geometry ---------------------------------------------------------------------


@dataclass(frozen=True)
class DiagramPoint:
    """A point (1/rho, r) of the DeVore-Triebel diagram."""

    x: ExtRat
    y: ExtRat

    def __post_init__(self):
        object.__setattr__(self, "x", ext(self.x))
        object.__setattr__(self, "y", ext(self.y))
        if self.x.is_infinite or self.y.is_infinite:
            raise GeometryError(f"diagram points are finite, got ({self.x}, {self.y})")
        if self.x < 0:
            raise GeometryError(f"abscissa must be >= 0, got {self.x}")

    def __str__(self):
        return f"({self.x}, {self.y})"


class LineRelation(enum.Enum):
    PARALLEL = "Parallel"
    IDENTICAL = "Identical"
    OUTSIDE_DIAGRAM = "OutsideDiagram"


@dataclass(frozen=True)
class Line:
    """a*x + b*y = c, scaled so that b = 1 (or a = 1 for vertical lines)."""

    a: ExtRat
    b: ExtRat
    c: ExtRat

    def __post_init__(self):
        a, b, c = ext(self.a), ext(self.b), ext(self.c)
        if not (a.is_finite and b.is_finite and c.is_finite):
            raise GeometryError("line coefficients must be finite")
        if a.sign == 0 and b.sign == 0:
            raise GeometryError("a and b cannot both vanish")
        scale = b if b.sign != 0 else a
        object.__setattr__(self, "a", a / scale)
        object.__setattr__(self, "b", b / scale)
        object.__setattr__(self, "c", c / scale)

    @classmethod
    def with_slope(cls, pt, slope):
        slope = ext(slope)
        return cls(-slope, ONE, pt.y - slope * pt.x)

    @classmethod
    def vertical(cls, x):
        return cls(ONE, ZERO, ext(x))

    @property
    def is_vertical(self):
        return self.b.sign == 0

    @property
    def slope(self):
        if self.is_vertical:
            return INF
        return -self.a

    @property
    def intercept(self):
        if self.is_vertical:
            raise GeometryError("vertical line has no intercept")
        return self.c

    def y_at(self, x):
        if self.is_vertical:
            raise GeometryError(f"vertical line {self} has no ordinate at a single abscissa")
        return self.c - self.a * ext(x)

    def contains(self, pt):
        return self.a * pt.x + self.b * pt.y == self.c

    def __str__(self):
        if self.is_vertical:
            return f"x = {self.c}"
        slope, intercept = self.slope, self.c
        if slope.sign == 0:
            return f"y = {intercept}"
        term = "x" if slope == ONE else f"{slope}x"
        if intercept.sign == 0:
            return f"y = {term}"
        op = "+" if intercept.sign > 0 else "-"
        return f"y = {term} {op} {abs(intercept)}"


def line_through(p1, p2):
    if p1 == p2:
        raise CoincidentPoints(f"cannot draw a line through {p1} twice")
    a = p2.y - p1.y
    b = p1.x - p2.x
    return Line(a, b, a * p1.x + b * p1.y)


def intersect(l1, l2):
    det = l1.a * l2.b - l2.a * l1.b
    if det.sign == 0:
        return LineRelation.IDENTICAL if l1 == l2 else LineRelation.PARALLEL
    x = (l1.c * l2.b - l2.c * l1.b) / det
    y = (l1.a * l2.c - l2.a * l1.c) / det
    if x < 0:
        return LineRelation.OUTSIDE_DIAGRAM
    return DiagramPoint(x, y)


# --- Moebius maps -------------------------------------------------------------------------


@dataclass(frozen=True)
class MoebiusMap:
    """t -> (a t + b) / (c t + d) with ad - bc != 0."""

    a: ExtRat
    b: ExtRat
    c: ExtRat
    d: ExtRat

    def __post_init__(self):
        for name in ("a", "b", "c", "d"):
            value = ext(getattr(self, name))
            if value.is_infinite:
                raise GeometryError(f"Moebius coefficient {name} must be finite")
            object.__setattr__(self, name, value)
        if self.determinant.sign == 0:
            raise DegenerateMap(f"{self} is constant (ad - bc = 0)")

    @property
    def determinant(self):
        return self.a * self.d - self.b * self.c

    @property
    def increasing(self):
        return self.determinant.sign > 0

    @property
    def pole(self):
        if self.c.sign == 0:
            return None
        return -self.d / self.c

    def __call__(self, t):
        t = ext(t)
        den = self.c * t + self.d
        if den.sign == 0:
            raise PoleInInterval(f"{self} has a pole at t = {t}")
        return (self.a * t + self.b) / den

    def limit(self, t, side):
        """One-sided limit at ``t``; ``side`` is "left" or "right"."""
        t = ext(t)
        if t.is_infinite:
            if self.c.sign != 0:
                return self.a / self.c
            if self.a.sign == 0:
                return self.b / self.d
            return ExtRat.infinity(t.sign * self.a.sign * self.d.sign)
        den = self.c * t + self.d
        if den.sign != 0:
            return (self.a * t + self.b) / den
        approach = self.c.sign if side == "right" else -self.c.sign
        return ExtRat.infinity((self.a * t + self.b).sign * approach)

    def __str__(self):
        return f"({self.a}*t + {self.b}) / ({self.c}*t + {self.d})"


class IntervalExtremum(NamedTuple):
    value: ExtRat
    at: ExtRat
    attained: bool


def moebius_extremum_on_interval(
    m: MoebiusMap,
    lo,
    hi,
    open_ends: tuple[bool, bool] = (False, False),
    objective: Literal["min", "max"] = "min",
) -> IntervalExtremum:
    lo, hi = ext(lo), ext(hi)
    if not lo < hi:
        raise GeometryError(f"empty interval [{lo}, {hi}]")
    lo_open = open_ends[0] or lo.is_infinite
    hi_open = open_ends[1] or hi.is_infinite
    pole = m.pole
    if pole is not None:
        if lo < pole < hi:
            raise PoleInInterval(f"{m} has a pole at {pole} inside ({lo}, {hi})")
        if (pole == lo and not lo_open) or (pole == hi and not hi_open):
            raise PoleInInterval(f"{m} has a pole at the closed endpoint {pole}")

    # monotone on the interval, so the extremum sits at an endpoint
    use_lo = m.increasing == (objective == "min")
    if use_lo:
        result = IntervalExtremum(m.limit(lo, "right"), lo, not lo_open)
    else:
        result = IntervalExtremum(m.limit(hi, "left"), hi, not hi_open)
    logger.debug("extremum (%s) of %s on %s%s, %s%s -> %s", objective, m,
                 "(" if lo_open else "[", lo, hi, ")" if hi_open else "]", result.value)
    return result
