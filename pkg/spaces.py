"""Space descriptors A^s_{p,q}, classical aliases, and adaptivity-scale geometry.

Descriptors store reciprocals (1/p, 1/q) because the diagram abscissa is 1/p; 1/p = 0 means p = inf.
"""
import enum
import logging
import re
from typing import Union

from pydantic import BaseModel, ConfigDict, PositiveInt, model_validator

from errors import AliasOutOfRange, GeometryError, InvalidDescriptor, RationalParseError, SpaceParseError
from exactnum import ONE, ZERO, DiagramPoint, ExtRat, Line, ext, parse_rational, reciprocal
from schemas import Rational

logger = logging.getLogger(__name__)

_HALF = ExtRat(1, 2)


class Kind(str, enum.Enum):
    B = "B"
    F = "F"


class Location(str, enum.Enum):
    INTERIOR = "interior"
    BOUNDARY = "boundary"


class ValueModel(BaseModel):
    model_config = ConfigDict(frozen=True, validate_default=True)


class DomainContext(ValueModel):
    d: PositiveInt
    epsilon: Rational = "1"

    @model_validator(mode="after")
    def _check_epsilon(self):
        if not (ZERO < self.epsilon <= ONE):
            raise ValueError(f"epsilon must lie in (0, 1], got {self.epsilon}")
        return self

    def require_case_dimension(self):
        if self.d < 2:
            raise InvalidDescriptor(f"case studies need d >= 2, got d = {self.d}")
        return self


class SpaceDescriptor(ValueModel):
    kind: Kind
    s: Rational
    inv_p: Rational
    inv_q: Rational
    location: Location = Location.INTERIOR

    @model_validator(mode="after")
    def _check_parameters(self):
        if self.s.is_infinite:
            raise ValueError("smoothness must be finite")
        for name in ("inv_p", "inv_q"):
            value = getattr(self, name)
            if value.is_infinite or value < 0:
                raise ValueError(f"{name} must be a finite value >= 0, got {value}")
        if self.kind is Kind.F and self.inv_p.sign == 0:
            raise ValueError("F-spaces need p < inf (inv_p > 0)")
        return self

    @classmethod
    def of(cls, kind, s, inv_p, inv_q, location=Location.INTERIOR):
        return cls(kind=Kind(kind), s=ext(s), inv_p=ext(inv_p), inv_q=ext(inv_q), location=location)

    @property
    def point(self):
        return DiagramPoint(self.inv_p, self.s)

    def __str__(self):
        return render_space(self)


# --- aliases (W, H, H^s, L_p) ---------------------------------------------------------------

class SobolevW(ValueModel):
    s: Rational
    inv_p: Rational
    location: Location = Location.INTERIOR


class BesselH(ValueModel):
    s: Rational
    inv_p: Rational
    location: Location = Location.INTERIOR


class BesselH2(ValueModel):
    s: Rational
    location: Location = Location.INTERIOR


class Lebesgue(ValueModel):
    inv_p: Rational
    location: Location = Location.INTERIOR


AliasedSpace = Union[SobolevW, BesselH, BesselH2, Lebesgue]


def _strictly_between_zero_and_one(value):
    return value.is_finite and ZERO < value < ONE


def resolve_alias(space):
    if isinstance(space, SpaceDescriptor):
        return space
    if isinstance(space, SobolevW):
        s, inv_p = space.s, space.inv_p
        if s.is_finite and s >= 0 and s.denominator == 1:
            if not _strictly_between_zero_and_one(inv_p):
                raise AliasOutOfRange(f"W^{s}_p with integer order needs 1 < p < inf, got 1/p = {inv_p}")
            return SpaceDescriptor.of(Kind.F, s, inv_p, _HALF, space.location)
        if s.is_finite and s > 0:
            if not (inv_p.is_finite and ZERO < inv_p <= ONE):
                raise AliasOutOfRange(f"W^{s}_p with fractional order needs 1 <= p < inf, got 1/p = {inv_p}")
            return SpaceDescriptor.of(Kind.F, s, inv_p, inv_p, space.location)
        raise AliasOutOfRange(f"W^{s}_p: negative orders (duality) are not modelled")
    if isinstance(space, BesselH):
        if not _strictly_between_zero_and_one(space.inv_p):
            raise AliasOutOfRange(f"H^s_p needs 1 < p < inf, got 1/p = {space.inv_p}")
        return SpaceDescriptor.of(Kind.F, space.s, space.inv_p, _HALF, space.location)
    if isinstance(space, BesselH2):
        return SpaceDescriptor.of(Kind.B, space.s, _HALF, _HALF, space.location)
    if isinstance(space, Lebesgue):
        if not _strictly_between_zero_and_one(space.inv_p):
            raise AliasOutOfRange(f"L_p as F^0_(p,2) needs 1 < p < inf, got 1/p = {space.inv_p}")
        return SpaceDescriptor.of(Kind.F, ZERO, space.inv_p, _HALF, space.location)
    raise TypeError(f"not a space: {space!r}")


def effective_dimension(desc, ctx):
    if desc.location is Location.BOUNDARY:
        if ctx.d < 2:
            raise InvalidDescriptor("boundary spaces need d >= 2")
        return ctx.d - 1
    return ctx.d


# --- diagram geometry ---------------------------------------------------------------------

def sigma_p(inv_p, d):
    return d * max(ext(inv_p) - 1, ZERO)


def adaptivity_point(alpha, inv_p, d, shift=ZERO):
    """(1/tau, alpha) with 1/tau = (alpha - shift)/d + 1/p.

    ``shift`` is the smoothness r of the error norm W^r_p; r = 0 is the L_p scale.
    """
    alpha, inv_p, shift = ext(alpha), ext(inv_p), ext(shift)
    if alpha.is_infinite or alpha <= shift:
        raise GeometryError(f"adaptivity level must be finite and > {shift}, got {alpha}")
    if inv_p.is_infinite or inv_p < 0:
        raise GeometryError(f"1/p must be finite and >= 0, got {inv_p}")
    return DiagramPoint((alpha - shift) / d + inv_p, alpha)


def adaptivity_line(inv_p, d, shift=ZERO):
    return Line.with_slope(DiagramPoint(inv_p, shift), d)


def sobolev_line_through(pt, d):
    return Line.with_slope(pt, d)


# --- text form ----------------------------------------------------------------------------

_INDEXED = re.compile(r"^([BFWH])\^\{([^{}]*)\}(?:_\{([^{}]*)\})?$")
_LEBESGUE = re.compile(r"^L_\{([^{}]*)\}$")
_BOUNDARY_SUFFIX = "(bd)"


def _parse_exponent(text, token):
    try:
        return parse_rational(token)
    except RationalParseError as exc:
        raise SpaceParseError(f"{text!r}: {exc}") from exc


def _parse_integrability(text, token):
    value = _parse_exponent(text, token)
    if value <= 0:
        raise SpaceParseError(f"{text!r}: integrability must be positive, got {value}")
    return reciprocal(value)


def parse_space(text):
    """Parse ``B^{s}_{p,q}``, ``F^{s}_{p,q}``, ``W^{s}_{p}``, ``H^{s}_{p}``, ``H^{s}`` or ``L_{p}``.

    A trailing ``(bd)`` marks a space on the boundary.
    """
    body = text.strip()
    location = Location.INTERIOR
    if body.endswith(_BOUNDARY_SUFFIX):
        location = Location.BOUNDARY
        body = body[: -len(_BOUNDARY_SUFFIX)].rstrip()

    match = _LEBESGUE.match(body)
    if match:
        return Lebesgue(inv_p=_parse_integrability(text, match.group(1)), location=location)

    match = _INDEXED.match(body)
    if not match:
        raise SpaceParseError(f"{text!r} is not of the form B^{{s}}_{{p,q}}, W^{{s}}_{{p}}, H^{{s}} or L_{{p}}")
    letter, s_token, sub = match.groups()
    s = _parse_exponent(text, s_token)
    parts = [] if sub is None else [part.strip() for part in sub.split(",")]

    if letter in "BF":
        if len(parts) != 2:
            raise SpaceParseError(f"{text!r}: {letter}-spaces take two indices _{{p,q}}")
        inv_p = _parse_integrability(text, parts[0])
        inv_q = _parse_integrability(text, parts[1])
        try:
            return SpaceDescriptor.of(letter, s, inv_p, inv_q, location)
        except ValueError as exc:
            raise SpaceParseError(f"{text!r}: {exc}") from exc
    if letter == "H" and not parts:
        return BesselH2(s=s, location=location)
    if len(parts) != 1:
        raise SpaceParseError(f"{text!r}: {letter}-spaces take one index _{{p}}")
    inv_p = _parse_integrability(text, parts[0])
    if letter == "W":
        return SobolevW(s=s, inv_p=inv_p, location=location)
    return BesselH(s=s, inv_p=inv_p, location=location)


def parse_descriptor(text):
    return resolve_alias(parse_space(text))


def render_space(desc):
    p, q = reciprocal(desc.inv_p), reciprocal(desc.inv_q)
    suffix = _BOUNDARY_SUFFIX if desc.location is Location.BOUNDARY else ""
    return f"{desc.kind.value}^{{{desc.s}}}_{{{p},{q}}}{suffix}"
