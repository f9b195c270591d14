"""Upper bounds for the adaptivity index and the companion lower/transfer bounds.

The central estimate: if S ⊆ B^s_{p_z,p_z} for all s < z with p < p_z, and z lies strictly above
mu = s̄_p - d(1/p - 1/p_z), then ᾱ_p <= s̄_p (s̄_p - mu)/(z - mu).
"""
import logging
from typing import Literal, NamedTuple, Optional

from pydantic import model_validator

from errors import DegenerateMap, GeometryError, InconsistentInput
from exactnum import ONE, ZERO, DiagramPoint, ExtRat, MoebiusMap, ext, intersect, line_through, moebius_extremum_on_interval
from rules import InterpolationSegment
from schemas import BoundJson, Rational
from spaces import DomainContext, ValueModel, adaptivity_line, adaptivity_point

logger = logging.getLogger(__name__)

Reason = Literal["zAboveMu", "zBelowOrEqualMu", "sBarInfinite", "inputInconsistent", "shiftNotBelowSBar"]


class BoundInput(ValueModel):
    ctx: DomainContext
    inv_p: Rational
    s_bar: Rational
    inv_pz: Rational
    z: Rational

    @model_validator(mode="after")
    def _check_ranges(self):
        if not (self.inv_p.is_finite and ZERO < self.inv_p < ONE):
            raise ValueError(f"1/p must lie in (0, 1), got {self.inv_p}")
        if not (self.inv_pz.is_finite and ZERO <= self.inv_pz < self.inv_p):
            raise ValueError(f"1/p_z must lie in [0, 1/p), got {self.inv_pz}")
        if not self.s_bar > 0:
            raise ValueError(f"s̄_p must be positive, got {self.s_bar}")
        if self.z.is_infinite:
            raise ValueError("z must be finite")
        return self

    @classmethod
    def of(cls, d, inv_p, s_bar, inv_pz, z, epsilon=1):
        return cls(ctx=DomainContext(d=d, epsilon=ext(epsilon)), inv_p=ext(inv_p), s_bar=ext(s_bar),
                   inv_pz=ext(inv_pz), z=ext(z))


class BoundResult(ValueModel):
    outcome: Literal["Finite", "Infinite", "NoBound"]
    reason: Reason
    value: Optional[Rational] = None
    mu: Optional[Rational] = None
    z: Optional[Rational] = None
    inv_pz: Optional[Rational] = None
    at: Optional[Rational] = None
    attained: Optional[bool] = None

    @property
    def is_finite(self):
        return self.outcome == "Finite"

    def to_json(self):
        return BoundJson(outcome=self.outcome, value=self.value, mu=self.mu, reason=self.reason)

    def __str__(self):
        if self.outcome == "Finite":
            return f"ᾱ_p ≤ {self.value} (μ = {self.mu})"
        if self.outcome == "Infinite":
            return "ᾱ_p = inf"
        if self.mu is not None:
            return f"no bound: z ≤ μ = {self.mu}"
        return f"no bound ({self.reason})"


def mu(inv_p, inv_pz, s_bar, d):
    inv_p, inv_pz, s_bar = ext(inv_p), ext(inv_pz), ext(s_bar)
    if not inv_pz < inv_p:
        raise GeometryError(f"mu needs 1/p_z < 1/p, got {inv_pz} >= {inv_p}")
    if s_bar.is_infinite:
        raise GeometryError("mu needs a finite s̄_p")
    return s_bar - d * (inv_p - inv_pz)


def _require_consistent(z, s_bar):
    if z > s_bar:
        err = InconsistentInput(f"z = {z} exceeds s̄_p = {s_bar}, contradicting z ≤ s̄_p ≤ ᾱ_p")
        err.result = BoundResult(outcome="NoBound", reason="inputInconsistent", z=z)
        raise err


def alpha_bound_intersection(inp, shift=ZERO):
    """Meeting point of the line through (1/p_z, z), (1/p, s̄_p) with the adaptivity ray."""
    m = mu(inp.inv_p, inp.inv_pz, inp.s_bar, inp.ctx.d)
    if not inp.z > m:
        raise GeometryError(f"z = {inp.z} is not above mu = {m}; the lines do not meet to the right")
    chord = line_through(DiagramPoint(inp.inv_pz, inp.z), DiagramPoint(inp.inv_p, inp.s_bar))
    hit = intersect(chord, adaptivity_line(inp.inv_p, inp.ctx.d, shift))
    if not isinstance(hit, DiagramPoint):
        raise GeometryError(f"no single intersection: {hit.value}")
    return hit


def alpha_upper_bound(inp, shift=ZERO):
    shift = ext(shift)
    _require_consistent(inp.z, inp.s_bar)
    if inp.s_bar.is_infinite:
        return BoundResult(outcome="Infinite", reason="sBarInfinite", z=inp.z, inv_pz=inp.inv_pz)
    m = mu(inp.inv_p, inp.inv_pz, inp.s_bar, inp.ctx.d)
    if inp.z <= m:
        return BoundResult(outcome="NoBound", reason="zBelowOrEqualMu", mu=m, z=inp.z, inv_pz=inp.inv_pz)
    if shift >= inp.s_bar:
        return BoundResult(outcome="NoBound", reason="shiftNotBelowSBar", mu=m, z=inp.z, inv_pz=inp.inv_pz)
    if shift.sign == 0:
        value = inp.s_bar * (inp.s_bar - m) / (inp.z - m)
    else:
        value = alpha_bound_intersection(inp, shift).y
    return BoundResult(outcome="Finite", reason="zAboveMu", value=value, mu=m, z=inp.z, inv_pz=inp.inv_pz)


class Witness(NamedTuple):
    theta: ExtRat
    point: DiagramPoint
    exceeds_s_bar: bool


def contradiction_witness(inp, alpha):
    """Interpolate (1/p_z, z) with the adaptivity point at level alpha and read off x = 1/p.

    When alpha exceeds the finite bound the interpolated smoothness beats s̄_p.
    """
    alpha = ext(alpha)
    end = adaptivity_point(alpha, inp.inv_p, inp.ctx.d)
    gap = inp.inv_p - inp.inv_pz
    theta = gap / (end.x - inp.inv_pz)
    point = InterpolationSegment(DiagramPoint(inp.inv_pz, inp.z), end).at(theta)
    return Witness(theta, point, point.y > inp.s_bar)


def best_alpha_upper_bound(ctx, inv_p, s_bar, assertions):
    """Smallest finite bound over all assertions located left of 1/p."""
    inv_p, s_bar = ext(inv_p), ext(s_bar)
    if s_bar.is_infinite:
        return BoundResult(outcome="Infinite", reason="sBarInfinite")
    best = None
    for assertion in assertions:
        if not assertion.inv_pz < inv_p or assertion.z.is_infinite:
            continue
        result = alpha_upper_bound(BoundInput(ctx=ctx, inv_p=inv_p, s_bar=s_bar,
                                              inv_pz=assertion.inv_pz, z=assertion.z))
        if result.is_finite and (best is None or result.value < best.value):
            best = result
    if best is None:
        return BoundResult(outcome="NoBound", reason="zBelowOrEqualMu")
    return best


def s_lower_bound(alpha, inv_p, inv_pz, z, d):
    alpha, inv_p, inv_pz, z = ext(alpha), ext(inv_p), ext(inv_pz), ext(z)
    if not (ZERO <= inv_pz < inv_p):
        raise GeometryError(f"need 0 <= 1/p_z < 1/p, got {inv_pz}, {inv_p}")
    if alpha.is_infinite or alpha.sign <= 0:
        raise GeometryError(f"alpha must be finite and positive, got {alpha}")
    spread = d * (inv_p - inv_pz)
    return alpha * (z + spread) / (alpha + spread)


def s_transfer_upper_bound(s_bar_p, inv_p, z, inv_pz, inv_phat):
    s_bar_p, inv_p, z, inv_pz, inv_phat = map(ext, (s_bar_p, inv_p, z, inv_pz, inv_phat))
    if not (inv_pz > inv_p >= inv_phat >= ZERO):
        raise GeometryError(f"need 1/p_z > 1/p >= 1/p̂ >= 0, got {inv_pz}, {inv_p}, {inv_phat}")
    if not z > s_bar_p:
        raise GeometryError(f"need z > s̄_p, got z = {z}, s̄_p = {s_bar_p}")
    return line_through(DiagramPoint(inv_pz, z), DiagramPoint(inv_p, s_bar_p)).y_at(inv_phat)


# --- one-parameter families ---------------------------------------------------------------

class BoundFamily(ValueModel):
    """1/p_z(t) = inv_pz0 + inv_pz1 t and z(t) = z0 + z1 t for t between t_lo and t_hi."""

    ctx: DomainContext
    inv_p: Rational
    s_bar: Rational
    inv_pz0: Rational
    inv_pz1: Rational
    z0: Rational
    z1: Rational
    t_lo: Rational
    t_hi: Rational
    lo_open: bool = False
    hi_open: bool = False

    @model_validator(mode="after")
    def _check_interval(self):
        if self.t_lo.is_infinite or self.t_hi.is_infinite or not self.t_lo < self.t_hi:
            raise ValueError(f"family interval must be finite and non-empty, got [{self.t_lo}, {self.t_hi}]")
        return self

    def inv_pz_at(self, t):
        return self.inv_pz0 + self.inv_pz1 * ext(t)

    def z_at(self, t):
        return self.z0 + self.z1 * ext(t)

    def member(self, t):
        return BoundInput(ctx=self.ctx, inv_p=self.inv_p, s_bar=self.s_bar,
                          inv_pz=self.inv_pz_at(t), z=self.z_at(t))


def _feasible_interval(a, b, lo, hi, lo_open, hi_open):
    """Restrict [lo, hi] to a t + b > 0; None when nothing is left."""
    if a.sign == 0:
        return (lo, hi, lo_open, hi_open) if b.sign > 0 else None
    root = -b / a
    if a.sign > 0 and root >= lo:
        lo, lo_open = root, True
    elif a.sign < 0 and root <= hi:
        hi, hi_open = root, True
    if lo >= hi:
        return None
    return lo, hi, lo_open, hi_open


def best_bound_over_family(family):
    """Infimum of the bound over the family; the bound is Moebius in t, so it is endpoint-attained."""
    d, s_bar, inv_p = family.ctx.d, family.s_bar, family.inv_p
    if s_bar.is_infinite:
        return BoundResult(outcome="Infinite", reason="sBarInfinite")
    for t, is_open in ((family.t_lo, family.lo_open), (family.t_hi, family.hi_open)):
        _require_consistent(family.z_at(t), s_bar)
        inv_pz = family.inv_pz_at(t)
        if inv_pz < 0 or inv_pz > inv_p or (inv_pz == inv_p and not is_open):
            raise GeometryError(f"1/p_z({t}) = {inv_pz} leaves [0, 1/p)")

    # bound(t) = s̄ d (1/p - 1/p_z(t)) / (z(t) - mu(t))
    num_a, num_b = -s_bar * d * family.inv_pz1, s_bar * d * (inv_p - family.inv_pz0)
    den_a = family.z1 - d * family.inv_pz1
    den_b = family.z0 - s_bar + d * (inv_p - family.inv_pz0)
    feasible = _feasible_interval(den_a, den_b, family.t_lo, family.t_hi, family.lo_open, family.hi_open)
    if feasible is None:
        return BoundResult(outcome="NoBound", reason="zBelowOrEqualMu")
    lo, hi, lo_open, hi_open = feasible

    try:
        bound = MoebiusMap(num_a, num_b, den_a, den_b)
    except DegenerateMap:
        value = num_a / den_a if den_a.sign != 0 else num_b / den_b
        logger.debug("family bound is constant: %s", value)
        # every member attains it; report one that belongs to the family
        if not lo_open:
            at = lo
        elif not hi_open:
            at = hi
        else:
            at = (lo + hi) / 2
        attained = True
    else:
        extremum = moebius_extremum_on_interval(bound, lo, hi, (lo_open, hi_open), "min")
        value, at, attained = extremum.value, extremum.at, extremum.attained

    if value.is_infinite:
        return BoundResult(outcome="Infinite", reason="zAboveMu", at=at, attained=attained)
    inv_pz = family.inv_pz_at(at)
    m = mu(inv_p, inv_pz, s_bar, d) if inv_pz < inv_p else None
    return BoundResult(outcome="Finite", reason="zAboveMu", value=value, mu=m, z=family.z_at(at),
                       inv_pz=inv_pz, at=at, attained=attained)
