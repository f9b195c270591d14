"""Executable case studies: Poisson, p-Poisson and Stokes on Lipschitz domains.

The PDE inputs (regularity of the data-to-solution maps) are trusted premises given as rays or
user hypotheses; everything derived from them goes through rules, envelope and bounds.
"""
import logging
from typing import Literal, NamedTuple, Optional

from pydantic import Field, model_validator

from bounds import BoundFamily, BoundInput, BoundResult, alpha_upper_bound, best_bound_over_family
from envelope import RegularityAssertion, RegularityRegion, close, limit_alpha, limit_s
from errors import ChainBroken, GeometryError, HypothesisBelowFloor, HypothesisMissing
from exactnum import INF, ONE, ZERO, DiagramPoint, ExtRat, Line, ext, line_through, reciprocal
from rules import embed_check, interpolate
from schemas import Rational
from spaces import (
    BesselH2,
    DomainContext,
    Kind,
    Location,
    SpaceDescriptor,
    ValueModel,
    adaptivity_point,
    resolve_alias,
)

logger = logging.getLogger(__name__)

HALF = ExtRat(1, 2)
THREE_HALVES = ExtRat(3, 2)
FLOORS = {"velocity": THREE_HALVES, "pressure": HALF}


def _check_open_unit(name, value):
    if not (value.is_finite and ZERO < value < ONE):
        raise ValueError(f"{name} must lie in (0, 1), got {value}")


# --- Poisson ------------------------------------------------------------------------------

class PoissonCase(ValueModel):
    d: int = Field(ge=2)
    inv_p: Rational

    @model_validator(mode="after")
    def _check(self):
        _check_open_unit("1/p", self.inv_p)
        return self

    @property
    def ctx(self):
        return DomainContext(d=self.d)


class PoissonIndices(NamedTuple):
    s_bar: ExtRat
    alpha_bar: ExtRat


def poisson_cutoff(d):
    return ExtRat(d + 1, d - 1)


def poisson_region(c):
    """Rays (1/q, 1 + 1/q) for 0 < 1/q < (d+1)/(d-1), represented by their two limit rays."""
    cutoff = poisson_cutoff(c.d)
    rays = [RegularityAssertion.of(ZERO, ONE), RegularityAssertion.of(cutoff, ONE + cutoff)]
    return close(RegularityRegion.of(rays, c.ctx), c.ctx)


def poisson_indices(c):
    s_bar = ONE + c.inv_p
    alpha_bar = s_bar * c.d / (c.d - 1)

    inv_pz = c.inv_p / 2
    via_bound = alpha_upper_bound(BoundInput(ctx=c.ctx, inv_p=c.inv_p, s_bar=s_bar, inv_pz=inv_pz, z=ONE + inv_pz))
    region = poisson_region(c)
    via_region = (limit_s(region, c.inv_p), limit_alpha(region, c.inv_p, c.ctx))
    if via_bound.value != alpha_bar or via_region != (s_bar, alpha_bar):
        raise GeometryError(
            f"Poisson indices disagree: closed form ({s_bar}, {alpha_bar}), bound {via_bound.value}, "
            f"region {via_region[0]}, {via_region[1]}"
        )
    return PoissonIndices(s_bar, alpha_bar)


class InterpolationWitness(NamedTuple):
    start: SpaceDescriptor
    partner: SpaceDescriptor
    theta: ExtRat
    result: SpaceDescriptor


def poisson_interpolation_witness(inv_p, s, eps):
    """Partner space and weight whose interpolation with B^s_{p,p} lands exactly on B^2_{1,1}."""
    inv_p, s, eps = ext(inv_p), ext(s), ext(eps)
    _check_open_unit("1/p", inv_p)
    if eps.sign <= 0:
        raise GeometryError(f"eps must be positive, got {eps}")
    start = SpaceDescriptor.of(Kind.B, s, inv_p, inv_p)
    inv_q = ONE + eps
    partner = SpaceDescriptor.of(Kind.B, 2 + eps * (2 - s) / (ONE - inv_p), inv_q, inv_q)
    theta = (ONE - inv_p) / (ONE - inv_p + eps)
    return InterpolationWitness(start, partner, theta, interpolate(start, partner, theta))


class SharpnessLine(NamedTuple):
    line: Line
    points: tuple[DiagramPoint, ...]
    collinear: bool


def poisson_sharpness_line(c):
    """(1/2, 3/2), (1, 2) and the adaptivity point of ᾱ_p all sit on y = x + 1."""
    alpha_bar = poisson_indices(c).alpha_bar
    points = (DiagramPoint(HALF, THREE_HALVES), DiagramPoint(ONE, ext(2)), adaptivity_point(alpha_bar, c.inv_p, c.d))
    line = line_through(points[0], points[1])
    return SharpnessLine(line, points, all(line.contains(pt) for pt in points))


# --- p-Poisson ----------------------------------------------------------------------------

class PPoissonCase(ValueModel):
    d: int = Field(ge=2)
    inv_p: Rational
    s_bar: Optional[Rational] = None

    @model_validator(mode="after")
    def _check(self):
        if not (self.inv_p.is_finite and HALF <= self.inv_p < ONE):
            raise ValueError(f"p-Poisson needs 1 < p <= 2, got 1/p = {self.inv_p}")
        return self

    @property
    def ctx(self):
        return DomainContext(d=self.d)


def ppoisson_inv_pz(c):
    return c.inv_p - (2 * c.inv_p - 1) / (2 * c.d)


def ppoisson_pz(c):
    p_z = reciprocal(ppoisson_inv_pz(c))
    if c.inv_p > HALF and not p_z > reciprocal(c.inv_p):
        raise GeometryError(f"p_z = {p_z} does not exceed p")
    return p_z


class PPoissonVerdict(NamedTuple):
    case: Literal[1, 2]
    p_z: ExtRat
    bound: Optional[object]
    closed_form: Optional[ExtRat]


def _require_hypothesis(value, floor, name):
    if value is None:
        raise HypothesisMissing(f"{name} hypothesis is required")
    if value < floor:
        raise HypothesisBelowFloor(f"{name} = {value} is below the proven floor {floor}")
    return value


def ppoisson_case_split(c):
    s_bar = _require_hypothesis(c.s_bar, THREE_HALVES, "s̄_p")
    p_z = ppoisson_pz(c)
    if s_bar >= ONE + c.inv_p:
        return PPoissonVerdict(2, p_z, None, None)
    bound = alpha_upper_bound(
        BoundInput(ctx=c.ctx, inv_p=c.inv_p, s_bar=s_bar, inv_pz=ppoisson_inv_pz(c), z=THREE_HALVES)
    )
    closed_form = s_bar * (c.inv_p - HALF) / (ONE + c.inv_p - s_bar)
    if bound.value != closed_form:
        raise GeometryError(f"p-Poisson bound {bound.value} disagrees with the closed form {closed_form}")
    return PPoissonVerdict(1, p_z, bound, closed_form)


def ppoisson_shat(inv_p, alpha):
    inv_p, alpha = ext(inv_p), ext(alpha)
    if not (inv_p.is_finite and HALF < inv_p < ONE):
        raise GeometryError(f"ŝ_p needs 1 < p < 2, got 1/p = {inv_p}")
    if alpha < THREE_HALVES:
        raise GeometryError(f"ŝ_p needs alpha >= 3/2, got {alpha}")
    if alpha == INF:
        return ONE + inv_p
    return (ONE + inv_p) * alpha / (alpha + inv_p - HALF)


def dahlke_polygon_bound(inv_p):
    return ppoisson_shat(inv_p, 2)


def grisvard_sbar(inv_p, k):
    """s̄_p = 2/p + 1/k for a polygon whose largest interior angle is k·pi, 1 < k < 2."""
    inv_p, k = ext(inv_p), ext(k)
    if not (ONE < k < 2):
        raise GeometryError(f"angle factor k must lie in (1, 2), got {k}")
    return 2 * inv_p + reciprocal(k)


def grisvard_bound(inv_p, inv_pz, k):
    s_bar = grisvard_sbar(inv_p, k)
    return alpha_upper_bound(
        BoundInput.of(2, inv_p, s_bar, inv_pz, grisvard_sbar(inv_pz, k))
    )


# --- Stokes -------------------------------------------------------------------------------

class StokesCase(ValueModel):
    d: int = Field(ge=2)
    epsilon: Rational = "1"
    sigma: Rational
    s_bar2: Optional[Rational] = None

    @model_validator(mode="after")
    def _check(self):
        if not (self.epsilon.is_finite and ZERO < self.epsilon <= ONE):
            raise ValueError(f"epsilon must lie in (0, 1], got {self.epsilon}")
        if not (self.sigma.is_finite and self.sigma > 0):
            raise ValueError(f"sigma must be finite and positive, got {self.sigma}")
        return self

    @property
    def ctx(self):
        return DomainContext(d=self.d, epsilon=self.epsilon)

    @property
    def m(self):
        return min((self.d - 1) * self.epsilon / 2, self.sigma)


class Interval(NamedTuple):
    lo: ExtRat
    hi: ExtRat

    def __contains__(self, value):
        return self.lo <= value <= self.hi

    def __str__(self):
        return f"[{self.lo}, {self.hi}]"


def stokes_admissible_inv_p(c):
    return Interval(HALF - min(c.epsilon / 2, c.sigma / (c.d - 1)), HALF)


class DataChain(NamedTuple):
    datum: str
    spaces: tuple[SpaceDescriptor, ...]
    verdicts: tuple[object, ...]


def _chain_spaces(c, inv_p, s):
    sigma, d = c.sigma, c.d
    s1 = s + inv_p - 2 + sigma + (d - 1) * (inv_p - HALF)
    s3 = s + sigma - (d - 1) * (HALF - inv_p)
    interior, boundary = Location.INTERIOR, Location.BOUNDARY

    def f_chain(shift):
        base = s - THREE_HALVES + sigma + shift
        return (
            resolve_alias(BesselH2(s=base)),
            SpaceDescriptor.of(Kind.F, base, HALF, HALF, interior),
            SpaceDescriptor.of(Kind.F, s1 + shift, inv_p, HALF, interior),
            SpaceDescriptor.of(Kind.F, s + inv_p - 2 + shift, inv_p, HALF, interior),
        )

    h_chain = (
        resolve_alias(BesselH2(s=s + sigma, location=boundary)),
        SpaceDescriptor.of(Kind.F, s + sigma, HALF, HALF, boundary),
        SpaceDescriptor.of(Kind.F, s3, inv_p, inv_p, boundary),
        SpaceDescriptor.of(Kind.F, s, inv_p, inv_p, boundary),
    )
    return {"f": f_chain(ZERO), "g": f_chain(ONE), "h": h_chain}


def stokes_data_chain_check(c, inv_p, s):
    """Replay the data embeddings for f, g (interior) and h (boundary) through the rule engine."""
    inv_p, s = ext(inv_p), ext(s)
    if not (ZERO < s < ONE):
        raise GeometryError(f"need 0 < s < 1, got {s}")
    if not (ZERO < inv_p <= HALF):
        raise GeometryError(f"need 0 < 1/p <= 1/2, got {inv_p}")
    chains = []
    for datum, spaces in _chain_spaces(c, inv_p, s).items():
        verdicts = []
        for link, (src, dst) in enumerate(zip(spaces, spaces[1:]), start=1):
            verdict = embed_check(src, dst, c.ctx)
            if not verdict.embeds:
                raise ChainBroken(datum, f"{link}: {src} -> {dst}", str(verdict))
            verdicts.append(verdict)
        chains.append(DataChain(datum, spaces, tuple(verdicts)))
    return tuple(chains)


def stokes_family(c, component):
    s_bar = _require_hypothesis(c.s_bar2, FLOORS[component], "s̄₂")
    floor = FLOORS[component]
    return BoundFamily(
        ctx=c.ctx, inv_p=HALF, s_bar=s_bar,
        inv_pz0=HALF, inv_pz1=-ONE, z0=floor, z1=-ONE,
        t_lo=ZERO, t_hi=c.m / (c.d - 1), lo_open=True, hi_open=True,
    )


class StokesVerdict(NamedTuple):
    case: Literal[1, 2]
    component: str
    m: ExtRat
    bound: Optional[ExtRat]
    family: Optional[BoundResult]


def stokes_bound(c, component: Literal["velocity", "pressure"] = "velocity"):
    floor = FLOORS[component]
    s_bar = _require_hypothesis(c.s_bar2, floor, "s̄₂")
    m = c.m
    if s_bar >= floor + m:
        return StokesVerdict(2, component, m, None, None)
    closed_form = s_bar * c.d / (c.d - 1) * m / (floor + m - s_bar)
    family = best_bound_over_family(stokes_family(c, component))
    if family.value != closed_form:
        raise GeometryError(f"Stokes family infimum {family.value} disagrees with the closed form {closed_form}")
    logger.debug("Stokes %s bound %s (m = %s)", component, closed_form, m)
    return StokesVerdict(1, component, m, closed_form, family)
