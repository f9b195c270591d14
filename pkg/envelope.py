"""Deductive closure of regularity assertions in the (1/p, s) diagram.

An assertion "S ⊆ B^s_{p_z,p_z} for all s < z" is an open vertical ray at x = 1/p_z. Embeddings
add the shadow of every member point (flat to the right, slope d to the lower left) and complex
interpolation adds every chord between members, so the closed region is the set of points
strictly below the upper concave hull of the ray tops and of their shadows on the axis x = 0.
"""
import logging
from bisect import bisect_left, bisect_right
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Literal, Optional

import numpy as np
from pydantic import model_validator

from errors import GeometryError
from exactnum import INF, NEG_INF, ONE, ZERO, DiagramPoint, ExtRat, ext, parse_rational
from schemas import EnvelopeJson, Rational
from settings import get_settings
from spaces import Kind, ValueModel

logger = logging.getLogger(__name__)

LimitIndex = ExtRat


class RegularityAssertion(ValueModel):
    inv_pz: Rational
    z: Rational

    @model_validator(mode="after")
    def _check_abscissa(self):
        if self.inv_pz.is_infinite or self.inv_pz < 0:
            raise ValueError(f"1/p_z must be finite and >= 0, got {self.inv_pz}")
        return self

    @classmethod
    def of(cls, inv_pz, z):
        return cls(inv_pz=ext(inv_pz), z=ext(z))

    @classmethod
    def from_space(cls, desc):
        """Membership in A^z_{p_z,q} (B with any p, F with p < inf) gives the ray (1/p_z, z)."""
        if desc.kind is Kind.F and desc.inv_p.sign == 0:
            raise GeometryError("F-memberships need p < inf")
        return cls(inv_pz=desc.inv_p, z=desc.s)

    def __str__(self):
        return f"ray(1/p_z = {self.inv_pz}, z = {self.z})"


@dataclass(frozen=True)
class ShadowFragment:
    point: DiagramPoint
    d: int

    def value_at(self, x):
        x = ext(x)
        if x >= self.point.x:
            return self.point.y
        return self.point.y - self.d * (self.point.x - x)


def shadow(pt, ctx):
    return ShadowFragment(pt, ctx.d)


@dataclass(frozen=True)
class Envelope:
    """Breakpoints of U from x = 0 up to its peak; U is flat beyond the last breakpoint."""

    state: Literal["empty", "finite", "infinite"]
    d: int
    breakpoints: tuple[DiagramPoint, ...] = ()
    _xs: tuple[Fraction, ...] = field(default=(), repr=False, compare=False)
    _ys: tuple[Fraction, ...] = field(default=(), repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_xs", tuple(p.x.fraction for p in self.breakpoints))
        object.__setattr__(self, "_ys", tuple(p.y.fraction for p in self.breakpoints))

    @classmethod
    def empty(cls, d):
        return cls("empty", d)

    @classmethod
    def infinite(cls, d):
        return cls("infinite", d)

    def value_at(self, x):
        x = ext(x)
        if x.is_infinite or x < 0:
            raise GeometryError(f"envelope is defined for finite x >= 0, got {x}")
        if self.state == "empty":
            return NEG_INF
        if self.state == "infinite":
            return INF
        xf = x.fraction
        if xf >= self._xs[-1]:
            return ExtRat(self._ys[-1])
        i = bisect_right(self._xs, xf) - 1
        x0, x1, y0, y1 = self._xs[i], self._xs[i + 1], self._ys[i], self._ys[i + 1]
        return ExtRat(y0 + (y1 - y0) * (xf - x0) / (x1 - x0))

    def left_slope_at(self, x):
        """Slope of U immediately to the left of x; None at x = 0 or for non-finite envelopes."""
        x = ext(x)
        if self.state != "finite" or x.sign <= 0:
            return None
        j = bisect_left(self._xs, x.fraction)
        if j == len(self._xs):
            return ZERO
        return ExtRat((self._ys[j] - self._ys[j - 1]) / (self._xs[j] - self._xs[j - 1]))

    @property
    def slopes(self):
        return tuple(
            ExtRat((self._ys[i + 1] - self._ys[i]) / (self._xs[i + 1] - self._xs[i]))
            for i in range(len(self._xs) - 1)
        )

    @property
    def right_value(self):
        if self.state == "empty":
            return NEG_INF
        if self.state == "infinite":
            return INF
        return self.breakpoints[-1].y

    def to_json(self):
        slopes = self.slopes
        return EnvelopeJson(
            breakpoints=[(p.x, p.y) for p in self.breakpoints],
            left_slope=slopes[0] if slopes else None,
            right_value=self.right_value,
        )


@dataclass(frozen=True)
class RegularityRegion:
    generators: tuple[RegularityAssertion, ...]
    d: int
    envelope: Optional[Envelope] = None

    @classmethod
    def of(cls, assertions, ctx):
        return cls(tuple(assertions), ctx.d)

    @property
    def is_closed(self):
        return self.envelope is not None

    @property
    def x_max(self):
        """Right edge used for rendering and sampling: beyond it U is flat."""
        finite = [g for g in self.generators if g.z.is_finite]
        if not finite:
            return ONE
        top = max(max(g.z for g in finite), ZERO)
        return max(g.inv_pz for g in finite) + top / self.d + ONE

    def with_generator(self, assertion):
        return RegularityRegion(self.generators + (assertion,), self.d)


def _cross(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def upper_concave_hull(points):
    """Upper hull of (x, y) Fraction pairs, left to right, cut at the first highest vertex."""
    best = {}
    for x, y in points:
        if x not in best or y > best[x]:
            best[x] = y
    hull = []
    for pt in sorted(best.items()):
        while len(hull) >= 2 and _cross(hull[-2], hull[-1], pt) >= 0:
            hull.pop()
        hull.append(pt)
    peak = max(range(len(hull)), key=lambda i: (hull[i][1], -i))
    return hull[: peak + 1]


def close(region, ctx):
    d = ctx.d
    generators = [g for g in region.generators if g.z != NEG_INF]
    if any(g.z == INF for g in generators):
        envelope = Envelope.infinite(d)
    elif not generators:
        envelope = Envelope.empty(d)
    else:
        points = []
        for g in generators:
            x, z = g.inv_pz.fraction, g.z.fraction
            points.append((x, z))
            if x > 0:
                points.append((Fraction(0), z - d * x))
        hull = upper_concave_hull(points)
        envelope = Envelope("finite", d, tuple(DiagramPoint(x, y) for x, y in hull))
        logger.debug("closed %d generators into %d breakpoints", len(generators), len(hull))
    return RegularityRegion(region.generators, d, envelope)


def _closed_envelope(region, ctx):
    if region.envelope is None:
        region = close(region, ctx)
    return region.envelope


def limit_s(region, inv_p, ctx=None):
    envelope = region.envelope if ctx is None else _closed_envelope(region, ctx)
    if envelope is None:
        raise GeometryError("limit_s needs a closed region")
    value = envelope.value_at(inv_p)
    if value <= 0:
        return NEG_INF
    return value


def _ray_crossing(envelope, inv_p, d, shift):
    """Level at which the adaptivity ray from (1/p, shift) leaves the region under U."""
    start, base = inv_p.fraction, shift.fraction
    x0, gap0 = start, envelope.value_at(inv_p).fraction - base
    for x1, y1 in zip(envelope._xs, envelope._ys):
        if x1 <= start:
            continue
        gap1 = y1 - base - d * (x1 - start)
        if gap1 < 0:
            x = x0 + (x1 - x0) * gap0 / (gap0 - gap1)
            return ExtRat(base + d * (x - start))
        x0, gap0 = x1, gap1
    # flat beyond the last breakpoint
    return ExtRat(base + d * (x0 - start) + gap0)


def limit_alpha(region, inv_p, ctx, shift=ZERO):
    """Largest level of the adaptivity ray from (1/p, shift) still below the region.

    When U rises slower than d just left of 1/p, the envelope is continued along that left
    tangent, the largest concave continuation the assertions allow, and the ray meets it at
    shift + d(U - shift)/(d - slope). When U already rises at slope d there, the ray runs
    parallel to the boundary and the level is read off where it crosses U itself.
    """
    inv_p, shift = ext(inv_p), ext(shift)
    if inv_p.is_infinite or inv_p.sign <= 0:
        raise GeometryError(f"limit_alpha needs 0 < 1/p < inf, got {inv_p}")
    envelope = _closed_envelope(region, ctx)
    if envelope.state == "empty":
        return NEG_INF
    if envelope.state == "infinite":
        return INF
    value = envelope.value_at(inv_p)
    if value <= shift:
        return NEG_INF
    slope = envelope.left_slope_at(inv_p)
    if slope >= ctx.d:
        return _ray_crossing(envelope, inv_p, ctx.d, shift)
    return shift + ctx.d * (value - shift) / (ctx.d - slope)


# --- brute-force oracle -------------------------------------------------------------------

@dataclass(frozen=True)
class OracleEnvelope:
    xs: np.ndarray
    values: np.ndarray

    def value_near(self, x, tol=1e-12):
        idx = int(np.argmin(np.abs(self.xs - x)))
        if abs(self.xs[idx] - x) > tol:
            raise GeometryError(f"x = {x} is not a sample abscissa")
        return float(self.values[idx])


_FLOOR = -1e300
_MAX_ROUNDS = 32


def oracle_close(region, ctx, grid_n=None, extra_abscissae=()):
    """Sampled lower bounds for U obtained by iterating shadows and chords to a fixed point."""
    if grid_n is None:
        grid_n = get_settings().oracle_grid_n
    if grid_n < 2:
        raise GeometryError("grid_n must be >= 2")
    generators = [g for g in region.generators if g.z != NEG_INF]
    grid = np.linspace(0.0, float(region.x_max), grid_n + 1)
    xs = np.union1d(grid, [float(g.inv_pz) for g in generators] + [float(x) for x in extra_abscissae])
    if any(g.z == INF for g in generators):
        return OracleEnvelope(xs, np.full(xs.shape, np.inf))
    values = np.full(xs.shape, _FLOOR)
    for g in generators:
        idx = int(np.argmin(np.abs(xs - float(g.inv_pz))))
        values[idx] = max(values[idx], float(g.z))

    xi, xj, xk = xs[:, None, None], xs[None, :, None], xs[None, None, :]
    span = xj - xi
    inside = (span > 0) & (xk >= xi) & (xk <= xj)
    weight = np.where(inside, (xk - xi) / np.where(span > 0, span, 1.0), 0.0)
    left_gap = np.maximum(xs[:, None] - xs[None, :], 0.0)

    for rounds in range(1, _MAX_ROUNDS + 1):
        shadows = (values[:, None] - ctx.d * left_gap).max(axis=0)
        chords = np.where(
            inside, (1.0 - weight) * values[:, None, None] + weight * values[None, :, None], _FLOOR
        ).max(axis=(0, 1))
        updated = np.maximum(values, np.maximum(shadows, chords))
        if np.all(updated - values <= 1e-12):
            values = updated
            break
        values = updated
    else:
        logger.warning("oracle_close stopped after %d rounds without reaching a fixed point", _MAX_ROUNDS)
    logger.debug("oracle_close converged in %d rounds on %d samples", rounds, xs.size)
    return OracleEnvelope(xs, np.where(values <= _FLOOR / 10, -np.inf, values))


def oracle_limit_alpha(region, inv_p, ctx, grid_n=None, step=None, cap=None, shift=0.0):
    """Grid search for the adaptivity level using the interpolation contradiction directly.

    A level alpha is rejected as soon as interpolating some sampled member left of 1/p with the
    adaptivity point (1/p + (alpha - shift)/d, alpha) lands above U(1/p).
    """
    settings = get_settings()
    step = float(parse_rational(settings.oracle_alpha_step)) if step is None else step
    cap = float(parse_rational(settings.oracle_alpha_cap)) if cap is None else cap
    inv_p_f, shift = float(inv_p), float(shift)
    sampled = oracle_close(region, ctx, grid_n, extra_abscissae=[inv_p])
    u = sampled.value_near(inv_p_f)
    if u == np.inf:
        return np.inf
    if not np.isfinite(u) or u <= shift:
        return -np.inf
    alphas = shift + step * np.arange(1, int(np.floor((cap - shift) / step)) + 1)
    left = (sampled.xs < inv_p_f) & np.isfinite(sampled.values)
    x_left, v_left = sampled.xs[left][:, None], sampled.values[left][:, None]
    if x_left.size == 0:
        return np.inf
    target_x = inv_p_f + (alphas[None, :] - shift) / ctx.d
    weight = (inv_p_f - x_left) / (target_x - x_left)
    at_inv_p = v_left + weight * (alphas[None, :] - v_left)
    passing = np.all(at_inv_p <= u + 1e-9, axis=0)
    if passing.all():
        return np.inf
    first_fail = int(np.argmin(passing))
    if first_fail == 0:
        return -np.inf
    return float(alphas[first_fail - 1])
