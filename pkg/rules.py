"""Embedding rules between Besov/Triebel-Lizorkin spaces and their complex interpolation.

Verdicts are tri-state. ``NotEmbeds`` is only ever produced by the two if-and-only-if rules
(same-point B/F exchange, and B/F exchange along the sharp Sobolev line); everything else is
either proved by a chain of at most ``embed_search_depth`` single-rule steps or left ``Unknown``.
"""
import logging
from collections import deque
from dataclasses import dataclass
from typing import Literal, Optional

from pydantic import BaseModel, ConfigDict

from errors import KindMismatch, LocationMismatch, QBothInfinite, ThetaOutOfRange
from exactnum import ONE, ZERO, DiagramPoint, ext, line_through
from schemas import ChainStepJson, VerdictJson
from settings import get_settings
from spaces import Kind, SpaceDescriptor, effective_dimension

logger = logging.getLogger(__name__)


def _same_point(a, b):
    return a.s == b.s and a.inv_p == b.inv_p


def _on_sharp_line(a, b, dim):
    return a.s - dim * a.inv_p == b.s - dim * b.inv_p


# --- single rules: each answers "does this rule prove src -> dst?" --------------------------

def rule_identity(src, dst, dim):
    """B^s_{p,p} = F^s_{p,p}."""
    return (
        src.kind != dst.kind
        and _same_point(src, dst)
        and src.inv_p.sign > 0
        and src.inv_q == src.inv_p
        and dst.inv_q == dst.inv_p
    )


def _exchange_applies(src, dst):
    return src.kind != dst.kind and _same_point(src, dst) and src.inv_p.sign > 0


def _exchange_holds(src, dst):
    if src.kind is Kind.B:
        # q0 <= min{p, q}
        return src.inv_q >= max(src.inv_p, dst.inv_q)
    # max{p, q} <= q1
    return dst.inv_q <= min(src.inv_p, src.inv_q)


def rule_i(src, dst, dim):
    return _exchange_applies(src, dst) and _exchange_holds(src, dst)


def rule_ii(src, dst, dim):
    return (
        src.kind is Kind.F
        and dst.kind is Kind.F
        and src.inv_p > dst.inv_p > ZERO
        and _on_sharp_line(src, dst, dim)
    )


def rule_iii(src, dst, dim):
    return src.kind == dst.kind and _same_point(src, dst) and src.inv_q >= dst.inv_q


def rule_iv(src, dst, dim):
    return src.s - dst.s > dim * max(src.inv_p - dst.inv_p, ZERO)


def _sharp_exchange_applies(src, dst, dim):
    return src.kind != dst.kind and src.inv_p > dst.inv_p and _on_sharp_line(src, dst, dim)


def _sharp_exchange_holds(src, dst):
    if src.kind is Kind.B:
        # q0 <= p
        return src.inv_q >= dst.inv_p
    # p <= q1
    return src.inv_p >= dst.inv_q


def rule_v(src, dst, dim):
    return _sharp_exchange_applies(src, dst, dim) and _sharp_exchange_holds(src, dst)


RULES = (
    ("identity", rule_identity),
    ("i", rule_i),
    ("iii", rule_iii),
    ("ii", rule_ii),
    ("iv", rule_iv),
    ("v", rule_v),
)
RULES_BY_ID = dict(RULES)


def rule_label(rule_id):
    return rule_id if rule_id == "identity" else f"rule {rule_id}"


# --- verdicts -----------------------------------------------------------------------------

class EmbedStep(BaseModel):
    model_config = ConfigDict(frozen=True)

    rule: str
    source: SpaceDescriptor
    target: SpaceDescriptor


class EmbedVerdict(BaseModel):
    model_config = ConfigDict(frozen=True)

    outcome: Literal["Embeds", "NotEmbeds", "Unknown"]
    rule: Optional[str] = None
    chain: tuple[EmbedStep, ...] = ()

    @property
    def embeds(self):
        return self.outcome == "Embeds"

    def to_json(self):
        steps = [ChainStepJson(rule=s.rule, from_=str(s.source), to=str(s.target)) for s in self.chain]
        return VerdictJson(outcome=self.outcome, rule=self.rule, chain=steps)

    def __str__(self):
        if self.outcome == "Unknown":
            return "Unknown"
        if self.outcome == "NotEmbeds":
            return f"NotEmbeds [{rule_label(self.rule)}]"
        return f"Embeds [{', '.join(rule_label(step.rule) for step in self.chain)}]"


UNKNOWN = EmbedVerdict(outcome="Unknown")


def _first_rule(src, dst, dim):
    for rule_id, rule in RULES:
        if rule(src, dst, dim):
            return rule_id
    return None


def _candidates(src, dst):
    inv_qs = []
    for value in (src.inv_q, dst.inv_q, src.inv_p, dst.inv_p):
        if value not in inv_qs:
            inv_qs.append(value)
    out = []
    for s, inv_p in ((src.s, src.inv_p), (dst.s, dst.inv_p)):
        for kind in (Kind.B, Kind.F):
            if kind is Kind.F and inv_p.sign == 0:
                continue
            for inv_q in inv_qs:
                cand = SpaceDescriptor.of(kind, s, inv_p, inv_q, src.location)
                if cand not in out:
                    out.append(cand)
    return out


def _search(src, dst, dim, max_steps):
    direct = _first_rule(src, dst, dim)
    if direct is not None:
        return (EmbedStep(rule=direct, source=src, target=dst),)
    nodes = _candidates(src, dst)
    parent = {src: None}
    frontier = deque([(src, 0)])
    while frontier:
        node, depth = frontier.popleft()
        if depth == max_steps:
            continue
        for cand in nodes:
            if cand in parent:
                continue
            rule_id = _first_rule(node, cand, dim)
            if rule_id is None:
                continue
            parent[cand] = (node, rule_id)
            if cand == dst:
                steps = []
                cur = cand
                while parent[cur] is not None:
                    prev, rid = parent[cur]
                    steps.append(EmbedStep(rule=rid, source=prev, target=cur))
                    cur = prev
                return tuple(reversed(steps))
            frontier.append((cand, depth + 1))
    return None


def embed_check(src, dst, ctx, max_steps=None):
    if src.location != dst.location:
        logger.debug("no rule relates %s and %s (different locations)", src, dst)
        return UNKNOWN
    dim = effective_dimension(src, ctx)

    if _exchange_applies(src, dst):
        if _exchange_holds(src, dst):
            rule_id = "identity" if rule_identity(src, dst, dim) else "i"
            return EmbedVerdict(outcome="Embeds", rule=rule_id,
                                chain=(EmbedStep(rule=rule_id, source=src, target=dst),))
        return EmbedVerdict(outcome="NotEmbeds", rule="i")
    if _sharp_exchange_applies(src, dst, dim):
        if _sharp_exchange_holds(src, dst):
            return EmbedVerdict(outcome="Embeds", rule="v",
                                chain=(EmbedStep(rule="v", source=src, target=dst),))
        return EmbedVerdict(outcome="NotEmbeds", rule="v")

    if max_steps is None:
        max_steps = get_settings().embed_search_depth
    chain = _search(src, dst, dim, max_steps)
    if chain is None:
        logger.debug("no chain of <= %d steps from %s to %s", max_steps, src, dst)
        return UNKNOWN
    rule_id = chain[0].rule if len(chain) == 1 else "composite"
    return EmbedVerdict(outcome="Embeds", rule=rule_id, chain=chain)


def replay(chain, ctx):
    """Re-check an Embeds chain step by step with the rule each step names."""
    for i, step in enumerate(chain):
        if i and chain[i - 1].target != step.source:
            return False
        rule = RULES_BY_ID.get(step.rule)
        if rule is None or not rule(step.source, step.target, effective_dimension(step.source, ctx)):
            return False
    return True


def sharp_scale_excluded(src, dst, d):
    """True when dst lies strictly above the slope-d line through src at a larger p.

    Such targets are not embeddings of src; this is informational and never feeds embed_check.
    """
    return dst.inv_p < src.inv_p and dst.s > src.s - d * (src.inv_p - dst.inv_p)


# --- complex interpolation ----------------------------------------------------------------

def _check_interpolable(a0, a1):
    if a0.location != a1.location:
        raise LocationMismatch(f"cannot interpolate {a0} with {a1}: different locations")
    if a0.kind != a1.kind:
        raise KindMismatch(f"cannot interpolate {a0.kind.value} with {a1.kind.value}")
    if a0.inv_q.sign == 0 and a1.inv_q.sign == 0:
        raise QBothInfinite(f"[{a0}, {a1}]_theta needs min(q0, q1) < inf")


def _convex(v0, v1, theta):
    return (ONE - theta) * v0 + theta * v1


def interpolate(a0, a1, theta):
    theta = ext(theta)
    _check_interpolable(a0, a1)
    if not (ZERO < theta < ONE):
        raise ThetaOutOfRange(f"theta must lie in (0, 1), got {theta}")
    return SpaceDescriptor.of(
        a0.kind,
        _convex(a0.s, a1.s, theta),
        _convex(a0.inv_p, a1.inv_p, theta),
        _convex(a0.inv_q, a1.inv_q, theta),
        a0.location,
    )


@dataclass(frozen=True)
class InterpolationSegment:
    start: DiagramPoint
    end: DiagramPoint

    def at(self, theta):
        theta = ext(theta)
        if not (ZERO <= theta <= ONE):
            raise ThetaOutOfRange(f"theta must lie in [0, 1], got {theta}")
        return DiagramPoint(_convex(self.start.x, self.end.x, theta), _convex(self.start.y, self.end.y, theta))

    __call__ = at

    @property
    def is_constant(self):
        return self.start == self.end

    @property
    def line(self):
        return None if self.is_constant else line_through(self.start, self.end)


def interpolation_segment(a0, a1):
    _check_interpolable(a0, a1)
    return InterpolationSegment(a0.point, a1.point)
