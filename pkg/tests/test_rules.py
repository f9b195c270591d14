import itertools
import random

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from errors import KindMismatch, LocationMismatch, QBothInfinite, ThetaOutOfRange
from exactnum import DiagramPoint, ExtRat, Line
from rules import (
    embed_check,
    interpolate,
    interpolation_segment,
    replay,
    rule_i,
    rule_v,
    sharp_scale_excluded,
)
from spaces import DomainContext, Kind, Location, SpaceDescriptor, parse_descriptor
from strategies import descriptors, open_unit

HALF = ExtRat(1, 2)


def check(src, dst, d=2):
    return embed_check(parse_descriptor(src), parse_descriptor(dst), DomainContext(d=d))


class TestEmbedCheck:
    def test_rule_iv(self):
        verdict = check("B^{2}_{2,2}", "B^{1}_{4,4}")
        assert verdict.embeds
        assert str(verdict) == "Embeds [rule iv]"

    def test_exchange_iff(self):
        assert str(check("B^{1}_{2,1}", "F^{1}_{2,3}")) == "Embeds [rule i]"
        assert str(check("F^{1}_{2,3}", "B^{1}_{2,2}")) == "NotEmbeds [rule i]"

    def test_identity(self):
        verdict = check("B^{1}_{2,2}", "F^{1}_{2,2}")
        assert verdict.embeds and verdict.rule == "identity"

    def test_unknown(self):
        verdict = check("B^{1}_{2,2}", "B^{1}_{2,1}")
        assert verdict.outcome == "Unknown"
        assert str(verdict) == "Unknown"

    def test_sharp_line_chain(self):
        verdict = check("B^{2}_{1,1}", "B^{1}_{2,2}")
        assert verdict.embeds
        assert len(verdict.chain) == 2
        assert verdict.rule == "composite"
        assert verdict.chain[0].source == parse_descriptor("B^{2}_{1,1}")
        assert verdict.chain[-1].target == parse_descriptor("B^{1}_{2,2}")
        assert replay(verdict.chain, DomainContext(d=2))

    def test_sharp_exchange_iff(self):
        # B^{s0}_{p0,q0} -> F^{s1}_{p1,q1} on the sharp line holds iff q0 <= p1
        assert check("B^{2}_{1,1}", "F^{1}_{2,4}").embeds
        verdict = check("B^{2}_{1,4}", "F^{1}_{2,4}")
        assert str(verdict) == "NotEmbeds [rule v]"

    def test_locations_never_mix(self):
        verdict = check("B^{2}_{2,2}(bd)", "B^{1}_{2,2}")
        assert verdict.outcome == "Unknown"

    def test_boundary_uses_lower_dimension(self):
        # 1 > (d-1)(1/2 - 1/4) needs d - 1 < 4
        assert check("B^{3/2}_{2,2}(bd)", "B^{1/2}_{4,4}(bd)", d=4).embeds

    def test_depth_cap(self):
        src, dst = parse_descriptor("B^{2}_{1,1}"), parse_descriptor("B^{1}_{2,2}")
        assert embed_check(src, dst, DomainContext(d=2), max_steps=1).outcome == "Unknown"

    def test_depth_from_settings(self, monkeypatch):
        from settings import get_settings

        monkeypatch.setenv("SMOOTHCALC_EMBED_SEARCH_DEPTH", "1")
        get_settings.cache_clear()
        assert check("B^{2}_{1,1}", "B^{1}_{2,2}").outcome == "Unknown"

    def test_json(self):
        payload = check("B^{2}_{1,1}", "B^{1}_{2,2}").to_json().model_dump(by_alias=True)
        assert payload["outcome"] == "Embeds"
        assert payload["chain"][0]["from"] == "B^{2}_{1,1}"


class TestRuleProperties:
    @settings(max_examples=1000, deadline=None)
    @given(descriptors())
    def test_reflexive(self, desc):
        assert embed_check(desc, desc, DomainContext(d=2)).embeds

    @settings(max_examples=300, deadline=None)
    @given(descriptors(), descriptors(), st.integers(1, 4))
    def test_deterministic_and_replayable(self, a, b, d):
        ctx = DomainContext(d=d)
        first, second = embed_check(a, b, ctx), embed_check(a, b, ctx)
        assert first == second
        if first.embeds:
            assert replay(first.chain, ctx)

    @settings(max_examples=300, deadline=None)
    @given(descriptors(), descriptors(), descriptors())
    def test_composition_never_contradicts(self, a, b, c):
        ctx = DomainContext(d=2)
        ab, bc = embed_check(a, b, ctx), embed_check(b, c, ctx)
        assume(ab.embeds and bc.embeds)
        assert embed_check(a, c, ctx).outcome != "NotEmbeds"

    def test_composition_over_a_pool(self):
        rng = random.Random(2718)
        grid = list(itertools.product(
            (Kind.B, Kind.F),
            (ExtRat(0), HALF, ExtRat(1), ExtRat(2)),
            (ExtRat(1, 4), HALF, ExtRat(1)),
            (ExtRat(1, 4), HALF, ExtRat(1)),
        ))
        pool = [SpaceDescriptor.of(*row) for row in rng.sample(grid, 24)]
        ctx = DomainContext(d=2)
        embeds = {(i, j): embed_check(a, b, ctx).outcome for (i, a), (j, b) in itertools.product(enumerate(pool), repeat=2)}
        composed = 0
        for i, j, k in itertools.product(range(len(pool)), repeat=3):
            if embeds[i, j] == "Embeds" and embeds[j, k] == "Embeds":
                composed += 1
                assert embeds[i, k] != "NotEmbeds", (pool[i], pool[j], pool[k])
        assert composed > 0

    @settings(max_examples=300, deadline=None)
    @given(descriptors(), st.sampled_from([ExtRat(0), ExtRat(1, 4), HALF, ExtRat(1), ExtRat(2)]))
    def test_exchange_completeness(self, a, inv_q):
        other = Kind.F if a.kind is Kind.B else Kind.B
        assume(a.inv_p.sign > 0)
        b = SpaceDescriptor.of(other, a.s, a.inv_p, inv_q)
        verdict = embed_check(a, b, DomainContext(d=2))
        assert verdict.outcome in ("Embeds", "NotEmbeds")
        assert verdict.embeds == rule_i(a, b, 2)

    @settings(max_examples=300, deadline=None)
    @given(descriptors(), st.sampled_from([ExtRat(1, 4), HALF]), st.sampled_from([ExtRat(0), ExtRat(1, 3), ExtRat(1)]))
    def test_sharp_exchange_completeness(self, a, drop, inv_q):
        other = Kind.F if a.kind is Kind.B else Kind.B
        inv_p = a.inv_p - drop
        assume(inv_p.sign > 0)
        b = SpaceDescriptor.of(other, a.s - 2 * drop, inv_p, inv_q)
        verdict = embed_check(a, b, DomainContext(d=2))
        assert verdict.outcome in ("Embeds", "NotEmbeds")
        assert verdict.embeds == rule_v(a, b, 2)

    def test_sharp_scale_excluded(self):
        src = parse_descriptor("B^{2}_{1,1}")
        assert sharp_scale_excluded(src, parse_descriptor("B^{3/2}_{2,2}"), 2)
        assert not sharp_scale_excluded(src, parse_descriptor("B^{1}_{2,2}"), 2)


class TestInterpolation:
    def test_convex_combination(self):
        result = interpolate(parse_descriptor("B^{3/2}_{2,2}"), parse_descriptor("B^{2}_{1,1}"), HALF)
        assert result == parse_descriptor("B^{7/4}_{4/3,4/3}")

    def test_lands_on_target(self):
        a0 = parse_descriptor("B^{7/4}_{2,2}")
        a1 = parse_descriptor("B^{9/4}_{2/3,2/3}")
        assert interpolate(a0, a1, HALF) == parse_descriptor("B^{2}_{1,1}")

    def test_errors(self):
        f = parse_descriptor("F^{1}_{2,inf}")
        with pytest.raises(QBothInfinite):
            interpolate(f, f, HALF)
        with pytest.raises(KindMismatch):
            interpolate(parse_descriptor("B^{1}_{2,2}"), parse_descriptor("F^{1}_{2,3}"), HALF)
        with pytest.raises(LocationMismatch):
            interpolate(parse_descriptor("B^{1}_{2,2}"), parse_descriptor("B^{1}_{2,2}(bd)"), HALF)
        with pytest.raises(ThetaOutOfRange):
            interpolate(parse_descriptor("B^{1}_{2,2}"), parse_descriptor("B^{2}_{2,2}"), 1)

    def test_segment(self):
        segment = interpolation_segment(parse_descriptor("B^{3/2}_{2,2}"), parse_descriptor("B^{2}_{1,1}"))
        assert segment.at(ExtRat(1, 4)) == DiagramPoint(ExtRat(5, 8), ExtRat(13, 8))
        assert segment.line == Line.with_slope(DiagramPoint(0, 1), 1)

    def test_constant_segment(self):
        desc = parse_descriptor("B^{1}_{2,2}")
        segment = interpolation_segment(desc, desc)
        assert segment.is_constant and segment.line is None
        assert segment.at(ExtRat(1, 3)) == desc.point

    @settings(max_examples=200, deadline=None)
    @given(descriptors(kinds=(Kind.B,)), descriptors(kinds=(Kind.B,)), open_unit())
    def test_diagram_affinity(self, a0, a1, theta):
        assume(a0.inv_q.sign > 0 or a1.inv_q.sign > 0)
        result = interpolate(a0, a1, theta)
        assert result.point == interpolation_segment(a0, a1).at(theta)

    def test_small_theta_approaches_start(self):
        a0, a1 = parse_descriptor("B^{1}_{2,2}"), parse_descriptor("B^{2}_{1,1}")
        result = interpolate(a0, a1, ExtRat(1, 10**6))
        assert abs(result.s - a0.s) <= ExtRat(1, 10**6)
