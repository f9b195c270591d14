"""Turns case studies and profiles into text and JSON reports."""
import logging

import orjson

from bounds import BoundInput, alpha_upper_bound, s_lower_bound, s_transfer_upper_bound
from casestudies import (
    FLOORS,
    poisson_cutoff,
    poisson_indices,
    poisson_region,
    poisson_sharpness_line,
    ppoisson_case_split,
    stokes_admissible_inv_p,
    stokes_bound,
)
from diagram import DiagramLine, DiagramSpec, LabeledPoint, bound_diagram
from envelope import RegularityAssertion, RegularityRegion, close, limit_alpha, limit_s
from exactnum import ONE, DiagramPoint, Line, line_through, reciprocal, to_decimal
from schemas import CaseReport, ProfileReport, QueryAnswer
from settings import get_settings
from spaces import DomainContext

logger = logging.getLogger(__name__)

QUERY_CITATIONS = {
    "limit_s": ["sbar-definition"],
    "limit_alpha": ["alphabar-definition", "adaptivity-scale"],
    "alpha_upper": ["mu-definition", "alpha-upper-bound", "z-sbar-alpha-chain"],
    "s_lower": ["sbar-lower-bound"],
    "s_transfer": ["sbar-transfer"],
}


def fmt(value, decimal=False):
    if decimal and value.is_finite and value.denominator != 1:
        return f"{value} (≈ {to_decimal(value, get_settings().decimal_digits)})"
    return str(value)


def dump_json(model):
    return orjson.dumps(
        model.model_dump(mode="json", by_alias=True),
        option=orjson.OPT_INDENT_2 | orjson.OPT_SORT_KEYS,
    ).decode()


# --- case studies -------------------------------------------------------------------------

def poisson_report(case, decimal=False):
    indices = poisson_indices(case)
    cutoff = poisson_cutoff(case.d)
    region = poisson_region(case)
    envelope_line = line_through(*region.envelope.breakpoints[:2])
    sharp = poisson_sharpness_line(case)
    summary = f"s̄_p = {fmt(indices.s_bar, decimal)}, ᾱ_p = {fmt(indices.alpha_bar, decimal)}"
    text = "\n".join([
        f"Poisson problem (d = {case.d}, p = {reciprocal(case.inv_p)})",
        summary,
        f"envelope: {envelope_line} on [0, {cutoff}]",
        f"sharpness line: {sharp.line} through {', '.join(str(pt) for pt in sharp.points)}",
        "citations: poisson-input-regularity, poisson-indices, poisson-sharpness-line",
    ])
    report = CaseReport(
        case="poisson",
        parameters={"d": str(case.d), "p": str(reciprocal(case.inv_p))},
        values={"s_bar": indices.s_bar, "alpha_bar": indices.alpha_bar, "cutoff": cutoff},
        outcome="indices",
        summary=summary,
        citations=["poisson-input-regularity", "poisson-indices", "poisson-sharpness-line"],
    )
    return text, report


def poisson_diagram(case):
    indices = poisson_indices(case)
    region = poisson_region(case)
    drawing = DiagramSpec(envelope=region.envelope, title=f"Poisson, d = {case.d}, p = {reciprocal(case.inv_p)}")
    drawing.lines.append(DiagramLine(Line.with_slope(DiagramPoint(0, ONE), ONE), "solid", "1/ρ ↦ 1+1/ρ"))
    drawing.adaptivity_rays.append((case.inv_p, case.d))
    drawing.points.append(LabeledPoint(DiagramPoint(case.inv_p, indices.s_bar), "s̄_p"))
    drawing.points.append(LabeledPoint(poisson_sharpness_line(case).points[2], "ᾱ_p"))
    drawing.lines.append(DiagramLine(Line.with_slope(DiagramPoint(case.inv_p, 0), case.d), "dashed", "1/ρ ↦ d(1/ρ − 1/p)"))
    return drawing


def ppoisson_report(case, decimal=False):
    verdict = ppoisson_case_split(case)
    head = f"p-Poisson problem (d = {case.d}, p = {reciprocal(case.inv_p)}, s̄_p = {case.s_bar})"
    citations = ["ppoisson-pz", "ppoisson-case-split", "alpha-upper-bound"]
    if verdict.case == 1:
        bound = verdict.bound
        summary = f"case 1: ᾱ_p ≤ {fmt(bound.value, decimal)}"
        lines = [head, f"p_z = {verdict.p_z}, z = {bound.z}, μ = {bound.mu}", summary]
        values = {"p_z": verdict.p_z, "z": bound.z, "mu": bound.mu, "bound": bound.value}
    else:
        summary = "case 2: 1 + 1/p ≤ s̄_p ≤ ᾱ_p, no finite bound"
        lines = [head, f"p_z = {verdict.p_z}", summary]
        values = {"p_z": verdict.p_z}
    lines.append("citations: " + ", ".join(citations))
    report = CaseReport(
        case="ppoisson",
        parameters={"d": str(case.d), "p": str(reciprocal(case.inv_p)), "s_bar": str(case.s_bar)},
        values=values,
        outcome=f"case {verdict.case}",
        summary=summary,
        citations=citations,
    )
    return "\n".join(lines), report


def ppoisson_diagram(case):
    verdict = ppoisson_case_split(case)
    bound = verdict.bound
    alpha = bound.value if bound is not None else None
    mu = bound.mu if bound is not None else None
    inv_pz = reciprocal(verdict.p_z)
    return bound_diagram(case.d, case.inv_p, case.s_bar, inv_pz, ONE + ONE / 2, mu=mu, alpha=alpha,
                         title=f"p-Poisson, d = {case.d}, p = {reciprocal(case.inv_p)}")


def stokes_report(case, component, decimal=False):
    verdict = stokes_bound(case, component)
    interval = stokes_admissible_inv_p(case)
    head = (f"Stokes problem, {component} (d = {case.d}, ε = {case.epsilon}, "
            f"σ = {case.sigma}, s̄₂ = {case.s_bar2})")
    if verdict.case == 1:
        summary = f"case 1: ᾱ₂ ≤ {fmt(verdict.bound, decimal)}"
        values = {"m": verdict.m, "admissible_lo": interval.lo, "admissible_hi": interval.hi, "bound": verdict.bound}
    else:
        summary = f"case 2: {FLOORS[component]} + m ≤ s̄₂ ≤ ᾱ₂, no finite bound"
        values = {"m": verdict.m, "admissible_lo": interval.lo, "admissible_hi": interval.hi}
    citations = ["stokes-admissible-p", "stokes-bound"]
    text = "\n".join([
        head,
        f"m = {verdict.m}, admissible 1/p ∈ {interval}",
        summary,
        "citations: " + ", ".join(citations),
    ])
    report = CaseReport(
        case="stokes",
        parameters={"d": str(case.d), "epsilon": str(case.epsilon), "sigma": str(case.sigma),
                    "s_bar2": str(case.s_bar2), "component": component},
        values=values,
        outcome=f"case {verdict.case}",
        summary=summary,
        citations=citations,
    )
    return text, report


def stokes_diagram(case, component):
    verdict = stokes_bound(case, component)
    half = ONE / 2
    if verdict.family is None:
        return bound_diagram(case.d, half, case.s_bar2, half, case.s_bar2, title=f"Stokes {component}, case 2")
    family = verdict.family
    return bound_diagram(case.d, half, case.s_bar2, family.inv_pz, family.z, mu=family.mu, alpha=verdict.bound,
                         title=f"Stokes {component}, d = {case.d}")


# --- profiles -----------------------------------------------------------------------------

def build_region(doc):
    ctx = DomainContext(d=doc.dimension, epsilon=doc.epsilon)
    assertions = [RegularityAssertion(inv_pz=a.inv_pz, z=a.z) for a in doc.assertions]
    if not assertions:
        logger.warning("profile has no assertions; every limit index is -inf")
    return ctx, close(RegularityRegion.of(assertions, ctx), ctx)


def answer_query(query, region, ctx, decimal=False):
    digits = get_settings().decimal_digits
    kind = query.kind
    if kind == "limit_s":
        value = limit_s(region, query.inv_p)
    elif kind == "limit_alpha":
        value = limit_alpha(region, query.inv_p, ctx, query.shift)
    elif kind == "alpha_upper":
        result = alpha_upper_bound(
            BoundInput(ctx=ctx, inv_p=query.inv_p, s_bar=query.s_bar, inv_pz=query.inv_pz, z=query.z),
            query.shift,
        )
        return QueryAnswer(kind=kind, value=result.value, bound=result.to_json(),
                           decimal=to_decimal(result.value, digits) if decimal and result.value is not None else None)
    elif kind == "s_lower":
        value = s_lower_bound(query.alpha, query.inv_p, query.inv_pz, query.z, ctx.d)
    else:
        value = s_transfer_upper_bound(query.s_bar, query.inv_p, query.z, query.inv_pz, query.inv_phat)
    return QueryAnswer(kind=kind, value=value, decimal=to_decimal(value, digits) if decimal else None)


def run_profile(doc, decimal=False):
    ctx, region = build_region(doc)
    answers = [answer_query(query, region, ctx, decimal) for query in doc.queries]
    first = {}
    citations = []
    for answer in answers:
        first.setdefault(answer.kind, answer.value)
        for key in QUERY_CITATIONS[answer.kind]:
            if key not in citations:
                citations.append(key)
    return region, ProfileReport(
        dimension=doc.dimension,
        envelope=region.envelope.to_json(),
        limit_s=first.get("limit_s"),
        limit_alpha=first.get("limit_alpha"),
        answers=answers,
        citations=citations,
    )


def profile_diagram(doc, region):
    """Region shading plus, for every bound query, the construction that produced it."""
    ctx = DomainContext(d=doc.dimension, epsilon=doc.epsilon)
    drawing = DiagramSpec(envelope=region.envelope, title=f"profile, d = {doc.dimension}")
    for query in doc.queries:
        if query.kind == "limit_alpha":
            drawing.adaptivity_rays.append((query.inv_p, ctx.d))
            alpha = limit_alpha(region, query.inv_p, ctx, query.shift)
            if alpha.is_finite and alpha > query.shift:
                s_value = limit_s(region, query.inv_p)
                if s_value.is_finite:
                    drawing.points.append(LabeledPoint(DiagramPoint(query.inv_p, s_value), "s̄_p"))
                drawing.points.append(LabeledPoint(DiagramPoint((alpha - query.shift) / ctx.d + query.inv_p, alpha), "ᾱ_p"))
        elif query.kind == "alpha_upper" and query.s_bar.is_finite:
            result = alpha_upper_bound(
                BoundInput(ctx=ctx, inv_p=query.inv_p, s_bar=query.s_bar, inv_pz=query.inv_pz, z=query.z)
            )
            extra = bound_diagram(ctx.d, query.inv_p, query.s_bar, query.inv_pz, query.z,
                                  mu=result.mu, alpha=result.value if result.is_finite else None)
            drawing.points.extend(extra.points)
            drawing.lines.extend(extra.lines)
            drawing.adaptivity_rays.extend(r for r in extra.adaptivity_rays if r not in drawing.adaptivity_rays)
    return drawing
