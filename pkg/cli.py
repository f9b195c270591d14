#!/usr/bin/env python3
"""smoothcalc command line: embeddings, profiles, bounds, case studies and diagrams."""
import functools
import logging
import sys

import click
import orjson
from dotenv import load_dotenv
from pydantic import ValidationError

from bounds import BoundInput, alpha_upper_bound, s_lower_bound, s_transfer_upper_bound
from casestudies import PPoissonCase, PoissonCase, StokesCase
from citations import citations, get_citation
from diagram import DiagramSpec, LabeledPoint, render_svg
from errors import INPUT_ERROR, RationalParseError, SmoothCalcError
from exactnum import DiagramPoint, parse_rational, reciprocal
from reports import (
    dump_json,
    fmt,
    poisson_diagram,
    poisson_report,
    ppoisson_diagram,
    ppoisson_report,
    profile_diagram,
    run_profile,
    stokes_diagram,
    stokes_report,
)
from rules import embed_check, interpolate
from schemas import ProfileDocument, ProfileReport
from settings import get_settings
from spaces import DomainContext, parse_descriptor, render_space
from sweep import sweep_file

logger = logging.getLogger(__name__)


class RationalType(click.ParamType):
    name = "rational"

    def convert(self, value, param, ctx):
        if not isinstance(value, str):
            return value
        try:
            return parse_rational(value)
        except RationalParseError as e:
            self.fail(str(e), param, ctx)


RATIONAL = RationalType()


def handled(command):
    """Map library errors onto the exit-code contract: 2 bad input, 3 inconsistent input."""

    @functools.wraps(command)
    def wrapper(*args, **kwargs):
        try:
            return command(*args, **kwargs)
        except SmoothCalcError as e:
            logger.error("%s: %s", type(e).__name__, e)
            click.echo(f"❌ {e}", err=True)
            sys.exit(e.exit_code)
        except ValidationError as e:
            logger.error("validation failed: %s", e)
            click.echo(f"❌ {e}", err=True)
            sys.exit(INPUT_ERROR)
        except (OSError, orjson.JSONDecodeError) as e:
            logger.error("cannot read input: %s", e)
            click.echo(f"❌ {e}", err=True)
            sys.exit(INPUT_ERROR)
        except Exception as e:
            logger.error("unexpected failure: %s", e, exc_info=True)
            click.echo(f"❌ Error: {e}", err=True)
            sys.exit(1)

    return wrapper


def _decimal():
    return click.get_current_context().obj.get("decimal", False)


def _write_svg(drawing, path):
    settings = get_settings()
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(render_svg(drawing, settings.svg_width, settings.svg_height))
    logger.info("wrote diagram to %s", path)


def _emit(text, out=None):
    if out is None:
        click.echo(text)
        return
    with open(out, "w", encoding="utf-8", newline="\n") as f:
        f.write(text + "\n")
    logger.info("wrote %s", out)


def _load_profile(path):
    with open(path, "rb") as f:
        return ProfileDocument.model_validate(orjson.loads(f.read()))


@click.group()
@click.option("--verbose", is_flag=True, help="Log search and closure internals at DEBUG level.")
@click.option("--decimal", is_flag=True, help="Add a decimal rendering next to exact rationals.")
@click.pass_context
def cli(ctx, verbose, decimal):
    load_dotenv()
    level = logging.DEBUG if verbose else get_settings().log_level.upper()
    logging.basicConfig(level=level, format='%(asctime)s - %(levelname)s - %(message)s')
    ctx.obj = {"decimal": decimal}


# --- embeddings and interpolation ---------------------------------------------------------

@cli.command()
@click.argument("source")
@click.argument("target")
@click.option("--d", "d", type=int, required=True, help="Space dimension.")
@click.option("--eps", type=RATIONAL, default="1", show_default=True)
@click.option("--json", "as_json", is_flag=True)
@handled
def embed(source, target, d, eps, as_json):
    """Decide SOURCE ↪ TARGET with the embedding rules."""
    verdict = embed_check(parse_descriptor(source), parse_descriptor(target), DomainContext(d=d, epsilon=eps))
    if as_json:
        click.echo(dump_json(verdict.to_json()))
        return
    click.echo(str(verdict))
    if len(verdict.chain) > 1:
        for step in verdict.chain:
            click.echo(f"  {step.source} ↪ {step.target}  ({step.rule})")


@cli.command("interpolate")
@click.argument("first")
@click.argument("second")
@click.argument("theta", type=RATIONAL)
@handled
def interpolate_cmd(first, second, theta):
    """Complex interpolation [FIRST, SECOND]_THETA."""
    click.echo(render_space(interpolate(parse_descriptor(first), parse_descriptor(second), theta)))


# --- profiles -----------------------------------------------------------------------------

@cli.command()
@click.argument("path", type=click.Path(dir_okay=False))
@click.option("--out", type=click.Path(dir_okay=False), help="Write the JSON report here instead of stdout.")
@click.option("--svg", "svg_path", type=click.Path(dir_okay=False), help="Also write the region diagram.")
@handled
def profile(path, out, svg_path):
    """Close the assertions of a profile document and answer its queries."""
    doc = _load_profile(path)
    region, report = run_profile(doc, decimal=_decimal())
    _emit(dump_json(report), out)
    if svg_path:
        _write_svg(profile_diagram(doc, region), svg_path)


@cli.command()
@click.argument("path", type=click.Path(dir_okay=False))
@click.option("--out", type=click.Path(dir_okay=False), required=True)
@click.option("--point", "points", multiple=True, help="Extra labelled point 'x,y[,label]'.")
@handled
def diagram(path, out, points):
    """DeVore-Triebel diagram of a profile, optionally with extra marked points."""
    doc = _load_profile(path)
    region, _ = run_profile(doc)
    drawing = profile_diagram(doc, region)
    for text in points:
        parts = [part.strip() for part in text.split(",")]
        if len(parts) not in (2, 3):
            raise SmoothCalcError(f"--point expects 'x,y[,label]', got {text!r}")
        label = parts[2] if len(parts) == 3 else ""
        drawing.points.append(LabeledPoint(DiagramPoint(parse_rational(parts[0]), parse_rational(parts[1])), label))
    _write_svg(drawing, out)


# --- bounds -------------------------------------------------------------------------------

@cli.group()
def bound():
    """Adaptivity upper bound and the companion Sobolev bounds."""


@bound.command("alpha")
@click.option("--d", "d", type=int, required=True)
@click.option("--p", "p", type=RATIONAL, required=True)
@click.option("--sbar", type=RATIONAL, required=True)
@click.option("--pz", type=RATIONAL, required=True, help="Integrability of the auxiliary assertion ('inf' allowed).")
@click.option("--z", "z", type=RATIONAL, required=True)
@click.option("--shift", type=RATIONAL, default="0", show_default=True, help="Error measured in W^shift_p.")
@click.option("--json", "as_json", is_flag=True)
@handled
def bound_alpha(d, p, sbar, pz, z, shift, as_json):
    inp = BoundInput(ctx=DomainContext(d=d), inv_p=reciprocal(p), s_bar=sbar, inv_pz=reciprocal(pz), z=z)
    result = alpha_upper_bound(inp, shift)
    if as_json:
        click.echo(dump_json(result.to_json()))
    elif result.is_finite:
        click.echo(f"ᾱ_p ≤ {fmt(result.value, _decimal())} (μ = {result.mu})")
    else:
        click.echo(str(result))


@bound.command("s-lower")
@click.option("--d", "d", type=int, required=True)
@click.option("--alpha", type=RATIONAL, required=True)
@click.option("--p", "p", type=RATIONAL, required=True)
@click.option("--pz", type=RATIONAL, required=True)
@click.option("--z", "z", type=RATIONAL, required=True)
@handled
def bound_s_lower(d, alpha, p, pz, z):
    value = s_lower_bound(alpha, reciprocal(p), reciprocal(pz), z, d)
    click.echo(f"s̄_p ≥ {fmt(value, _decimal())}")


@bound.command("s-transfer")
@click.option("--sbar", type=RATIONAL, required=True)
@click.option("--p", "p", type=RATIONAL, required=True)
@click.option("--z", "z", type=RATIONAL, required=True)
@click.option("--pz", type=RATIONAL, required=True)
@click.option("--phat", type=RATIONAL, required=True)
@handled
def bound_s_transfer(sbar, p, z, pz, phat):
    value = s_transfer_upper_bound(sbar, reciprocal(p), z, reciprocal(pz), reciprocal(phat))
    click.echo(f"s̄_p̂ ≤ {fmt(value, _decimal())}")


# --- case studies -------------------------------------------------------------------------

@cli.group()
def case():
    """Reports for the Poisson, p-Poisson and Stokes problems."""


def _print_case(text, report, as_json):
    click.echo(dump_json(report) if as_json else text)


@case.command("poisson")
@click.option("--d", "d", type=int, required=True)
@click.option("--p", "p", type=RATIONAL, required=True)
@click.option("--svg", "svg_path", type=click.Path(dir_okay=False))
@click.option("--json", "as_json", is_flag=True)
@handled
def case_poisson(d, p, svg_path, as_json):
    c = PoissonCase(d=d, inv_p=reciprocal(p))
    _print_case(*poisson_report(c, _decimal()), as_json)
    if svg_path:
        _write_svg(poisson_diagram(c), svg_path)


@case.command("ppoisson")
@click.option("--d", "d", type=int, required=True)
@click.option("--p", "p", type=RATIONAL, required=True)
@click.option("--sbar", type=RATIONAL, default=None, help="Hypothesised s̄_p (at least 3/2).")
@click.option("--svg", "svg_path", type=click.Path(dir_okay=False))
@click.option("--json", "as_json", is_flag=True)
@handled
def case_ppoisson(d, p, sbar, svg_path, as_json):
    c = PPoissonCase(d=d, inv_p=reciprocal(p), s_bar=sbar)
    _print_case(*ppoisson_report(c, _decimal()), as_json)
    if svg_path:
        _write_svg(ppoisson_diagram(c), svg_path)


@case.command("stokes")
@click.option("--d", "d", type=int, required=True)
@click.option("--eps", type=RATIONAL, default="1", show_default=True)
@click.option("--sigma", type=RATIONAL, required=True)
@click.option("--sbar2", type=RATIONAL, required=True)
@click.option("--component", type=click.Choice(["velocity", "pressure"]), default="velocity", show_default=True)
@click.option("--svg", "svg_path", type=click.Path(dir_okay=False))
@click.option("--json", "as_json", is_flag=True)
@handled
def case_stokes(d, eps, sigma, sbar2, component, svg_path, as_json):
    c = StokesCase(d=d, epsilon=eps, sigma=sigma, s_bar2=sbar2)
    _print_case(*stokes_report(c, component, _decimal()), as_json)
    if svg_path:
        _write_svg(stokes_diagram(c, component), svg_path)


# --- batch and schema ---------------------------------------------------------------------

@cli.command()
@click.argument("path", type=click.Path(dir_okay=False))
@click.option("--out", type=click.Path(dir_okay=False))
@handled
def sweep(path, out):
    """Evaluate a CSV grid of case parameters (columns case, d, p, sbar, eps, sigma, component)."""
    text = sweep_file(path, out)
    if text is not None:
        click.echo(text, nl=False)


@cli.command()
@click.argument("keys", nargs=-1)
@handled
def cite(keys):
    """Print the formula behind each citation identifier (all of them when none are given)."""
    for key in keys or sorted(citations):
        formula = get_citation(key)
        if formula is None:
            raise SmoothCalcError(f"unknown citation '{key}'")
        click.echo(f"{key}: {formula}")


@cli.command()
@click.option("--out", type=click.Path(dir_okay=False))
@handled
def schema(out):
    """JSON schema of the profile report."""
    text = orjson.dumps(ProfileReport.model_json_schema(by_alias=True),
                        option=orjson.OPT_INDENT_2 | orjson.OPT_SORT_KEYS).decode()
    _emit(text, out)


if __name__ == "__main__":
    cli()
