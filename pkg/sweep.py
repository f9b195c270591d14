#!/usr/bin/env python3
"""Batch evaluation of case studies over a CSV grid of parameters."""
import asyncio
import logging

import polars as pl
from pydantic import ValidationError

from casestudies import PPoissonCase, PoissonCase, StokesCase
from errors import SmoothCalcError
from exactnum import parse_rational, reciprocal
from reports import poisson_report, ppoisson_report, stokes_report

logger = logging.getLogger(__name__)

RESULT_COLUMNS = ("outcome", "value", "summary", "error")


def _text(row, name, default=None):
    value = row.get(name)
    if value is None or str(value).strip() == "":
        return default
    return str(value).strip()


def evaluate_row(row):
    """One grid point: the case report's outcome and headline value, or the error it raised."""
    case = _text(row, "case", "")
    try:
        d = int(_text(row, "d", "0"))
        if case == "poisson":
            _, report = poisson_report(PoissonCase(d=d, inv_p=reciprocal(parse_rational(_text(row, "p")))))
            value = report.values["alpha_bar"]
        elif case == "ppoisson":
            sbar = _text(row, "sbar")
            _, report = ppoisson_report(PPoissonCase(
                d=d, inv_p=reciprocal(parse_rational(_text(row, "p"))),
                s_bar=parse_rational(sbar) if sbar is not None else None,
            ))
            value = report.values.get("bound")
        elif case == "stokes":
            _, report = stokes_report(
                StokesCase(d=d, epsilon=parse_rational(_text(row, "eps", "1")),
                           sigma=parse_rational(_text(row, "sigma")), s_bar2=parse_rational(_text(row, "sbar"))),
                _text(row, "component", "velocity"),
            )
            value = report.values.get("bound")
        else:
            raise SmoothCalcError(f"unknown case '{case}'")
    except (SmoothCalcError, ValidationError, ValueError, TypeError) as e:
        logger.debug("sweep row %s failed: %s", row, e)
        return {"outcome": "error", "value": None, "summary": None, "error": str(e).splitlines()[0]}
    return {
        "outcome": report.outcome,
        "value": str(value) if value is not None else None,
        "summary": report.summary,
        "error": None,
    }


async def evaluate_rows(rows):
    # each row is independent; the default executor spreads them over its worker threads
    return await asyncio.gather(*(asyncio.to_thread(evaluate_row, row) for row in rows))


def run_sweep(frame):
    missing = [c for c in ("case", "d") if c not in frame.columns]
    if missing:
        raise SmoothCalcError(f"sweep grid is missing columns: {', '.join(missing)}")
    frame = frame.with_columns(pl.col(c).cast(pl.Utf8) for c in frame.columns)
    results = asyncio.run(evaluate_rows(list(frame.iter_rows(named=True))))
    failed = sum(r["error"] is not None for r in results)
    if failed:
        logger.warning("%d of %d sweep rows failed", failed, len(results))
    out = pl.DataFrame(results, schema={name: pl.Utf8 for name in RESULT_COLUMNS})
    return pl.concat([frame, out], how="horizontal")


def sweep_file(in_path, out_path=None):
    """Evaluate the grid in ``in_path``; returns the CSV text when no output path is given."""
    result = run_sweep(pl.read_csv(in_path, infer_schema_length=0))
    if out_path is None:
        return result.write_csv()
    result.write_csv(out_path)
    return None
