from fractions import Fraction
from typing import Annotated, Literal, Optional, Union

from pydantic import (
    BaseModel,
    ConfigDict,
    Field,
    PlainSerializer,
    PlainValidator,
    WithJsonSchema,
)

from errors import RationalParseError
from exactnum import ExtRat, parse_rational

RATIONAL_PATTERN = r"^\s*([+-]?\d+(/\d+)?|[+-]?inf|[+-]?∞)\s*$"


def _to_extrat(value):
    if isinstance(value, ExtRat):
        return value
    if isinstance(value, bool):
        raise ValueError("booleans are not rationals")
    if isinstance(value, (int, Fraction)):
        return ExtRat(value)
    if isinstance(value, str):
        try:
            return parse_rational(value)
        except RationalParseError as exc:
            raise ValueError(str(exc)) from exc
    raise ValueError(f"expected a rational string such as '3/2', got {type(value).__name__}")


# Exact rational carried as text on the wire: "3/2", "2", "inf", "-inf".
Rational = Annotated[
    ExtRat,
    PlainValidator(_to_extrat),
    PlainSerializer(str, return_type=str),
    WithJsonSchema({"type": "string", "pattern": RATIONAL_PATTERN}),
]


class WireModel(BaseModel):
    model_config = ConfigDict(
        frozen=True, populate_by_name=True, extra="forbid", validate_default=True
    )


# --- profile input -------------------------------------------------------------------------

class AssertionEntry(WireModel):
    inv_pz: Rational = Field(alias="invPz")
    z: Rational


class LimitQuery(WireModel):
    kind: Literal["limit_s", "limit_alpha"]
    inv_p: Rational = Field(alias="invP")
    shift: Rational = "0"


class AlphaUpperQuery(WireModel):
    kind: Literal["alpha_upper"]
    inv_p: Rational = Field(alias="invP")
    s_bar: Rational = Field(alias="sBar")
    inv_pz: Rational = Field(alias="invPz")
    z: Rational
    shift: Rational = "0"


class SLowerQuery(WireModel):
    kind: Literal["s_lower"]
    alpha: Rational
    inv_p: Rational = Field(alias="invP")
    inv_pz: Rational = Field(alias="invPz")
    z: Rational


class STransferQuery(WireModel):
    kind: Literal["s_transfer"]
    s_bar: Rational = Field(alias="sBar")
    inv_p: Rational = Field(alias="invP")
    z: Rational
    inv_pz: Rational = Field(alias="invPz")
    inv_phat: Rational = Field(alias="invPhat")


ProfileQuery = Annotated[
    Union[LimitQuery, AlphaUpperQuery, SLowerQuery, STransferQuery],
    Field(discriminator="kind"),
]


class ProfileDocument(WireModel):
    dimension: int = Field(ge=1)
    epsilon: Rational = "1"
    assertions: list[AssertionEntry] = []
    queries: list[ProfileQuery] = []


# --- report output -------------------------------------------------------------------------

class EnvelopeJson(WireModel):
    breakpoints: list[tuple[Rational, Rational]]
    left_slope: Optional[Rational] = None
    right_value: Rational


class BoundJson(WireModel):
    outcome: Literal["Finite", "Infinite", "NoBound"]
    value: Optional[Rational] = None
    mu: Optional[Rational] = None
    reason: Literal[
        "zAboveMu", "zBelowOrEqualMu", "sBarInfinite", "inputInconsistent", "shiftNotBelowSBar"
    ]


class QueryAnswer(WireModel):
    kind: str
    value: Optional[Rational] = None
    bound: Optional[BoundJson] = None
    decimal: Optional[str] = None


class ProfileReport(WireModel):
    dimension: int
    envelope: EnvelopeJson
    limit_s: Optional[Rational] = None
    limit_alpha: Optional[Rational] = None
    answers: list[QueryAnswer]
    citations: list[str]


class ChainStepJson(WireModel):
    rule: str
    from_: str = Field(alias="from")
    to: str


class VerdictJson(WireModel):
    outcome: Literal["Embeds", "NotEmbeds", "Unknown"]
    rule: Optional[str] = None
    chain: list[ChainStepJson] = []


class CaseReport(WireModel):
    case: Literal["poisson", "ppoisson", "stokes"]
    parameters: dict[str, str]
    values: dict[str, Rational]
    outcome: str
    summary: str
    citations: list[str]
