# errors.py

# Exit codes shared with the command line: 2 for bad input, 3 for semantically inconsistent input.
INPUT_ERROR = 2
INCONSISTENT = 3


class SmoothCalcError(Exception):
    exit_code = INPUT_ERROR


class RationalParseError(SmoothCalcError):
    def __init__(self, text, position, reason):
        self.text = text
        self.position = position
        self.reason = reason
        super().__init__(f"cannot parse rational {text!r} at position {position}: {reason}")


class SpaceParseError(SmoothCalcError):
    pass


class IndeterminateForm(SmoothCalcError):
    pass


class CoincidentPoints(SmoothCalcError):
    pass


class DegenerateMap(SmoothCalcError):
    pass


class PoleInInterval(SmoothCalcError):
    pass


class InvalidDescriptor(SmoothCalcError):
    pass


class AliasOutOfRange(SmoothCalcError):
    pass


class KindMismatch(SmoothCalcError):
    pass


class LocationMismatch(SmoothCalcError):
    pass


class ThetaOutOfRange(SmoothCalcError):
    pass


class QBothInfinite(SmoothCalcError):
    pass


class GeometryError(SmoothCalcError):
    pass


class HypothesisMissing(SmoothCalcError):
    pass


class InconsistentInput(SmoothCalcError):
    exit_code = INCONSISTENT


class HypothesisBelowFloor(SmoothCalcError):
    exit_code = INCONSISTENT


class ChainBroken(SmoothCalcError):
    exit_code = INCONSISTENT

    def __init__(self, datum, link, verdict):
        self.datum = datum
        self.link = link
        self.verdict = verdict
        super().__init__(f"data chain for {datum} broken at link {link}: {verdict}")
