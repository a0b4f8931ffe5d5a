"""Possibility & certainty grading of node reputations.

Two grading modes are provided. ``Mode.VERBATIM`` follows the published
branch logic literally, quirks included (``r == 0`` is an error, values above
100 still grade MED, most high intervals error out). ``Mode.RECONCILED`` is a
total, monotone rule that reproduces the published classification tables and
is the default everywhere else in the package.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum, IntEnum
from typing import Hashable, Iterable, Union

__all__ = [
    "MINR",
    "MAXR",
    "Grade",
    "CooperationClass",
    "Mode",
    "Method",
    "ErrorOutcome",
    "REPUTATION_VALUE_ERROR",
    "ReputationDomainError",
    "QueryRange",
    "ReputationInterval",
    "grade_to_class",
    "classify_point",
    "classify_interval",
    "classify_batch",
]

MINR = 0
MAXR = 100


class Grade(IntEnum):
    """Classification grade, ordered LOW < MED < HIGH."""

    LOW = 0
    MED = 1
    HIGH = 2


class CooperationClass(str, Enum):
    CERTAIN = "certain"
    POSSIBLE = "possible"
    NOT_POSSIBLE = "not-possible"


class Mode(str, Enum):
    VERBATIM = "verbatim"
    RECONCILED = "reconciled"


class Method(str, Enum):
    POINT = "point"
    INTERVAL = "interval"


class ErrorOutcome(Enum):
    """Outcome when no verbatim branch matches."""

    REPUTATION_VALUE_ERROR = "reputation-value-error"

    def __str__(self) -> str:
        return "ERROR"


REPUTATION_VALUE_ERROR = ErrorOutcome.REPUTATION_VALUE_ERROR

Outcome = Union[Grade, ErrorOutcome]


class ReputationDomainError(ValueError):
    """A reputation or interval lies outside the 0-100 scale."""


_CLASS_OF = {
    Grade.HIGH: CooperationClass.CERTAIN,
    Grade.MED: CooperationClass.POSSIBLE,
    Grade.LOW: CooperationClass.NOT_POSSIBLE,
}


@dataclass(frozen=True)
class QueryRange:
    """Grading thresholds ``x <= y`` on the 0-100 scale."""

    x: float
    y: float

    def __post_init__(self) -> None:
        if not (MINR <= self.x <= self.y <= MAXR):
            raise ValueError(
                f"query range must satisfy {MINR} <= x <= y <= {MAXR}, got ({self.x}, {self.y})"
            )


@dataclass(frozen=True)
class ReputationInterval:
    """Reputation known only as a range ``[p, q]``.

    Construction does not validate, because verbatim mode accepts anything;
    use :meth:`validate` (or reconciled classification) to enforce
    ``0 <= p <= q <= 100``.
    """

    p: float
    q: float

    def validate(self) -> None:
        if not (MINR <= self.p <= self.q <= MAXR):
            raise ReputationDomainError(
                f"interval must satisfy {MINR} <= p <= q <= {MAXR}, got [{self.p}, {self.q}]"
            )


def grade_to_class(grade: Grade) -> CooperationClass:
    return _CLASS_OF[Grade(grade)]


def _mode(mode: Mode | str) -> Mode:
    return mode if isinstance(mode, Mode) else Mode(mode)


def _point_verbatim(r: float, x: float, y: float) -> Outcome:
    if r >= x and r >= y and r <= MAXR:
        return Grade.HIGH
    elif r >= x:
        return Grade.MED
    elif r > MINR and r < x:
        return Grade.LOW
    else:
        return REPUTATION_VALUE_ERROR


def _interval_verbatim(p: float, q: float, x: float, y: float) -> Outcome:
    # The published MED guard reads `q <= Y`; taken as lowercase y.
    if (x <= p <= y) and (x <= q <= MAXR):
        return Grade.HIGH
    elif (x <= p <= y) or (x <= q <= y):
        return Grade.MED
    elif p < MINR or q < MINR:
        return Grade.LOW
    else:
        return REPUTATION_VALUE_ERROR


def classify_point(r: float, query: QueryRange, mode: Mode | str = Mode.RECONCILED) -> Outcome:
    """Grade a scalar reputation ``r`` against ``query``.

    Reconciled: HIGH iff ``y <= r <= 100``, MED iff ``x <= r < y``, LOW iff
    ``0 <= r < x``; values outside [0, 100] raise ReputationDomainError.
    Verbatim mode never raises and may return ``REPUTATION_VALUE_ERROR``.
    """
    if _mode(mode) is Mode.VERBATIM:
        return _point_verbatim(r, query.x, query.y)
    if not (MINR <= r <= MAXR):
        raise ReputationDomainError(f"reputation must lie in [{MINR}, {MAXR}], got {r}")
    if r >= query.y:
        return Grade.HIGH
    if r >= query.x:
        return Grade.MED
    return Grade.LOW


def classify_interval(
    iv: ReputationInterval, query: QueryRange, mode: Mode | str = Mode.RECONCILED
) -> Outcome:
    """Grade an interval reputation against ``query``.

    The reconciled rule only looks at ``x``: HIGH when the whole interval
    clears it (``p >= x``), MED when it straddles it, LOW when it lies wholly
    below. ``y`` plays no part; it is the one threshold rule that agrees with
    every row of the published interval table.
    """
    if _mode(mode) is Mode.VERBATIM:
        return _interval_verbatim(iv.p, iv.q, query.x, query.y)
    iv.validate()
    if iv.p >= query.x:
        return Grade.HIGH
    if iv.q >= query.x:
        return Grade.MED
    return Grade.LOW


def classify_batch(
    inputs: Iterable[tuple[Hashable, float | ReputationInterval]],
    query: QueryRange,
    mode: Mode | str = Mode.RECONCILED,
) -> list[tuple[Hashable, Outcome | ReputationDomainError]]:
    """Classify each ``(node_id, reputation)`` row, preserving order.

    Scalars go through the point method, intervals through the interval
    method. A row whose input is out of domain carries the
    :class:`ReputationDomainError` instance in place of an outcome; the
    remaining rows are still classified.
    """
    mode = _mode(mode)
    out: list[tuple[Hashable, Outcome | ReputationDomainError]] = []
    for node_id, rep in inputs:
        try:
            if isinstance(rep, ReputationInterval):
                outcome: Outcome | ReputationDomainError = classify_interval(rep, query, mode)
            else:
                outcome = classify_point(rep, query, mode)
        except ReputationDomainError as exc:
            outcome = exc
        out.append((node_id, outcome))
    return out


def outcome_label(outcome: Outcome) -> tuple[str, str]:
    """Return the ``(grade, class)`` strings used in CSV output."""
    if isinstance(outcome, ErrorOutcome):
        return "ERROR", outcome.value
    return outcome.name, grade_to_class(outcome).value
