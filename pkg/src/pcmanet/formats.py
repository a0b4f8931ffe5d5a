"""CSV readers and writers for reputations, tables, epochs and comparisons."""

from __future__ import annotations

import csv
import io
from typing import Hashable, Iterable, TextIO

from .classifier import Method, Outcome, ReputationInterval, outcome_label
from .expert import ClassificationTable
from .simulator import ComparisonReport, Metrics

POINT_HEADER = ["node_id", "value"]
INTERVAL_HEADER = ["node_id", "p", "q"]
TABLE_HEADER = ["node_id", "grade", "class"]
EPOCH_HEADER = ["epoch", "sent", "delivered", "pdr", "low_traversals", "tier_high", "tier_fallback"]
COMPARE_HEADER = ["seed", "pdr_filtered", "pdr_unfiltered", "delta"]


class FormatError(ValueError):
    """Malformed CSV input; the message carries the 1-based line number."""


def _writer(out: TextIO):
    return csv.writer(out, lineterminator="\n")


def _number(text: str, lineno: int, name: str) -> float:
    try:
        return float(text)
    except ValueError:
        raise FormatError(f"line {lineno}: {name} is not a number: {text!r}") from None


def read_reputations(
    stream: TextIO, method: Method | str, *, line_numbers: list[int] | None = None
) -> list[tuple[str, float | ReputationInterval]]:
    """Parse ``node_id,value`` (point) or ``node_id,p,q`` (interval) rows.

    Node ids stay strings so output can echo them unchanged. Pass a list as
    ``line_numbers`` to receive the source line of each returned row.
    """
    method = Method(method)
    expected = POINT_HEADER if method is Method.POINT else INTERVAL_HEADER
    reader = csv.reader(stream)
    header = next(reader, None)
    if header is None:
        raise FormatError("line 1: missing header")
    if [h.strip() for h in header] != expected:
        raise FormatError(f"line 1: expected header {','.join(expected)!r}, got {','.join(header)!r}")
    rows: list[tuple[str, float | ReputationInterval]] = []
    for fields in reader:
        lineno = reader.line_num
        if not fields or all(not f.strip() for f in fields):
            continue
        if len(fields) != len(expected):
            raise FormatError(f"line {lineno}: expected {len(expected)} fields, got {len(fields)}")
        node = fields[0].strip()
        if line_numbers is not None:
            line_numbers.append(lineno)
        if not node:
            raise FormatError(f"line {lineno}: empty node_id")
        if method is Method.POINT:
            rows.append((node, _number(fields[1].strip(), lineno, "value")))
        else:
            p = _number(fields[1].strip(), lineno, "p")
            q = _number(fields[2].strip(), lineno, "q")
            rows.append((node, ReputationInterval(p, q)))
    return rows


def write_outcomes(rows: Iterable[tuple[Hashable, Outcome]], out: TextIO) -> None:
    w = _writer(out)
    w.writerow(TABLE_HEADER)
    for node, outcome in rows:
        w.writerow([node, *outcome_label(outcome)])


def write_table(table: ClassificationTable, out: TextIO) -> None:
    write_outcomes(((n, e.outcome) for n, e in table.entries.items()), out)


def read_table(stream: TextIO) -> list[tuple[str, str, str]]:
    reader = csv.reader(stream)
    header = next(reader, None)
    if header != TABLE_HEADER:
        raise FormatError(f"line 1: expected header {','.join(TABLE_HEADER)!r}")
    return [tuple(r) for r in reader if r]


def _fmt(x: float) -> str:
    return repr(float(x))


def write_epochs(metrics: Metrics, out: TextIO) -> None:
    w = _writer(out)
    w.writerow(EPOCH_HEADER)
    for e in metrics.epochs:
        w.writerow([e.epoch, e.sent, e.delivered, _fmt(e.pdr), e.low_traversals, e.tier_high, e.tier_fallback])


def write_comparison(report: ComparisonReport, out: TextIO) -> None:
    w = _writer(out)
    w.writerow(COMPARE_HEADER)
    for r in report.rows:
        w.writerow([r.seed, _fmt(r.pdr_filtered), _fmt(r.pdr_unfiltered), _fmt(r.delta)])
    w.writerow(["mean", _fmt(report.mean_filtered), _fmt(report.mean_unfiltered), _fmt(report.mean_delta)])


def read_comparison(stream: TextIO) -> list[dict[str, str]]:
    reader = csv.DictReader(stream)
    if reader.fieldnames != COMPARE_HEADER:
        raise FormatError(f"line 1: expected header {','.join(COMPARE_HEADER)!r}")
    return list(reader)


def to_string(writer, obj) -> str:
    buf = io.StringIO()
    writer(obj, buf)
    return buf.getvalue()
