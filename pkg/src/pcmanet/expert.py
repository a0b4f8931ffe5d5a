"""Expert node: network-wide classification and the admission policy."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from types import MappingProxyType
from typing import Hashable, Mapping

from .classifier import (
    REPUTATION_VALUE_ERROR,
    CooperationClass,
    ErrorOutcome,
    Grade,
    Method,
    Mode,
    Outcome,
    QueryRange,
    ReputationInterval,
    classify_interval,
    classify_point,
    grade_to_class,
)
from .reputation import ReputationLedger

__all__ = [
    "TableEntry",
    "ClassificationTable",
    "NodeStrength",
    "Admission",
    "classify_network",
    "node_strength",
    "admit",
    "ExpertNode",
]


@dataclass(frozen=True)
class TableEntry:
    outcome: Outcome

    @property
    def grade(self) -> Grade | None:
        return self.outcome if isinstance(self.outcome, Grade) else None

    @property
    def cooperation_class(self) -> CooperationClass | None:
        g = self.grade
        return None if g is None else grade_to_class(g)


@dataclass(frozen=True)
class ClassificationTable:
    """Immutable per-epoch grade snapshot produced by the expert node."""

    epoch: int
    entries: Mapping[Hashable, TableEntry]
    method: Method
    mode: Mode
    query: QueryRange

    def __post_init__(self) -> None:
        object.__setattr__(self, "entries", MappingProxyType(dict(self.entries)))

    def __len__(self) -> int:
        return len(self.entries)

    def outcome(self, node: Hashable) -> Outcome | None:
        """Outcome for ``node``, or None when the node is unclassified."""
        entry = self.entries.get(node)
        return None if entry is None else entry.outcome

    def nodes_with(self, *grades: Grade) -> frozenset:
        wanted = set(grades)
        return frozenset(n for n, e in self.entries.items() if e.outcome in wanted)

    @classmethod
    def from_outcomes(
        cls,
        outcomes: Mapping[Hashable, Outcome],
        query: QueryRange,
        *,
        epoch: int = 0,
        method: Method = Method.POINT,
        mode: Mode = Mode.RECONCILED,
    ) -> "ClassificationTable":
        return cls(
            epoch=epoch,
            entries={n: TableEntry(o) for n, o in outcomes.items()},
            method=Method(method),
            mode=Mode(mode),
            query=query,
        )


@dataclass(frozen=True)
class NodeStrength:
    high: int = 0
    med: int = 0
    low: int = 0
    errors: int = 0

    @property
    def total(self) -> int:
        return self.high + self.med + self.low + self.errors

    @property
    def counts(self) -> dict[str, int]:
        return {"HIGH": self.high, "MED": self.med, "LOW": self.low, "ERROR": self.errors}


class Admission(str, Enum):
    ALWAYS_ALLOWED = "always-allowed"
    FALLBACK_ONLY = "fallback-only"
    ISOLATED = "isolated"


def classify_network(
    ledger: ReputationLedger,
    query: QueryRange,
    method: Method | str = Method.POINT,
    mode: Mode | str = Mode.RECONCILED,
    *,
    epoch: int = 0,
) -> ClassificationTable:
    """Grade every registered node in ``ledger``.

    Verbatim error outcomes are kept in the table. Reconciled-mode domain
    errors and missing interval history propagate as exceptions.
    """
    method, mode = Method(method), Mode(mode)
    outcomes: dict[Hashable, Outcome] = {}
    for node in ledger.nodes:
        if method is Method.POINT:
            outcomes[node] = classify_point(ledger.point_reputation(node), query, mode)
        else:
            outcomes[node] = classify_interval(ledger.interval_reputation(node), query, mode)
    return ClassificationTable.from_outcomes(outcomes, query, epoch=epoch, method=method, mode=mode)


def classify_values(
    values: Mapping[Hashable, float | ReputationInterval],
    query: QueryRange,
    mode: Mode | str = Mode.RECONCILED,
    *,
    epoch: int = 0,
) -> ClassificationTable:
    """Build a table straight from reputations, without a ledger."""
    mode = Mode(mode)
    outcomes: dict[Hashable, Outcome] = {}
    method = Method.POINT
    for node, rep in values.items():
        if isinstance(rep, ReputationInterval):
            method = Method.INTERVAL
            outcomes[node] = classify_interval(rep, query, mode)
        else:
            outcomes[node] = classify_point(rep, query, mode)
    return ClassificationTable.from_outcomes(outcomes, query, epoch=epoch, method=method, mode=mode)


def node_strength(table: ClassificationTable) -> NodeStrength:
    counts = {Grade.HIGH: 0, Grade.MED: 0, Grade.LOW: 0, REPUTATION_VALUE_ERROR: 0}
    for entry in table.entries.values():
        counts[entry.outcome] += 1
    return NodeStrength(
        high=counts[Grade.HIGH],
        med=counts[Grade.MED],
        low=counts[Grade.LOW],
        errors=counts[REPUTATION_VALUE_ERROR],
    )


def admit(grade: Grade | ErrorOutcome, strength: NodeStrength, strength_min: int = 4) -> Admission:
    """Apply the grade-based admission policy.

    MED nodes are admitted outright only while the network is short of HIGH
    nodes (fewer than ``strength_min``); otherwise they are kept as a fallback.
    Verbatim error outcomes are treated like LOW.
    """
    if strength_min < 0:
        raise ValueError("strength_min must be non-negative")
    if grade is Grade.HIGH:
        return Admission.ALWAYS_ALLOWED
    if grade is Grade.MED:
        if strength.high < strength_min:
            return Admission.ALWAYS_ALLOWED
        return Admission.FALLBACK_ONLY
    return Admission.ISOLATED


@dataclass
class ExpertNode:
    """Holds the ledger and grading settings and publishes tables per epoch."""

    query: QueryRange
    method: Method = Method.POINT
    mode: Mode = Mode.RECONCILED
    ledger: ReputationLedger = field(default_factory=ReputationLedger)
    strength_min: int = 4

    def classify(self, epoch: int = 0) -> ClassificationTable:
        return classify_network(self.ledger, self.query, self.method, self.mode, epoch=epoch)

    def admissions(self, table: ClassificationTable) -> dict[Hashable, Admission]:
        strength = node_strength(table)
        return {n: admit(e.outcome, strength, self.strength_min) for n, e in table.entries.items()}
