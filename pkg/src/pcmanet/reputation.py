"""Per-node reputation bookkeeping driven by forwarding observations.

This is a deliberately small additive model: a forwarded packet earns
``reward``, a dropped one costs ``penalty``, and values are clamped to the
0-100 scale. Epoch-end values are sealed into a fixed-length window from
which interval reputations ``[min, max]`` are read.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from enum import Enum
from typing import Hashable, Iterable

from .classifier import MAXR, MINR, ReputationInterval

__all__ = [
    "ObservationKind",
    "Observation",
    "ReputationParams",
    "ReputationLedger",
    "UnknownNodeError",
    "NoHistoryError",
]


class ObservationKind(str, Enum):
    FORWARDED = "forwarded"
    DROPPED = "dropped"


@dataclass(frozen=True)
class Observation:
    """``observer`` saw ``subject`` forward or drop a packet during ``epoch``."""

    observer: Hashable
    subject: Hashable
    epoch: int
    kind: ObservationKind

    def __post_init__(self) -> None:
        if self.observer == self.subject:
            raise ValueError("a node cannot observe itself")
        if self.epoch < 0:
            raise ValueError(f"epoch must be non-negative, got {self.epoch}")
        object.__setattr__(self, "kind", ObservationKind(self.kind))


@dataclass(frozen=True)
class ReputationParams:
    initial: float = 50.0
    reward: float = 1.0
    penalty: float = 2.0
    window: int = 5

    def __post_init__(self) -> None:
        if not (MINR <= self.initial <= MAXR):
            raise ValueError(f"initial reputation must lie in [{MINR}, {MAXR}]")
        if self.reward < 0 or self.penalty < 0:
            raise ValueError("reward and penalty must be non-negative")
        if self.window < 1:
            raise ValueError("window must be at least 1")


class UnknownNodeError(KeyError):
    pass


class NoHistoryError(LookupError):
    pass


def _clamp(value: float) -> float:
    return min(float(MAXR), max(float(MINR), value))


class ReputationLedger:
    """Current reputation and sealed epoch history for every known node.

    Single-writer: the owner (simulator or expert node) mutates it in place.
    """

    def __init__(self, params: ReputationParams | None = None, nodes: Iterable[Hashable] = ()):
        self.params = params or ReputationParams()
        self._values: dict[Hashable, float] = {}
        self._history: dict[Hashable, deque[float]] = {}
        for node in nodes:
            self.register(node)

    def __contains__(self, node: Hashable) -> bool:
        return node in self._values

    def __len__(self) -> int:
        return len(self._values)

    @property
    def nodes(self) -> list[Hashable]:
        """Registered nodes in registration order."""
        return list(self._values)

    def register(self, node: Hashable, value: float | None = None) -> None:
        if node in self._values:
            return
        self._values[node] = _clamp(self.params.initial if value is None else value)
        self._history[node] = deque(maxlen=self.params.window)

    def set_value(self, node: Hashable, value: float) -> None:
        """Overwrite a node's current value (clamped); registers unknown nodes."""
        self.register(node)
        self._values[node] = _clamp(value)

    def record_observation(self, obs: Observation) -> float:
        """Apply one observation and return the subject's new value."""
        self.register(obs.subject)
        v = self._values[obs.subject]
        if obs.kind is ObservationKind.FORWARDED:
            v = min(float(MAXR), v + self.params.reward)
        else:
            v = max(float(MINR), v - self.params.penalty)
        self._values[obs.subject] = v
        return v

    def point_reputation(self, node: Hashable) -> float:
        try:
            return self._values[node]
        except KeyError:
            raise UnknownNodeError(node) from None

    def advance_epoch(self) -> None:
        """Seal every node's current value into its history window."""
        for node, v in self._values.items():
            self._history[node].append(v)

    def history(self, node: Hashable) -> list[float]:
        if node not in self._history:
            raise UnknownNodeError(node)
        return list(self._history[node])

    def interval_reputation(self, node: Hashable) -> ReputationInterval:
        hist = self.history(node)
        if not hist:
            raise NoHistoryError(f"node {node!r} has no sealed epochs")
        return ReputationInterval(min(hist), max(hist))

    def snapshot(self) -> dict[Hashable, float]:
        return dict(self._values)
