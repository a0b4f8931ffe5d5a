"""Round-based packet-forwarding simulation with reputation-driven routing.

Each epoch generates random flows, routes them (grade-filtered or plain
minimum-hop), walks every packet hop by hop and lets the upstream node
watch each relay. At the end of the epoch reputations are sealed and the
expert reclassifies the network. All randomness comes from streams spawned
off one seed, with traffic on its own stream, so the filtered and baseline
arms of a comparison see the same flows.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Hashable, Mapping, Sequence

import numpy as np

from .classifier import Grade, Method, Mode, QueryRange, ReputationInterval
from .expert import ClassificationTable, classify_network, classify_values
from .reputation import Observation, ObservationKind, ReputationLedger, ReputationParams
from .routing import Tier, Topology, TopologySpec, build_topology, select_path, select_unfiltered

__all__ = [
    "BehaviorProfile",
    "ProfileSpec",
    "Policy",
    "SimConfig",
    "ConfigError",
    "EpochStats",
    "Metrics",
    "ComparisonReport",
    "run",
    "compare",
    "assign_profiles",
]


class ConfigError(ValueError):
    """Invalid simulation configuration; ``field`` names the offending setting."""

    def __init__(self, field: str, reason: str):
        super().__init__(f"{field}: {reason}")
        self.field = field
        self.reason = reason


@dataclass(frozen=True)
class BehaviorProfile:
    kind: str = "cooperative"
    drop_probability: float = 0.0

    def __post_init__(self) -> None:
        if self.kind not in ("cooperative", "selfish", "blackhole"):
            raise ValueError(f"unknown behaviour {self.kind!r}")
        if not 0.0 <= self.drop_probability <= 1.0:
            raise ValueError("drop_probability must lie in [0, 1]")
        if self.kind == "blackhole":
            object.__setattr__(self, "drop_probability", 1.0)
        elif self.kind == "cooperative":
            object.__setattr__(self, "drop_probability", 0.0)

    @classmethod
    def parse(cls, text: str) -> "BehaviorProfile":
        """Parse ``cooperative``, ``blackhole`` or ``selfish:<p>``."""
        kind, _, arg = str(text).strip().partition(":")
        if kind == "selfish":
            if not arg:
                raise ValueError("selfish profile needs a drop probability, e.g. 'selfish:0.5'")
            return cls("selfish", float(arg))
        if arg:
            raise ValueError(f"profile {kind!r} takes no argument")
        return cls(kind)

    def __str__(self) -> str:
        if self.kind == "selfish":
            return f"selfish:{self.drop_probability:g}"
        return self.kind

    @property
    def misbehaves(self) -> bool:
        return self.drop_probability > 0.0


COOPERATIVE = BehaviorProfile()


@dataclass(frozen=True)
class ProfileSpec:
    """Explicit per-node profiles plus seeded random assignment by fraction.

    Fractions are applied to the non-expert nodes that have no explicit
    profile; the count is ``round(fraction * eligible)``.
    """

    nodes: Mapping[Hashable, BehaviorProfile] = field(default_factory=dict)
    blackhole_fraction: float = 0.0
    selfish_fraction: float = 0.0
    selfish_drop_probability: float = 0.5


class Policy(str, Enum):
    PC_FILTERED = "pc-filtered"
    UNFILTERED = "unfiltered-baseline"


@dataclass(frozen=True)
class SimConfig:
    topology: TopologySpec = field(default_factory=TopologySpec)
    profiles: ProfileSpec = field(default_factory=ProfileSpec)
    query: QueryRange = field(default_factory=lambda: QueryRange(50.0, 70.0))
    method: Method = Method.POINT
    mode: Mode = Mode.RECONCILED
    reputation: ReputationParams = field(default_factory=ReputationParams)
    epochs: int = 100
    warmup_epochs: int = 10
    flows_per_epoch: int = 10
    policy: Policy = Policy.PC_FILTERED
    seed: int = 0
    detection_probability: float = 1.0
    link_loss: float = 0.0
    expert_relay: bool = False

    def validate(self) -> None:
        if self.epochs <= self.warmup_epochs:
            raise ConfigError("run.epochs", f"must exceed run.warmup ({self.epochs} <= {self.warmup_epochs})")
        if self.warmup_epochs < 0:
            raise ConfigError("run.warmup", "must be non-negative")
        if self.flows_per_epoch < 1:
            raise ConfigError("run.flows_per_epoch", "must be at least 1")
        if not 0.0 <= self.detection_probability <= 1.0:
            raise ConfigError("run.detection_probability", "must lie in [0, 1]")
        if not 0.0 <= self.link_loss <= 1.0:
            raise ConfigError("run.link_loss", "must lie in [0, 1]")
        p = self.profiles
        for name in ("blackhole_fraction", "selfish_fraction"):
            if not 0.0 <= getattr(p, name) <= 1.0:
                raise ConfigError(f"profiles.{name}", "must lie in [0, 1]")
        if p.blackhole_fraction + p.selfish_fraction > 1.0:
            raise ConfigError("profiles", "blackhole_fraction + selfish_fraction exceeds 1")
        if not 0.0 <= p.selfish_drop_probability <= 1.0:
            raise ConfigError("profiles.selfish_drop_probability", "must lie in [0, 1]")
        try:
            topo = build_topology(self.topology, self.seed)
        except ValueError as exc:
            raise ConfigError("topology", str(exc)) from None
        unknown = [n for n in p.nodes if n not in topo.nodes]
        if unknown:
            raise ConfigError("profiles.nodes", f"unknown node ids {sorted(unknown, key=str)}")
        if len(topo.nodes - {topo.expert}) < 2:
            raise ConfigError("topology", "needs at least two non-expert nodes to generate flows")


@dataclass
class EpochStats:
    epoch: int
    sent: int = 0
    delivered: int = 0
    low_traversals: int = 0
    tier_high: int = 0
    tier_fallback: int = 0
    tier_unfiltered: int = 0
    no_route: int = 0

    @property
    def dropped(self) -> int:
        return self.sent - self.delivered

    @property
    def pdr(self) -> float:
        return self.delivered / self.sent if self.sent else 0.0


@dataclass
class Metrics:
    """Run results. Totals cover post-warmup epochs; ``epochs`` covers all."""

    seed: int
    policy: Policy
    warmup_epochs: int
    epochs: list[EpochStats] = field(default_factory=list)
    classification_trace: list[dict[Hashable, str]] = field(default_factory=list)
    profiles: dict[Hashable, str] = field(default_factory=dict)

    def _measured(self) -> list[EpochStats]:
        return [e for e in self.epochs if e.epoch >= self.warmup_epochs]

    def _sum(self, name: str) -> int:
        return sum(getattr(e, name) for e in self._measured())

    @property
    def sent(self) -> int:
        return self._sum("sent")

    @property
    def delivered(self) -> int:
        return self._sum("delivered")

    @property
    def dropped(self) -> int:
        return self.sent - self.delivered

    @property
    def pdr(self) -> float:
        sent = self.sent
        return self.delivered / sent if sent else 0.0

    @property
    def low_traversals(self) -> int:
        return self._sum("low_traversals")

    @property
    def tier_counts(self) -> dict[str, int]:
        return {
            Tier.HIGH_ONLY.value: self._sum("tier_high"),
            Tier.MED_FALLBACK.value: self._sum("tier_fallback"),
            Tier.UNFILTERED.value: self._sum("tier_unfiltered"),
            "no-route": self._sum("no_route"),
        }

    def summary(self) -> dict:
        return {
            "seed": self.seed,
            "policy": self.policy.value,
            "warmup_epochs": self.warmup_epochs,
            "epochs": len(self.epochs),
            "sent": self.sent,
            "delivered": self.delivered,
            "dropped": self.dropped,
            "pdr": self.pdr,
            "low_traversals": self.low_traversals,
            "tiers": self.tier_counts,
            "profiles": {str(k): v for k, v in self.profiles.items()},
            "final_classification": {str(k): v for k, v in self.classification_trace[-1].items()}
            if self.classification_trace
            else {},
        }


def _sort_key(node: Hashable) -> tuple:
    return (isinstance(node, str), node)


def assign_profiles(
    topo: Topology, spec: ProfileSpec, rng: np.random.Generator
) -> dict[Hashable, BehaviorProfile]:
    profiles = {n: COOPERATIVE for n in topo.nodes}
    profiles.update(spec.nodes)
    eligible = sorted((n for n in topo.nodes if n != topo.expert and n not in spec.nodes), key=_sort_key)
    n_black = round(spec.blackhole_fraction * len(eligible))
    n_selfish = round(spec.selfish_fraction * len(eligible))
    n_selfish = min(n_selfish, len(eligible) - n_black)
    chosen = rng.permutation(len(eligible))
    for i in chosen[:n_black]:
        profiles[eligible[i]] = BehaviorProfile("blackhole")
    for i in chosen[n_black : n_black + n_selfish]:
        profiles[eligible[i]] = BehaviorProfile("selfish", spec.selfish_drop_probability)
    return profiles


def _initial_table(ledger: ReputationLedger, config: SimConfig) -> ClassificationTable:
    if config.method is Method.POINT:
        return classify_network(ledger, config.query, config.method, config.mode, epoch=0)
    # no sealed history yet: grade each node's starting value as a degenerate interval
    values = {n: ReputationInterval(v, v) for n, v in ledger.snapshot().items()}
    return classify_values(values, config.query, config.mode, epoch=0)


def run(config: SimConfig) -> Metrics:
    """Execute one seeded simulation run."""
    config.validate()
    topo_ss, profile_ss, traffic_ss, behavior_ss = np.random.SeedSequence(config.seed).spawn(4)
    topo_seed = config.topology.seed
    if topo_seed is None:
        topo_seed = int(topo_ss.generate_state(1)[0])
    topo = build_topology(replace(config.topology, seed=topo_seed))
    profiles = assign_profiles(topo, config.profiles, np.random.default_rng(profile_ss))
    traffic = np.random.default_rng(traffic_ss)
    behavior = np.random.default_rng(behavior_ss)

    endpoints = sorted((n for n in topo.nodes if n != topo.expert), key=_sort_key)
    ledger = ReputationLedger(config.reputation, endpoints)
    table = _initial_table(ledger, config)
    filtered = config.policy is Policy.PC_FILTERED

    metrics = Metrics(
        seed=config.seed,
        policy=config.policy,
        warmup_epochs=config.warmup_epochs,
        profiles={n: str(profiles[n]) for n in sorted(profiles, key=_sort_key)},
    )
    for epoch in range(config.epochs):
        stats = EpochStats(epoch)
        route_cache: dict[tuple, object] = {}
        for _ in range(config.flows_per_epoch):
            i, j = traffic.choice(len(endpoints), size=2, replace=False)
            src, dst = endpoints[i], endpoints[j]
            stats.sent += 1
            key = (src, dst)
            if key not in route_cache:
                if filtered:
                    route_cache[key] = select_path(topo, table, src, dst, expert_relay=config.expert_relay)
                else:
                    route_cache[key] = select_unfiltered(topo, src, dst, expert_relay=config.expert_relay)
            route = route_cache[key]
            if route is None:
                stats.no_route += 1
                continue
            if route.tier is Tier.HIGH_ONLY:
                stats.tier_high += 1
            elif route.tier is Tier.MED_FALLBACK:
                stats.tier_fallback += 1
            else:
                stats.tier_unfiltered += 1
            if _walk(route.nodes, epoch, profiles, table, ledger, behavior, config, stats):
                stats.delivered += 1
        ledger.advance_epoch()
        table = classify_network(ledger, config.query, config.method, config.mode, epoch=epoch + 1)
        metrics.epochs.append(stats)
        metrics.classification_trace.append(
            {n: str(e.outcome.name if isinstance(e.outcome, Grade) else e.outcome) for n, e in table.entries.items()}
        )
    return metrics


def _walk(
    path: Sequence[Hashable],
    epoch: int,
    profiles: Mapping[Hashable, BehaviorProfile],
    table: ClassificationTable,
    ledger: ReputationLedger,
    rng: np.random.Generator,
    config: SimConfig,
    stats: EpochStats,
) -> bool:
    """Carry one packet along ``path``; True when it reaches the destination."""
    crossed_low = False
    delivered = False
    for prev, node in zip(path, path[1:]):
        if config.link_loss > 0.0 and rng.random() < config.link_loss:
            break
        if node == path[-1]:
            delivered = True
            break
        if node in table.entries and table.outcome(node) not in (Grade.HIGH, Grade.MED):
            crossed_low = True
        p_drop = profiles[node].drop_probability
        forwarded = not (p_drop >= 1.0 or (p_drop > 0.0 and rng.random() < p_drop))
        if config.detection_probability >= 1.0 or rng.random() < config.detection_probability:
            kind = ObservationKind.FORWARDED if forwarded else ObservationKind.DROPPED
            ledger.record_observation(Observation(prev, node, epoch, kind))
        if not forwarded:
            break
    if crossed_low and epoch >= config.warmup_epochs:
        stats.low_traversals += 1
    return delivered


@dataclass(frozen=True)
class ComparisonRow:
    seed: int
    pdr_filtered: float
    pdr_unfiltered: float
    low_traversals_filtered: int = 0

    @property
    def delta(self) -> float:
        return self.pdr_filtered - self.pdr_unfiltered


@dataclass(frozen=True)
class ComparisonReport:
    rows: tuple[ComparisonRow, ...]

    @property
    def mean_filtered(self) -> float:
        return float(np.mean([r.pdr_filtered for r in self.rows]))

    @property
    def mean_unfiltered(self) -> float:
        return float(np.mean([r.pdr_unfiltered for r in self.rows]))

    @property
    def mean_delta(self) -> float:
        return self.mean_filtered - self.mean_unfiltered


def _compare_one(config: SimConfig, seed: int) -> ComparisonRow:
    f = run(replace(config, seed=seed, policy=Policy.PC_FILTERED))
    u = run(replace(config, seed=seed, policy=Policy.UNFILTERED))
    return ComparisonRow(seed, f.pdr, u.pdr, f.low_traversals)


def compare(config: SimConfig, seeds: Sequence[int], workers: int = 1) -> ComparisonReport:
    """Run both routing policies for every seed; rows follow ``seeds`` order."""
    seeds = list(seeds)
    if not seeds:
        raise ConfigError("seeds", "at least one seed is required")
    config.validate()
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_compare_one, [config] * len(seeds), seeds))
    else:
        rows = [_compare_one(config, s) for s in seeds]
    return ComparisonReport(tuple(rows))


def drops_to_low(initial: float, x: float, penalty: float) -> int:
    """Observed drops needed to pull a point reputation from ``initial`` below ``x``."""
    if initial < x:
        return 0
    if penalty <= 0:
        raise ValueError("penalty must be positive")
    return math.floor((initial - x) / penalty) + 1
