"""YAML scenario files <-> :class:`SimConfig`.

A scenario has five sections::

    topology:        {kind: paper-grid | random-geometric | links, n, radius, seed, links, expert}
    profiles:        {default: cooperative, nodes: {3: blackhole, 5: "selfish:0.4"},
                      blackhole_fraction, selfish_fraction, selfish_drop_probability}
    classification:  {x, y, method, mode}
    reputation:      {initial, reward, penalty, window}
    run:             {epochs, warmup, flows_per_epoch, seed, policy,
                      detection_probability, link_loss, expert_relay}

``topology.links`` uses the link-list text form, one ``a b`` pair per line.
"""

from __future__ import annotations

from pathlib import Path
from typing import Any

import yaml

from .classifier import Method, Mode, QueryRange
from .reputation import ReputationParams
from .routing import TopologySpec
from .simulator import BehaviorProfile, ConfigError, Policy, ProfileSpec, SimConfig

__all__ = ["load_scenario", "parse_scenario", "dump_scenario", "scenario_to_dict", "default_scenario"]

_SECTIONS = ("topology", "profiles", "classification", "reputation", "run")


def _section(doc: dict, name: str) -> dict:
    sec = doc.get(name) or {}
    if not isinstance(sec, dict):
        raise ConfigError(name, "must be a mapping")
    return sec


def _check_keys(sec: dict, name: str, allowed: set[str]) -> None:
    extra = set(sec) - allowed
    if extra:
        raise ConfigError(name, f"unknown keys {sorted(map(str, extra))}")


def _get(sec: dict, section: str, key: str, kind, default):
    if key not in sec or sec[key] is None:
        return default
    value = sec[key]
    try:
        if kind is bool:
            if not isinstance(value, bool):
                raise ValueError
            return value
        if kind is int and (isinstance(value, bool) or float(value) != int(value)):
            raise ValueError
        return kind(value)
    except (TypeError, ValueError):
        raise ConfigError(f"{section}.{key}", f"expected {kind.__name__}, got {value!r}") from None


def parse_scenario(doc: Any) -> SimConfig:
    """Build and validate a config from a parsed YAML document."""
    if not isinstance(doc, dict):
        raise ConfigError("scenario", "top level must be a mapping")
    _check_keys(doc, "scenario", set(_SECTIONS))

    t = _section(doc, "topology")
    _check_keys(t, "topology", {"kind", "n", "radius", "seed", "links", "expert"})
    topo = TopologySpec(
        kind=_get(t, "topology", "kind", str, "paper-grid"),
        n=_get(t, "topology", "n", int, None),
        radius=_get(t, "topology", "radius", float, None),
        seed=_get(t, "topology", "seed", int, None),
        links=_get(t, "topology", "links", str, None),
        expert=t.get("expert"),
    )

    p = _section(doc, "profiles")
    _check_keys(p, "profiles", {"default", "nodes", "blackhole_fraction", "selfish_fraction", "selfish_drop_probability"})
    default = _get(p, "profiles", "default", str, "cooperative")
    if default != "cooperative":
        raise ConfigError("profiles.default", "only 'cooperative' is supported; list misbehaving nodes explicitly")
    raw_nodes = p.get("nodes") or {}
    if not isinstance(raw_nodes, dict):
        raise ConfigError("profiles.nodes", "must be a mapping of node id to profile")
    nodes = {}
    for node, text in raw_nodes.items():
        try:
            nodes[node] = BehaviorProfile.parse(text)
        except ValueError as exc:
            raise ConfigError(f"profiles.nodes.{node}", str(exc)) from None
    profiles = ProfileSpec(
        nodes=nodes,
        blackhole_fraction=_get(p, "profiles", "blackhole_fraction", float, 0.0),
        selfish_fraction=_get(p, "profiles", "selfish_fraction", float, 0.0),
        selfish_drop_probability=_get(p, "profiles", "selfish_drop_probability", float, 0.5),
    )

    c = _section(doc, "classification")
    _check_keys(c, "classification", {"x", "y", "method", "mode"})
    try:
        query = QueryRange(_get(c, "classification", "x", float, 50.0), _get(c, "classification", "y", float, 70.0))
    except ValueError as exc:
        raise ConfigError("classification", str(exc)) from None
    try:
        method = Method(_get(c, "classification", "method", str, "point"))
    except ValueError:
        raise ConfigError("classification.method", "must be 'point' or 'interval'") from None
    try:
        mode = Mode(_get(c, "classification", "mode", str, "reconciled"))
    except ValueError:
        raise ConfigError("classification.mode", "must be 'verbatim' or 'reconciled'") from None

    r = _section(doc, "reputation")
    _check_keys(r, "reputation", {"initial", "reward", "penalty", "window"})
    try:
        rep = ReputationParams(
            initial=_get(r, "reputation", "initial", float, 50.0),
            reward=_get(r, "reputation", "reward", float, 1.0),
            penalty=_get(r, "reputation", "penalty", float, 2.0),
            window=_get(r, "reputation", "window", int, 5),
        )
    except ValueError as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError("reputation", str(exc)) from None

    u = _section(doc, "run")
    _check_keys(u, "run", {"epochs", "warmup", "flows_per_epoch", "seed", "policy", "detection_probability", "link_loss", "expert_relay"})
    try:
        policy = Policy(_get(u, "run", "policy", str, "pc-filtered"))
    except ValueError:
        raise ConfigError("run.policy", "must be 'pc-filtered' or 'unfiltered-baseline'") from None
    config = SimConfig(
        topology=topo,
        profiles=profiles,
        query=query,
        method=method,
        mode=mode,
        reputation=rep,
        epochs=_get(u, "run", "epochs", int, 100),
        warmup_epochs=_get(u, "run", "warmup", int, 10),
        flows_per_epoch=_get(u, "run", "flows_per_epoch", int, 10),
        policy=policy,
        seed=_get(u, "run", "seed", int, 0),
        detection_probability=_get(u, "run", "detection_probability", float, 1.0),
        link_loss=_get(u, "run", "link_loss", float, 0.0),
        expert_relay=_get(u, "run", "expert_relay", bool, False),
    )
    config.validate()
    return config


def load_scenario(path: str | Path) -> SimConfig:
    """Read a scenario file. I/O problems raise OSError, content problems ConfigError."""
    text = Path(path).read_text()
    try:
        doc = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigError("scenario", f"invalid YAML: {exc}") from None
    return parse_scenario(doc)


def scenario_to_dict(config: SimConfig) -> dict:
    t = config.topology
    topo: dict[str, Any] = {"kind": t.kind}
    for key in ("n", "radius", "seed", "links", "expert"):
        if getattr(t, key) is not None:
            topo[key] = getattr(t, key)
    p = config.profiles
    return {
        "topology": topo,
        "profiles": {
            "default": "cooperative",
            "nodes": {n: str(prof) for n, prof in p.nodes.items()},
            "blackhole_fraction": p.blackhole_fraction,
            "selfish_fraction": p.selfish_fraction,
            "selfish_drop_probability": p.selfish_drop_probability,
        },
        "classification": {
            "x": config.query.x,
            "y": config.query.y,
            "method": config.method.value,
            "mode": config.mode.value,
        },
        "reputation": {
            "initial": config.reputation.initial,
            "reward": config.reputation.reward,
            "penalty": config.reputation.penalty,
            "window": config.reputation.window,
        },
        "run": {
            "epochs": config.epochs,
            "warmup": config.warmup_epochs,
            "flows_per_epoch": config.flows_per_epoch,
            "seed": config.seed,
            "policy": config.policy.value,
            "detection_probability": config.detection_probability,
            "link_loss": config.link_loss,
            "expert_relay": config.expert_relay,
        },
    }


def dump_scenario(config: SimConfig) -> str:
    return yaml.safe_dump(scenario_to_dict(config), sort_keys=False, default_flow_style=False)


def default_scenario() -> SimConfig:
    """The scaffold scenario: the nine-node grid with one blackhole relay."""
    return SimConfig(profiles=ProfileSpec(nodes={5: BehaviorProfile("blackhole")}))
