import math
from dataclasses import replace

import pytest

from pcmanet.classifier import Grade, Method, QueryRange
from pcmanet.expert import classify_network
from pcmanet.reputation import Observation, ObservationKind, ReputationLedger, ReputationParams
from pcmanet.routing import TopologySpec
from pcmanet.simulator import (
    BehaviorProfile,
    ConfigError,
    Policy,
    ProfileSpec,
    SimConfig,
    compare,
    drops_to_low,
    run,
)

BLACKHOLE = BehaviorProfile("blackhole")


def cfg(**kw):
    base = dict(epochs=30, warmup_epochs=5, flows_per_epoch=10, seed=3)
    base.update(kw)
    return SimConfig(**base)


LINE_WITH_DETOUR = TopologySpec("links", links="1 2\n2 3\n1 4\n4 5\n5 3\n")


def test_all_cooperative_grid_delivers_everything():
    m = run(cfg())
    assert m.pdr == 1.0
    assert m.sent == 25 * 10


def test_all_cooperative_random_geometric_identical_arms():
    c = cfg(topology=TopologySpec("random-geometric", n=15, radius=0.3))
    f = run(c)
    u = run(replace(c, policy=Policy.UNFILTERED))
    assert [(e.sent, e.delivered) for e in f.epochs] == [(e.sent, e.delivered) for e in u.epochs]


def test_blackhole_on_only_path_unfiltered():
    # only two endpoints, so every flow must cross the relaying expert
    c = cfg(
        topology=TopologySpec("links", links="1 0\n0 2\n", expert=0),
        profiles=ProfileSpec(nodes={0: BLACKHOLE}),
        expert_relay=True,
        policy=Policy.UNFILTERED,
    )
    m = run(c)
    assert m.sent == 250
    assert m.pdr == 0.0


def test_blackhole_routed_around_when_filtered():
    c = cfg(topology=LINE_WITH_DETOUR, profiles=ProfileSpec(nodes={2: BLACKHOLE}))
    f = run(c)
    u = run(replace(c, policy=Policy.UNFILTERED))
    assert f.low_traversals == 0
    assert f.pdr == 1.0
    assert u.pdr < 1.0
    assert f.classification_trace[-1][2] == "LOW"


@pytest.mark.parametrize("initial,penalty", [(50, 2), (55, 2), (60, 2), (61, 3), (100, 7)])
def test_blackhole_convergence_count(initial, penalty):
    x = 50
    ledger = ReputationLedger(ReputationParams(initial=initial, penalty=penalty), ["b"])
    q = QueryRange(x, 70)
    drops = 0
    while classify_network(ledger, q).outcome("b") is not Grade.LOW:
        ledger.record_observation(Observation("a", "b", 0, ObservationKind.DROPPED))
        drops += 1
    assert drops == drops_to_low(initial, x, penalty)
    assert drops <= math.ceil((initial - x) / penalty) + 1


def test_blackhole_low_after_first_epoch_in_simulation():
    c = cfg(
        topology=TopologySpec("links", links="1 2\n2 3\n"),
        profiles=ProfileSpec(nodes={2: BLACKHOLE}),
        epochs=3,
        warmup_epochs=1,
    )
    m = run(c)
    assert m.classification_trace[0][2] == "LOW"
    assert m.low_traversals == 0


def test_conservation_and_bounds():
    c = cfg(
        topology=TopologySpec("random-geometric", n=20, radius=0.35),
        profiles=ProfileSpec(blackhole_fraction=0.2, selfish_fraction=0.2),
        link_loss=0.05,
        detection_probability=0.8,
    )
    for policy in Policy:
        m = run(replace(c, policy=policy))
        for e in m.epochs:
            assert e.delivered + e.dropped == e.sent
            assert e.no_route <= e.dropped
            assert e.tier_high + e.tier_fallback + e.tier_unfiltered + e.no_route == e.sent
        assert 0.0 <= m.pdr <= 1.0
    assert run(c).low_traversals == 0


def test_interval_method_runs_and_isolates():
    c = cfg(
        topology=TopologySpec("random-geometric", n=20, radius=0.35),
        profiles=ProfileSpec(blackhole_fraction=0.3),
        method=Method.INTERVAL,
    )
    m = run(c)
    assert m.low_traversals == 0
    assert 0.0 < m.pdr <= 1.0


def test_seed_determinism():
    c = cfg(
        topology=TopologySpec("random-geometric", n=20, radius=0.35),
        profiles=ProfileSpec(selfish_fraction=0.3, selfish_drop_probability=0.4),
    )
    a, b = run(c), run(c)
    assert a.summary() == b.summary()
    assert a.epochs == b.epochs
    assert a.classification_trace == b.classification_trace


def test_profile_assignment_counts():
    c = cfg(
        topology=TopologySpec("random-geometric", n=25, radius=0.35),
        profiles=ProfileSpec(blackhole_fraction=0.3, selfish_fraction=0.2),
    )
    prof = run(c).profiles
    kinds = [p.split(":")[0] for p in prof.values()]
    assert kinds.count("blackhole") == round(0.3 * 25)
    assert kinds.count("selfish") == round(0.2 * 25)


def test_behavior_profile_parse():
    assert BehaviorProfile.parse("selfish:0.25") == BehaviorProfile("selfish", 0.25)
    assert BehaviorProfile.parse("blackhole").drop_probability == 1.0
    assert str(BehaviorProfile("selfish", 0.25)) == "selfish:0.25"
    with pytest.raises(ValueError):
        BehaviorProfile.parse("selfish")
    with pytest.raises(ValueError):
        BehaviorProfile("selfish", 1.5)


@pytest.mark.parametrize("kw,field", [
    (dict(epochs=5, warmup_epochs=5), "run.epochs"),
    (dict(flows_per_epoch=0), "run.flows_per_epoch"),
    (dict(link_loss=2.0), "run.link_loss"),
    (dict(profiles=ProfileSpec(nodes={42: BLACKHOLE})), "profiles.nodes"),
    (dict(topology=TopologySpec("random-geometric", n=10, radius=-1)), "topology"),
])
def test_config_validation(kw, field):
    with pytest.raises(ConfigError) as info:
        run(cfg(**kw))
    assert info.value.field == field


def test_compare_cooperative_zero_delta():
    rep = compare(cfg(), [1, 2, 3])
    assert [r.delta for r in rep.rows] == [0.0, 0.0, 0.0]
    assert rep.mean_delta == 0.0


def test_compare_duplicate_seed_rows_identical():
    c = cfg(topology=TopologySpec("random-geometric", n=15, radius=0.35),
            profiles=ProfileSpec(blackhole_fraction=0.3))
    rep = compare(c, [4, 4])
    assert rep.rows[0] == rep.rows[1]
    assert compare(c, [4]).rows[0] == rep.rows[0]


def test_compare_parallel_matches_serial():
    c = cfg(topology=TopologySpec("random-geometric", n=15, radius=0.35),
            profiles=ProfileSpec(blackhole_fraction=0.3))
    assert compare(c, [1, 2, 3], workers=2) == compare(c, [1, 2, 3])


def test_compare_needs_seeds():
    with pytest.raises(ConfigError):
        compare(cfg(), [])
