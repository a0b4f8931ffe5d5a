"""
Reputation ledger and interval reputations
==========================================

A watchdog-style observer reports forwards and drops. Values move by
+reward / -penalty on a clamped 0-100 scale; at each epoch boundary the
current value is sealed into a five-epoch window whose [min, max] is the
node's interval reputation.
"""
# %%
import numpy as np

from pcmanet import Observation, ObservationKind, QueryRange, ReputationLedger, classify_interval, classify_point

rng = np.random.default_rng(0)
ledger = ReputationLedger(nodes=["honest", "selfish", "blackhole"])
drop_prob = {"honest": 0.0, "selfish": 0.4, "blackhole": 1.0}
query = QueryRange(50, 70)

# %%
for epoch in range(8):
    for node, p in drop_prob.items():
        for _ in range(5):
            kind = ObservationKind.DROPPED if rng.random() < p else ObservationKind.FORWARDED
            ledger.record_observation(Observation("watcher", node, epoch, kind))
    ledger.advance_epoch()
    print(f"epoch {epoch}: " + "  ".join(f"{n}={ledger.point_reputation(n):5.1f}" for n in drop_prob))

# %%
# Point and interval grades after eight epochs.

for node in drop_prob:
    iv = ledger.interval_reputation(node)
    print(f"{node:<10} point={classify_point(ledger.point_reputation(node), query).name:<4} "
          f"interval=[{iv.p:.0f}, {iv.q:.0f}] -> {classify_interval(iv, query).name}")
