"""
Packet delivery with and without grade filtering
================================================

Twenty-five nodes in the unit square, 30% of them blackholes. Each seed is
run twice on identical traffic: once routing over everything by minimum
hops, once routing only through HIGH/MED nodes.
"""
# %%
import numpy as np

from pcmanet import ProfileSpec, SimConfig, TopologySpec, compare

config = SimConfig(
    topology=TopologySpec("random-geometric", n=25, radius=0.35),
    profiles=ProfileSpec(blackhole_fraction=0.3),
    epochs=200,
    warmup_epochs=20,
    flows_per_epoch=10,
)
report = compare(config, range(1, 21))

# %%
for row in report.rows:
    print(f"seed {row.seed:>2}: filtered={row.pdr_filtered:.3f} unfiltered={row.pdr_unfiltered:.3f} "
          f"delta={row.delta:+.3f}")

deltas = np.array([r.delta for r in report.rows])
print(f"\nmean delta {deltas.mean():+.3f} (min {deltas.min():+.3f}, max {deltas.max():+.3f})")
