"""
Grade-filtered routing on the grid
==================================

The expert sits in the middle of a 3x3 grid and does not relay. Routes are
chosen through HIGH nodes when possible, fall back to HIGH+MED nodes, and
never cross LOW nodes.
"""
# %%
from pcmanet import QueryRange, Tier, allowed_subgraph, select_path
from pcmanet.expert import classify_values
from pcmanet.routing import paper_grid

grid = paper_grid()
print(grid.to_link_list())

# %%
# Grades from the point-valued example: HIGH {3,4,8}, MED {2,7}, LOW {1,5,6}.

table = classify_values({1: 46, 2: 56, 3: 90, 4: 78, 5: 33, 6: 24, 7: 56, 8: 78}, QueryRange(50, 70))
sub = allowed_subgraph(grid, table, Tier.HIGH_ONLY, endpoints=(1, 6))
print("high-only relays plus endpoints:", sorted(sub.nodes))

# %%
for src, dst in [(1, 6), (3, 8), (2, 8), (1, 3), (4, 5)]:
    route = select_path(grid, table, src, dst)
    print(f"{src} -> {dst}:", "no route" if route is None else f"{route.nodes} via {route.tier.value}")

# %%
# LOW nodes 1, 5 and 6 cut the outer ring, so some pairs are unreachable
# unless the expert is allowed to relay.

for src, dst in [(3, 8), (2, 8), (4, 5)]:
    route = select_path(grid, table, src, dst, expert_relay=True)
    print(f"{src} -> {dst} (expert relays):", "no route" if route is None else f"{route.nodes} via {route.tier.value}")
