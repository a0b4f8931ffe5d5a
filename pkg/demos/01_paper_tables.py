"""
Grading the nine-node example network
=====================================

Point and interval reputations for eight nodes are graded against the query
range Q(50, 70), first with the reconciled rule and then with the literal
branch logic, to show where the two disagree.
"""
# %%
from pcmanet import Mode, QueryRange, ReputationInterval, classify_batch, grade_to_class

query = QueryRange(50, 70)
point = {1: 46, 2: 56, 3: 90, 4: 78, 5: 33, 6: 24, 7: 56, 8: 78}
interval = {1: (46, 60), 2: (56, 70), 3: (90, 95), 4: (78, 90),
            5: (33, 45), 6: (24, 50), 7: (56, 60), 8: (78, 80)}

# %%
# Point-valued grading. HIGH needs r >= y, MED needs r >= x.

for node, grade in classify_batch(point.items(), query):
    print(f"node {node}: r={point[node]:>3}  {grade.name:<4} {grade_to_class(grade).value}")

# %%
# Interval-valued grading. Only x matters: an interval that clears x
# entirely is HIGH, one that straddles it is MED.

rows = [(n, ReputationInterval(p, q)) for n, (p, q) in interval.items()]
for node, grade in classify_batch(rows, query):
    print(f"node {node}: {interval[node]}  {grade.name:<4} {grade_to_class(grade).value}")

# %%
# The literal branch logic bounds p above by y, so every interval sitting
# entirely above 70 (and node 5, entirely below 50) falls through to the
# error branch.

for (node, reconciled), (_, verbatim) in zip(classify_batch(rows, query),
                                               classify_batch(rows, query, Mode.VERBATIM)):
    flag = "" if reconciled is verbatim else "   <- differs"
    print(f"node {node}: reconciled={reconciled.name:<4} verbatim={getattr(verbatim, 'name', 'ERROR')}{flag}")
