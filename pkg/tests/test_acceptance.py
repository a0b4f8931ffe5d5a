"""Exit criteria for the package, one test per criterion.

Run ``pytest tests/test_acceptance.py`` to get a PASS/FAIL line per
criterion in the terminal summary.
"""

import io
import time

import numpy as np
import yaml

from pcmanet.classifier import (
    REPUTATION_VALUE_ERROR,
    Grade,
    Mode,
    QueryRange,
    ReputationInterval,
    classify_interval,
    classify_point,
)
from pcmanet.cli import data_path, main
from pcmanet.expert import ClassificationTable
from pcmanet.formats import read_reputations, read_table
from pcmanet.reputation import ReputationParams
from pcmanet.routing import Tier, TopologySpec, from_links, select_path
from pcmanet.simulator import ProfileSpec, SimConfig, compare, run

Q = QueryRange(50, 70)


def _classify_cli(capsys, fixture, method):
    start = time.perf_counter()
    rc = main(["classify", str(data_path(fixture)), "--range", "50", "70", "--method", method, "--mode", "reconciled"])
    elapsed = time.perf_counter() - start
    return rc, capsys.readouterr().out, elapsed


def _class_sets(csv_text):
    sets = {}
    for node, _, cls in read_table(io.StringIO(csv_text)):
        sets.setdefault(cls, set()).add(int(node))
    return sets


def test_ac1_point_table(capsys, criterion):
    rc, out, elapsed = _classify_cli(capsys, "table3_point.csv", "point")
    want = {"certain": {3, 4, 8}, "possible": {2, 7}, "not-possible": {1, 5, 6}}
    ok = (
        rc == 0
        and out == data_path("table4_expected.csv").read_text()
        and _class_sets(out) == want
        and elapsed < 1.0
    )
    criterion("AC-1 point-valued table", ok, f"byte-exact={out == data_path('table4_expected.csv').read_text()} t={elapsed:.3f}s")


def test_ac2_interval_table(capsys, criterion):
    rc, out, elapsed = _classify_cli(capsys, "table5_interval.csv", "interval")
    want = {"certain": {2, 3, 4, 7, 8}, "possible": {1, 6}, "not-possible": {5}}
    ok = (
        rc == 0
        and out == data_path("table6_expected.csv").read_text()
        and _class_sets(out) == want
        and elapsed < 1.0
    )
    criterion("AC-2 interval-valued table", ok, f"byte-exact={out == data_path('table6_expected.csv').read_text()} t={elapsed:.3f}s")


def test_ac3_verbatim_interval(criterion):
    rows = read_reputations(io.StringIO(data_path("table5_interval.csv").read_text()), "interval")
    got = {int(n): classify_interval(iv, Q, Mode.VERBATIM) for n, iv in rows}
    want = {
        1: Grade.MED, 6: Grade.MED,
        2: Grade.HIGH, 7: Grade.HIGH,
        3: REPUTATION_VALUE_ERROR, 4: REPUTATION_VALUE_ERROR,
        5: REPUTATION_VALUE_ERROR, 8: REPUTATION_VALUE_ERROR,
    }
    detail = " ".join(f"{n}:{getattr(g, 'name', 'ERROR')}" for n, g in sorted(got.items()))
    criterion("AC-3 verbatim interval trace", got == want, detail)


def test_ac4_exhaustive_properties(criterion):
    start = time.perf_counter()
    violations = 0
    cases = 0
    for x in range(101):
        for y in range(x, 101):
            q = QueryRange(x, y)
            prev = None
            for r in range(101):
                g = classify_point(r, q)
                cases += 1
                if not isinstance(g, Grade):
                    violations += 1
                    continue
                if g is Grade.HIGH and not r >= x:
                    violations += 1
                if prev is not None and g < prev:
                    violations += 1
                prev = g

    rng = np.random.default_rng(20240)
    interval_cases = 0
    for _ in range(100):
        x, y = np.sort(rng.uniform(0, 100, 2))
        q = QueryRange(float(x), float(y))
        pq = np.sort(rng.uniform(0, 100, (10_000, 2)), axis=1)
        # a dominating interval for each sample, for the monotonicity check
        p2 = rng.uniform(pq[:, 0], 100)
        q2 = rng.uniform(np.maximum(pq[:, 1], p2), 100)
        for (p, qq), pp, qq2 in zip(pq.tolist(), p2.tolist(), q2.tolist()):
            g = classify_interval(ReputationInterval(p, qq), q)
            g2 = classify_interval(ReputationInterval(pp, qq2), q)
            interval_cases += 1
            if not isinstance(g, Grade) or not isinstance(g2, Grade):
                violations += 1
                continue
            if g is Grade.HIGH and not qq >= q.x:
                violations += 1
            if g2 < g:
                violations += 1
    elapsed = time.perf_counter() - start
    criterion(
        "AC-4 exhaustive property sweep",
        violations == 0 and cases == 5151 * 101 and elapsed < 30.0,
        f"point cases={cases} interval cases={interval_cases} violations={violations} t={elapsed:.1f}s",
    )


AC5_CONFIG = SimConfig(
    topology=TopologySpec("random-geometric", n=25, radius=0.35),
    profiles=ProfileSpec(blackhole_fraction=0.3),
    epochs=200,
    warmup_epochs=20,
    flows_per_epoch=10,
)


def test_ac5_simulation_benefit(criterion):
    start = time.perf_counter()
    report = compare(AC5_CONFIG, list(range(1, 21)))
    elapsed = time.perf_counter() - start
    leaks = sum(r.low_traversals_filtered for r in report.rows)
    ok = report.mean_delta >= 0.10 and leaks == 0 and elapsed < 120.0
    criterion(
        "AC-5 simulation benefit",
        ok,
        f"pdr filtered={report.mean_filtered:.3f} unfiltered={report.mean_unfiltered:.3f} "
        f"delta={report.mean_delta:+.3f} low_traversals={leaks} t={elapsed:.1f}s",
    )


def test_ac6_worst_case_fallback(criterion):
    topo = from_links([(1, 2), (2, 3)])
    med = ClassificationTable.from_outcomes({1: Grade.LOW, 2: Grade.MED, 3: Grade.LOW}, Q)
    low = ClassificationTable.from_outcomes({1: Grade.HIGH, 2: Grade.LOW, 3: Grade.HIGH}, Q)
    path = select_path(topo, med, 1, 3)
    blocked = select_path(topo, low, 1, 3)

    # relay starts at the default reputation 50 = x, i.e. MED; every 1<->3 flow must use it
    line = TopologySpec("links", links="1 2\n2 3\n")
    m = run(SimConfig(topology=line, epochs=2, warmup_epochs=0, flows_per_epoch=20, seed=1))
    first = m.epochs[0]
    m_low = run(SimConfig(topology=line, reputation=ReputationParams(initial=40.0), epochs=2,
                          warmup_epochs=0, flows_per_epoch=20, seed=1))

    ok = (
        path is not None
        and path.tier is Tier.MED_FALLBACK
        and path.nodes == (1, 2, 3)
        and blocked is None
        and first.tier_fallback > 0
        and first.delivered == first.sent
        and m_low.epochs[0].no_route > 0
        and m_low.epochs[0].tier_fallback == 0
    )
    criterion(
        "AC-6 worst-case MED fallback",
        ok,
        f"med path={path and path.nodes} tier={path and path.tier.value} low->{blocked} "
        f"sim fallback flows={first.tier_fallback} delivered={first.delivered}/{first.sent}",
    )


def test_ac7_simulate_determinism(tmp_path, criterion):
    scen = tmp_path / "scenario.yaml"
    scen.write_text(yaml.safe_dump({
        "topology": {"kind": "random-geometric", "n": 25, "radius": 0.35},
        "profiles": {"blackhole_fraction": 0.3, "selfish_fraction": 0.1},
        "run": {"epochs": 60, "warmup": 10, "flows_per_epoch": 10, "seed": 11},
    }))
    codes = [main(["simulate", "--scenario", str(scen), "--out", str(tmp_path / d)]) for d in ("a", "b")]
    same = all(
        (tmp_path / "a" / f).read_bytes() == (tmp_path / "b" / f).read_bytes()
        for f in ("summary.json", "epochs.csv")
    )
    criterion("AC-7 simulate determinism", codes == [0, 0] and same, f"exit={codes} identical={same}")
