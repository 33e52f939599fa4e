"""Acceptance gate: one test per criterion, each reporting a PASS/FAIL line.

The lines are printed as the test runs (visible with ``-s``) and repeated in
the terminal summary by ``conftest.py``.
"""

import io
import itertools
import random
import statistics
import time

import pytest

from tipdecomp import generators
from tipdecomp.baselines import (
    MEASURES,
    betweenness,
    compute_centrality,
    eigenvector_centrality,
    greedy_centrality_seed,
    pagerank,
    reichman_bound,
)
from tipdecomp.decomp import tip_decomp, verify_decomposition
from tipdecomp.errors import UndefinedMeasureError
from tipdecomp.exact import build_seed_ip, min_seed_bruteforce, solve_seed_ip_small
from tipdecomp.graph import DirectedGraph, load_edge_list, read_edge_list
from tipdecomp.harness import TrialConfig, run_runtime_scaling
from tipdecomp.structure import louvain, modularity
from tipdecomp.tipping import AbsoluteCapped, FractionOfInDegree, compute_thresholds, covers

from conftest import ACCEPTANCE_LINES
from oracles import best_partition, brute_betweenness, canonical, random_digraph

INT_VALUES = (1, 2, 3, 5, 10)
FRAC_VALUES = (0.1, 0.25, 0.5, 0.6, 1.0)
SIZES = (10, 25, 50, 100, 200)
RNG_SEEDS = range(10)


def report(number: int, ok: bool, detail: str) -> None:
    line = f"{'PASS' if ok else 'FAIL'} criterion {number}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)


def coverage_instances():
    """Uniform-random (symmetric and directed) and preferential-attachment graphs."""
    for n in SIZES:
        for s in RNG_SEEDS:
            yield f"ur-sym n={n} s={s}", generators.uniform_random(n, min(1.0, 6 / (n - 1)), seed=s)
            yield f"ur-dir n={n} s={s}", generators.uniform_random(n, min(1.0, 4 / (n - 1)), seed=s, directed=True)
            yield f"pa n={n} s={s}", generators.preferential_attachment(n, 1 + s % 3, seed=s)


def specs():
    yield from (AbsoluteCapped(k) for k in INT_VALUES)
    yield from (FractionOfInDegree(f) for f in FRAC_VALUES)


@pytest.fixture(scope="module")
def decomposed():
    out = []
    for name, g in coverage_instances():
        for spec in specs():
            ka = compute_thresholds(g, spec)
            out.append((name, spec, g, ka, tip_decomp(g, ka)))
    return out


def test_criterion_1_coverage(decomposed):
    kinds = {name.split()[0] for name, *_ in decomposed}
    failures = [(name, spec) for name, spec, g, ka, res in decomposed if not covers(g, ka, res.seed)]
    ok = len(decomposed) >= 1000 and not failures and max(g.n for _, _, g, _, _ in decomposed) <= 200
    report(1, ok, f"coverage holds on {len(decomposed) - len(failures)}/{len(decomposed)} instances "
                  f"({', '.join(sorted(kinds))}; {len(RNG_SEEDS)} rng seeds; both threshold modes)")
    assert ok, failures[:5]


def test_criterion_2_certificate(decomposed):
    failures = [(name, spec) for name, spec, g, ka, res in decomposed if not verify_decomposition(g, ka, res)]
    ok = not failures
    report(2, ok, f"certificate holds on {len(decomposed) - len(failures)}/{len(decomposed)} instances")
    assert ok, failures[:5]


def test_criterion_3_exactness():
    rnd = random.Random(31337)
    graphs = mismatched = dominated = 0
    started = time.perf_counter()
    for idx in range(240):
        n = rnd.randint(2, 8)
        g = generators.uniform_random(n, rnd.uniform(0.15, 0.8), seed=idx)
        if idx % 2:
            spec = AbsoluteCapped(rnd.randint(1, 4))
        else:
            spec = FractionOfInDegree(rnd.choice(FRAC_VALUES + (0.3, 0.75)))
        ka = compute_thresholds(g, spec)
        best = len(min_seed_bruteforce(g, ka))
        graphs += 1
        if len(solve_seed_ip_small(g, spec)) != best:
            mismatched += 1
        if len(tip_decomp(g, ka).seed) >= best:
            dominated += 1
    elapsed = time.perf_counter() - started
    ok = graphs >= 200 and mismatched == 0 and dominated == graphs and elapsed < 60
    report(3, ok, f"program optimum equals brute force on {graphs - mismatched}/{graphs} graphs (n<=8); "
                  f"decomposition >= optimum on {dominated}/{graphs}; {elapsed:.1f}s")
    assert ok


def test_criterion_4_model_size():
    rows = []
    for n in range(1, 11):
        g = generators.uniform_random(n, 0.4, seed=n, directed=True)
        for spec in (FractionOfInDegree(0.5), AbsoluteCapped(2)):
            model = build_seed_ip(g, spec)
            rows.append((n, model.num_variables, model.num_constraints, len(model.variables())))
    n4 = build_seed_ip(generators.cycle(4), FractionOfInDegree(0.5))
    ok = all(v == n * n == names and c == 2 * n * n for n, v, c, names in rows)
    ok = ok and (n4.num_variables, n4.num_constraints) == (16, 32)
    report(4, ok, f"n^2 variables and 2n^2 constraints for n=1..10 ({len(rows)} models); n=4 -> 16/32")
    assert ok


def test_criterion_5_complexity(decomposed):
    over = [(name, spec) for name, spec, g, _, res in decomposed if res.queue_operations > 2 * g.n + g.m]
    cfg = TrialConfig(
        threshold_mode="int",
        threshold_value=2,
        scaling_sizes=(1000, 5000, 10000, 25000, 50000, 75000, 100000),
        scaling_degree=10.0,
        scaling_repeats=3,
        rng_seed=5,
    )
    started = time.perf_counter()
    records, fit = run_runtime_scaling(cfg)
    elapsed = time.perf_counter() - started
    max_m = max(r.m for r in records)
    ok = not over and fit is not None and fit.r_squared >= 0.85 and max_m >= 900_000 and elapsed <= 900
    report(5, ok, f"queue ops <= n + (n + m) on {len(decomposed) - len(over)}/{len(decomposed)} instances; "
                  f"runtime vs m ln n over m up to {max_m}: R^2 = {fit.r_squared:.4f} ({elapsed:.0f}s)")
    assert ok, over[:5]


def test_criterion_6_reichman():
    k4 = generators.clique(4)
    bound = reichman_bound(k4, 2)
    optimum = len(min_seed_bruteforce(k4, compute_thresholds(k4, AbsoluteCapped(2))))
    exact_ok = bound == 2.0 and optimum == 2
    ratios = {1: [], 2: [], 3: []}
    for s in range(50):
        g = generators.uniform_random(500, 10 / 499, seed=1000 + s)
        for k in ratios:
            seed = tip_decomp(g, compute_thresholds(g, AbsoluteCapped(k))).seed
            ratios[k].append(len(seed) / reichman_bound(g, k))
    medians = {k: statistics.median(v) for k, v in ratios.items()}
    overall = statistics.median([r for v in ratios.values() for r in v])
    claim = overall < 1
    detail = ", ".join(f"k={k}: {m:.3f}" for k, m in medians.items())
    report(6, exact_ok, f"K4/k=2 bound 2.0 = optimum {optimum}; median seed/bound over 50 graphs (n=500) "
                        f"{overall:.3f} [{detail}]; smaller-than-bound expectation "
                        f"{'met' if claim else 'NOT met (reported, not asserted)'}")
    assert exact_ok


def test_criterion_7_structure():
    tri = DirectedGraph.from_edges(6, [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)], symmetrize=True)
    bridged = DirectedGraph.from_edges(6, [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3), (2, 3)], symmetrize=True)
    checks = {
        "natural split M=0.5": modularity(tri, [0, 0, 0, 1, 1, 1]) == 0.5,
        "single community M=0": modularity(tri, [0] * 6) == 0.0 and modularity(bridged, [0] * 6) == 0.0,
    }
    for label, g in (("two triangles", tri), ("bridged triangles", bridged)):
        part, q = louvain(g)
        best, winners = best_partition(g)
        checks[f"Louvain = exhaustive on {label}"] = (
            canonical(part.groups()) in {canonical(w) for w in winners} and abs(q - best) <= 1e-12
        )
    rnd = random.Random(77)
    values = []
    for _ in range(200):
        g = random_digraph(rnd, rnd.randint(2, 12), rnd.uniform(0.1, 0.9), True)
        if g.m == 0:
            continue
        values.append(modularity(g, [rnd.randint(0, 3) for _ in range(g.n)]))
        values.append(louvain(g)[1])
    checks["all M in [-1, 1]"] = all(-1 <= v <= 1 for v in values)
    ok = all(checks.values())
    failed = [k for k, v in checks.items() if not v]
    report(7, ok, "; ".join(checks) + (f" -- failed: {failed}" if failed else ""))
    assert ok, failed


def test_criterion_8_baselines():
    rnd = random.Random(8)
    brandes_ok = 0
    for _ in range(100):
        g = random_digraph(rnd, rnd.randint(1, 8), rnd.uniform(0.1, 0.7), rnd.random() < 0.5)
        got, want = betweenness(g).scores, brute_betweenness(g)
        brandes_ok += all(abs(a - b) <= 1e-9 for a, b in zip(got, want))

    pr_sums = []
    for s in range(30):
        g = generators.uniform_random(60, 0.05, seed=s, directed=bool(s % 2))
        pr_sums.append(abs(sum(pagerank(g).scores) - 1))
    pr_ok = max(pr_sums) < 1e-9

    transitive = [generators.cycle(7), generators.cycle(6, directed=False), generators.clique(5)]
    petersen = DirectedGraph.from_edges(
        10,
        [(i, (i + 1) % 5) for i in range(5)] + [(i, i + 5) for i in range(5)] + [(5 + i, 5 + (i + 2) % 5) for i in range(5)],
        symmetrize=True,
    )
    transitive.append(petersen)
    spread = 0.0
    for g in transitive:
        for scores in (eigenvector_centrality(g).scores, pagerank(g).scores):
            spread = max(spread, max(scores) - min(scores))
    sym_ok = spread < 1e-8

    greedy_total = greedy_ok = 0
    for s in range(40):
        g = generators.uniform_random(40, 0.08, seed=s, directed=bool(s % 2))
        for spec in (AbsoluteCapped(2), FractionOfInDegree(0.5)):
            ka = compute_thresholds(g, spec)
            for measure in MEASURES:
                try:
                    scores = compute_centrality(g, measure)
                except UndefinedMeasureError:
                    continue
                greedy_total += 1
                greedy_ok += covers(g, ka, greedy_centrality_seed(g, ka, scores))

    ok = brandes_ok == 100 and pr_ok and sym_ok and greedy_ok == greedy_total
    report(8, ok, f"Brandes = enumeration on {brandes_ok}/100 graphs; max |sum(PageRank) - 1| = {max(pr_sums):.1e}; "
                  f"vertex-transitive score spread {spread:.1e}; greedy covers {greedy_ok}/{greedy_total}")
    assert ok


SNAP_BYTES = (
    b"# Directed graph (each unordered pair of nodes is saved once): wiki-Vote.txt\n"
    b"# Wikipedia voting on promotion to administratorship\n"
    b"# Nodes: 7 Edges: 9\n"
    b"# FromNodeId\tToNodeId\n"
    b"30\t1412\n"
    b"30\t3352\n"
    b"30\t5254\n"
    b"3352\t30\n"
    b"5254 \t 5543\r\n"
    b"\n"
    b"7478\t3352\n"
    b"30\t1412\n"
    b"5543\t5543\n"
    b"n\xc3\xb8de\t30\n"
)


def test_criterion_9_snap_format(tmp_path):
    path = tmp_path / "wiki-vote-sample.txt"
    path.write_bytes(SNAP_BYTES)
    g = read_edge_list(path)
    # independent reading of the same bytes
    labels, edges = [], set()
    for raw in SNAP_BYTES.decode("utf-8").splitlines():
        if raw.startswith("#") or not raw.split():
            continue
        u, v = raw.split()
        for x in (u, v):
            if x not in labels:
                labels.append(x)
        if u != v:
            edges.add((labels.index(u), labels.index(v)))
    sym = read_edge_list(path, symmetrize=True)
    streamed = load_edge_list(io.StringIO(SNAP_BYTES.decode("utf-8")))
    ok = (
        g.labels == tuple(labels)
        and set(g.edges()) == edges
        and g.m == len(edges) == 7
        and streamed == g
        and sym.is_symmetric()
        and sym.m == len(edges | {(v, u) for u, v in edges})
    )
    g.check_invariants()
    report(9, ok, f"SNAP-style edge list ingested: n={g.n}, m={g.m}, tab/space/CRLF separators, comments, "
                  "duplicate and self-loop handling, UTF-8 labels")
    assert ok


def test_criterion_10_monotonicity():
    rnd = random.Random(10)
    violations = 0
    for _ in range(100):
        g = random_digraph(rnd, rnd.randint(1, 10), rnd.uniform(0.1, 0.7), rnd.random() < 0.5)
        sizes = [len(min_seed_bruteforce(g, compute_thresholds(g, AbsoluteCapped(k)))) for k in range(1, 6)]
        violations += any(b < a for a, b in itertools.pairwise(sizes))
    ok = violations == 0
    report(10, ok, f"minimum seed size non-decreasing in k=1..5 on {100 - violations}/100 graphs (n<=10)")
    assert ok
