import io
import json
import random

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from tipdecomp import generators
from tipdecomp.errors import DegenerateFitError, NotApplicableError, UndefinedMeasureError
from tipdecomp.graph import DirectedGraph
from tipdecomp.structure import (
    Partition,
    average_clustering,
    local_clustering,
    louvain,
    modularity,
    planar_fit,
)

from oracles import best_partition, canonical, literal_modularity, random_digraph

TRIANGLES = DirectedGraph.from_edges(6, [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)], symmetrize=True)
BRIDGED = DirectedGraph.from_edges(6, [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3), (2, 3)], symmetrize=True)


def test_clustering_examples():
    tri = generators.clique(3)
    assert [local_clustering(tri, i) for i in range(3)] == [1.0] * 3
    assert average_clustering(tri) == 1.0
    path = generators.path(3)
    assert local_clustering(path, 1) == 0.0 and average_clustering(path) == 0.0
    k4_minus = DirectedGraph.from_edges(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3)], symmetrize=True)
    assert local_clustering(k4_minus, 0) == pytest.approx(2 / 3)
    assert local_clustering(k4_minus, 1) == pytest.approx(2 / 3)
    assert average_clustering(DirectedGraph.empty()) == 0.0
    with pytest.raises(NotApplicableError):
        local_clustering(generators.cycle(3), 0)


def test_modularity_examples():
    assert modularity(TRIANGLES, [0, 0, 0, 1, 1, 1]) == 0.5
    assert modularity(TRIANGLES, [0] * 6) == 0.0
    assert modularity(TRIANGLES, range(6)) == pytest.approx(-1 / 6, abs=1e-15)
    with pytest.raises(UndefinedMeasureError):
        modularity(DirectedGraph.from_edges(3, []), [0, 0, 0])
    with pytest.raises(NotApplicableError):
        modularity(generators.cycle(3), [0, 0, 0])
    with pytest.raises(ValueError):
        modularity(TRIANGLES, [0, 0])


@pytest.mark.parametrize(
    "g, expected",
    [(TRIANGLES, [[0, 1, 2], [3, 4, 5]]), (BRIDGED, [[0, 1, 2], [3, 4, 5]]), (generators.clique(5), [[0, 1, 2, 3, 4]])],
)
def test_louvain_examples(g, expected):
    part, q = louvain(g)
    best, winners = best_partition(g)
    assert canonical(part.groups()) == canonical(expected)
    assert canonical(part.groups()) in {canonical(w) for w in winners}
    assert q == pytest.approx(best, abs=1e-12)
    assert q == modularity(g, part)


def test_louvain_refuses_edgeless_and_directed():
    with pytest.raises(UndefinedMeasureError):
        louvain(DirectedGraph.from_edges(4, []))
    with pytest.raises(NotApplicableError):
        louvain(generators.cycle(4))


def test_louvain_deterministic_on_larger_graph():
    g = generators.preferential_attachment(300, 2, seed=8)
    a, b = louvain(g, seed=1), louvain(g, seed=2)
    assert a == b
    assert a[1] > 0.2
    assert a[1] >= modularity(g, [0] * g.n)


def test_partition_helpers():
    p = Partition.from_groups(4, [[2, 3], [0, 1]])
    assert p.normalized().membership == (0, 0, 1, 1)
    assert p.groups() == [[0, 1], [2, 3]]
    buf = io.StringIO()
    p.normalized().to_csv(buf)
    assert buf.getvalue() == "node,community\n0,0\n1,0\n2,1\n3,1\n"
    with pytest.raises(ValueError):
        Partition.from_groups(3, [[0, 1]])
    with pytest.raises(ValueError):
        Partition.from_groups(2, [[0, 1], [1]])


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 10**6), st.integers(1, 9), st.floats(0.1, 0.9), st.data())
def test_modularity_matches_literal_sum_and_bounds(seed, n, p, data):
    g = random_digraph(random.Random(seed), n, p, True)
    if g.m == 0:
        return
    membership = data.draw(st.lists(st.integers(0, 3), min_size=n, max_size=n))
    q = modularity(g, membership)
    assert q == pytest.approx(literal_modularity(g, membership), abs=1e-12)
    assert -1 <= q <= 1
    lq = louvain(g)[1]
    assert -1 <= lq <= 1
    for i in range(n):
        assert 0 <= local_clustering(g, i) <= 1


def test_louvain_against_exhaustive_search_small():
    rnd = random.Random(5)
    for _ in range(25):
        g = random_digraph(rnd, rnd.randint(2, 7), rnd.uniform(0.2, 0.6), True)
        if g.m == 0:
            continue
        best, _ = best_partition(g)
        q = louvain(g)[1]
        assert q <= best + 1e-12
        assert q >= 0.0  # never worse than a single community


def test_planar_fit_exact_plane():
    pts = [(m, c, 2 * m + 3 * c + 1) for m, c in [(0, 0), (1, 0), (0, 1), (0.3, 0.7), (0.5, 0.2)]]
    fit = planar_fit(pts)
    assert (fit.a, fit.b, fit.c) == pytest.approx((2, 3, 1), abs=1e-9)
    assert fit.r_squared == pytest.approx(1.0)
    assert fit.predict(1, 1) == pytest.approx(6)
    assert json.loads(fit.to_json())["a"] == pytest.approx(2)


def test_planar_fit_constant_response():
    fit = planar_fit([(0, 0, 4), (1, 0, 4), (0, 1, 4), (1, 1, 4)])
    assert (fit.a, fit.b, fit.c) == pytest.approx((0, 0, 4), abs=1e-12)
    assert fit.r_squared == 1.0


@pytest.mark.parametrize("pts", [[(0, 0, 1), (1, 1, 2)], [(0, 0, 1), (1, 1, 2), (2, 2, 3), (3, 3, 5)]])
def test_planar_fit_degenerate(pts):
    with pytest.raises(DegenerateFitError):
        planar_fit(pts)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.tuples(st.floats(-1, 1), st.floats(0, 1), st.floats(-50, 50)), min_size=3, max_size=40))
def test_planar_fit_residuals_orthogonal(pts):
    X = np.array([[m, c, 1.0] for m, c, _ in pts])
    if np.linalg.matrix_rank(X) < 3 or np.linalg.cond(X) > 1e6:
        return
    fit = planar_fit(pts)
    resid = np.array([s - fit.predict(m, c) for m, c, s in pts])
    assert np.all(np.abs(X.T @ resid) < 1e-9)
    assert 0 <= fit.r_squared <= 1 + 1e-12
