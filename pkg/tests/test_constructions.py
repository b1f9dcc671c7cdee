import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import graphs, random_connected_graph
from oriray.arrows import Orientation, arrow_check, ddiam, enumerate_orientations, find_embedding
from oriray.catalog import directed_path, enumerate_graphs, enumerate_oriented_trees
from oriray.constructions import (EmbeddingError, WeakHomomorphism, bfs_parity_orientation,
                                  chordless_odd_walk, composite_orientation, copy_orientation,
                                  exact_sub_embedder, is_transitive, norm_span_check,
                                  odd_cycle_chord_check, pigeonhole_embed, tower_embedder,
                                  tower_family, tower_sizes, transitive_orientation,
                                  weak_hom_bound_check, weak_hom_witness)
from oriray.graph import (CapExceeded, Graph, bfs_distances, complete_graph, cycle_graph,
                          path_graph, rectangular_product)
from oriray.verify import check_certificate

PRISM = rectangular_product(complete_graph(2), complete_graph(3))


def random_orientation(g: Graph, rng: random.Random) -> Orientation:
    return Orientation(g, rng.getrandbits(g.m) if g.m else 0)


def test_copy_orientation_reads_layer():
    g = path_graph(2)
    host = rectangular_product(g, complete_graph(3))
    o = Orientation.from_flags(host, [1 if (a, b) == (1, 4) else 0 for a, b in host.edges])
    assert copy_orientation(o, g, 3, 0).bits == 0
    assert copy_orientation(o, g, 3, 1).bits == 1


def test_pigeonhole_trivial_levels():
    k1 = Graph(1)
    host = rectangular_product(k1, complete_graph(2))
    for bits in (0, 1):
        o = Orientation(host, bits)
        cert = pigeonhole_embed(k1, tower_embedder(1), o, directed_path(2))
        assert check_certificate(cert) == (True, "ok")


@pytest.mark.parametrize("seed", range(5))
def test_pigeonhole_i4_on_c5_times_k6(seed):
    rng = random.Random(seed)
    g = cycle_graph(5)
    host = rectangular_product(g, complete_graph(6))
    o = random_orientation(host, rng)
    cert = pigeonhole_embed(g, exact_sub_embedder, o, directed_path(4))
    assert check_certificate(cert) == (True, "ok")


def test_pigeonhole_all_four_vertex_trees_on_prism_product():
    rng = random.Random(1)
    host = rectangular_product(PRISM, complete_graph(7))
    for _ in range(3):
        o = random_orientation(host, rng)
        for tree in enumerate_oriented_trees(4):
            cert = pigeonhole_embed(PRISM, exact_sub_embedder, o, tree)
            assert check_certificate(cert)[0]


def test_pigeonhole_rejects_bad_hosts():
    g = cycle_graph(5)
    small = rectangular_product(g, complete_graph(5))
    with pytest.raises(ValueError, match="layers"):
        pigeonhole_embed(g, exact_sub_embedder, Orientation(small), directed_path(4))
    other = rectangular_product(path_graph(5), complete_graph(6))
    with pytest.raises(ValueError, match="not g x K_q"):
        pigeonhole_embed(g, exact_sub_embedder, Orientation(other), directed_path(4))


def test_pigeonhole_reports_sub_embedder_failure():
    g = cycle_graph(5)
    host = rectangular_product(g, complete_graph(6))
    with pytest.raises(EmbeddingError):
        pigeonhole_embed(g, lambda o, t: None, Orientation(host), directed_path(4))


def test_tower_sizes_and_family():
    assert tower_sizes(5) == [1, 2, 6, 42, 1806]
    fam = tower_family(6)
    assert [g.n for g in fam.graphs] == [1, 2, 6, 42]
    assert fam.sizes[-1] == 1806 * 1807
    with pytest.raises(CapExceeded):
        tower_family(6, materialize=5)


@pytest.mark.parametrize("level", [2, 3, 4])
def test_tower_embedder_places_every_tree(level):
    rng = random.Random(level)
    g = tower_family(level).graphs[-1]
    for _ in range(3):
        o = random_orientation(g, rng)
        for tree in enumerate_oriented_trees(level):
            cert = tower_embedder(level)(o, tree)
            assert check_certificate(cert)[0]


def test_bfs_examples():
    r = bfs_parity_orientation(path_graph(3))
    assert r.norms == [0, 1, 2]
    assert r.orientation.arcs == ((0, 1), (2, 1))
    r = bfs_parity_orientation(complete_graph(2), root=1)
    assert r.orientation.arcs == ((1, 0),)
    r = bfs_parity_orientation(cycle_graph(4))
    assert set(r.orientation.arcs) == {(0, 1), (0, 3), (2, 1), (2, 3)}
    r = bfs_parity_orientation(path_graph(5))
    assert r.orientation.arcs == ((0, 1), (2, 1), (2, 3), (4, 3))
    assert norm_span_check(r) == 1
    with pytest.raises(ValueError):
        bfs_parity_orientation(Graph(2))


@settings(max_examples=60)
@given(graphs(max_n=9, connected=True), st.data())
def test_bfs_parity_rule_and_span(g, data):
    root = data.draw(st.integers(0, g.n - 1))
    r = bfs_parity_orientation(g, root)
    assert r.norms == list(bfs_distances(g, root))
    for u, v in r.orientation.arcs:
        nu, nv = r.norms[u], r.norms[v]
        if nu == nv:
            assert u < v
        elif nu < nv:
            assert nu % 2 == 0
        else:
            assert nv % 2 == 1
    assert norm_span_check(r) <= 1


def test_bfs_span_on_larger_graphs():
    rng = random.Random(2)
    for n in (30, 80):
        g = random_connected_graph(rng, n, 4 / n)
        assert norm_span_check(bfs_parity_orientation(g, rng.randrange(n))) <= 1


def brute_transitive(g: Graph) -> bool:
    return any(is_transitive(o) for o in enumerate_orientations(g))


def test_transitive_examples():
    assert transitive_orientation(cycle_graph(5)) is None
    assert transitive_orientation(cycle_graph(4)) is not None
    assert transitive_orientation(complete_graph(5)) is not None
    assert transitive_orientation(PRISM) is None
    with pytest.raises(CapExceeded):
        transitive_orientation(complete_graph(7), cap=20)


@pytest.mark.parametrize("n", range(1, 6))
def test_transitive_orientation_matches_bruteforce(n):
    for g in enumerate_graphs(n):
        o = transitive_orientation(g)
        assert (o is not None) == brute_transitive(g)
        if o is not None:
            assert is_transitive(o)


def test_chordless_walk_examples():
    walk = chordless_odd_walk(cycle_graph(5))
    assert walk is not None and len(walk) % 2 == 1
    assert chordless_odd_walk(complete_graph(4)) is None
    # the prism has no chordless odd simple cycle but is still not comparability
    walk = chordless_odd_walk(PRISM)
    assert walk is not None and len(walk) % 2 == 1
    assert not odd_cycle_chord_check(PRISM)
    with pytest.raises(CapExceeded):
        odd_cycle_chord_check(cycle_graph(11))


def _is_chordless_odd_walk(g: Graph, walk: list[int]) -> bool:
    k = len(walk)
    return (k % 2 == 1
            and all(g.has_edge(walk[i], walk[(i + 1) % k]) for i in range(k))
            and all(not g.has_edge(walk[i], walk[(i + 2) % k]) for i in range(k)))


@pytest.mark.parametrize("n", range(1, 8))
def test_walk_criterion_matches_transitive_orientation(n):
    for g in enumerate_graphs(n):
        walk = chordless_odd_walk(g)
        assert (walk is None) == (transitive_orientation(g) is not None)
        if walk is not None:
            assert _is_chordless_odd_walk(g, walk)


def random_weak_hom(rng: random.Random, n_src: int, n_tgt: int) -> WeakHomomorphism:
    target = random_connected_graph(rng, n_tgt, 0.5)
    f = [rng.randrange(n_tgt) for _ in range(n_src)]
    edges = [(u, v) for u, v in itertools.combinations(range(n_src), 2)
             if (f[u] == f[v] or target.has_edge(f[u], f[v])) and rng.random() < 0.5]
    return WeakHomomorphism(Graph(n_src, edges), target, tuple(f))


def test_weak_hom_validation():
    with pytest.raises(ValueError):
        WeakHomomorphism(path_graph(3), Graph(2), (0, 1, 0))
    with pytest.raises(ValueError):
        WeakHomomorphism(path_graph(3), complete_graph(2), (0, 1))


def test_composite_orientation_examples():
    c6 = cycle_graph(6)
    f = WeakHomomorphism(c6, complete_graph(2), (0, 1, 0, 1, 0, 1))
    o = composite_orientation(f, [0, 1], {})
    assert all(u % 2 == 0 for u, _ in o.arcs)
    p4 = path_graph(4)
    f = WeakHomomorphism(p4, path_graph(2), (0, 0, 1, 1))
    fib = Orientation(path_graph(2), 1)
    o = composite_orientation(f, [1, 0], {0: fib, 1: fib})
    assert o.arcs == ((1, 0), (2, 1), (3, 2))
    g = cycle_graph(5)
    ident = WeakHomomorphism(g, g, tuple(range(5)))
    o = composite_orientation(ident, [0, 1, 0, 1, 2], {})
    assert set(o.arcs) == {(0, 1), (2, 1), (2, 3), (0, 4), (3, 4)}
    with pytest.raises(ValueError, match="improper"):
        composite_orientation(ident, [0, 0, 1, 0, 1], {})
    with pytest.raises(ValueError, match="missing"):
        composite_orientation(f, [0, 1], {})


def test_weak_hom_bound_examples():
    g = cycle_graph(5)
    b = weak_hom_bound_check(WeakHomomorphism(g, g, tuple(range(5))))
    assert (b.lhs, b.rhs, b.chi_target) == (3, 3, 3)
    b = weak_hom_bound_check(WeakHomomorphism(g, Graph(1), (0,) * 5))
    assert (b.lhs, b.rhs) == (3, 3)


@pytest.mark.parametrize("seed", range(8))
def test_weak_hom_bound_and_witness(seed):
    rng = random.Random(seed)
    f = random_weak_hom(rng, rng.randint(3, 8), rng.randint(1, 4))
    b = weak_hom_bound_check(f)
    assert b.lhs <= b.rhs
    o, m = weak_hom_witness(f)
    assert m == b.rhs
    assert find_embedding(directed_path(m + 1), o) is None
    if f.source.n >= m + 1 and f.source.m <= 16:
        assert not arrow_check(f.source, directed_path(m + 1)).holds
    assert ddiam(f.source) <= m
