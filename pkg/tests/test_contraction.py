import itertools

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from pebblemotion import (
    EquivalenceClasses,
    ErrorCode,
    Graph,
    PebbleError,
    PpgInstance,
    contract,
    expand_classes,
    oracle_exchange_classes,
    oracle_reachable,
    prepare_occupancy,
    tree_classes,
)
from pebblemotion.contraction import HUB, ORIGINAL, PORT, occupancy_ok
from pebblemotion.decomposition import NONE, analyze

from strategies import TWO_TRIANGLES_BRIDGED, connected_graphs, placements

# triangles {0,1,2} and {3,4,5} joined through the path 2-6-7-3
TRIANGLES_WITH_PATH = [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3), (2, 6), (6, 7), (7, 3)]
# triangle, square, triangle plus two tree vertices 10 and 11
THREE_MTECS = [
    (0, 1), (1, 2), (2, 0),
    (3, 4), (4, 5), (5, 6), (6, 3),
    (7, 8), (8, 9), (9, 7),
    (2, 10), (10, 3), (10, 11), (5, 7),
]
TRIANGLE_PENDANT = [(0, 1), (1, 2), (2, 0), (2, 3)]
TRIANGLE_TAIL = [(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 5)]


def pipeline(inst: PpgInstance) -> EquivalenceClasses:
    a = analyze(inst.graph)
    c = contract(prepare_occupancy(inst, a), a)
    return expand_classes(c, tree_classes(c.tree, c.start))


def test_prepare_keeps_full_occupancy():
    g = Graph(8, TRIANGLES_WITH_PATH)
    inst = PpgInstance(g, [0, 1, 2, 3, 4, 5], [5, 4, 3, 2, 1, 0])
    assert prepare_occupancy(inst) is inst


def test_prepare_moves_pebbles_off_the_path():
    g = Graph(8, TRIANGLES_WITH_PATH)
    inst = PpgInstance(g, [6, 7, 2, 3], [1, 0, 2, 3])
    out = prepare_occupancy(inst)
    a = analyze(g)
    assert occupancy_ok(a, out.start)
    assert out.pi == inst.pi
    counts = np.bincount(a.decomposition.mtec_id[out.start.positions], minlength=2)
    assert sorted(counts.tolist()) == [2, 2]
    assert oracle_reachable(inst.as_pmg()) == oracle_reachable(out.as_pmg())


def test_prepare_two_holes_unchanged():
    g = Graph(8, TRIANGLES_WITH_PATH)
    inst = PpgInstance(g, [0, 1, 3, 4, 6, 7], [0, 1, 2, 3, 4, 5])
    assert prepare_occupancy(inst).start == inst.start


def test_prepare_rejects_out_of_range():
    g = Graph(8, TRIANGLES_WITH_PATH)
    with pytest.raises(PebbleError) as err:
        prepare_occupancy(PpgInstance(g, [0, 1, 2], [0, 1, 2]))
    assert err.value.code is ErrorCode.PRECONDITION
    with pytest.raises(PebbleError) as err:
        prepare_occupancy(PpgInstance(Graph(4, [(0, 1), (1, 2), (2, 3), (3, 0)]), [0, 1], [0, 1]))
    assert err.value.code is ErrorCode.PRECONDITION


def test_triangle_with_two_pebbles():
    g = Graph(4, TRIANGLE_PENDANT)
    c = contract(PpgInstance(g, [0, 1], [0, 1]))
    assert c.tree.n == 3 and c.tree.is_tree()
    port = int(np.flatnonzero(c.vertex_kind == PORT)[0])
    hub = int(np.flatnonzero(c.vertex_kind == HUB)[0])
    assert c.tree.has_edge(port, hub)
    assert c.pebble_groups == ((0, 1),)
    assert c.start.occupant[hub] == 0
    assert c.start.occupant[port] == -1
    assert c.tree.degree[hub] == 1


def test_three_mtecs_give_three_contracted_edges():
    g = Graph(12, THREE_MTECS)
    a = analyze(g)
    assert a.decomposition.n_mtecs == 3
    c = contract(prepare_occupancy(PpgInstance(g, list(range(9)), list(range(9))), a), a)
    assert c.tree.is_tree()
    assert c.tree.n == 2 + 2 * 3
    assert (c.vertex_kind == HUB).sum() == 3
    assert sorted(c.vertex_ref[c.vertex_kind == ORIGINAL].tolist()) == [10, 11]
    for port, hub in zip(np.flatnonzero(c.vertex_kind == PORT), np.flatnonzero(c.vertex_kind == HUB)):
        assert c.tree.has_edge(int(port), int(hub))


def test_full_mtec_with_one_exit():
    g = Graph(6, TRIANGLE_TAIL)
    inst = PpgInstance(g, [0, 1, 2, 3], [0, 1, 2, 3])
    c = contract(inst)
    port = int(np.flatnonzero(c.vertex_kind == PORT)[0])
    hub = int(np.flatnonzero(c.vertex_kind == HUB)[0])
    # the pebble beside the exit stands alone on the port
    assert c.group_of[2] == c.start.occupant[port]
    assert sorted(c.pebble_groups[c.start.occupant[hub]]) == [0, 1]
    for s in itertools.permutations(range(6), 4):
        if set(s[:3]) == {0, 1, 2}:
            assert pipeline(PpgInstance(g, s, [0, 1, 2, 3])) == oracle_exchange_classes(g, s)


def test_occupancy_violation():
    g = Graph(8, TRIANGLES_WITH_PATH)
    with pytest.raises(PebbleError) as err:
        contract(PpgInstance(g, [0, 6, 7, 3, 4, 5], [0, 1, 2, 3, 4, 5]))
    assert err.value.code is ErrorCode.OCCUPANCY_VIOLATION


def test_expand_examples():
    g = Graph(4, TRIANGLE_PENDANT)
    c = contract(PpgInstance(g, [0, 1], [0, 1]))
    one = EquivalenceClasses.from_labels([0] * c.start.p)
    assert expand_classes(c, one).classes == ((0, 1),)
    g6 = Graph(6, TRIANGLE_TAIL)
    c6 = contract(PpgInstance(g6, [0, 1, 2, 3], [0, 1, 2, 3]))
    assert expand_classes(c6, EquivalenceClasses.from_labels([0] * c6.start.p)).n_classes == 1
    split = expand_classes(c6, EquivalenceClasses.from_labels(np.arange(c6.start.p)))
    for grp in c6.pebble_groups:
        assert len({split.class_id[i] for i in grp}) == 1


def test_two_triangles_against_oracle():
    g = Graph(6, TWO_TRIANGLES_BRIDGED)
    for s in itertools.permutations(range(6), 4):
        assert pipeline(PpgInstance(g, s, [0, 1, 2, 3])) == oracle_exchange_classes(g, s)


@st.composite
def contractible(draw):
    g = draw(connected_graphs(min_n=4, max_n=7, max_extra=3))
    d = analyze(g).decomposition
    assume(d.n_mtecs > 0 and d.bridge_flags.any())
    lo = max(d.n_m - 2, d.n_m - d.n_mtecs)
    assume(lo <= g.n - 2)
    p = draw(st.integers(lo, g.n - 2))
    return g, draw(placements(g.n, p))


@settings(max_examples=150)
@given(contractible())
def test_contraction_preserves_classes(case):
    g, s = case
    inst = PpgInstance(g, s, list(range(len(s))))
    a = analyze(g)
    prepared = prepare_occupancy(inst, a)
    c = contract(prepared, a)
    d = a.decomposition
    outside = int((d.mtec_id == NONE).sum())
    assert c.tree.n == outside + 2 * d.n_mtecs and c.tree.is_tree()
    assert sum(len(grp) for grp in c.pebble_groups) == len(s)
    assert expand_classes(c, tree_classes(c.tree, c.start)) == oracle_exchange_classes(g, s)
