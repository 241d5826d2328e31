import itertools

import pytest
from hypothesis import given, settings, strategies as st

from plab.ball_graph import (
    ComponentGraph,
    ProductShape,
    VertexClass,
    cartesian_adjacent,
    conormal_adjacent,
    enumerate_vertices,
    extreme_vertices,
    hypercube_component,
    vertex_class,
)
from plab.errors import InvalidVertexError, PreconditionError, SizeCapError

ONE_PAIR_SQ = ProductShape.of((1, 0), (1, 0))


def test_conormal_loop_free():
    s = ProductShape.of((1, 1), (1, 1))
    assert not any(conormal_adjacent(s, u, u) for u in s.vertex_list)


def test_conormal_single_coordinate_edge():
    assert conormal_adjacent(ONE_PAIR_SQ, (0, 0), (1, 0))


def test_one_pair_square_is_complete():
    vs = ONE_PAIR_SQ.vertex_list
    pairs = list(itertools.combinations(vs, 2))
    assert len(pairs) == 6
    assert all(conormal_adjacent(ONE_PAIR_SQ, u, v) for u, v in pairs)
    assert conormal_adjacent(ONE_PAIR_SQ, (0, 0), (1, 1))


def test_cartesian_examples():
    assert cartesian_adjacent(ONE_PAIR_SQ, (0, 0), (1, 0))
    assert not cartesian_adjacent(ONE_PAIR_SQ, (0, 0), (1, 1))
    assert not cartesian_adjacent(ONE_PAIR_SQ, (0, 0), (0, 0))


def test_vertex_classes():
    s = ProductShape.of((1, 1), (1, 1))
    assert vertex_class(s, (0, 1)) is VertexClass.EXTREME
    assert vertex_class(s, (0, 2)) is VertexClass.SPHERE_NON_EXTREME
    assert vertex_class(s, (2, 2)) is VertexClass.INTERIOR


@pytest.mark.parametrize(
    "shape,count",
    [(ProductShape.of((1, 1)), 3), (ONE_PAIR_SQ, 4), (ProductShape.of((1, 1), (1, 1), (1, 1)), 27)],
)
def test_vertex_counts(shape, count):
    assert len(enumerate_vertices(shape)) == count


def test_vertex_cap():
    with pytest.raises(SizeCapError):
        enumerate_vertices(ProductShape.of((1, 1), (1, 1)), cap=8)


def test_invalid_vertex():
    with pytest.raises(InvalidVertexError):
        ProductShape.of((1, 1)).check_vertex((3,))
    with pytest.raises(InvalidVertexError):
        ONE_PAIR_SQ.check_vertex((0,))


def test_hypercube_one_component():
    s = ProductShape.of((1, 0))
    assert set(hypercube_component(s, (0,)).values()) == {(0,), (1,)}


def test_hypercube_needs_extreme():
    with pytest.raises(PreconditionError):
        hypercube_component(ProductShape.of((1, 1)), (2,))


def test_hypercube_is_cube():
    s = ProductShape.of((2, 1), (1, 0), (1, 2))
    x = (2, 1, 0)
    cube = hypercube_component(s, x)
    assert len(cube) == 8
    for J, v in cube.items():
        for K, w in cube.items():
            assert cartesian_adjacent(s, v, w) == (len(J ^ K) == 1)


def test_shape_json_round_trip():
    s = ProductShape.of((2, 1), (0, 3))
    assert ProductShape.from_json(s.to_json()) == s
    assert s.to_json() == '{"components": [{"isolated": 1, "pairs": 2}, {"isolated": 3, "pairs": 0}]}'


def test_empty_shape_rejected():
    with pytest.raises(ValueError):
        ProductShape(())


def test_extreme_vertices_are_sphere_products():
    s = ProductShape.of((2, 1), (1, 1))
    assert len(extreme_vertices(s)) == 4 * 2


def test_bitsets_match_predicate():
    s = ProductShape.of((1, 1), (2, 0))
    adj = s.conormal_bitsets
    for a, u in enumerate(s.vertex_list):
        for b, v in enumerate(s.vertex_list):
            assert bool(adj[a] >> b & 1) == conormal_adjacent(s, u, v)


shapes = st.lists(
    st.tuples(st.integers(0, 2), st.integers(0, 2)).filter(lambda t: t[0] or t[1]),
    min_size=1, max_size=3,
).map(lambda cs: ProductShape.of(*cs))


@settings(max_examples=60, deadline=None)
@given(shapes, st.data())
def test_adjacency_symmetric_and_cartesian_inside_conormal(shape, data):
    vs = shape.vertex_list
    u = data.draw(st.sampled_from(vs))
    v = data.draw(st.sampled_from(vs))
    assert conormal_adjacent(shape, u, v) == conormal_adjacent(shape, v, u)
    assert cartesian_adjacent(shape, u, v) == cartesian_adjacent(shape, v, u)
    if cartesian_adjacent(shape, u, v):
        assert conormal_adjacent(shape, u, v)


def test_component_partner():
    c = ComponentGraph(2, 1)
    assert [c.partner(v) for v in range(5)] == [1, 0, 3, 2, None]
