from __future__ import annotations

from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from operadforge.gf2homology import (
    ChainComplex,
    SimplicialComplex,
    betti,
    euler_characteristic,
    from_complex,
    gf2_rank,
    is_homology_ball,
    is_homology_sphere,
    reduced_betti,
)


def _span_size(rows: list[int]) -> int:
    span = {0}
    for r in rows:
        span |= {s ^ r for s in span}
    return len(span)


def boundary_of_simplex(n: int) -> SimplicialComplex:
    return SimplicialComplex(combinations(range(n + 2), n + 1))


complexes = st.lists(
    st.frozensets(st.integers(0, 5), min_size=1, max_size=4), min_size=1, max_size=6
).map(SimplicialComplex)


@given(st.lists(st.integers(0, 255), max_size=8))
def test_rank_matches_span_size(rows):
    assert 2 ** gf2_rank(rows) == _span_size(rows)


@given(complexes)
@settings(max_examples=80, deadline=None)
def test_euler_from_ranks_equals_euler_from_betti(cx):
    b = betti(from_complex(cx))
    assert euler_characteristic(cx) == sum((-1) ** k * x for k, x in enumerate(b))


@given(complexes)
@settings(max_examples=30, deadline=None)
def test_barycentric_subdivision_keeps_homology(cx):
    sd = cx.barycentric_subdivision()
    assert reduced_betti(from_complex(sd)) == reduced_betti(from_complex(cx))


@pytest.mark.parametrize("n", [0, 1, 2, 3])
def test_simplex_boundaries_are_spheres(n):
    assert is_homology_sphere(boundary_of_simplex(n), n)
    assert is_homology_ball(SimplicialComplex([range(n + 1)]))


def test_torus_and_projective_plane():
    # 7-vertex torus
    torus = SimplicialComplex(
        [(i % 7, (i + 1) % 7, (i + 3) % 7) for i in range(7)] + [(i % 7, (i + 2) % 7, (i + 3) % 7) for i in range(7)]
    )
    assert betti(from_complex(torus)) == [1, 2, 1]
    # 6-vertex projective plane; over GF(2) it looks like a torus in degree 1 and 2
    rp2 = SimplicialComplex(
        [(0, 1, 2), (0, 2, 3), (0, 3, 4), (0, 4, 5), (0, 5, 1), (1, 2, 4), (2, 3, 5), (3, 4, 1), (4, 5, 2), (5, 1, 3)]
    )
    assert betti(from_complex(rp2)) == [1, 1, 1]
    assert euler_characteristic(rp2) == 1


def test_empty_complex():
    empty = SimplicialComplex([])
    assert empty.is_empty()
    assert reduced_betti(from_complex(empty)) == {-1: 1}
    assert is_homology_sphere(empty, -1)


def test_non_maximal_facets_are_dropped():
    cx = SimplicialComplex([(0, 1, 2), (0, 1), (3,)])
    assert len(cx.facets) == 2


def test_bad_boundary_is_rejected():
    # an edge whose boundary is a single vertex, then a triangle hitting it once
    with pytest.raises(ValueError):
        ChainComplex((2, 1, 1), ((0, 0), (0b01,), (0b1,)))
