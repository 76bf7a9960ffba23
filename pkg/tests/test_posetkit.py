from __future__ import annotations

import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from operadforge.posetkit import (
    BOTTOM,
    ColimitDiagram,
    FinPoset,
    adjoin_bottom,
    antichain,
    chain,
    cone,
    euler_of,
    interval,
    is_cw_poset,
    is_order_iso,
    join,
    opposite,
    order_complex,
    poset_colimit,
    poset_iso,
    product,
    reduced_homology,
    suspension,
)


@st.composite
def posets(draw, max_size: int = 5):
    n = draw(st.integers(min_value=1, max_value=max_size))
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    rel = {p for p in pairs if draw(st.booleans())}
    # transitive closure of a relation compatible with 0 < 1 < ... < n-1
    for k in range(n):
        for i in range(n):
            for j in range(n):
                if (i, k) in rel and (k, j) in rel:
                    rel.add((i, j))
    return FinPoset.from_relation(list(range(n)), lambda a, b: a == b or (a, b) in rel)


def _reduced_euler(P: FinPoset) -> int:
    return euler_of(P) - 1


def face_poset(facets):
    """Face poset of a simplicial complex, without the empty face."""
    faces = set()
    for f in facets:
        f = tuple(sorted(f))
        for mask in range(1, 1 << len(f)):
            faces.add(tuple(x for k, x in enumerate(f) if mask >> k & 1))
    faces = sorted(faces, key=lambda f: (len(f), f))
    return FinPoset.from_relation(faces, lambda a, b: set(a) <= set(b))


# basics ------------------------------------------------------------------------------------


def test_chain_and_antichain():
    assert chain(4).dims == (0, 1, 2, 3)
    assert antichain(3).dims == (0, 0, 0)
    assert chain(3).lt(0, 2) and not chain(3).lt(2, 0)
    assert opposite(chain(3)).dims == (2, 1, 0)


def test_adjoin_bottom_puts_bottom_first():
    P = adjoin_bottom(antichain(2))
    assert P.elements[0] is BOTTOM
    assert P.minimal() == [0]


def test_product_dims_add():
    P = product(chain(2), chain(3))
    assert len(P) == 6
    assert max(P.dims) == 3


def test_intervals():
    C = chain(5)
    assert interval(C, 1, 3).elements == (2, 3)
    assert interval(C, 2, kind="lower").elements == (0, 1, 2)
    assert interval(C, 2, kind="upperStrict").elements == (3, 4)
    with pytest.raises(ValueError):
        interval(antichain(2), 0, 1)
    with pytest.raises(ValueError):
        interval(C, 0, kind="sideways")


def test_json_round_trip():
    P = product(chain(2), antichain(2))
    Q = FinPoset.from_json(json.loads(json.dumps(P.to_json())))
    assert Q.same_order(P)


# homology --------------------------------------------------------------------------------------


def test_order_complex_of_chain_is_a_simplex():
    assert reduced_homology(chain(4)) == {}
    assert order_complex(chain(4)).dim == 3


def test_spheres_from_joins_and_suspensions():
    s0 = antichain(2)
    assert reduced_homology(s0) == {0: 1}
    assert reduced_homology(join(s0, s0)) == {1: 1}
    assert reduced_homology(join(s0, s0, s0)) == {2: 1}
    assert reduced_homology(suspension(s0)) == {1: 1}
    assert reduced_homology(cone(s0)) == {}
    assert reduced_homology(FinPoset([], [])) == {-1: 1}


@given(posets(4), posets(4))
@settings(max_examples=60, deadline=None)
def test_reduced_euler_is_multiplicative_under_join(P, Q):
    assert _reduced_euler(join(P, Q)) == -_reduced_euler(P) * _reduced_euler(Q)


@given(posets(5))
@settings(max_examples=50, deadline=None)
def test_suspension_shifts_homology(P):
    h = reduced_homology(P)
    shifted = {k + 1: v for k, v in h.items()}
    assert reduced_homology(suspension(P)) == shifted


@given(posets(5))
@settings(max_examples=50, deadline=None)
def test_cone_is_acyclic(P):
    assert reduced_homology(cone(P)) == {}


# CW posets -----------------------------------------------------------------------------------


def test_simplicial_face_posets_are_cw():
    assert is_cw_poset(face_poset([(0, 1, 2)]))[0]
    assert is_cw_poset(face_poset([(0, 1), (1, 2), (2, 0)]))[0]


def test_bigon_is_cw_but_bad_disc_is_not():
    # two vertices, two edges between them, one face bounded by both edges
    bigon = FinPoset.from_covers(["a", "b", "e", "f", "D"], [(0, 2), (1, 2), (0, 3), (1, 3), (2, 4), (3, 4)])
    assert is_cw_poset(bigon)[0]
    # a 2-cell whose boundary is a single edge is not regular
    bad = FinPoset.from_covers(["a", "b", "e", "D"], [(0, 2), (1, 2), (2, 3)])
    ok, failures = is_cw_poset(bad)
    assert not ok and failures


# isomorphism ------------------------------------------------------------------------------------


@given(posets(6), st.randoms(use_true_random=False))
@settings(max_examples=60, deadline=None)
def test_iso_finds_relabelings(P, rnd):
    n = len(P)
    perm = list(range(n))
    rnd.shuffle(perm)
    inv = {perm[i]: i for i in range(n)}
    Q = FinPoset.from_relation(list(range(n)), lambda a, b: P.leq(inv[a], inv[b]))
    f = poset_iso(P, Q)
    assert f is not None
    assert is_order_iso(P, Q, f)


def test_iso_rejects_different_posets():
    assert poset_iso(chain(3), antichain(3)) is None
    assert poset_iso(join(antichain(2), antichain(2)), product(chain(2), chain(2))) is None


def test_iso_on_symmetric_products():
    P = product(chain(3), chain(2), chain(2))
    Q = product(chain(2), chain(3), chain(2))
    f = poset_iso(P, Q)
    assert f is not None and is_order_iso(P, Q, f)


# colimits ---------------------------------------------------------------------------------------


def test_colimit_glues_two_edges_into_a_path():
    edge = FinPoset.from_covers(["v0", "v1", "e"], [(0, 2), (1, 2)])
    point = FinPoset(["p"], [0])
    diagram = ColimitDiagram([edge, edge, point], [(2, 0, {0: 1}), (2, 1, {0: 0})])
    colim, inj = poset_colimit(diagram)
    assert len(colim) == 5
    assert sorted(colim.dims) == [0, 0, 0, 1, 1]
    assert inj[0][1] == inj[1][0]


def test_colimit_rejects_non_embeddings():
    edge = FinPoset.from_covers(["v0", "v1", "e"], [(0, 2), (1, 2)])
    with pytest.raises(ValueError):
        poset_colimit(ColimitDiagram([antichain(2), edge], [(0, 1, {0: 0, 1: 0})]))

