from __future__ import annotations

import json
from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from operadforge.polykit import (
    HalfspaceSystem,
    bounded_slice,
    face_lattice,
    feasible,
    height_polytope_five,
    height_polytope_rbw,
)
from operadforge.treekit import Scheme, corolla, enumerate_colored, make_tree


def cube(n: int) -> HalfspaceSystem:
    rows = []
    for i in range(n):
        e = [0] * n
        e[i] = 1
        rows.append((e, 1))
        rows.append(([-x for x in e], 0))
    return HalfspaceSystem.build(n, rows)


def _cube_faces(n: int) -> dict[int, int]:
    # a face picks 0, 1 or "free" in each coordinate; the full cube is excluded
    counts: dict[int, int] = {}
    for choice in product("01*", repeat=n):
        d = choice.count("*")
        if d < n:
            counts[d] = counts.get(d, 0) + 1
    return counts


@pytest.mark.parametrize("n", [1, 2, 3])
def test_cube_face_lattice(n):
    L = face_lattice(cube(n))
    assert len(L) == 3**n - 1
    got: dict[int, int] = {}
    for f in L.elements:
        got[f.dim] = got.get(f.dim, 0) + 1
    assert got == _cube_faces(n)


def test_face_witnesses_are_exact():
    H = cube(3)
    for f in face_lattice(H).elements:
        assert H.satisfied(f.witness, tight=f.tight)


def test_face_order_is_graded_by_dimension():
    L = face_lattice(cube(3))
    for j in range(len(L)):
        for i in L.lower_covers[j]:
            assert L.elements[j].dim == L.elements[i].dim + 1


def test_feasibility():
    H = HalfspaceSystem.build(1, [([1], 1), ([-1], -1)])  # x <= 1 and x >= 1
    assert feasible(H) == (Fraction(1),)
    assert feasible(H, strict=[0]) is None
    # triangle x, y >= 0, x + y <= 1 has a strict interior point
    T = HalfspaceSystem.build(2, [([-1, 0], 0), ([0, -1], 0), ([1, 1], 1)])
    w = feasible(T, strict=[0, 1, 2])
    assert w is not None and T.satisfied(w, tight=[])


@given(st.lists(st.tuples(st.integers(-3, 3), st.integers(-3, 3), st.integers(-4, 4)), min_size=1, max_size=5))
@settings(max_examples=80, deadline=None)
def test_witnesses_satisfy_random_systems(rows):
    H = HalfspaceSystem.build(2, [((a, b), c) for a, b, c in rows])
    w = feasible(H)
    if w is not None:
        assert H.satisfied(w)
    else:
        # no grid point in a generous box satisfies the system either
        grid = [Fraction(k, 2) for k in range(-40, 41)]
        assert not any(H.satisfied((x, y)) for x in grid[::4] for y in grid[::4])


def test_json_keeps_fractions_exact():
    H = HalfspaceSystem.build(2, [([Fraction(1, 3), 2], Fraction(-5, 7))], [([1, 1], 0)])
    data = json.loads(json.dumps(H.to_json()))
    assert data["inequalities"][0][1] == "-5/7"
    back = HalfspaceSystem.from_json(data)
    assert (back.inequalities, back.equalities) == (H.inequalities, H.equalities)


def test_build_checks_lengths():
    with pytest.raises(ValueError):
        HalfspaceSystem.build(2, [([1], 0)])


def test_bounded_slice_needs_a_cone():
    with pytest.raises(ValueError):
        bounded_slice(cube(2), [1, 1])


def test_height_polytopes():
    t = make_tree({"r": [1], "c": [2, 3]}, {"c": "r"}, {"r": "R", "c": "R"})
    H = height_polytope_rbw(t)
    assert H.is_cone and H.dim == 2
    S = bounded_slice(H, {v: 1 for v in H.variables})
    assert feasible(S) is not None
    assert height_polytope_rbw(corolla([1, 2], "W")).dim == 0
    with pytest.raises(ValueError):
        height_polytope_rbw(corolla([1, 2], "V", Scheme.FIVE))
    for T in enumerate_colored(3, Scheme.FIVE):
        assert feasible(height_polytope_five(T)) is not None
