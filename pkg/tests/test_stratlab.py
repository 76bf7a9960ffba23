from __future__ import annotations

import copy
import json
from math import factorial

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from operadforge.posetkit import poset_iso
from operadforge.stratlab import (
    Cell,
    CellModel,
    EquivariantComplex,
    ModelError,
    boundary_colimit,
    components,
    cone_fill,
    dimension_ledger,
    extend,
    extend_left,
    extend_right,
    fm1_model,
    free_action_check,
    interval_nullbordism_model,
    permutohedral_sphere,
    recognize,
    stratified_euler,
    stratum_codim,
    trivial_bimodule_model,
    validate_model,
)
from operadforge.stratlab.builtins import bracketings
from operadforge.stratlab.model import attachments, compose, index_trees, perms, validate_complex
from operadforge.treekit import Scheme, enumerate_colored


def _closed(M: CellModel, color: str, m: int) -> EquivariantComplex:
    return EquivariantComplex(M, m, M.closed_poset(color, m), "closed")


def _catalan(n: int) -> int:
    return factorial(2 * n) // (factorial(n) * factorial(n + 1))


# FM1 --------------------------------------------------------------------------------------


@pytest.mark.parametrize("k,proper", [(3, 2), (4, 10), (5, 44)])
def test_bracketings_are_associahedron_faces(k, proper):
    # proper faces of the associahedron; its Catalan(k-1) vertices are the full bracketings
    bs = bracketings(k)
    assert len(bs) == proper
    assert sum(len(b) == k - 2 for b in bs) == _catalan(k - 1)


@pytest.mark.parametrize("k,cells", [(3, 18), (4, 264), (5, 5400)])
def test_fm1_cell_counts(k, cells):
    M = fm1_model(max(k, 4))
    assert len(M.closed_poset("R", k)) == cells


def test_fm1_validates():
    assert validate_model(fm1_model(4)) == []


def test_fm1_top_cells_are_orderings():
    M = fm1_model(4)
    for k in (2, 3, 4):
        cx = M.complex("R", k)
        assert len(cx) == factorial(k)
        assert set(cx.dims) == {k - 2}


def test_fm1_model_bounds():
    with pytest.raises(ValueError):
        fm1_model(1)
    with pytest.raises(ValueError):
        fm1_model(7)


# validation negative controls ---------------------------------------------------------------


def _corrupt_one_value(M, shift: bool):
    atts = attachments(M, "R", 4)
    a = next(a for a in atts if len(a.tree) == 2)
    x = next(x for x, v in a.values.items() if len(v.tree) == 3)
    v = a.values[x]
    if shift:
        ids = list(v.ids)
        ids[0] = (ids[0] + 1) % len(M.complex(v.tree.colors[0], v.tree.arity(0)))
        a.values[x] = Cell(v.tree, tuple(ids))
    else:
        a.values[x] = Cell(v.tree, tuple(99 for _ in v.ids))
    return atts


@pytest.mark.parametrize("shift,extra", [(False, "range"), (True, "injective")])
def test_bad_attachment_breaks_intersection(shift, extra):
    M = fm1_model(4)
    codes = {v.code for v in validate_complex(M, "R", 4, _corrupt_one_value(M, shift))}
    assert "intersection" in codes and extra in codes


def test_broken_action_is_reported_and_blocks_surgery():
    M = trivial_bimodule_model()
    bad = copy.deepcopy(M.complex("R", 3))
    bad.action[(1, 2, 3)] = list(reversed(bad.action[(1, 2, 3)]))
    N = M.replace({("R", 3): bad})
    assert "action" in {v.code for v in validate_model(N, max_arity=3, links=False)}
    with pytest.raises(ModelError) as err:
        extend_right(N)
    assert err.value.violations


# boundary colimits ------------------------------------------------------------------------------


def test_hexagon_circles():
    cx = boundary_colimit(interval_nullbordism_model("right"), 3)
    rec = recognize(cx)
    assert (rec.kind, rec.components) == ("circles", 2)
    assert cx.counts() == {0: 12, 1: 12}
    assert free_action_check(cx) == []


def test_interval_arity_two_is_not_free():
    # the two points of the arity-2 boundary are swapped, but the bimodule space
    # W(2) is a point fixed by the transposition
    M = interval_nullbordism_model("right")
    cx = _closed(M, "W", 2)
    assert free_action_check(cx)


@pytest.mark.parametrize(
    "model,m",
    [
        (interval_nullbordism_model("right"), 3),
        (interval_nullbordism_model("left"), 3),
        (trivial_bimodule_model(), 3),
    ],
)
def test_stratified_euler_matches_cells(model, m):
    assert stratified_euler(model, m) == boundary_colimit(model, m).euler()


def test_stratified_euler_after_filling():
    M = interval_nullbordism_model("right")
    N = M.replace({("W", 3): cone_fill(boundary_colimit(M, 3))})
    assert stratified_euler(N, 4) == boundary_colimit(N, 4).euler()


@given(st.permutations([1, 2, 3, 4]), st.permutations([1, 2, 3, 4]))
@settings(max_examples=30, deadline=None)
def test_action_on_closed_cells_is_a_group_action(p, q):
    cx = _closed(fm1_model(4), "R", 4)
    pq = compose(tuple(p), tuple(q))
    ap, aq, apq = cx.act(p), cx.act(q), cx.act(pq)
    assert [ap[aq[i]] for i in range(len(cx.cells))] == apq
    assert all(cx.dims[ap[i]] == cx.dims[i] for i in range(len(cx.cells)))


def test_stratum_codim_is_internal_edges():
    for T in enumerate_colored(4, Scheme.RBW):
        assert stratum_codim(T) == len(T.edges)
    M = fm1_model(4)
    for T in index_trees(M, 4, "operad"):
        for cell in (c for c in M.closed_poset("R", 4).elements if c.tree == T):
            assert M.key_dim(cell) == dimension_ledger(1, 4, "operad") - stratum_codim(T)


# recognition -------------------------------------------------------------------------------------


def test_permutohedral_sphere_is_a_sphere():
    M = CellModel(1, "bimodule", {("B", 4): permutohedral_sphere(4)})
    cx = _closed(M, "B", 4)
    rec = recognize(cx)
    assert (rec.kind, rec.euler, cx.counts()) == ("surface", 2, {0: 14, 1: 36, 2: 24})


def test_recognition_rejects_singular_complexes():
    M = CellModel(1, "bimodule", {("B", 4): permutohedral_sphere(4)})
    cx = _closed(M, "B", 4)
    # the 1-skeleton has vertices of degree three
    skeleton = cx.subcomplex(i for i, d in enumerate(cx.dims) if d <= 1)
    assert recognize(skeleton).kind == "not-manifold"
    # removing a single face leaves edges on one face only, with no declared boundary
    holed = cx.subcomplex(i for i in range(len(cx.cells)) if i != cx.dims.index(2))
    assert recognize(holed).kind == "not-manifold"


def test_cone_fill_requires_circles():
    M = fm1_model(4)
    with pytest.raises(ModelError):
        cone_fill(_closed(M, "R", 4))


def test_cone_fill_gives_a_disc():
    M = interval_nullbordism_model("right")
    N = M.replace({("W", 3): cone_fill(boundary_colimit(M, 3))})
    assert recognize(_closed(N, "W", 3)).kind == "bordered-surface"


# surgery ---------------------------------------------------------------------------------------


def test_surgery_on_the_trivial_bimodule():
    res = extend_right(trivial_bimodule_model())
    assert res.core.counts() == {0: 36, 1: 30}
    assert res.operad.counts() == {0: 72, 1: 66}
    assert res.bimodule.counts() == {0: 96, 1: 132, 2: 42}
    assert recognize(res.operad).kind == "arcs"
    assert recognize(res.bimodule).kind == "bordered-surface"
    assert validate_model(res.model, links=False) == []


def test_left_and_right_surgery_agree_on_the_trivial_bimodule():
    M = trivial_bimodule_model()
    left, right = extend_left(M), extend_right(M)
    assert left.operad.counts() == right.operad.counts()
    assert poset_iso(left.operad.poset, right.operad.poset) is not None


def test_surgery_argument_errors():
    M = trivial_bimodule_model()
    with pytest.raises(ValueError):
        extend_right(M, arity=1)
    with pytest.raises(ValueError):
        extend(M, side="middle")
    with pytest.raises(ModelError):
        extend_right(fm1_model(3))


# dimensions and serialisation ------------------------------------------------------------------


@pytest.mark.parametrize("d", [1, 2, 3])
@pytest.mark.parametrize("m", [2, 3, 4])
def test_dimension_ledger(d, m):
    assert dimension_ledger(d, m, "bimodule") == dimension_ledger(d, m, "operad") + 1
    assert dimension_ledger(d, m, "bimoduleObstruction") == dimension_ledger(d, m, "operadObstruction") + 1
    assert dimension_ledger(d, m, "operad") == m * d - d - 1


def test_dimension_ledger_domain():
    with pytest.raises(ValueError):
        dimension_ledger(0, 3, "operad")
    with pytest.raises(ValueError):
        dimension_ledger(1, 1, "operad")
    with pytest.raises(ValueError):
        dimension_ledger(1, 3, "cobordism")


def test_model_json_round_trip():
    M = interval_nullbordism_model("right")
    N = CellModel.from_json(json.loads(json.dumps(M.to_json())))
    assert (N.d, N.kind) == (M.d, M.kind)
    for color, m in [("R", 3), ("W", 2), ("W", 3)]:
        if M.has(color, m):
            assert N.closed_poset(color, m).same_order(M.closed_poset(color, m))
    assert validate_model(N, links=False) == []


def test_complex_json_is_deterministic():
    cx = boundary_colimit(interval_nullbordism_model("right"), 3)
    a = json.dumps(cx.to_json(), sort_keys=True)
    b = json.dumps(boundary_colimit(interval_nullbordism_model("right"), 3).to_json(), sort_keys=True)
    assert a == b
    assert cx.to_dot().startswith("digraph")


def test_components_partition_cells():
    cx = boundary_colimit(interval_nullbordism_model("right"), 3)
    comps = components(cx)
    assert sorted(i for c in comps for i in c) == list(range(len(cx.cells)))
    assert len(perms(3)) == 6
