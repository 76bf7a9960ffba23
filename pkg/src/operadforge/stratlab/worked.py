"""Named worked examples: each returns expected and computed values side by side."""

from __future__ import annotations

from ..posetkit import poset_iso
from .builtins import fm1_model, interval_nullbordism_model, permutohedral_sphere, trivial_bimodule_model
from .model import CellModel, EquivariantComplex, boundary_colimit, stratified_euler, transpositions
from .recognize import components, free_action_check, recognize
from .surgery import cone_fill, extend_left, extend_right, flatten

__all__ = ["EXAMPLES", "hexagons", "chi48", "fm1_pentagons", "null_chain", "color_swap", "run_example"]


def _report(name: str, expected: dict, computed: dict, extra: dict | None = None) -> dict:
    ok = all(computed.get(k) == v for k, v in expected.items())
    out = {"example": name, "ok": ok, "expected": expected, "computed": computed}
    if extra:
        out.update(extra)
    return out


def _component_of(comps: list[list[int]]) -> dict[int, int]:
    return {i: k for k, comp in enumerate(comps) for i in comp}


def hexagons() -> dict:
    M = interval_nullbordism_model("right")
    cx = boundary_colimit(M, 3)
    rec = recognize(cx)
    comps = components(cx)
    where = _component_of(comps)
    sizes = sorted((sum(cx.dims[i] == 0 for i in c), sum(cx.dims[i] == 1 for i in c)) for c in comps)
    rotations = [(2, 3, 1), (3, 1, 2)]
    rot_ok = True
    for p in rotations:
        img = cx.act(p)
        rot_ok &= all(where[img[i]] == where[i] and img[i] != i for i in range(len(img)))
    swap_ok = True
    for p in transpositions(3) + [(3, 2, 1)]:
        img = cx.act(p)
        swap_ok &= all(where[img[i]] != where[i] for i in range(len(img)))
    computed = {
        "kind": rec.kind,
        "components": rec.components,
        "vertices": cx.counts().get(0, 0),
        "edges": cx.counts().get(1, 0),
        "per_component": [list(s) for s in sizes],
        "rotations_preserve_components_without_fixed_cells": rot_ok,
        "transpositions_swap_components": swap_ok,
    }
    expected = {
        "kind": "circles",
        "components": 2,
        "vertices": 12,
        "edges": 12,
        "per_component": [[6, 6], [6, 6]],
        "rotations_preserve_components_without_fixed_cells": True,
        "transpositions_swap_components": True,
    }
    return _report("hexagons", expected, computed)


def chi48() -> dict:
    M = interval_nullbordism_model("right")
    arity3 = boundary_colimit(M, 3)
    N = M.replace({("W", 3): cone_fill(arity3)}, "interval-right+discs")
    cx = boundary_colimit(N, 4)
    rec = recognize(cx)
    witnesses = free_action_check(cx)
    computed = {
        "kind": rec.kind,
        "euler_cells": cx.euler(),
        "euler_strata": stratified_euler(N, 4),
        "free": not witnesses,
    }
    expected = {"kind": "surface", "euler_cells": -48, "euler_strata": -48, "free": True}
    extra = {
        "counts": cx.counts(),
        "components": rec.components,
        "fixed_cell_witnesses": [
            {"perm": list(p), "cell": cx.cells[i].describe()} for p, i in witnesses[:12]
        ],
        "fixed_cell_count": len(witnesses),
    }
    return _report("chi48", expected, computed, extra)


def fm1_pentagons() -> dict:
    M = fm1_model(4)
    out = {}
    for m in (3, 4):
        cx = EquivariantComplex(M, m, M.closed_poset("R", m), "closed")
        comps = components(cx)
        shapes = sorted({tuple(sum(cx.dims[i] == d for i in c) for d in range(m - 1)) for c in comps})
        out[m] = (len(comps), [list(s) for s in shapes], cx.euler())
    computed = {
        "arity3_components": out[3][0],
        "arity3_shape": out[3][1],
        "arity4_components": out[4][0],
        "arity4_shape": out[4][1],
        "arity4_euler": out[4][2],
    }
    expected = {
        "arity3_components": 6,
        "arity3_shape": [[2, 1]],
        "arity4_components": 24,
        "arity4_shape": [[5, 5, 1]],
        "arity4_euler": 24,
    }
    return _report("fm1-pentagons", expected, computed)


def null_chain() -> dict:
    """Two right surgeries starting from FM1 acting on the left of an interval."""
    first = extend_right(interval_nullbordism_model("left"))
    O2 = first.model
    o2_3 = first.operad
    # the second bimodule: O_2 on the left, the trivial operad on the right,
    # W(3) a disc filling O_2(3), and O_2(4) the sphere of 4 points on a line
    step2 = CellModel(
        1,
        "bimodule",
        {("B", 3): flatten(o2_3, "B"), ("B", 4): permutohedral_sphere(4, "B")},
        "null-chain-2",
    )
    step2 = step2.replace({("W", 3): cone_fill(boundary_colimit(step2, 3))})
    second = extend_right(step2)
    o3_4 = second.operad
    r2, r3 = recognize(o2_3), recognize(o3_4)
    computed = {
        "O2(2)_cells": len(O2.complexes.get(("R", 2), ())),
        "O2(3)": r2.kind,
        "O2(3)_components": r2.components,
        "O2(3)_euler": r2.euler,
        "O3(2)_cells": len(second.model.complexes.get(("R", 2), ())),
        "O3(3)_cells": len(second.model.complexes.get(("R", 3), ())),
        "O3(4)": r3.kind,
        "O3(4)_components": r3.components,
        "O3(4)_euler": r3.euler,
    }
    expected = {
        "O2(2)_cells": 0,
        "O2(3)": "circles",
        "O2(3)_components": 1,
        "O2(3)_euler": 0,
        "O3(2)_cells": 0,
        "O3(3)_cells": 0,
        "O3(4)": "surface",
        "O3(4)_components": 1,
        "O3(4)_euler": 2,
    }
    return _report("null-chain", expected, computed, {"O2(3)_counts": o2_3.counts(), "O3(4)_counts": o3_4.counts()})


def color_swap() -> dict:
    """Left and right surgery agree on the bimodule with FM1 on both sides."""
    M = trivial_bimodule_model()
    left, right = extend_left(M), extend_right(M)
    computed = {
        "operad_iso": poset_iso(left.operad.poset, right.operad.poset) is not None,
        "bimodule_iso": poset_iso(left.bimodule.poset, right.bimodule.poset) is not None,
    }
    return _report("color-swap", {"operad_iso": True, "bimodule_iso": True}, computed)


EXAMPLES = {
    "hexagons": hexagons,
    "chi48": chi48,
    "fm1-pentagons": fm1_pentagons,
    "null-chain": null_chain,
    "color-swap": color_swap,
}


def run_example(name: str) -> dict:
    try:
        fn = EXAMPLES[name]
    except KeyError:
        raise ValueError(f"unknown example {name!r}; choose from {sorted(EXAMPLES)}") from None
    return fn()
