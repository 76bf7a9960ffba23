"""Extending a truncated bimodule by one arity on the right or on the left.

Given a bimodule truncated at arity l, let S = l + 1 and let C be the part of
the arity-S boundary colimit that avoids the operad being replaced.  Its own
boundary dC consists of the strata made only of that operad's vertices.  Glue
an outer collar dC x [0, 1] to C to get A, and take X = A x [0, 1].  The new
operad space is the part of the boundary of X away from the top copy of C,
and X itself becomes the new W(S).
"""

from __future__ import annotations

from dataclasses import dataclass

from ..treekit import ColoredTree
from .model import Cell, CellModel, Complex, EquivariantComplex, _corolla, boundary_colimit, perms, validate_model
from .recognize import components, recognize

__all__ = ["ModelError", "SurgeryResult", "cone_fill", "flatten", "extend_right", "extend_left", "extend"]


class ModelError(ValueError):
    def __init__(self, message: str, violations=()):
        super().__init__(message)
        self.violations = list(violations)


def cone_fill(cx: EquivariantComplex, color: str = "W") -> Complex:
    """One cone cell over each circle of a closed 1-dimensional complex."""
    rec = recognize(cx)
    if rec.kind != "circles":
        raise ModelError(f"cone_fill needs disjoint circles, got {rec.kind}")
    comps = components(cx)
    where = {}
    for k, comp in enumerate(comps):
        for i in comp:
            where[i] = k
    cells = cx.cells
    dims = [max(cx.dims[i] for i in comp) + 1 for comp in comps]
    faces = [frozenset(cells[i] for i in comp) for comp in comps]
    action = {}
    for p in perms(cx.arity):
        img = cx.act(p)
        action[p] = [where[img[comp[0]]] for comp in comps]
    return Complex(color, cx.arity, dims, faces, action, [f"cone{k}" for k in range(len(comps))])


def flatten(cx: EquivariantComplex, color: str) -> Complex:
    """Re-express a closed complex with every cell interior.

    Only meaningful when the target space has no decomposable boundary, for
    instance an operad that is empty in lower arities.
    """
    top = _corolla(color, cx.arity)
    P = cx.poset
    faces = [frozenset(Cell(top, (j,)) for j in range(len(P)) if P.lt(j, i)) for i in range(len(P))]
    action = {p: cx.act(p) for p in perms(cx.arity)}
    return Complex(color, cx.arity, list(cx.dims), faces, action, [c.describe() for c in cx.cells])


@dataclass
class SurgeryResult:
    side: str
    arity: int
    model: CellModel
    core: EquivariantComplex  # C
    operad: EquivariantComplex  # the new operad space, closed
    bimodule: EquivariantComplex  # the new W(S), closed

    def summary(self) -> dict:
        return {
            "side": self.side,
            "arity": self.arity,
            "core": self.core.counts(),
            "operad": self.operad.counts(),
            "bimodule": self.bimodule.counts(),
            "core_euler": self.core.euler(),
            "operad_euler": self.operad.euler(),
            "bimodule_euler": self.bimodule.euler(),
        }


def _only(T: ColoredTree, color: str) -> bool:
    return all(c == color for c in T.colors)


def extend(M: CellModel, side: str = "right", arity: int | None = None, *, check: bool = True) -> SurgeryResult:
    if M.kind != "bimodule":
        raise ModelError("surgery needs a bimodule model")
    if side not in ("right", "left"):
        raise ValueError("side must be 'right' or 'left'")
    if check:
        bad = validate_model(M, links=False)
        if bad:
            raise ModelError(f"input model fails validation ({bad[0].code}: {bad[0].detail})", bad)
    S = arity if arity is not None else M.truncation + 1
    if S < 2:
        raise ValueError("surgery arity must be at least 2")
    op = "R" if side == "right" else "B"
    flavor = "rightPart" if side == "right" else "leftPart"
    C = boundary_colimit(M, S, flavor)
    P = C.poset
    n = len(P)
    bd = [i for i in range(n) if _only(P.elements[i].tree, op)]

    # A = C with an outer collar on dC
    A: list[tuple[str, int]] = [("c", i) for i in range(n)]
    A += [("e", j) for j in bd] + [("o", j) for j in bd]
    apos = {a: k for k, a in enumerate(A)}
    adim = [C.dims[i] for _, i in A[:n]] + [C.dims[j] + 1 for j in bd] + [C.dims[j] for j in bd]
    abelow = [0] * len(A)
    for k, (t, i) in enumerate(A):
        bits = 0
        if t == "c":
            for j in range(n):
                if P.lt(j, i):
                    bits |= 1 << apos[("c", j)]
        else:
            for j in bd:
                if not P.leq(j, i):
                    continue
                if t == "e":
                    bits |= 1 << apos[("c", j)] | 1 << apos[("o", j)]
                if j != i:
                    bits |= 1 << apos[(t, j)]
        abelow[k] = bits
    # X = A x {0, 1, I}
    T = ("0", "1", "I")
    X = [(a, t) for a in range(len(A)) for t in T]
    xpos = {x: k for k, x in enumerate(X)}
    xdim = [adim[a] + (t == "I") for a, t in X]

    def xbelow(a: int, t: str) -> int:
        bits = 0
        ts = {"0": ("0",), "1": ("1",), "I": ("0", "1", "I")}[t]
        for b in range(len(A)):
            if b == a or abelow[a] >> b & 1:
                for s in ts:
                    if (b, s) != (a, t):
                        bits |= 1 << xpos[(b, s)]
        return bits

    xb = [xbelow(a, t) for a, t in X]

    def kind(x: tuple[int, str]) -> str:
        a, t = x
        typ, i = A[a]
        if t == "0":
            return "op"
        if t == "I":
            return "op" if typ == "o" else "w"
        if typ == "c":
            return "old"
        return "op"

    op_cells = [x for x in X if kind(x) == "op"]
    w_cells = [x for x in X if kind(x) == "w"]
    op_id = {x: k for k, x in enumerate(op_cells)}
    w_id = {x: k for k, x in enumerate(w_cells)}
    op_top = _corolla(op, S)
    w_top = _corolla("W", S)

    def key(x) -> Cell:
        k = kind(x)
        if k == "op":
            return Cell(op_top, (op_id[x],))
        if k == "w":
            return Cell(w_top, (w_id[x],))
        return P.elements[A[x[0]][1]]

    def faces_of(x) -> frozenset:
        bits = xb[xpos[x]]
        out = []
        k = 0
        while bits:
            if bits & 1:
                out.append(key(X[k]))
            bits >>= 1
            k += 1
        return frozenset(out)

    # action: permutations act on C and carry the collar along
    acts = {}
    for p in perms(S):
        img = C.act(p)

        def move(x, img=img):
            a, t = x
            typ, i = A[a]
            return (apos[(typ, img[i])], t)

        acts[p] = move
    op_cx = Complex(
        op,
        S,
        [xdim[xpos[x]] for x in op_cells],
        [faces_of(x) for x in op_cells],
        {p: [op_id[f(x)] for x in op_cells] for p, f in acts.items()},
        [f"{A[a]}x{t}" for a, t in op_cells],
    )
    w_cx = Complex(
        "W",
        S,
        [xdim[xpos[x]] for x in w_cells],
        [faces_of(x) for x in w_cells],
        {p: [w_id[f(x)] for x in w_cells] for p, f in acts.items()},
        [f"{A[a]}x{t}" for a, t in w_cells],
    )
    updates: dict = {(op, k): None for k in M.arities(op) if k >= S}
    updates.update({(op, S): op_cx, ("W", S): w_cx})
    updates.update({("W", k): None for k in M.arities("W") if k > S})
    N = M.replace(updates, f"{M.name}+{side}{S}")
    return SurgeryResult(
        side,
        S,
        N,
        C,
        EquivariantComplex(N, S, N.closed_poset(op, S), "operad"),
        EquivariantComplex(N, S, N.closed_poset("W", S), "bimodule"),
    )


def extend_right(M: CellModel, arity: int | None = None, *, check: bool = True) -> SurgeryResult:
    """Replace the right operad in arity S and fill W(S)."""
    return extend(M, "right", arity, check=check)


def extend_left(M: CellModel, arity: int | None = None, *, check: bool = True) -> SurgeryResult:
    """Replace the left operad in arity S and fill W(S)."""
    return extend(M, "left", arity, check=check)
