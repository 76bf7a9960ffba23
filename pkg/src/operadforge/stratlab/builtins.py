"""Small cell models used as examples and fixtures."""

from __future__ import annotations

from functools import lru_cache
from itertools import combinations

from ..treekit import ColoredTree, Scheme, _canonical
from .model import Cell, CellModel, Complex, _corolla, perm_index, perms

__all__ = [
    "bracketings",
    "fm1_complex",
    "fm1_model",
    "interval_nullbordism_model",
    "trivial_bimodule_model",
    "permutohedral_sphere",
    "point_order_id",
]


def bracketings(k: int) -> list[tuple[tuple[int, int], ...]]:
    """Nonempty families of pairwise nested-or-disjoint intervals [a, b] of
    positions 1..k with 2 <= b - a + 1 <= k - 1."""
    ivs = [(a, b) for a in range(1, k + 1) for b in range(a + 1, k + 1) if b - a + 1 < k]

    def compatible(x, y) -> bool:
        (a, b), (c, d) = x, y
        return b < c or d < a or (a <= c and d <= b) or (c <= a and b <= d)

    out = []

    def grow(start: int, chosen: list) -> None:
        for i in range(start, len(ivs)):
            if all(compatible(ivs[i], y) for y in chosen):
                chosen.append(ivs[i])
                out.append(tuple(chosen))
                grow(i + 1, chosen)
                chosen.pop()

    grow(0, [])
    return out


def point_order_id(order) -> int:
    """Interior id of the FM1 cell where the labels sit left to right in ``order``."""
    return perm_index(len(order))[tuple(order)]


def _bracket_cell(order: tuple[int, ...], brackets, color: str) -> Cell:
    k = len(order)
    nodes = [(1, k)] + sorted(brackets, key=lambda iv: (iv[0], -iv[1]))
    parent = []
    for i, (a, b) in enumerate(nodes):
        best = -1
        for j, (c, d) in enumerate(nodes):
            if j != i and c <= a and b <= d and (c, d) != (a, b):
                if best < 0 or nodes[best][1] - nodes[best][0] > d - c:
                    best = j
        parent.append(best)
    owner = [0] * (k + 1)
    for i, (a, b) in enumerate(nodes):
        for x in range(a, b + 1):
            if owner[x] == 0 or nodes[owner[x]][1] - nodes[owner[x]][0] >= b - a:
                owner[x] = i
    labels = [frozenset(order[x - 1] for x in range(1, k + 1) if owner[x] == i) for i in range(len(nodes))]
    lab, par, col, pos = _canonical(labels, parent, [color] * len(nodes))
    tree = ColoredTree._raw(lab, par, col, Scheme.RBW)
    ids = [0] * len(nodes)
    for i, (a, b) in enumerate(nodes):
        v = pos[i]
        items = tree.local_items(v)
        seq = []
        x = a
        while x <= b:
            j = owner[x]
            if j == i:
                seq.append(items.index(("L", order[x - 1])) + 1)
                x += 1
            else:
                while parent[j] != i:
                    j = parent[j]
                seq.append(items.index(("C", pos[j])) + 1)
                x = nodes[j][1] + 1
        ids[v] = point_order_id(seq)
    return Cell(tree, tuple(ids))


@lru_cache(maxsize=None)
def fm1_complex(k: int, color: str = "R") -> Complex:
    """The arity-k space of the one-dimensional Fulton-MacPherson operad.

    Cells are the k! associahedra, one per left-to-right order of the points.
    """
    orders = perms(k)
    br = bracketings(k)
    faces = [frozenset(_bracket_cell(q, b, color) for b in br) for q in orders]
    idx = perm_index(k)
    action = {p: [idx[tuple(p[x - 1] for x in q)] for q in orders] for p in orders}
    return Complex(color, k, [k - 2] * len(orders), faces, action, ["".join(map(str, q)) for q in orders])


def fm1_model(n: int = 4, color: str = "R") -> CellModel:
    """FM1 truncated at arity n, as a cell model of dimension 1."""
    if not 2 <= n <= 6:
        raise ValueError("fm1_model supports 2 <= n <= 6")
    return CellModel(1, "operad", {(color, k): fm1_complex(k, color) for k in range(2, n + 1)}, f"fm1-{n}")


def _edge_complex(ends: list[list[Cell]], swap: list[int]) -> Complex:
    """Edges with the given endpoint keys; the transposition maps edge i to swap[i]."""
    n = len(ends)
    return Complex(
        "W",
        2,
        [1] * n,
        [frozenset(e) for e in ends],
        {(1, 2): list(range(n)), (2, 1): list(swap)},
        [f"e{i}" for i in range(n)],
    )


def interval_nullbordism_model(side: str = "right", n: int = 4) -> CellModel:
    """A 2-truncated bimodule with W(2) one interval on which the swap acts.

    side="right": the right operad is FM1 and the left operad is trivial, so
    W(2) is a null-bordism of the two points of FM1(2).  side="left" is the
    mirror image, with FM1 on the left.
    """
    if side not in ("right", "left"):
        raise ValueError("side must be 'right' or 'left'")
    c = "R" if side == "right" else "B"
    ends = [[Cell(_corolla(c, 2), (0,)), Cell(_corolla(c, 2), (1,))]]
    cx = {(c, k): fm1_complex(k, c) for k in range(2, n + 1)}
    cx[("W", 2)] = _edge_complex(ends, [0])
    return CellModel(1, "bimodule", cx, f"interval-{side}")


def trivial_bimodule_model(n: int = 4) -> CellModel:
    """FM1 acting on both sides of W(2) = FM1(2) x [0, 1]."""
    cx = {}
    for c in "RB":
        for k in range(2, n + 1):
            cx[(c, k)] = fm1_complex(k, c)
    ends = [[Cell(_corolla("B", 2), (r,)), Cell(_corolla("R", 2), (r,))] for r in (0, 1)]
    cx[("W", 2)] = _edge_complex(ends, [1, 0])
    return CellModel(1, "bimodule", cx, "trivial")


def _ordered_partitions(items: tuple[int, ...]):
    if not items:
        yield ()
        return
    n = len(items)
    for r in range(1, n + 1):
        for first in combinations(items, r):
            rest = tuple(x for x in items if x not in first)
            for tail in _ordered_partitions(rest):
                yield (frozenset(first),) + tail


def permutohedral_sphere(m: int, color: str = "B") -> Complex:
    """The sphere of m points on a line modulo translation and scaling,
    cut by the braid arrangement.

    Cells are ordered set partitions of {1..m} into j >= 2 blocks (points
    grouped by position), of dimension j - 2.  Faces merge adjacent blocks.
    Every cell is interior, so the space is closed.
    """
    parts = [p for p in _ordered_partitions(tuple(range(1, m + 1))) if len(p) >= 2]
    parts.sort(key=lambda p: (len(p), [sorted(b) for b in p]))
    idx = {p: i for i, p in enumerate(parts)}
    top = _corolla(color, m)

    def coarsenings(p):
        seen = set()
        todo = [p]
        while todo:
            q = todo.pop()
            if len(q) > 2:
                for i in range(len(q) - 1):
                    r = q[:i] + (q[i] | q[i + 1],) + q[i + 2:]
                    if r not in seen:
                        seen.add(r)
                        todo.append(r)
        return seen

    faces = [frozenset(Cell(top, (idx[q],)) for q in coarsenings(p)) for p in parts]
    action = {}
    for g in perms(m):
        action[g] = [idx[tuple(frozenset(g[x - 1] for x in b) for b in p)] for p in parts]
    names = ["|".join("".join(map(str, sorted(b))) for b in p) for p in parts]
    return Complex(color, m, [len(p) - 2 for p in parts], faces, action, names)
