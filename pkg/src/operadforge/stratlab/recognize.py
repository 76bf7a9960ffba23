"""Recognize 1- and 2-manifolds, possibly with boundary, among small cell complexes."""

from __future__ import annotations

from dataclasses import dataclass, field

from .model import EquivariantComplex


@dataclass
class Recognition:
    kind: str  # "empty", "points", "circles", "arcs", "surface", "bordered-surface", "not-manifold"
    dim: int
    components: int
    euler: int
    problems: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.kind != "not-manifold"

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "dim": self.dim,
            "components": self.components,
            "euler": self.euler,
            "problems": self.problems,
        }


def _components(n: int, pairs) -> int:
    parent = list(range(n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in pairs:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb
    return len({find(x) for x in range(n)})


def components(cx: EquivariantComplex) -> list[list[int]]:
    """Connected components as lists of cell indices."""
    P = cx.poset
    n = len(P)
    parent = list(range(n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in P.covers():
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb
    groups: dict[int, list[int]] = {}
    for x in range(n):
        groups.setdefault(find(x), []).append(x)
    return sorted(groups.values())


def recognize(cx: EquivariantComplex) -> Recognition:
    """Classify a complex of dimension at most 2 by local checks.

    When every top cell is interior to one space (a corolla key of a single
    color), the cells that are not such corollas form the boundary.
    Otherwise, as for a boundary colimit, the complex is treated as closed.
    """
    P = cx.poset
    dims = cx.dims
    tops = [P.elements[i].tree for i in range(len(P)) if dims[i] == max(dims, default=0)]
    colors = {t.colors[0] for t in tops}
    if len(colors) == 1 and all(len(t) == 1 for t in tops):
        on_bd = [len(c.tree) > 1 or c.tree.colors[0] not in colors for c in P.elements]
    else:
        on_bd = [False] * len(P)
    chi = cx.euler()
    if len(P) == 0:
        return Recognition("empty", -1, 0, 0)
    D = max(dims)
    ncomp = len(components(cx))
    low = P.lower_covers
    upper: list[list[int]] = [[] for _ in range(len(P))]
    for i in range(len(P)):
        for j in low[i]:
            upper[j].append(i)
    problems = []
    if D == 0:
        return Recognition("points", 0, len(P), chi)
    if D == 1:
        ends = 0
        for i, d in enumerate(dims):
            if d == 1 and len(low[i]) != 2:
                problems.append(f"edge {i} has {len(low[i])} ends")
            if d == 0:
                want = 1 if on_bd[i] else 2
                ends += want == 1
                if len(upper[i]) != want:
                    problems.append(f"vertex {i} lies on {len(upper[i])} edges")
        kind = "not-manifold" if problems else ("arcs" if ends else "circles")
        return Recognition(kind, 1, ncomp, chi, problems)
    if D == 2:
        bordered = False
        for i, d in enumerate(dims):
            if d == 1:
                want = 1 if on_bd[i] else 2
                bordered |= want == 1
                if len(upper[i]) != want:
                    problems.append(f"edge {i} lies in {len(upper[i])} faces")
            if d == 0:
                edges = upper[i]
                if not edges:
                    problems.append(f"vertex {i} is isolated")
                    continue
                faces = {f for e in edges for f in upper[e]}
                pos = {e: k for k, e in enumerate(edges)}
                pairs = []
                bad = False
                for f in faces:
                    at = [e for e in low[f] if e in pos]
                    if len(at) != 2:
                        bad = True
                        break
                    pairs.append((pos[at[0]], pos[at[1]]))
                degree = [0] * len(edges)
                for a, b in pairs:
                    degree[a] += 1
                    degree[b] += 1
                shape = sorted(degree)
                want = [1, 1] + [2] * (len(edges) - 2) if on_bd[i] else [2] * len(edges)
                if bad or shape != want or _components(len(edges), pairs) != 1:
                    problems.append(f"link of vertex {i} is not a {'path' if on_bd[i] else 'circle'}")
        kind = "not-manifold" if problems else ("bordered-surface" if bordered else "surface")
        return Recognition(kind, 2, ncomp, chi, problems)
    return Recognition("not-manifold", D, ncomp, chi, [f"dimension {D} is not handled"])


def free_action_check(cx: EquivariantComplex) -> list[tuple[tuple[int, ...], int]]:
    """Witnesses (permutation, cell) of a non-identity permutation fixing a cell."""
    out = []
    ident = tuple(range(1, cx.arity + 1))
    for p in cx.group():
        if p == ident:
            continue
        img = cx.act(p)
        out.extend((p, i) for i, j in enumerate(img) if i == j)
    return out
