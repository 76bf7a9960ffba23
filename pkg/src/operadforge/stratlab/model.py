"""Cell models of truncated operads and bimodules as equivariant face posets.

A cell of the arity-m space of color C is named by a *key*: a colored tree on
the labels {1..m} together with one interior cell id per vertex.  The id of a
vertex refers to the complex of its color and arity, read in the vertex's
canonical local order (labels and children sorted by smallest label).  The
interior cells of (C, m) are the keys whose tree is the corolla of color C.

Boundary strata are never stored: the closed cell of a key is the product of
the closed cells of its vertices, grafted back into one tree.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from functools import cached_property
from itertools import permutations
from itertools import product as _iproduct
from typing import Iterable, Mapping, NamedTuple, Sequence

from ..gf2homology import reduced_betti
from ..linkcheck import block_tree
from ..posetkit import (
    ColimitDiagram,
    FinPoset,
    chain_complex,
    interval,
    is_cw_poset,
    is_order_iso,
    poset_colimit,
    product,
)
from ..treekit import (
    ColoredTree,
    Scheme,
    _canonical,
    contraction_between,
    corolla,
    enumerate_colored,
    enumerate_trees,
    relabel_with_map,
    tree_from_json,
    tree_to_json,
)

log = logging.getLogger(__name__)

__all__ = [
    "Cell",
    "Complex",
    "CellModel",
    "EquivariantComplex",
    "Attachment",
    "Violation",
    "perms",
    "attachments",
    "stratum_codim",
    "perm_index",
    "compose",
    "transpositions",
    "index_trees",
    "boundary_colimit",
    "stratified_euler",
    "dimension_ledger",
    "validate_model",
    "validate_complex",
]


# permutations -----------------------------------------------------------------

# a permutation of {1..k} is a tuple p with p[i-1] the image of i


def perms(k: int) -> list[tuple[int, ...]]:
    return list(permutations(range(1, k + 1)))


def perm_index(k: int) -> dict[tuple[int, ...], int]:
    return {p: i for i, p in enumerate(perms(k))}


def compose(p: Sequence[int], q: Sequence[int]) -> tuple[int, ...]:
    """p after q."""
    return tuple(p[q[i] - 1] for i in range(len(q)))


def transpositions(k: int) -> list[tuple[int, ...]]:
    out = []
    for i in range(1, k):
        p = list(range(1, k + 1))
        p[i - 1], p[i] = p[i], p[i - 1]
        out.append(tuple(p))
    return out


# cells ------------------------------------------------------------------------------


class Cell(NamedTuple):
    tree: ColoredTree
    ids: tuple

    def describe(self) -> str:
        return f"{self.tree.describe()}{list(self.ids)}"

    def to_json(self) -> dict:
        return {"tree": tree_to_json(self.tree), "ids": list(self.ids)}

    @classmethod
    def from_json(cls, data: dict) -> "Cell":
        t = tree_from_json(data["tree"], Scheme.RBW)
        # vertex ids in JSON follow the canonical order they were written in
        return cls(t, tuple(data["ids"]))


def cell_sort_key(c: Cell) -> tuple:
    return (c.tree.sort_key(), tuple(map(repr, c.ids)))


@dataclass
class Complex:
    """Interior cells of one (color, arity) space.

    ``faces[i]`` is the set of keys of the closed cell i minus itself;
    ``action[p][i]`` is the image of cell i under relabeling by p.
    """

    color: str
    arity: int
    dims: list[int]
    faces: list[frozenset]
    action: dict[tuple[int, ...], list[int]]
    names: list = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.dims)

    def to_json(self) -> dict:
        return {
            "color": self.color,
            "arity": self.arity,
            "dims": self.dims,
            "faces": [[c.to_json() for c in sorted(f, key=cell_sort_key)] for f in self.faces],
            "action": {",".join(map(str, p)): ids for p, ids in sorted(self.action.items())},
            "names": [str(n) for n in self.names],
        }

    @classmethod
    def from_json(cls, data: dict) -> "Complex":
        return cls(
            data["color"],
            data["arity"],
            list(data["dims"]),
            [frozenset(Cell.from_json(c) for c in f) for f in data["faces"]],
            {tuple(int(x) for x in k.split(",")): list(v) for k, v in data["action"].items()},
            list(data.get("names", [])),
        )


class CellModel:
    """A truncated operad (kind "operad") or bimodule (kind "bimodule") of dimension d."""

    def __init__(self, d: int, kind: str, complexes: Mapping[tuple[str, int], Complex], name: str = ""):
        if kind not in ("operad", "bimodule"):
            raise ValueError("kind must be 'operad' or 'bimodule'")
        self.d = d
        self.kind = kind
        self.name = name
        self.complexes: dict[tuple[str, int], Complex] = {k: v for k, v in complexes.items() if len(v)}
        self._closure: dict[Cell, frozenset] = {}
        self._closed: dict[tuple[str, int], FinPoset] = {}

    # basic data ----------------------------------------------------------------

    @property
    def truncation(self) -> int:
        ws = [m for (c, m) in self.complexes if c == "W"]
        if self.kind == "bimodule":
            return max(ws, default=1)
        return max((m for _, m in self.complexes), default=1)

    def arities(self, color: str) -> list[int]:
        return sorted(m for (c, m) in self.complexes if c == color)

    def has(self, color: str, m: int) -> bool:
        return (color, m) in self.complexes

    def complex(self, color: str, m: int) -> Complex:
        return self.complexes[(color, m)]

    def replace(self, updates: Mapping[tuple[str, int], Complex | None], name: str | None = None) -> "CellModel":
        cx = dict(self.complexes)
        for k, v in updates.items():
            if v is None:
                cx.pop(k, None)
            else:
                cx[k] = v
        return CellModel(self.d, self.kind, cx, name or self.name)

    def interior_key(self, color: str, m: int, i: int) -> Cell:
        return Cell(_corolla(color, m), (i,))

    def key_dim(self, key: Cell) -> int:
        t = key.tree
        return sum(self.complexes[(t.colors[v], t.arity(v))].dims[key.ids[v]] for v in t.vertices)

    # relabeling and grafting -------------------------------------------------

    def transport(self, color: str, k: int, rho: tuple[int, ...], cid):
        if all(rho[i] == i + 1 for i in range(k)):
            return cid
        return self.complexes[(color, k)].action[rho][cid]

    def relabel(self, key: Cell, mapping: Mapping[int, int] | Sequence[int]) -> Cell:
        """Image of a cell under a bijection of labels (a tuple p means i -> p[i-1])."""
        if not isinstance(mapping, Mapping):
            mapping = {i + 1: x for i, x in enumerate(mapping)}
        T = key.tree
        T2, vpos = relabel_with_map(T, mapping)
        ids = [None] * len(T2)
        for v in T.vertices:
            nv = vpos[v]
            where = {it: i for i, it in enumerate(T2.local_items(nv))}
            old = T.local_items(v)
            rho = tuple(
                where[("L", mapping[x]) if kind == "L" else ("C", vpos[x])] + 1 for kind, x in old
            )
            ids[nv] = self.transport(T.colors[v], len(old), rho, key.ids[v])
        return Cell(T2, tuple(ids))

    def graft(self, T: ColoredTree, subs: Sequence[Cell]) -> Cell:
        """Substitute the cell ``subs[v]`` (a key on {1..arity(v)}) at every vertex v of T."""
        index: dict[tuple[int, int], int] = {}
        glob: list[tuple[int, int]] = []
        for v in T.vertices:
            for u in subs[v].tree.vertices:
                index[(v, u)] = len(glob)
                glob.append((v, u))
        holder = []
        for v in T.vertices:
            U = subs[v].tree
            holder.append({l: u for u in U.vertices for l in U.labels[u]})
        labels: list[set] = [set() for _ in glob]
        parent = [-1] * len(glob)
        for v in T.vertices:
            items = T.local_items(v)
            U = subs[v].tree
            for u in U.vertices:
                g = index[(v, u)]
                for i in U.labels[u]:
                    kind, x = items[i - 1]
                    if kind == "L":
                        labels[g].add(x)
                if U.parent[u] >= 0:
                    parent[g] = index[(v, U.parent[u])]
            p = T.parent[v]
            if p >= 0:
                i = T.local_items(p).index(("C", v)) + 1
                parent[index[(v, U.root)]] = index[(p, holder[p][i])]
        colors = [subs[v].tree.colors[u] for v, u in glob]
        lab, par, col, pos = _canonical([frozenset(l) for l in labels], parent, colors)
        new = ColoredTree._raw(lab, par, col, Scheme.RBW)
        ids = [None] * len(glob)
        for g, (v, u) in enumerate(glob):
            U = subs[v].tree
            items = T.local_items(v)
            ng = pos[g]
            where = {it: i for i, it in enumerate(new.local_items(ng))}
            rho = []
            for kind, x in U.local_items(u):
                if kind == "C":
                    it = ("C", pos[index[(v, x)]])
                else:
                    k2, y = items[x - 1]
                    it = ("L", y) if k2 == "L" else ("C", pos[index[(y, subs[y].tree.root)]])
                rho.append(where[it] + 1)
            ids[ng] = self.transport(U.colors[u], len(rho), tuple(rho), subs[v].ids[u])
        return Cell(new, tuple(ids))

    # closures and closed posets ----------------------------------------------------

    def local_closed(self, color: str, k: int, i: int) -> list[Cell]:
        cx = self.complexes[(color, k)]
        return [self.interior_key(color, k, i)] + sorted(cx.faces[i], key=cell_sort_key)

    def closure(self, key: Cell) -> frozenset:
        hit = self._closure.get(key)
        if hit is not None:
            return hit
        T = key.tree
        if len(T) == 1:
            cx = self.complexes[(T.colors[0], T.arity(0))]
            out = frozenset(cx.faces[key.ids[0]]) | {key}
        else:
            parts = [self.local_closed(T.colors[v], T.arity(v), key.ids[v]) for v in T.vertices]
            out = frozenset(self.graft(T, combo) for combo in _iproduct(*parts))
        self._closure[key] = out
        return out

    def closed_poset(self, color: str, m: int) -> FinPoset:
        """Face poset of the closed space of (color, m)."""
        hit = self._closed.get((color, m))
        if hit is None:
            cx = self.complexes.get((color, m))
            keys: set = set()
            if cx is not None:
                for i in range(len(cx)):
                    keys |= self.closure(self.interior_key(color, m, i))
            hit = poset_of_keys(self, keys)
            self._closed[(color, m)] = hit
        return hit

    # serialisation -------------------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "d": self.d,
            "kind": self.kind,
            "complexes": [cx.to_json() for _, cx in sorted(self.complexes.items())],
        }

    @classmethod
    def from_json(cls, data: dict | str) -> "CellModel":
        if isinstance(data, str):
            data = json.loads(data)
        cxs = [Complex.from_json(c) for c in data["complexes"]]
        return cls(data["d"], data["kind"], {(c.color, c.arity): c for c in cxs}, data.get("name", ""))


_COROLLAS: dict[tuple[str, int], ColoredTree] = {}


def _corolla(color: str, m: int) -> ColoredTree:
    t = _COROLLAS.get((color, m))
    if t is None:
        t = corolla(range(1, m + 1), color, Scheme.RBW)
        _COROLLAS[(color, m)] = t
    return t


def poset_of_keys(M: CellModel, keys: Iterable[Cell]) -> FinPoset:
    elems = sorted(keys, key=lambda c: (M.key_dim(c), cell_sort_key(c)))
    idx = {c: i for i, c in enumerate(elems)}
    below = []
    for i, c in enumerate(elems):
        bits = 0
        for f in M.closure(c):
            j = idx.get(f)
            if j is None:
                raise ValueError(f"face {f.describe()} of {c.describe()} is missing")
            if j != i:
                bits |= 1 << j
        below.append(bits)
    return FinPoset(elems, below)


# index posets and boundary colimits ------------------------------------------------------

FLAVORS = ("operad", "bimoduleBoundary", "leftPart", "rightPart")


def index_trees(M: CellModel, m: int, flavor: str, color: str = "R") -> list[ColoredTree]:
    """Trees of the flavor's index poset whose vertex spaces are all nonempty."""
    if flavor == "operad":
        cands = [ColoredTree._raw(t.labels, t.parent, (color,) * len(t), Scheme.RBW) for t in enumerate_trees(m)]
        cands = [t for t in cands if len(t) > 1]
    elif flavor in FLAVORS:
        drop = {"bimoduleBoundary": "W", "leftPart": "WB", "rightPart": "WR"}[flavor]
        cands = [t for t in enumerate_colored(m, Scheme.RBW) if not (len(t) == 1 and t.colors[0] in drop)]
    else:
        raise ValueError(f"unknown flavor {flavor!r}")
    return [t for t in cands if all(M.has(t.colors[v], t.arity(v)) for v in t.vertices)]


def stratum_cells(M: CellModel, T: ColoredTree) -> list[Cell]:
    ranges = [range(len(M.complex(T.colors[v], T.arity(v)))) for v in T.vertices]
    return [Cell(T, ids) for ids in _iproduct(*ranges)]


@dataclass
class EquivariantComplex:
    """A closed cell complex on labels {1..m} with the relabeling action."""

    model: CellModel
    arity: int
    poset: FinPoset
    flavor: str = ""

    @cached_property
    def dims(self) -> tuple[int, ...]:
        return tuple(self.model.key_dim(c) for c in self.poset.elements)

    @property
    def cells(self) -> tuple[Cell, ...]:
        return self.poset.elements

    def provenance(self, i: int) -> tuple[ColoredTree, tuple]:
        c = self.poset.elements[i]
        return c.tree, c.ids

    @cached_property
    def _act_cache(self) -> dict:
        return {}

    def act(self, p: Sequence[int]) -> list[int]:
        p = tuple(p)
        hit = self._act_cache.get(p)
        if hit is None:
            idx = self.poset.index
            hit = [idx[self.model.relabel(c, p)] for c in self.poset.elements]
            self._act_cache[p] = hit
        return hit

    def group(self) -> list[tuple[int, ...]]:
        return perms(self.arity)

    def euler(self) -> int:
        return sum((-1) ** d for d in self.dims)

    def counts(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for d in self.dims:
            out[d] = out.get(d, 0) + 1
        return dict(sorted(out.items()))

    def subcomplex(self, indices: Iterable[int], flavor: str = "") -> "EquivariantComplex":
        return EquivariantComplex(self.model, self.arity, self.poset.subposet(indices), flavor)

    def to_json(self) -> dict:
        """Face poset in the posetkit schema, with cell names as elements."""
        out = self.poset.relabel([c.describe() for c in self.poset.elements]).to_json()
        out["arity"] = self.arity
        out["flavor"] = self.flavor
        out["dims"] = list(self.dims)
        return out

    def to_dot(self, name: str = "complex") -> str:
        lines = [f"digraph {name} {{", "  rankdir=BT;"]
        for i, (c, d) in enumerate(zip(self.poset.elements, self.dims)):
            lines.append(f'  n{i} [label="{c.describe()}\\ndim {d}"];')
        for a, b in self.poset.covers():
            lines.append(f"  n{a} -> n{b};")
        lines.append("}")
        return "\n".join(lines)


def boundary_colimit(M: CellModel, m: int, flavor: str = "bimoduleBoundary", color: str = "R") -> EquivariantComplex:
    """Union of the closed strata over the flavor's index trees."""
    keys: set = set()
    for T in index_trees(M, m, flavor, color):
        for cell in stratum_cells(M, T):
            keys |= M.closure(cell)
    return EquivariantComplex(M, m, poset_of_keys(M, keys), flavor)


def stratified_euler(M: CellModel, m: int, flavor: str = "bimoduleBoundary", color: str = "R") -> int:
    """Sum over index trees of the product of interior Euler characteristics."""
    total = 0
    for T in index_trees(M, m, flavor, color):
        prod = 1
        for v in T.vertices:
            cx = M.complex(T.colors[v], T.arity(v))
            prod *= sum((-1) ** d for d in cx.dims)
        total += prod
    return total


def dimension_ledger(d: int, m: int, kind: str) -> int:
    """Top dimensions: operad md-d-1, bimodule md-d, obstructions nd-2 and nd-1."""
    if d < 1 or m < 2:
        raise ValueError("need d >= 1 and m >= 2")
    table = {
        "operad": m * d - d - 1,
        "bimodule": m * d - d,
        "operadObstruction": m * d - 2,
        "bimoduleObstruction": m * d - 1,
    }
    if kind not in table:
        raise ValueError(f"unknown ledger kind {kind!r}")
    return table[kind]


def stratum_codim(T: ColoredTree) -> int:
    """Codimension of an operad stratum: its number of internal edges."""
    return len(T) - 1


# validation ---------------------------------------------------------------------------


@dataclass
class Violation:
    code: str
    where: str
    detail: str = ""

    def to_json(self) -> dict:
        return {"code": self.code, "where": self.where, "detail": self.detail}


@dataclass
class Attachment:
    tree: ColoredTree
    domain: FinPoset  # elements are tuples of local keys, one per vertex
    values: dict  # domain element -> Cell


def attachments(M: CellModel, color: str, m: int) -> list[Attachment]:
    flavor = "bimoduleBoundary" if color == "W" else "operad"
    out = []
    for T in index_trees(M, m, flavor, color):
        facs = [M.closed_poset(T.colors[v], T.arity(v)) for v in T.vertices]
        dom = product(*facs)
        vals = {x: M.graft(T, x) for x in dom.elements}
        out.append(Attachment(T, dom, vals))
    return out


def _block_map(M: CellModel, T1: ColoredTree, T2: ColoredTree, x: tuple) -> tuple:
    """Regroup a point of T1's domain as a point of T2's domain along T1 -> T2."""
    c = contraction_between(T1, T2)
    y = []
    for w in T2.vertices:
        blk = [v for v in T1.vertices if c.vmap[v] == w]
        sub, vm = block_tree(T1, blk)
        ranks = {}
        for pos, (kind, z) in enumerate(T2.local_items(w)):
            ranks[z if kind == "L" else T2.min_label(z)] = pos + 1
        local, vpos = relabel_with_map(sub, ranks)
        subs = [None] * len(local)
        for v in blk:
            subs[vpos[vm[v]]] = x[v]
        y.append(M.graft(local, subs))
    return tuple(y)


def validate_complex(
    M: CellModel,
    color: str,
    m: int,
    atts: Sequence[Attachment] | None = None,
    *,
    links: bool = True,
) -> list[Violation]:
    where = f"{color}({m})"
    out: list[Violation] = []
    cx = M.complex(color, m)
    P = M.closed_poset(color, m)
    idx = P.index
    interior = _corolla(color, m)
    boundary = {c for c in P.elements if c.tree != interior}
    atts = list(atts) if atts is not None else attachments(M, color, m)

    # declared faces: downward closed and equivariant
    for i in range(len(cx)):
        fs = cx.faces[i]
        for f in fs:
            if not M.closure(f) <= fs | {f}:
                out.append(Violation("faces", where, f"faces of cell {i} are not downward closed"))
                break
    gens = transpositions(m)
    for s in gens:
        for i in range(len(cx)):
            j = cx.action[s][i]
            img = frozenset(M.relabel(f, s) for f in cx.faces[i])
            if img != cx.faces[j]:
                out.append(Violation("faces", where, f"faces of cell {i} are not equivariant under {s}"))
    # action table is a homomorphism and preserves dims
    allp = perms(m)
    ident = tuple(range(1, m + 1))
    if cx.action.get(ident) != list(range(len(cx))):
        out.append(Violation("action", where, "identity does not act trivially"))
    for s in gens:
        for p in allp:
            sp = compose(s, p)
            if [cx.action[s][cx.action[p][i]] for i in range(len(cx))] != cx.action[sp]:
                out.append(Violation("action", where, f"action of {s} after {p} differs from {sp}"))
                break
    for p in allp:
        if any(cx.dims[cx.action[p][i]] != cx.dims[i] for i in range(len(cx))):
            out.append(Violation("action", where, f"{p} does not preserve dimensions"))
    # geometry of the closed poset
    ok, fails = is_cw_poset(P)
    if not ok:
        out.append(Violation("cw", where, f"{len(fails)} cells fail the sphere test"))
    dims = P.dims
    for i, c in enumerate(P.elements):
        if M.key_dim(c) != dims[i]:
            out.append(Violation("dimension", where, f"cell {c.describe()} has rank {dims[i]}"))
            break
    D = dimension_ledger(M.d, m, "bimodule" if color == "W" else "operad")
    tops = P.maximal()
    if any(dims[t] != D for t in tops):
        out.append(Violation("dimension", where, f"top cells are not pure of dimension {D}"))
    above = P.above
    for i, c in enumerate(P.elements):
        if dims[i] != D - 1:
            continue
        n_top = sum(1 for j in _bits(above[i]) if dims[j] == D)
        want = 1 if c in boundary else 2
        if n_top != want:
            out.append(Violation("pseudomanifold", where, f"{c.describe()} lies in {n_top} top cells"))
    if links:
        for i, c in enumerate(P.elements):
            h = reduced_betti(chain_complex(interval(P, i, kind="upperStrict")))
            want = {} if c in boundary else {D - dims[i] - 1: 1}
            if h != want:
                out.append(Violation("link", where, f"link of {c.describe()} has reduced Betti {h}"))
    # attachments
    images = []
    for a in atts:
        vals = a.values
        name = a.tree.describe()
        bad = [v for v in vals.values() if v not in idx]
        if bad:
            out.append(Violation("range", where, f"attachment {name} leaves the closed poset"))
        if len(set(vals.values())) != len(vals):
            out.append(Violation("injective", where, f"attachment {name} is not injective"))
        dom = a.domain
        for i, x in enumerate(dom.elements):
            for j in _bits(dom.below[i]):
                a_, b_ = vals[dom.elements[j]], vals[x]
                if a_ in idx and b_ in idx and not P.lt(idx[a_], idx[b_]):
                    out.append(Violation("monotone", where, f"attachment {name} is not monotone"))
                    break
        for s in gens:
            T2 = a.tree
            sT = None
            for b in atts:
                if b.tree == _relabel_tree(T2, s):
                    sT = b
                    break
            if sT is None:
                out.append(Violation("equivariance", where, f"no attachment for the relabeled {name}"))
                continue
            for x in dom.elements:
                if vals[x] not in idx:
                    continue  # already reported under "range"
                img = M.relabel(vals[x], s)
                if img not in set(sT.values.values()):
                    out.append(Violation("equivariance", where, f"{name} is not equivariant under {s}"))
                    break
        images.append(frozenset(vals.values()))
    covered = frozenset().union(*images) if images else frozenset()
    if covered != boundary:
        out.append(
            Violation("cover", where, f"images cover {len(covered & boundary)} of {len(boundary)} boundary cells, {len(covered - boundary)} extra")
        )
    # contraction compatibility and the intersection condition
    refines = [[contraction_between(a.tree, b.tree) is not None for b in atts] for a in atts]
    for i, a in enumerate(atts):
        for j, b in enumerate(atts):
            if i == j or not refines[i][j]:
                continue
            for x in a.domain.elements:
                y = _block_map(M, a.tree, b.tree, x)
                if b.values.get(y) != a.values[x]:
                    out.append(Violation("compatibility", where, f"{a.tree.describe()} -> {b.tree.describe()}"))
                    break
    for i, a in enumerate(atts):
        for j in range(i + 1, len(atts)):
            b = atts[j]
            common = frozenset().union(
                *(images[k] for k in range(len(atts)) if refines[k][i] and refines[k][j])
            )
            if images[i] & images[j] != common:
                out.append(
                    Violation("intersection", where, f"images of {a.tree.describe()} and {atts[j].tree.describe()}")
                )
    # the boundary as a poset colimit of the attachment diagram
    if atts and not any(v.code in ("range", "injective") for v in out):
        objs = [a.domain for a in atts]
        maps = []
        for i, a in enumerate(atts):
            bidx = None
            for j, b in enumerate(atts):
                if i == j or not refines[i][j]:
                    continue
                bidx = b.domain.index
                f = {}
                okm = True
                for k, x in enumerate(a.domain.elements):
                    y = _block_map(M, a.tree, b.tree, x)
                    if y not in bidx:
                        okm = False
                        break
                    f[k] = bidx[y]
                if okm:
                    maps.append((i, j, f))
        try:
            colim, inj = poset_colimit(ColimitDiagram(objs, maps))
        except ValueError as exc:
            out.append(Violation("colimit", where, str(exc)))
        else:
            bd = sorted((idx[c] for c in boundary), key=lambda i: i)
            sub = P.subposet(bd)
            sidx = sub.index
            f = {}
            for cls, prov in enumerate(colim.elements):
                o, e = prov[0]
                key = atts[o].values[atts[o].domain.elements[e]]
                f[cls] = sidx.get(key, -1)
            if -1 in f.values() or not is_order_iso(colim, sub, f):
                out.append(Violation("colimit", where, "boundary is not the colimit of the attachment diagram"))
    return out


def _relabel_tree(T: ColoredTree, p: Sequence[int]) -> ColoredTree:
    return relabel_with_map(T, {i + 1: x for i, x in enumerate(p)})[0]


def _bits(x: int):
    while x:
        low = x & -x
        yield low.bit_length() - 1
        x ^= low


def validate_model(M: CellModel, *, max_arity: int | None = None, links: bool = True) -> list[Violation]:
    """Every check on every (color, arity) complex, as a list of violations."""
    out = []
    for (c, m) in sorted(M.complexes):
        if max_arity is not None and m > max_arity:
            continue
        out.extend(validate_complex(M, c, m, links=links))
    return out
