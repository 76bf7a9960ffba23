"""Labeled rooted trees, colorings, contractions and their enumeration.

Trees carry label sets on vertices (no leaf edges are materialised) and are
stored in a canonical vertex order: vertices sorted by (smallest label in the
subtree, subtree size).  Two trees are equal iff their canonical data agree.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from itertools import product as _iproduct
from typing import Iterable, Iterator, Mapping, Sequence

__all__ = [
    "Scheme",
    "LabeledTree",
    "ColoredTree",
    "Contraction",
    "ContractionError",
    "corolla",
    "make_tree",
    "enumerate_trees",
    "enumerate_colored",
    "is_legal",
    "is_legal_words",
    "contract",
    "contraction_between",
    "contractions_from",
    "codim",
    "elementary_decompose",
    "elementary_type",
    "act",
    "relabel",
    "five_to_rbw",
    "rw_to_rbw",
    "tree_to_json",
    "tree_from_json",
    "tree_to_dot",
]


class Scheme(str, Enum):
    RBW = "RBW"
    FIVE = "FiveColor"
    RWLOCAL = "RWLocal"

    @property
    def colors(self) -> str:
        return {"RBW": "RBW", "FiveColor": "RVOWB", "RWLocal": "RW"}[self.value]

    @classmethod
    def parse(cls, name: "str | Scheme") -> "Scheme":
        if isinstance(name, Scheme):
            return name
        key = name.lower().replace("-", "").replace("_", "")
        table = {"rbw": cls.RBW, "fivecolor": cls.FIVE, "five": cls.FIVE, "rwlocal": cls.RWLOCAL, "rw": cls.RWLOCAL}
        if key not in table:
            raise ValueError(f"unknown coloring scheme {name!r}")
        return table[key]


class ContractionError(ValueError):
    """Rejected contraction; ``code`` names the violated condition."""

    def __init__(self, code: str, message: str):
        super().__init__(f"{code}: {message}")
        self.code = code


# canonical form --------------------------------------------------------------


def _canonical(labels: Sequence[frozenset], parent: Sequence[int], colors: Sequence[str] | None):
    n = len(labels)
    children: list[list[int]] = [[] for _ in range(n)]
    root = -1
    for v, p in enumerate(parent):
        if p < 0:
            if root >= 0:
                raise ValueError("tree has more than one root")
            root = v
        else:
            children[p].append(v)
    if root < 0:
        raise ValueError("tree has no root")
    # subtree data, post-order from the root
    order = []
    stack = [root]
    while stack:
        v = stack.pop()
        order.append(v)
        stack.extend(children[v])
    if len(order) != n:
        raise ValueError("parent map is not connected and acyclic")
    mins = [0] * n
    sizes = [0] * n
    for v in reversed(order):
        m = min(labels[v]) if labels[v] else None
        s = 1
        for c in children[v]:
            m = mins[c] if m is None else min(m, mins[c])
            s += sizes[c]
        if m is None:
            raise ValueError("vertex with empty subtree label set")
        mins[v] = m
        sizes[v] = s
    new_order = sorted(range(n), key=lambda v: (mins[v], sizes[v]))
    pos = {v: k for k, v in enumerate(new_order)}
    lab = tuple(frozenset(labels[v]) for v in new_order)
    par = tuple(pos[parent[v]] if parent[v] >= 0 else -1 for v in new_order)
    col = tuple(colors[v] for v in new_order) if colors is not None else None
    return lab, par, col, pos


class LabeledTree:
    """An S-labeled rooted tree in canonical vertex order.

    ``labels[v]`` is a frozenset of ints; ``parent[v]`` is -1 at the root.
    """

    __slots__ = ("labels", "parent", "_hash", "_children", "_sub", "_items", "_root", "_clusters", "_topdown")

    def __init__(self, labels: Sequence[Iterable[int]], parent: Sequence[int], *, check: bool = True):
        labs = [frozenset(l) for l in labels]
        lab, par, _, _ = _canonical(labs, list(parent), None)
        self._set(lab, par)
        if check:
            self._check()

    def _set(self, lab, par) -> None:
        self.labels: tuple[frozenset, ...] = lab
        self.parent: tuple[int, ...] = par
        self._hash = None
        self._children = None
        self._sub = None
        self._items = None
        self._root = None
        self._clusters = None
        self._topdown = None

    def _check(self) -> None:
        seen: set[int] = set()
        for l in self.labels:
            if seen & l:
                raise ValueError("label sets are not disjoint")
            seen |= l
        if len(seen) < 2:
            raise ValueError("a tree needs at least two labels")
        for v in range(len(self)):
            if len(self.children[v]) + len(self.labels[v]) < 2:
                raise ValueError(f"vertex {v} has fewer than two children plus labels")

    # structure ---------------------------------------------------------------

    def __len__(self) -> int:
        return len(self.labels)

    @property
    def vertices(self) -> range:
        return range(len(self.labels))

    @property
    def root(self) -> int:
        if self._root is None:
            self._root = self.parent.index(-1)
        return self._root

    @property
    def children(self) -> tuple[tuple[int, ...], ...]:
        if self._children is None:
            ch: list[list[int]] = [[] for _ in self.labels]
            for v, p in enumerate(self.parent):
                if p >= 0:
                    ch[p].append(v)
            self._children = tuple(tuple(c) for c in ch)
        return self._children

    @property
    def edges(self) -> list[tuple[int, int]]:
        """(child, parent) pairs."""
        return [(v, p) for v, p in enumerate(self.parent) if p >= 0]

    @property
    def label_set(self) -> frozenset:
        return self.subtree_labels[self.root]

    @property
    def subtree_labels(self) -> tuple[frozenset, ...]:
        if self._sub is None:
            sub: list[frozenset] = [frozenset()] * len(self)
            for v in reversed(self.top_down):
                s = self.labels[v]
                for c in self.children[v]:
                    s = s | sub[c]
                sub[v] = s
            self._sub = tuple(sub)
        return self._sub

    @property
    def top_down(self) -> tuple[int, ...]:
        """Vertices with every parent before its children."""
        if self._topdown is None:
            out = [self.root]
            k = 0
            while k < len(out):
                out.extend(self.children[out[k]])
                k += 1
            self._topdown = tuple(out)
        return self._topdown

    def min_label(self, v: int) -> int:
        return min(self.subtree_labels[v])

    def arity(self, v: int) -> int:
        """|cld-bar(v)|: labels plus children."""
        return len(self.labels[v]) + len(self.children[v])

    def local_items(self, v: int) -> tuple[tuple[str, int], ...]:
        """cld-bar(v) in its canonical order: ("L", label) or ("C", child),
        sorted by the smallest label they carry."""
        if self._items is None:
            self._items = [None] * len(self)
        got = self._items[v]
        if got is None:
            its = [(l, ("L", l)) for l in self.labels[v]]
            its += [(self.min_label(c), ("C", c)) for c in self.children[v]]
            its.sort()
            got = tuple(x for _, x in its)
            self._items[v] = got
        return got

    @property
    def clusters(self) -> dict[frozenset, int]:
        """Subtree label set -> vertex (the sets are distinct for stable trees)."""
        if self._clusters is None:
            self._clusters = {s: v for v, s in enumerate(self.subtree_labels)}
        return self._clusters

    def is_ancestor(self, a: int, v: int) -> bool:
        while v >= 0:
            if v == a:
                return True
            v = self.parent[v]
        return False

    # identity ----------------------------------------------------------------

    def _key(self) -> tuple:
        return (self.labels, self.parent)

    def __eq__(self, other: object) -> bool:
        return type(other) is type(self) and self._key() == other._key()

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self._key())
        return self._hash

    def sort_key(self) -> tuple:
        return (len(self), tuple(tuple(sorted(l)) for l in self.labels), self.parent)

    def __lt__(self, other: "LabeledTree") -> bool:
        return self.sort_key() < other.sort_key()

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.describe()})"

    def describe(self) -> str:
        def rec(v: int) -> str:
            lab = ",".join(map(str, sorted(self.labels[v])))
            inner = " ".join(rec(c) for c in self.children[v])
            col = self.color(v) if isinstance(self, ColoredTree) else ""
            body = lab + (" " + inner if inner else "")
            return f"{col}[{body}]"

        return rec(self.root)

    def uncolored(self) -> "LabeledTree":
        t = LabeledTree.__new__(LabeledTree)
        t._set(self.labels, self.parent)
        return t


class ColoredTree(LabeledTree):
    """A tree with a color per vertex under a coloring scheme."""

    __slots__ = ("colors", "scheme")

    def __init__(
        self,
        labels: Sequence[Iterable[int]],
        parent: Sequence[int],
        colors: Sequence[str],
        scheme: Scheme | str = Scheme.RBW,
        *,
        check: bool = True,
    ):
        labs = [frozenset(l) for l in labels]
        if len(colors) != len(labs):
            raise ValueError("one color per vertex is required")
        lab, par, col, _ = _canonical(labs, list(parent), list(colors))
        self._set(lab, par)
        self.colors: tuple[str, ...] = col
        self.scheme = Scheme.parse(scheme)
        if check:
            self._check()
            bad = [c for c in self.colors if c not in self.scheme.colors]
            if bad:
                raise ValueError(f"colors {bad} not allowed in scheme {self.scheme.value}")

    @classmethod
    def _raw(cls, lab, par, col, scheme: Scheme) -> "ColoredTree":
        t = cls.__new__(cls)
        t._set(lab, par)
        t.colors = col
        t.scheme = scheme
        return t

    def color(self, v: int) -> str:
        return self.colors[v]

    def _key(self) -> tuple:
        return (self.labels, self.parent, self.colors, self.scheme)

    def sort_key(self) -> tuple:
        return super().sort_key() + (self.colors,)

    def recolor(self, colors: Sequence[str], scheme: Scheme | str | None = None) -> "ColoredTree":
        return ColoredTree._raw(self.labels, self.parent, tuple(colors), Scheme.parse(scheme or self.scheme))

    def with_scheme(self, scheme: Scheme | str) -> "ColoredTree":
        return ColoredTree._raw(self.labels, self.parent, self.colors, Scheme.parse(scheme))

    @property
    def is_corolla(self) -> bool:
        return len(self) == 1


def make_tree(
    labels: Mapping | Sequence,
    parent: Mapping | Sequence,
    colors: Mapping | Sequence | None = None,
    scheme: Scheme | str = Scheme.RBW,
) -> LabeledTree:
    """Build a tree from vertex-keyed mappings (any hashable vertex ids)."""
    if isinstance(labels, Mapping):
        ids = list(labels)
        pos = {v: k for k, v in enumerate(ids)}
        labs = [labels[v] for v in ids]
        par = [pos[parent[v]] if (v in parent and parent[v] is not None) else -1 for v in ids]
        cols = [colors[v] for v in ids] if colors is not None else None
    else:
        labs = list(labels)
        par = list(parent)
        cols = list(colors) if colors is not None else None
    if cols is None:
        return LabeledTree(labs, par)
    return ColoredTree(labs, par, cols, scheme)


def corolla(S: Iterable[int], color: str | None = None, scheme: Scheme | str = Scheme.RBW) -> LabeledTree:
    S = frozenset(S)
    if color is None:
        return LabeledTree([S], [-1])
    return ColoredTree([S], [-1], [color], scheme)


# legality --------------------------------------------------------------------

_RBW_PAIRS = {("R", "R"), ("R", "W"), ("R", "B"), ("W", "B"), ("B", "B")}
_FIVE_RANK = {"R": 0, "V": 1, "O": 2, "W": 3, "B": 4}
_WORDS = {
    Scheme.RBW: re.compile(r"R*W?B*"),
    Scheme.FIVE: re.compile(r"R*V?O*W?B*"),
    Scheme.RWLOCAL: re.compile(r"[RW]*"),
}


def _pair_ok(scheme: Scheme, child: str, parent: str) -> bool:
    if scheme is Scheme.RBW:
        return (child, parent) in _RBW_PAIRS
    if scheme is Scheme.FIVE:
        rc, rp = _FIVE_RANK[child], _FIVE_RANK[parent]
        return rc < rp or (rc == rp and child not in "VW")
    return True


def is_legal(tree: ColoredTree) -> bool:
    """Legality checked on parent/child pairs."""
    sch = tree.scheme
    if any(c not in sch.colors for c in tree.colors):
        return False
    return all(_pair_ok(sch, tree.colors[v], tree.colors[p]) for v, p in tree.edges)


def is_legal_words(tree: ColoredTree) -> bool:
    """Legality checked on every leaf-to-root color word (independent route)."""
    pat = _WORDS[tree.scheme]
    for leaf in tree.vertices:
        if tree.children[leaf]:
            continue
        word = []
        v = leaf
        while v >= 0:
            word.append(tree.colors[v])
            v = tree.parent[v]
        if not pat.fullmatch("".join(word)):
            return False
    return True


# enumeration -----------------------------------------------------------------


def _partitions_min2(items: tuple[int, ...]) -> Iterator[list[tuple[int, ...]]]:
    """Set partitions of ``items`` into blocks of size at least two."""
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    n = len(rest)
    for mask in range(1, 1 << n):
        block = (first,) + tuple(rest[i] for i in range(n) if mask >> i & 1)
        remaining = tuple(rest[i] for i in range(n) if not mask >> i & 1)
        for tail in _partitions_min2(remaining):
            yield [block] + tail


@lru_cache(maxsize=None)
def _shapes(S: frozenset) -> tuple:
    """Nested (labels, children) structures of all trees on S."""
    items = tuple(sorted(S))
    out = []
    n = len(items)
    for mask in range(1 << n):
        root_labels = frozenset(items[i] for i in range(n) if mask >> i & 1)
        rest = tuple(items[i] for i in range(n) if not mask >> i & 1)
        for blocks in _partitions_min2(rest):
            if len(root_labels) + len(blocks) < 2:
                continue
            for subs in _iproduct(*(_shapes(frozenset(b)) for b in blocks)):
                out.append((root_labels, subs))
    return tuple(out)


def _from_shape(shape) -> LabeledTree:
    labels: list[frozenset] = []
    parent: list[int] = []

    def rec(node, par: int) -> None:
        me = len(labels)
        labels.append(node[0])
        parent.append(par)
        for ch in node[1]:
            rec(ch, me)

    rec(shape, -1)
    return LabeledTree(labels, parent, check=False)


@lru_cache(maxsize=None)
def _trees_cached(S: frozenset) -> tuple[LabeledTree, ...]:
    return tuple(sorted({_from_shape(s) for s in _shapes(S)}))


def _label_set(S) -> frozenset:
    if isinstance(S, int):
        S = range(1, S + 1)
    S = frozenset(S)
    if len(S) < 2:
        raise ValueError("label sets need at least two elements")
    return S


def enumerate_trees(S: Iterable[int] | int) -> list[LabeledTree]:
    """All S-labeled trees, canonical order.  An int n means {1..n}."""
    return list(_trees_cached(_label_set(S)))


@lru_cache(maxsize=None)
def _colored_cached(S: frozenset, scheme: Scheme) -> tuple[ColoredTree, ...]:
    out = []
    for t in _trees_cached(S):
        for cols in _iproduct(scheme.colors, repeat=len(t)):
            ct = ColoredTree._raw(t.labels, t.parent, cols, scheme)
            if is_legal(ct):
                out.append(ct)
    return tuple(out)


def enumerate_colored(S: Iterable[int] | int, scheme: Scheme | str = Scheme.RBW) -> list[ColoredTree]:
    return list(_colored_cached(_label_set(S), Scheme.parse(scheme)))


# contractions ----------------------------------------------------------------

_FIVE_PRE = {"B": set("B"), "W": set("BWO"), "O": set("O"), "V": set("OVR"), "R": set("R")}


def _block_root(tree: LabeledTree, block: Iterable[int]) -> int | None:
    block = set(block)
    roots = [v for v in block if tree.parent[v] not in block]
    return roots[0] if len(roots) == 1 else None


def _block_colors_ok(tree: ColoredTree, block: Sequence[int], target: str) -> bool:
    sch = tree.scheme
    cols = {tree.colors[v] for v in block}
    if sch is Scheme.RBW:
        if target == "R":
            return cols == {"R"}
        if target == "B":
            return cols == {"B"}
        return target == "W"
    if sch is Scheme.FIVE:
        return target in _FIVE_PRE and cols <= _FIVE_PRE[target]
    # RW-local: the block must be a legal RBW tree, so W only at its root
    root = _block_root(tree, block)
    if any(tree.colors[v] == "W" and v != root for v in block):
        return False
    if target == "R":
        return cols == {"R"}
    return target == "W"


def _allowed_targets(tree: ColoredTree, block: Sequence[int]) -> list[str]:
    return [c for c in tree.scheme.colors if _block_colors_ok(tree, block, c)]


@dataclass(frozen=True)
class Contraction:
    """A validated morphism of trees; ``vmap[v]`` is the image of source vertex v."""

    source: ColoredTree
    target: ColoredTree
    vmap: tuple[int, ...]

    @property
    def is_trivial(self) -> bool:
        return self.source == self.target

    def preimage(self, w: int) -> tuple[int, ...]:
        return tuple(v for v, x in enumerate(self.vmap) if x == w)

    def blocks(self) -> list[tuple[tuple[int, ...], str]]:
        """The contraction system: (preimage, target color) per target vertex."""
        return [(self.preimage(w), self.target.colors[w]) for w in self.target.vertices]

    @property
    def codim(self) -> int:
        return codim(self.source) - codim(self.target)

    def then(self, other: "Contraction") -> "Contraction":
        """Composite: first self, then other."""
        if self.target != other.source:
            raise ValueError("contractions are not composable")
        return Contraction(self.source, other.target, tuple(other.vmap[x] for x in self.vmap))

    def __repr__(self) -> str:
        return f"Contraction({self.source.describe()} -> {self.target.describe()})"


def _quotient(tree: ColoredTree, blocks: Sequence[Sequence[int]], colors: Sequence[str], scheme: Scheme):
    """Target tree of collapsing ``blocks`` (assumed connected) plus the vertex map."""
    owner = [0] * len(tree)
    for b, blk in enumerate(blocks):
        for v in blk:
            owner[v] = b
    labs = []
    par = []
    for b, blk in enumerate(blocks):
        labs.append(frozenset().union(*(tree.labels[v] for v in blk)))
        root = _block_root(tree, blk)
        p = tree.parent[root]
        par.append(owner[p] if p >= 0 else -1)
    lab, parent, col, pos = _canonical(labs, par, list(colors))
    target = ColoredTree._raw(lab, parent, col, scheme)
    vmap = tuple(pos[owner[v]] for v in range(len(tree)))
    return target, vmap


def contract(tree: ColoredTree, system: Iterable[tuple[Iterable[int], str]]) -> tuple[ColoredTree, Contraction]:
    """Collapse a colored partition of ``tree`` and validate the result."""
    blocks = []
    colors = []
    seen: set[int] = set()
    for blk, col in system:
        blk = tuple(sorted(set(blk)))
        if not blk:
            raise ContractionError("empty-block", "blocks must be nonempty")
        if seen & set(blk):
            raise ContractionError("not-partition", "blocks overlap")
        seen |= set(blk)
        blocks.append(blk)
        colors.append(col)
    if seen != set(tree.vertices):
        raise ContractionError("not-partition", "blocks do not cover the tree")
    for blk, col in zip(blocks, colors):
        if _block_root(tree, blk) is None:
            raise ContractionError("disconnected", f"block {blk} is not a connected subtree")
        if not _block_colors_ok(tree, blk, col):
            raise ContractionError("color", f"block {blk} cannot collapse to color {col}")
    target, vmap = _quotient(tree, blocks, colors, tree.scheme)
    if not is_legal(target):
        raise ContractionError("illegal-result", f"collapsed tree {target.describe()} is not legal")
    return target, Contraction(tree, target, vmap)


def contraction_between(T: LabeledTree, T2: LabeledTree) -> Contraction | None:
    """The unique contraction T -> T2, if any."""
    if T.label_set != T2.label_set:
        return None
    colored = isinstance(T, ColoredTree)
    if colored != isinstance(T2, ColoredTree):
        return None
    if colored and T.scheme != T2.scheme:
        return None
    target_clusters = T2.clusters
    src_clusters = T.clusters
    for s in target_clusters:
        if s not in src_clusters:
            return None
    vmap = [0] * len(T)
    for v in T.top_down:
        p = T.parent[v]
        w = target_clusters.get(T.subtree_labels[v])
        vmap[v] = w if w is not None else vmap[p]
    pre: list[list[int]] = [[] for _ in T2.vertices]
    for v, w in enumerate(vmap):
        pre[w].append(v)
    for w, blk in enumerate(pre):
        if frozenset().union(*(T.labels[v] for v in blk)) != T2.labels[w]:
            return None
        if colored and not _block_colors_ok(T, blk, T2.colors[w]):
            return None
    if not colored:
        T = ColoredTree._raw(T.labels, T.parent, ("W",) * len(T), Scheme.RWLOCAL)
        T2 = ColoredTree._raw(T2.labels, T2.parent, ("W",) * len(T2), Scheme.RWLOCAL)
    return Contraction(T, T2, tuple(vmap))


def contractions_from(T: ColoredTree, include_trivial: bool = False) -> Iterator[Contraction]:
    """Every contraction out of T (each target exactly once)."""
    edges = [v for v in T.vertices if T.parent[v] >= 0]
    for mask in range(1 << len(edges)):
        comp = list(T.vertices)

        def find(x: int) -> int:
            while comp[x] != x:
                comp[x] = comp[comp[x]]
                x = comp[x]
            return x

        for k, v in enumerate(edges):
            if mask >> k & 1:
                a, b = find(v), find(T.parent[v])
                comp[max(a, b)] = min(a, b)
        groups: dict[int, list[int]] = {}
        for v in T.vertices:
            groups.setdefault(find(v), []).append(v)
        blocks = list(groups.values())
        options = [_allowed_targets(T, b) for b in blocks]
        for cols in _iproduct(*options):
            if mask == 0 and all(T.colors[b[0]] == c for b, c in zip(blocks, cols)):
                if include_trivial:
                    yield Contraction(T, T, tuple(T.vertices))
                continue
            target, vmap = _quotient(T, blocks, cols, T.scheme)
            if is_legal(target):
                yield Contraction(T, target, vmap)


def codim(x: ColoredTree | Contraction) -> int:
    """Number of R or B vertices (difference of these for a contraction)."""
    if isinstance(x, Contraction):
        return x.codim
    if not isinstance(x, ColoredTree) or x.scheme is not Scheme.RBW:
        raise ValueError("codimension is defined for RBW trees")
    return sum(1 for c in x.colors if c in "RB")


# elementary decomposition ------------------------------------------------------


def elementary_type(c: Contraction) -> int | None:
    """Type 1..6 of an elementary RBW contraction, or None."""
    nontrivial = [(blk, col) for blk, col in c.blocks() if len(blk) > 1 or c.source.colors[blk[0]] != col]
    if len(nontrivial) != 1:
        return None
    blk, col = nontrivial[0]
    src = c.source
    cols = sorted(src.colors[v] for v in blk)
    if len(blk) == 1:
        return {("R", "W"): 1, ("B", "W"): 4}.get((cols[0], col))
    if len(blk) == 2:
        child = blk[0] if src.parent[blk[0]] == blk[1] else blk[1]
        par = src.parent[child]
        pair = (src.colors[child], src.colors[par], col)
        if pair == ("R", "R", "R"):
            return 2
        if pair == ("R", "W", "W"):
            return 3
        if pair == ("B", "B", "B"):
            return 5
    root = _block_root(src, blk)
    if col == "W" and src.colors[root] == "B":
        rest = [v for v in blk if v != root]
        whites = {v for v in src.children[root] if src.colors[v] == "W"}
        if rest and set(rest) == whites:
            return 6
    return None


def _step(tree: ColoredTree, block: Sequence[int], color: str) -> tuple[ColoredTree, Contraction]:
    blk = set(block)
    system = [((v,), tree.colors[v]) for v in tree.vertices if v not in blk]
    system.append((tuple(block), color))
    return contract(tree, system)


def _choose_step(tree: ColoredTree, block: list[int], eta: str) -> tuple[list[int], str] | None:
    """One elementary step inside ``block`` towards a single vertex of color eta."""
    cols = tree.colors
    if len(block) == 1:
        v = block[0]
        if cols[v] == eta:
            return None
        if eta != "W":
            raise ValueError("single vertex can only recolor to W")
        return [v], "W"
    bset = set(block)
    leaves = sorted(v for v in block if not any(c in bset for c in tree.children[v]))
    if eta in "RB":
        w = leaves[0]
        return [w, tree.parent[w]], eta
    nonwhite = [v for v in leaves if cols[v] != "W"]
    if nonwhite:
        w = nonwhite[0]
        p = tree.parent[w]
        if cols[w] == "R":
            if cols[p] == "R":
                return [w, p], "R"
            if cols[p] == "W":
                return [w, p], "W"
            return [w], "W"
        return [w, p], "B"
    # every leaf of the block is white: take a B vertex without B descendants
    for v in sorted(block):
        if cols[v] != "B":
            continue
        stack = [c for c in tree.children[v] if c in bset]
        has_b = False
        while stack:
            u = stack.pop()
            if cols[u] == "B":
                has_b = True
                break
            stack.extend(c for c in tree.children[u] if c in bset)
        if not has_b:
            whites = [c for c in tree.children[v] if c in bset and cols[c] == "W"]
            return [v] + whites, "W"
    raise AssertionError("no elementary step available")


def elementary_decompose(c: Contraction) -> list[tuple[int, Contraction]]:
    """Factor an RBW contraction into elementary steps, block by block.

    Returns (type, step) pairs; the leaf choice is the smallest canonical index.
    """
    if c.source.scheme is not Scheme.RBW:
        raise ValueError("elementary decomposition is for RBW contractions")
    steps: list[tuple[int, Contraction]] = []
    cur = c.source
    owner = list(c.vmap)  # current vertex -> final target vertex
    for w in c.target.vertices:
        eta = c.target.colors[w]
        while True:
            block = sorted(v for v in cur.vertices if owner[v] == w)
            move = _choose_step(cur, block, eta)
            if move is None:
                break
            nxt, step = _step(cur, *move)
            kind = elementary_type(step)
            if kind is None:
                raise AssertionError(f"non-elementary step {step}")
            new_owner = [0] * len(nxt)
            for v, x in enumerate(step.vmap):
                new_owner[x] = owner[v]
            owner = new_owner
            steps.append((kind, step))
            cur = nxt
    if cur != c.target:
        raise AssertionError("decomposition did not reach the target")
    return steps


# symmetric group action ---------------------------------------------------------


def relabel(tree: LabeledTree, mapping: Mapping[int, int]) -> LabeledTree:
    labs = [frozenset(mapping[l] for l in lab) for lab in tree.labels]
    if isinstance(tree, ColoredTree):
        lab, par, col, _ = _canonical(labs, tree.parent, tree.colors)
        return ColoredTree._raw(lab, par, col, tree.scheme)
    lab, par, _, _ = _canonical(labs, tree.parent, None)
    t = LabeledTree.__new__(LabeledTree)
    t._set(lab, par)
    return t


def relabel_with_map(tree: LabeledTree, mapping: Mapping[int, int]) -> tuple[LabeledTree, tuple[int, ...]]:
    """Relabeled tree and old-vertex -> new-vertex map."""
    labs = [frozenset(mapping[l] for l in lab) for lab in tree.labels]
    cols = tree.colors if isinstance(tree, ColoredTree) else None
    lab, par, col, pos = _canonical(labs, tree.parent, cols)
    if cols is not None:
        out = ColoredTree._raw(lab, par, col, tree.scheme)
    else:
        out = LabeledTree.__new__(LabeledTree)
        out._set(lab, par)
    return out, tuple(pos[v] for v in tree.vertices)


def act(perm: Mapping[int, int] | Sequence[int], tree: LabeledTree) -> LabeledTree:
    """Relabel by a permutation: a mapping, or a tuple p with p[i-1] the image of i."""
    if not isinstance(perm, Mapping):
        perm = {i + 1: p for i, p in enumerate(perm)}
    return relabel(tree, perm)


# functors to RBW trees ------------------------------------------------------------


def _collapse_components(tree: ColoredTree, marked: set[int], fill: str, keep_colors: Mapping[int, str]) -> ColoredTree:
    """Collapse each connected component of ``marked`` to one ``fill`` vertex."""
    comp = {v: v for v in tree.vertices}

    def find(x: int) -> int:
        while comp[x] != x:
            comp[x] = comp[comp[x]]
            x = comp[x]
        return x

    for v, p in tree.edges:
        if v in marked and p in marked:
            a, b = find(v), find(p)
            comp[max(a, b)] = min(a, b)
    groups: dict[int, list[int]] = {}
    for v in tree.vertices:
        groups.setdefault(find(v), []).append(v)
    blocks = list(groups.values())
    colors = [fill if b[0] in marked else keep_colors[b[0]] for b in blocks]
    target, _ = _quotient(tree, blocks, colors, Scheme.RBW)
    if not is_legal(target):
        raise AssertionError(f"functor produced an illegal tree {target.describe()}")
    return target


def five_to_rbw(t: ColoredTree) -> ColoredTree:
    """Contract maximal W/O/V subtrees to W vertices."""
    if t.scheme is not Scheme.FIVE:
        raise ValueError("expected a five-colored tree")
    marked = {v for v in t.vertices if t.colors[v] in "WOV"}
    return _collapse_components(t, marked, "W", {v: t.colors[v] for v in t.vertices})


def rw_to_rbw(t: ColoredTree) -> ColoredTree:
    """Recolor red to blue, keep the largest blue subtree at the root, collapse the rest to W."""
    if t.scheme is not Scheme.RWLOCAL:
        raise ValueError("expected an RW-local tree")
    blue: set[int] = set()
    if t.colors[t.root] == "R":
        stack = [t.root]
        while stack:
            v = stack.pop()
            blue.add(v)
            stack.extend(c for c in t.children[v] if t.colors[c] == "R")
    marked = set(t.vertices) - blue
    return _collapse_components(t, marked, "W", {v: "B" for v in blue})


# serialisation ----------------------------------------------------------------


def tree_to_json(tree: LabeledTree) -> dict:
    out = {
        "labels": {str(v): sorted(tree.labels[v]) for v in tree.vertices},
        "parent": {str(v): str(p) for v, p in enumerate(tree.parent) if p >= 0},
        "root": str(tree.root),
    }
    if isinstance(tree, ColoredTree):
        out["colors"] = {str(v): c for v, c in enumerate(tree.colors)}
        out["scheme"] = tree.scheme.value
    return out


def tree_from_json(data: dict | str, scheme: Scheme | str | None = None) -> LabeledTree:
    if isinstance(data, str):
        data = json.loads(data)
    labels = {str(k): v for k, v in data["labels"].items()}
    parent = {str(k): str(v) for k, v in data.get("parent", {}).items()}
    root = str(data["root"])
    if root in parent:
        raise ValueError("root has a parent")
    colors = data.get("colors")
    if colors is not None:
        colors = {str(k): v for k, v in colors.items()}
    sch = scheme or data.get("scheme") or Scheme.RBW
    return make_tree(labels, parent, colors, sch)


_DOT_COLORS = {"R": "red", "B": "blue", "W": "gray", "O": "orange", "V": "violet"}


def tree_to_dot(tree: LabeledTree, name: str = "T") -> str:
    lines = [f"digraph {name} {{", "  rankdir=BT;"]
    for v in tree.vertices:
        lab = ",".join(map(str, sorted(tree.labels[v])))
        attrs = [f'label="{lab}"']
        if isinstance(tree, ColoredTree):
            attrs.append(f'color="{_DOT_COLORS[tree.colors[v]]}"')
            attrs.append(f'xlabel="{tree.colors[v]}"')
        lines.append(f"  v{v} [{', '.join(attrs)}];")
    for v, p in tree.edges:
        lines.append(f"  v{v} -> v{p};")
    lines.append("}")
    return "\n".join(lines)
