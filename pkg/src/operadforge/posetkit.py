"""Finite posets: constructions, order complexes, CW-poset recognition, isomorphism.

A :class:`FinPoset` keeps, for every element, the bitset of elements strictly
below it.  Elements carry an optional hashable payload used for lookups.
"""

from __future__ import annotations

import json
from collections import defaultdict, deque
from itertools import product as _iproduct
from typing import Any, Callable, Hashable, Iterable, Sequence

from .gf2homology import SimplicialComplex, ChainComplex, reduced_betti

__all__ = [
    "FinPoset",
    "BOTTOM",
    "PT",
    "TOP_D",
    "chain",
    "antichain",
    "product",
    "join",
    "cone",
    "suspension",
    "opposite",
    "adjoin_bottom",
    "interval",
    "order_complex",
    "chain_complex",
    "reduced_homology",
    "euler_of",
    "is_cw_poset",
    "poset_iso",
    "is_order_iso",
    "poset_colimit",
    "ColimitDiagram",
]


class _Marker:
    __slots__ = ("name",)

    def __init__(self, name: str):
        self.name = name

    def __repr__(self) -> str:
        return self.name

    def __reduce__(self):
        return (_marker, (self.name,))


_MARKERS: dict[str, _Marker] = {}


def _marker(name: str) -> _Marker:
    if name not in _MARKERS:
        _MARKERS[name] = _Marker(name)
    return _MARKERS[name]


BOTTOM = _marker("BOTTOM")  # the element added by underline(P)
PT = _marker("pt")  # the cone point
TOP_D = _marker("D")  # the extra cell of a suspension


def _bits(x: int) -> Iterable[int]:
    while x:
        low = x & -x
        yield low.bit_length() - 1
        x ^= low


class FinPoset:
    """Finite poset stored as strict down-sets (bitsets).

    ``below[i]`` must be transitively closed and irreflexive; constructors
    ``from_covers`` and ``from_relation`` guarantee this.
    """

    __slots__ = ("elements", "below", "_above", "_dims", "_lower_covers", "_index")

    def __init__(self, elements: Sequence[Any], below: Sequence[int]):
        if len(elements) != len(below):
            raise ValueError("elements and below must have the same length")
        self.elements: tuple = tuple(elements)
        self.below: tuple[int, ...] = tuple(below)
        for i, b in enumerate(self.below):
            if b >> i & 1:
                raise ValueError(f"element {i} lies below itself")
        self._above: tuple[int, ...] | None = None
        self._dims: tuple[int, ...] | None = None
        self._lower_covers: tuple[tuple[int, ...], ...] | None = None
        self._index: dict | None = None

    # construction ------------------------------------------------------------

    @classmethod
    def from_covers(cls, elements: Sequence[Any], covers: Iterable[tuple[int, int]]) -> "FinPoset":
        """Build from generating relations ``(i, j)`` meaning ``i < j``."""
        n = len(elements)
        lower: list[list[int]] = [[] for _ in range(n)]
        for i, j in covers:
            if i == j:
                raise ValueError("a cover relation cannot be reflexive")
            lower[j].append(i)
        below = [0] * n
        state = [0] * n  # 0 new, 1 on stack, 2 done

        for start in range(n):
            if state[start]:
                continue
            stack = [(start, iter(lower[start]))]
            state[start] = 1
            while stack:
                v, it = stack[-1]
                nxt = next(it, None)
                if nxt is None:
                    acc = 0
                    for u in lower[v]:
                        acc |= below[u] | (1 << u)
                    below[v] = acc
                    state[v] = 2
                    stack.pop()
                elif state[nxt] == 1:
                    raise ValueError("relation has a cycle")
                elif state[nxt] == 0:
                    state[nxt] = 1
                    stack.append((nxt, iter(lower[nxt])))
        return cls(elements, below)

    @classmethod
    def from_relation(cls, elements: Sequence[Any], leq: Callable[[Any, Any], bool]) -> "FinPoset":
        n = len(elements)
        pairs = [(i, j) for i in range(n) for j in range(n) if i != j and leq(elements[i], elements[j])]
        for i, j in pairs:
            if leq(elements[j], elements[i]):
                raise ValueError("relation is not antisymmetric")
        return cls.from_covers(elements, pairs)

    # basic queries -----------------------------------------------------------

    def __len__(self) -> int:
        return len(self.elements)

    def __repr__(self) -> str:
        return f"FinPoset(n={len(self)}, covers={len(self.covers())})"

    @property
    def index(self) -> dict:
        if self._index is None:
            self._index = {e: i for i, e in enumerate(self.elements)}
            if len(self._index) != len(self.elements):
                raise ValueError("payloads are not distinct")
        return self._index

    def lt(self, i: int, j: int) -> bool:
        return bool(self.below[j] >> i & 1)

    def leq(self, i: int, j: int) -> bool:
        return i == j or bool(self.below[j] >> i & 1)

    @property
    def above(self) -> tuple[int, ...]:
        if self._above is None:
            up = [0] * len(self)
            for j, b in enumerate(self.below):
                for i in _bits(b):
                    up[i] |= 1 << j
            self._above = tuple(up)
        return self._above

    def linear_extension(self) -> list[int]:
        return sorted(range(len(self)), key=lambda i: bin(self.below[i]).count("1"))

    @property
    def lower_covers(self) -> tuple[tuple[int, ...], ...]:
        if self._lower_covers is None:
            order = self.linear_extension()
            rank = {v: r for r, v in enumerate(order)}
            out: list[tuple[int, ...]] = [()] * len(self)
            for i in range(len(self)):
                cands = sorted(_bits(self.below[i]), key=lambda v: -rank[v])
                removed = 0
                cov = []
                for j in cands:
                    if removed >> j & 1:
                        continue
                    cov.append(j)
                    removed |= self.below[j]
                out[i] = tuple(sorted(cov))
            self._lower_covers = tuple(out)
        return self._lower_covers

    def covers(self) -> list[tuple[int, int]]:
        return [(j, i) for i in range(len(self)) for j in self.lower_covers[i]]

    @property
    def dims(self) -> tuple[int, ...]:
        """Length of the longest chain ending at each element (minimal elements: 0)."""
        if self._dims is None:
            d = [0] * len(self)
            for i in self.linear_extension():
                d[i] = max((d[j] + 1 for j in self.lower_covers[i]), default=0)
            self._dims = tuple(d)
        return self._dims

    def dim(self) -> int:
        return max(self.dims, default=-1)

    def minimal(self) -> list[int]:
        return [i for i in range(len(self)) if not self.below[i]]

    def maximal(self) -> list[int]:
        return [i for i in range(len(self)) if not self.above[i]]

    def subposet(self, indices: Iterable[int]) -> "FinPoset":
        idx = sorted(set(indices))
        pos = {v: k for k, v in enumerate(idx)}
        mask = 0
        for v in idx:
            mask |= 1 << v
        below = []
        for v in idx:
            b = 0
            for u in _bits(self.below[v] & mask):
                b |= 1 << pos[u]
            below.append(b)
        return FinPoset([self.elements[v] for v in idx], below)

    def relabel(self, payloads: Sequence[Any]) -> "FinPoset":
        return FinPoset(payloads, self.below)

    def to_json(self) -> dict:
        return {"elements": [_jsonable(e) for e in self.elements], "covers": [list(c) for c in self.covers()]}

    @classmethod
    def from_json(cls, data: dict | str) -> "FinPoset":
        if isinstance(data, str):
            data = json.loads(data)
        elems = [_hashable(e) for e in data["elements"]]
        return cls.from_covers(elems, [tuple(c) for c in data["covers"]])

    def same_order(self, other: "FinPoset") -> bool:
        return self.elements == other.elements and self.below == other.below


def _jsonable(e: Any) -> Any:
    if isinstance(e, (str, int, float, bool)) or e is None:
        return e
    if isinstance(e, (tuple, list, frozenset, set)):
        seq = sorted(e, key=repr) if isinstance(e, (frozenset, set)) else e
        return [_jsonable(x) for x in seq]
    if hasattr(e, "to_json"):
        return e.to_json()
    return repr(e)


def _hashable(e: Any) -> Any:
    if isinstance(e, list):
        return tuple(_hashable(x) for x in e)
    if isinstance(e, dict):
        return tuple(sorted((k, _hashable(v)) for k, v in e.items()))
    return e


# small posets ----------------------------------------------------------------


def chain(n: int) -> FinPoset:
    return FinPoset(list(range(n)), [(1 << i) - 1 for i in range(n)])


def antichain(n: int) -> FinPoset:
    return FinPoset(list(range(n)), [0] * n)


# constructions ---------------------------------------------------------------


def opposite(P: FinPoset) -> FinPoset:
    return FinPoset(P.elements, P.above)


def adjoin_bottom(P: FinPoset, bottom: Any = BOTTOM) -> FinPoset:
    """underline(P): a new minimum placed at index 0."""
    below = [0] + [(b << 1) | 1 for b in P.below]
    return FinPoset((bottom,) + P.elements, below)


def product(*posets: FinPoset) -> FinPoset:
    """Cartesian product with the componentwise order."""
    if not posets:
        return FinPoset([()], [0])
    sizes = [len(P) for P in posets]
    tuples = list(_iproduct(*(range(s) for s in sizes)))
    pos = {t: k for k, t in enumerate(tuples)}
    covers = []
    for t in tuples:
        for f, P in enumerate(posets):
            for lo in P.lower_covers[t[f]]:
                s = t[:f] + (lo,) + t[f + 1:]
                covers.append((pos[s], pos[t]))
    elems = [tuple(P.elements[i] for P, i in zip(posets, t)) for t in tuples]
    return FinPoset.from_covers(elems, covers)


def join(*posets: FinPoset) -> FinPoset:
    """Join: the product of the underlined posets minus the all-bottom tuple.

    Payloads are tuples whose entries are either a payload of the factor or
    :data:`BOTTOM`.
    """
    if not posets:
        return FinPoset([], [])
    prod = product(*(adjoin_bottom(P) for P in posets))
    keep = [i for i, e in enumerate(prod.elements) if any(x is not BOTTOM for x in e)]
    return prod.subposet(keep)


def cone(P: FinPoset) -> FinPoset:
    return join(P, FinPoset([PT], [0]))


def suspension(P: FinPoset) -> FinPoset:
    """Cone(P) together with an extra element D above exactly P x {bottom}."""
    C = cone(P)
    base = 0
    for i, e in enumerate(C.elements):
        if e[1] is BOTTOM:
            base |= 1 << i
    return FinPoset(C.elements + (TOP_D,), C.below + (base,))


def interval(P: FinPoset, a: int | None, b: int | None = None, kind: str = "halfOpen") -> FinPoset:
    """Induced subposet on (a, b], (-, a] ("lower"), [a, -) ("upper"),
    or the strict versions "lowerStrict" (-, a) and "upperStrict" (a, -)."""
    if kind == "halfOpen":
        if not P.leq(a, b):
            raise ValueError("interval endpoints are incomparable")
        sel = (P.below[b] | (1 << b)) & P.above[a]
    elif kind == "lower":
        sel = P.below[a] | (1 << a)
    elif kind == "upper":
        sel = P.above[a] | (1 << a)
    elif kind == "lowerStrict":
        sel = P.below[a]
    elif kind == "upperStrict":
        sel = P.above[a]
    else:
        raise ValueError(f"unknown interval kind {kind!r}")
    return P.subposet(_bits(sel))


# order complexes and homology -----------------------------------------------


def _chain_layers(P: FinPoset) -> list[list[tuple[int, ...]]]:
    """All chains of P, by length, as increasing tuples in linear-extension order."""
    order = P.linear_extension()
    rank = {v: r for r, v in enumerate(order)}
    up = P.above
    layers: list[list[tuple[int, ...]]] = []
    current = [(v,) for v in range(len(P))]
    while current:
        layers.append(current)
        nxt = []
        for ch in current:
            for w in _bits(up[ch[-1]]):
                nxt.append(ch + (w,))
        current = nxt
    # normalise vertex order inside simplices
    return [[tuple(sorted(c)) for c in layer] for layer in layers]


def order_complex(P: FinPoset) -> SimplicialComplex:
    """Simplices are the chains of P; vertices are element indices."""
    if len(P) == 0:
        return SimplicialComplex([])
    return SimplicialComplex.from_layers(_chain_layers(P))


def chain_complex(P: FinPoset) -> ChainComplex:
    layers = _chain_layers(P) if len(P) else []
    index = [{s: i for i, s in enumerate(layer)} for layer in layers]
    bds = []
    for k, layer in enumerate(layers):
        if k == 0:
            bds.append(tuple(0 for _ in layer))
            continue
        lower = index[k - 1]
        rows = []
        for s in layer:
            bits = 0
            for i in range(len(s)):
                bits |= 1 << lower[s[:i] + s[i + 1:]]
            rows.append(bits)
        bds.append(tuple(rows))
    return ChainComplex(tuple(len(layer) for layer in layers), tuple(bds))


def reduced_homology(P: FinPoset) -> dict[int, int]:
    return reduced_betti(chain_complex(P))


def euler_of(P: FinPoset) -> int:
    """Euler characteristic of the order complex (0 for the empty poset)."""
    cc = chain_complex(P)
    return sum((-1) ** k * n for k, n in enumerate(cc.ranks))


def _shape_key(P: FinPoset) -> tuple:
    return (P.below,)


_SPHERE_CACHE: dict[tuple, dict[int, int]] = {}


def _cached_homology(P: FinPoset) -> dict[int, int]:
    # lower intervals repeat a lot in sweeps; key on the exact order data
    key = _shape_key(P)
    hit = _SPHERE_CACHE.get(key)
    if hit is None:
        hit = reduced_homology(P)
        if len(_SPHERE_CACHE) < 200_000:
            _SPHERE_CACHE[key] = hit
    return hit


def is_cw_poset(P: FinPoset) -> tuple[bool, list[dict]]:
    """Inductive CW-poset test with homology-sphere certificates.

    For every element e the strict lower interval must have the GF(2)
    homology of a sphere of dimension dim(e) - 1.  Returns ``(ok, failures)``.
    """
    failures = []
    dims = P.dims
    for e in range(len(P)):
        low = interval(P, e, kind="lowerStrict")
        h = _cached_homology(low)
        want = {dims[e] - 1: 1}
        if h != want:
            failures.append({"element": e, "dim": dims[e], "reduced_betti": h})
    return (not failures), failures


# isomorphism -----------------------------------------------------------------


def _refine(P: FinPoset) -> list[int]:
    """Colour refinement on the Hasse diagram, seeded by (dim, up/down degrees)."""
    n = len(P)
    low = P.lower_covers
    upc: list[list[int]] = [[] for _ in range(n)]
    for i in range(n):
        for j in low[i]:
            upc[j].append(i)
    dims = P.dims
    colour = [
        (dims[i], len(low[i]), len(upc[i]), bin(P.below[i]).count("1"), bin(P.above[i]).count("1"))
        for i in range(n)
    ]
    colour = _compress(colour)
    for _ in range(n):
        sig = [
            (colour[i], tuple(sorted(colour[j] for j in low[i])), tuple(sorted(colour[j] for j in upc[i])))
            for i in range(n)
        ]
        new = _compress(sig)
        if len(set(new)) == len(set(colour)):
            colour = new
            break
        colour = new
    return colour


def _compress(keys: list) -> list[int]:
    table = {k: r for r, k in enumerate(sorted(set(keys)))}
    return [table[k] for k in keys]


def _refine_pair(P: FinPoset, Q: FinPoset) -> tuple[list[int], list[int]] | None:
    # refine on the disjoint union so colours are comparable across P and Q
    n = len(P)
    U = FinPoset(list(range(n + len(Q))), list(P.below) + [b << n for b in Q.below])
    col = _refine(U)
    cp, cq = col[:n], col[n:]
    if sorted(cp) != sorted(cq):
        return None
    return cp, cq


def poset_iso(P: FinPoset, Q: FinPoset) -> dict[int, int] | None:
    """An order isomorphism P -> Q as an index map, or None.

    Exact backtracking search over colour classes from refinement.
    """
    if len(P) != len(Q):
        return None
    if len(P) == 0:
        return {}
    if sorted(P.dims) != sorted(Q.dims):
        return None
    refined = _refine_pair(P, Q)
    if refined is None:
        return None
    cp, cq = refined
    classes: dict[int, list[int]] = defaultdict(list)
    for j, c in enumerate(cq):
        classes[c].append(j)
    # grow along the Hasse diagram from the rarest colour of each component,
    # so every later element has an already mapped neighbour to anchor it
    lowP, lowQ = P.lower_covers, Q.lower_covers
    upP = _upper_covers(P)
    upQ = _upper_covers(Q)
    order: list[int] = []
    anchor: dict[int, tuple[int, bool]] = {}
    seen = [False] * len(P)
    for r in sorted(range(len(P)), key=lambda i: (len(classes[cp[i]]), i)):
        if seen[r]:
            continue
        seen[r] = True
        queue = deque([r])
        while queue:
            i = queue.popleft()
            order.append(i)
            for j, up in [(j, True) for j in upP[i]] + [(j, False) for j in lowP[i]]:
                if not seen[j]:
                    seen[j] = True
                    anchor[j] = (i, up)
                    queue.append(j)
    mapping: dict[int, int] = {}
    used = 0

    def consistent(i: int, j: int) -> bool:
        for a, b in mapping.items():
            if P.lt(a, i) != Q.lt(b, j) or P.lt(i, a) != Q.lt(j, b):
                return False
        return True

    def candidates(i: int) -> list[int]:
        if i in anchor:
            a, up = anchor[i]
            return list((upQ if up else lowQ)[mapping[a]])
        return classes[cp[i]]

    # iterative depth-first search; stack[k] holds the untried candidates of order[k]
    stack = [iter(candidates(order[0]))]
    while stack:
        k = len(stack) - 1
        i = order[k]
        if i in mapping:
            used &= ~(1 << mapping.pop(i))
        for j in stack[-1]:
            if not used >> j & 1 and cq[j] == cp[i] and consistent(i, j):
                mapping[i] = j
                used |= 1 << j
                break
        else:
            stack.pop()
            continue
        if k + 1 == len(order):
            return dict(mapping)
        stack.append(iter(candidates(order[k + 1])))
    return None


def _upper_covers(P: FinPoset) -> list[list[int]]:
    up: list[list[int]] = [[] for _ in range(len(P))]
    for i in range(len(P)):
        for j in P.lower_covers[i]:
            up[j].append(i)
    return up


def is_order_iso(P: FinPoset, Q: FinPoset, f: dict[int, int]) -> bool:
    """Check that an explicit index map is an order isomorphism."""
    if len(f) != len(P) or len(set(f.values())) != len(Q) or len(P) != len(Q):
        return False
    for i in range(len(P)):
        img = 0
        for a in _bits(P.below[i]):
            img |= 1 << f[a]
        if img != Q.below[f[i]]:
            return False
    return True


# colimits --------------------------------------------------------------------


class ColimitDiagram:
    """A finite diagram of posets and index maps between them.

    ``maps`` holds ``(source, target, mapping)`` with ``mapping`` a dict from
    element indices of the source poset to element indices of the target.
    """

    def __init__(self, objects: Sequence[FinPoset], maps: Sequence[tuple[int, int, dict[int, int]]], names=None):
        self.objects = list(objects)
        self.maps = list(maps)
        self.names = list(names) if names is not None else list(range(len(objects)))


def poset_colimit(diagram: ColimitDiagram) -> tuple[FinPoset, list[list[int]]]:
    """Colimit of a diagram of order embeddings.

    Returns the colimit poset (payloads are lists of ``(object, element)``
    provenance pairs, as tuples) and, for each object, the index map into it.
    """
    for s, t, f in diagram.maps:
        P, Q = diagram.objects[s], diagram.objects[t]
        if len(set(f.values())) != len(f) or len(f) != len(P):
            raise ValueError(f"map {s}->{t} is not injective and total")
        for i in range(len(P)):
            for j in range(len(P)):
                if P.leq(i, j) != Q.leq(f[i], f[j]):
                    raise ValueError(f"map {s}->{t} is not an order embedding")
    offsets = []
    total = 0
    for P in diagram.objects:
        offsets.append(total)
        total += len(P)
    parent = list(range(total))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for s, t, f in diagram.maps:
        for i, j in f.items():
            a, b = find(offsets[s] + i), find(offsets[t] + j)
            if a != b:
                parent[max(a, b)] = min(a, b)
    roots = sorted({find(x) for x in range(total)})
    cls = {r: k for k, r in enumerate(roots)}
    prov: list[list[tuple[int, int]]] = [[] for _ in roots]
    inj: list[list[int]] = []
    for o, P in enumerate(diagram.objects):
        row = []
        for i in range(len(P)):
            c = cls[find(offsets[o] + i)]
            prov[c].append((o, i))
            row.append(c)
        inj.append(row)
    covers = set()
    for o, P in enumerate(diagram.objects):
        for i, j in P.covers():
            covers.add((inj[o][i], inj[o][j]))
    result = FinPoset.from_covers([tuple(p) for p in prov], sorted(covers))
    return result, inj
