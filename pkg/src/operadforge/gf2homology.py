"""Simplicial homology with coefficients in the two-element field.

Boundary matrices are stored row-wise as Python ints used as bitsets, so a
row operation is a single XOR.  Everything here is exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Sequence

__all__ = [
    "SimplicialComplex",
    "ChainComplex",
    "from_complex",
    "gf2_rank",
    "betti",
    "reduced_betti",
    "euler_characteristic",
    "is_homology_sphere",
    "is_homology_ball",
]


class SimplicialComplex:
    """A finite abstract simplicial complex given by its facets.

    Vertices may be any hashable, sortable objects.  Facets contained in other
    facets are dropped on construction.
    """

    def __init__(self, facets: Iterable[Iterable]):
        fs = {frozenset(f) for f in facets}
        fs.discard(frozenset())
        # drop non-maximal facets, largest first
        kept: list[frozenset] = []
        for f in sorted(fs, key=len, reverse=True):
            if not any(f < g for g in kept):
                kept.append(f)
        self.facets: tuple[frozenset, ...] = tuple(sorted(kept, key=lambda f: (len(f), sorted(map(repr, f)))))
        self._simplices: list[list[tuple]] | None = None

    @property
    def vertices(self) -> frozenset:
        return frozenset().union(*self.facets) if self.facets else frozenset()

    @property
    def dim(self) -> int:
        return max((len(f) for f in self.facets), default=0) - 1

    def is_empty(self) -> bool:
        return not self.facets

    def simplices(self) -> list[list[tuple]]:
        """All simplices grouped by dimension, each a sorted tuple of vertex indices."""
        if self._simplices is None:
            order = {v: i for i, v in enumerate(sorted(self.vertices, key=repr))}
            by_dim: list[set[tuple]] = [set() for _ in range(self.dim + 1)]
            for f in self.facets:
                idx = tuple(sorted(order[v] for v in f))
                for k in range(1, len(idx) + 1):
                    by_dim[k - 1].update(combinations(idx, k))
            self._simplices = [sorted(s) for s in by_dim]
        return self._simplices

    @classmethod
    def from_layers(cls, layers: Sequence[Sequence[tuple]]) -> "SimplicialComplex":
        """Build from all simplices by dimension, vertices being ints ``0..n-1``.

        Used for order complexes, where chains are enumerated directly.
        """
        tops = []
        seen: set[tuple] = set()
        for k in range(len(layers) - 1, -1, -1):
            for s in layers[k]:
                if s not in seen:
                    tops.append(s)
                for i in range(len(s)):
                    seen.add(s[:i] + s[i + 1:])
        cx = cls.__new__(cls)
        cx.facets = tuple(frozenset(f) for f in tops)
        cx._simplices = [sorted(layer) for layer in layers if layer]
        return cx

    def barycentric_subdivision(self) -> "SimplicialComplex":
        faces = [s for layer in self.simplices() for s in layer]
        # chains of faces ordered by inclusion
        up: dict[tuple, list[tuple]] = {s: [] for s in faces}
        fs = {s: frozenset(s) for s in faces}
        for s in faces:
            for t in faces:
                if len(t) > len(s) and fs[s] < fs[t]:
                    up[s].append(t)
        facets: list[tuple] = []

        def extend(chain: list[tuple]) -> None:
            nxt = up[chain[-1]]
            if not nxt:
                facets.append(tuple(chain))
                return
            for t in nxt:
                if len(t) == len(chain[-1]) + 1:
                    extend(chain + [t])

        for s in faces:
            if len(s) == 1:
                extend([s])
        return SimplicialComplex(facets)

    def __repr__(self) -> str:
        return f"SimplicialComplex(dim={self.dim}, facets={len(self.facets)})"


@dataclass(frozen=True)
class ChainComplex:
    """Simplicial chain complex over GF(2).

    ``boundaries[k]`` lists, for each k-simplex, the bitset of its (k-1)-faces;
    ``boundaries[0]`` is all zeros.
    """

    ranks: tuple[int, ...]
    boundaries: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        for k in range(1, len(self.boundaries) - 1):
            lower = self.boundaries[k]
            for row in self.boundaries[k + 1]:
                acc = 0
                r = row
                while r:
                    low = r & -r
                    acc ^= lower[low.bit_length() - 1]
                    r ^= low
                if acc:
                    raise ValueError(f"boundary of boundary is nonzero in degree {k + 1}")


def from_complex(cx: SimplicialComplex) -> ChainComplex:
    layers = cx.simplices()
    index = [{s: i for i, s in enumerate(layer)} for layer in layers]
    bds: list[tuple[int, ...]] = []
    for k, layer in enumerate(layers):
        if k == 0:
            bds.append(tuple(0 for _ in layer))
            continue
        rows = []
        lower = index[k - 1]
        for s in layer:
            bits = 0
            for i in range(len(s)):
                bits |= 1 << lower[s[:i] + s[i + 1:]]
            rows.append(bits)
        bds.append(tuple(rows))
    return ChainComplex(tuple(len(layer) for layer in layers), tuple(bds))


def gf2_rank(rows: Iterable[int]) -> int:
    """Rank over GF(2) of a matrix whose rows are given as int bitsets."""
    pivots: dict[int, int] = {}
    rank = 0
    for row in rows:
        while row:
            p = row.bit_length() - 1
            if p in pivots:
                row ^= pivots[p]
            else:
                pivots[p] = row
                rank += 1
                break
    return rank


def betti(cc: ChainComplex) -> list[int]:
    ranks = [gf2_rank(b) for b in cc.boundaries] + [0]
    out = [cc.ranks[k] - ranks[k] - ranks[k + 1] for k in range(len(cc.ranks))]
    chi_ranks = sum((-1) ** k * n for k, n in enumerate(cc.ranks))
    chi_betti = sum((-1) ** k * b for k, b in enumerate(out))
    assert chi_ranks == chi_betti, "Euler characteristic mismatch"
    return out


def reduced_betti(cc: ChainComplex) -> dict[int, int]:
    """Nonzero reduced Betti numbers keyed by degree; the empty complex has degree -1."""
    if not cc.ranks or cc.ranks[0] == 0:
        return {-1: 1}
    b = betti(cc)
    b[0] -= 1
    return {k: v for k, v in enumerate(b) if v}


def euler_characteristic(cx: SimplicialComplex | ChainComplex) -> int:
    cc = from_complex(cx) if isinstance(cx, SimplicialComplex) else cx
    return sum((-1) ** k * n for k, n in enumerate(cc.ranks))


def _as_chain(cx: SimplicialComplex | ChainComplex) -> ChainComplex:
    return from_complex(cx) if isinstance(cx, SimplicialComplex) else cx


def is_homology_sphere(cx: SimplicialComplex | ChainComplex, k: int) -> bool:
    """Reduced GF(2) homology is one class in degree ``k``; ``k = -1`` means empty."""
    return reduced_betti(_as_chain(cx)) == {k: 1}


def is_homology_ball(cx: SimplicialComplex | ChainComplex) -> bool:
    """Nonempty with vanishing reduced GF(2) homology."""
    return reduced_betti(_as_chain(cx)) == {}
