"""Exact rational halfspace systems and their face lattices.

A face is identified with its closed tight set: the set of inequalities that
hold with equality on its relative interior.  Feasibility with strict
inequalities is decided by Fourier-Motzkin elimination in ``Fraction``
arithmetic, which also produces a witness point.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Mapping, Sequence

from .posetkit import FinPoset
from .treekit import ColoredTree, Scheme, is_legal

__all__ = [
    "HalfspaceSystem",
    "Face",
    "feasible",
    "face_lattice",
    "height_polytope_rbw",
    "height_polytope_five",
    "five_blocks",
    "bounded_slice",
]

Q = Fraction


def _q(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


@dataclass(frozen=True)
class HalfspaceSystem:
    """Inequalities ``a . x <= b`` plus optional equalities ``a . x = b``."""

    dim: int
    inequalities: tuple[tuple[tuple[Fraction, ...], Fraction], ...]
    equalities: tuple[tuple[tuple[Fraction, ...], Fraction], ...] = ()
    variables: tuple = field(default=())

    @classmethod
    def build(
        cls,
        dim: int,
        inequalities: Iterable[tuple[Sequence, object]],
        equalities: Iterable[tuple[Sequence, object]] = (),
        variables: Sequence = (),
    ) -> "HalfspaceSystem":
        def norm(rows):
            out = []
            for a, b in rows:
                a = tuple(_q(x) for x in a)
                if len(a) != dim:
                    raise ValueError("coefficient vector has the wrong length")
                out.append((a, _q(b)))
            return tuple(out)

        variables = tuple(variables) or tuple(range(dim))
        return cls(dim, norm(inequalities), norm(equalities), variables)

    @property
    def is_cone(self) -> bool:
        return all(b == 0 for _, b in self.inequalities) and all(b == 0 for _, b in self.equalities)

    def satisfied(self, x: Sequence[Fraction], tight: Iterable[int] | None = None) -> bool:
        """Check a point; with ``tight`` given, exactly those inequalities must be tight."""
        tight = set(tight) if tight is not None else None
        for a, b in self.equalities:
            if _dot(a, x) != b:
                return False
        for i, (a, b) in enumerate(self.inequalities):
            v = _dot(a, x)
            if v > b:
                return False
            if tight is not None and (v == b) != (i in tight):
                return False
        return True

    def to_json(self) -> dict:
        enc = lambda rows: [[[str(c) for c in a], str(b)] for a, b in rows]
        return {
            "dim": self.dim,
            "variables": [str(v) for v in self.variables],
            "inequalities": enc(self.inequalities),
            "equalities": enc(self.equalities),
        }

    @classmethod
    def from_json(cls, data: dict | str) -> "HalfspaceSystem":
        if isinstance(data, str):
            data = json.loads(data)
        dec = lambda rows: [([Fraction(c) for c in a], Fraction(b)) for a, b in rows]
        return cls.build(data["dim"], dec(data["inequalities"]), dec(data.get("equalities", [])), data.get("variables", ()))


def _dot(a: Sequence[Fraction], x: Sequence[Fraction]) -> Fraction:
    return sum((ai * xi for ai, xi in zip(a, x)), Fraction(0))


@dataclass(frozen=True)
class Face:
    tight: frozenset
    witness: tuple[Fraction, ...]
    dim: int

    def __repr__(self) -> str:
        return f"Face(tight={sorted(self.tight)}, dim={self.dim})"


# Fourier-Motzkin ---------------------------------------------------------------

# a constraint is (coeffs, bound, strict): coeffs . x  (< or <=)  bound


def _eliminate(cons: list, k: int) -> list:
    pos, neg, rest = [], [], []
    for c in cons:
        a = c[0][k]
        (pos if a > 0 else neg if a < 0 else rest).append(c)
    out = list(rest)
    for ap, bp, sp in pos:
        for an, bn, sn in neg:
            lp, ln = -an[k], ap[k]  # positive multipliers cancelling x_k
            a = tuple(lp * x + ln * y for x, y in zip(ap, an))
            out.append((a, lp * bp + ln * bn, sp or sn))
    # drop exact duplicates, keeping the strict copy
    seen: dict = {}
    for a, b, s in out:
        key = (a, b)
        seen[key] = seen.get(key, False) or s
    return [(a, b, s) for (a, b), s in seen.items()]


def _fm_solve(n: int, cons: list) -> tuple[Fraction, ...] | None:
    levels = [cons]
    for k in range(n - 1, -1, -1):
        levels.append(_eliminate(levels[-1], k))
    for a, b, s in levels[-1]:
        if (s and not 0 < b) or (not s and not 0 <= b):
            return None
    x = [Fraction(0)] * n
    # back substitution: level n-k holds constraints in x_0..x_k
    for k in range(n):
        lo = hi = None
        lo_strict = hi_strict = False
        for a, b, s in levels[n - 1 - k]:
            ak = a[k]
            if ak == 0:
                continue
            r = (b - sum((a[j] * x[j] for j in range(k)), Fraction(0))) / ak
            if ak > 0:
                if hi is None or r < hi or (r == hi and s):
                    hi, hi_strict = r, s if (hi is None or r < hi) else (hi_strict or s)
            else:
                if lo is None or r > lo or (r == lo and s):
                    lo, lo_strict = r, s if (lo is None or r > lo) else (lo_strict or s)
        if lo is not None and hi is not None:
            if lo == hi:
                if lo_strict or hi_strict:
                    return None
                x[k] = lo
            else:
                x[k] = (lo + hi) / 2
        elif lo is not None:
            x[k] = lo + 1
        elif hi is not None:
            x[k] = hi - 1
    return tuple(x)


def feasible(
    H: HalfspaceSystem,
    strict: Iterable[int] = (),
    tight: Iterable[int] = (),
) -> tuple[Fraction, ...] | None:
    """A rational point of H, with inequalities in ``strict`` strict and those in
    ``tight`` held with equality, or None if no such point exists."""
    strict = set(strict)
    tight = set(tight)
    cons = []
    for a, b in H.equalities:
        cons.append((a, b, False))
        cons.append((tuple(-x for x in a), -b, False))
    for i, (a, b) in enumerate(H.inequalities):
        if i in tight:
            cons.append((a, b, False))
            cons.append((tuple(-x for x in a), -b, False))
        else:
            cons.append((a, b, i in strict))
    x = _fm_solve(H.dim, cons)
    if x is not None:
        assert H.satisfied(x), "witness fails substitution"
    return x


def _rank(rows: list[tuple[Fraction, ...]]) -> int:
    m = [list(r) for r in rows]
    rank = 0
    ncols = len(m[0]) if m else 0
    for c in range(ncols):
        piv = next((i for i in range(rank, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        for i in range(len(m)):
            if i != rank and m[i][c] != 0:
                f = m[i][c] / m[rank][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[rank])]
        rank += 1
    return rank


def face_lattice(H: HalfspaceSystem) -> FinPoset:
    """Nonempty faces with a nonempty closed tight set, ordered by inclusion.

    Every subset I of inequalities is tried as an exact tight set (tight on I,
    strict elsewhere); the feasible ones are the faces.
    """
    k = len(H.inequalities)
    faces: list[Face] = []
    for size in range(k, 0, -1):
        for I in combinations(range(k), size):
            rest = [i for i in range(k) if i not in I]
            w = feasible(H, strict=rest, tight=I)
            if w is None:
                continue
            assert H.satisfied(w, tight=I)
            rows = [H.inequalities[i][0] for i in I] + [a for a, _ in H.equalities]
            faces.append(Face(frozenset(I), w, H.dim - _rank(rows)))
    # F_I contained in F_J iff I contains J
    n = len(faces)
    below = []
    for j in range(n):
        bits = 0
        for i in range(n):
            if i != j and faces[i].tight > faces[j].tight:
                bits |= 1 << i
        below.append(bits)
    return FinPoset(faces, below)


def bounded_slice(H: HalfspaceSystem, signs: Mapping | Sequence[int]) -> HalfspaceSystem:
    """Intersect a cone with the hyperplane sum(delta_v x_v) = 1."""
    if not H.is_cone:
        raise ValueError("bounded_slice expects a cone (all bounds zero)")
    if isinstance(signs, Mapping):
        delta = tuple(_q(signs.get(v, 0)) for v in H.variables)
    else:
        delta = tuple(_q(s) for s in signs)
    return HalfspaceSystem(H.dim, H.inequalities, H.equalities + ((delta, Fraction(1)),), H.variables)


# height polytopes -------------------------------------------------------------


def _unit(n: int, i: int, s: int = 1) -> list[Fraction]:
    v = [Fraction(0)] * n
    v[i] = Fraction(s)
    return v


def height_polytope_rbw(T: ColoredTree) -> HalfspaceSystem:
    """Heights on R and B vertices: R >= 0, B <= 0, child >= parent (W fixed at 0)."""
    if not isinstance(T, ColoredTree) or T.scheme is not Scheme.RBW or not is_legal(T):
        raise ValueError("height_polytope_rbw expects a legal RBW tree")
    hat = [v for v in T.vertices if T.colors[v] != "W"]
    idx = {v: i for i, v in enumerate(hat)}
    n = len(hat)
    ineq = []
    for v in hat:
        # R: -x <= 0 ; B: x <= 0
        ineq.append((_unit(n, idx[v], -1 if T.colors[v] == "R" else 1), 0))
    for v, p in T.edges:
        if v in idx and p in idx:
            a = _unit(n, idx[p])
            a[idx[v]] = Fraction(-1)  # x_p - x_v <= 0
            ineq.append((a, 0))
    return HalfspaceSystem.build(n, ineq, (), tuple(hat))


_FIVE_PIN = {"W": Fraction(-1), "V": Fraction(1)}


def height_polytope_five(T: ColoredTree) -> HalfspaceSystem:
    """Heights on R, B, O vertices: R >= 1, B <= -1, -1 <= O <= 1, W = -1, V = 1,
    child >= parent along every edge."""
    if not isinstance(T, ColoredTree) or T.scheme is not Scheme.FIVE or not is_legal(T):
        raise ValueError("height_polytope_five expects a legal five-colored tree")
    hat = [v for v in T.vertices if T.colors[v] in "RBO"]
    idx = {v: i for i, v in enumerate(hat)}
    n = len(hat)
    ineq: list = []
    for v in hat:
        c = T.colors[v]
        if c == "R":
            ineq.append((_unit(n, idx[v], -1), -1))
        elif c == "B":
            ineq.append((_unit(n, idx[v], 1), -1))
        else:
            ineq.append((_unit(n, idx[v], -1), 1))
            ineq.append((_unit(n, idx[v], 1), 1))
    for v, p in T.edges:
        # x_p - x_v <= 0 with pinned values moved to the bound
        if v not in idx and p not in idx:
            continue
        a = [Fraction(0)] * n
        b = Fraction(0)
        if p in idx:
            a[idx[p]] += 1
        else:
            b -= _FIVE_PIN[T.colors[p]]
        if v in idx:
            a[idx[v]] -= 1
        else:
            b += _FIVE_PIN[T.colors[v]]
        ineq.append((a, b))
    return HalfspaceSystem.build(n, ineq, (), tuple(hat))


def five_blocks(T: ColoredTree) -> dict[str, HalfspaceSystem]:
    """The R, B and O factor systems, each on the vertices of one color."""
    out = {}
    for color in "RBO":
        hat = [v for v in T.vertices if T.colors[v] == color]
        idx = {v: i for i, v in enumerate(hat)}
        n = len(hat)
        ineq: list = []
        for v in hat:
            if color == "R":
                ineq.append((_unit(n, idx[v], -1), -1))
            elif color == "B":
                ineq.append((_unit(n, idx[v], 1), -1))
            else:
                ineq.append((_unit(n, idx[v], -1), 1))
                ineq.append((_unit(n, idx[v], 1), 1))
        for v, p in T.edges:
            if v in idx and p in idx:
                a = _unit(n, idx[p])
                a[idx[v]] = Fraction(-1)
                ineq.append((a, 0))
        out[color] = HalfspaceSystem.build(n, ineq, (), tuple(hat))
    return out
