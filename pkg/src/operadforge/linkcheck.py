"""Posets of intermediate contractions and the certificates built on them.

``P_c`` for a contraction c: T -> T' is the poset of nontrivial contractions
T -> T'' that factor through c, ordered by further contraction; ``P_T`` is the
case T' = the white corolla.  Ball and sphere claims are certified by
CW-poset checks plus GF(2) homology.
"""

from __future__ import annotations

import logging
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import product as _iproduct
from typing import Any, Callable, Iterable, Sequence

from .gf2homology import is_homology_ball, is_homology_sphere
from .polykit import face_lattice, five_blocks, height_polytope_five, height_polytope_rbw
from .posetkit import (
    FinPoset,
    antichain,
    chain_complex,
    euler_of,
    is_cw_poset,
    is_order_iso,
    join,
    opposite,
    poset_iso,
    suspension,
)
from .treekit import (
    ColoredTree,
    Contraction,
    Scheme,
    _block_colors_ok,
    _block_root,
    codim,
    contract,
    contraction_between,
    contractions_from,
    corolla,
    elementary_decompose,
    enumerate_colored,
    is_legal_words,
    tree_to_json,
    _WORDS,
)

log = logging.getLogger(__name__)

__all__ = [
    "LinkPoset",
    "Certificate",
    "link_poset",
    "tree_link",
    "system_poset",
    "verify_sys_iso",
    "verify_join_decomposition",
    "verify_link_ball",
    "verify_five_link",
    "verify_rwlocal_link",
    "verify_elementary",
    "check_cone_lemma",
    "check_branch_lemma",
    "height_map",
    "block_tree",
    "sweep",
]


@dataclass
class LinkPoset:
    base: Contraction | None
    poset: FinPoset

    @property
    def boundary(self) -> FinPoset:
        if len(self.poset) == 0:
            return self.poset
        top = self.poset.maximal()
        if len(top) != 1:
            raise ValueError("link poset has no unique maximum")
        return self.poset.subposet(i for i in range(len(self.poset)) if i != top[0])


@dataclass
class Certificate:
    kind: str
    subject: str
    checks: dict[str, bool] = field(default_factory=dict)
    details: dict[str, Any] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(self.checks.values())

    def to_json(self) -> dict:
        return {"kind": self.kind, "subject": self.subject, "ok": self.ok, "checks": self.checks, "details": self.details}


# posets of contractions ----------------------------------------------------------


def _order_targets(cs: Sequence[Contraction]) -> FinPoset:
    below = []
    for j, b in enumerate(cs):
        bits = 0
        for i, a in enumerate(cs):
            if i != j and contraction_between(a.target, b.target) is not None:
                bits |= 1 << i
        below.append(bits)
    return FinPoset(list(cs), below)


def tree_link(T: ColoredTree) -> FinPoset:
    """All nontrivial contractions out of T, ordered by further contraction."""
    return _order_targets(list(contractions_from(T)))


def link_poset(c: Contraction) -> LinkPoset:
    if c.is_trivial:
        raise ValueError("the link of a trivial contraction is undefined")
    mids = [d for d in contractions_from(c.source) if contraction_between(d.target, c.target) is not None]
    return LinkPoset(c, _order_targets(mids))


def _to_white(T: ColoredTree) -> Contraction | None:
    return contraction_between(T, corolla(T.label_set, "W", T.scheme))


# contraction systems ---------------------------------------------------------------

System = frozenset  # of (frozenset(block), color)


def _connected_partitions(T: ColoredTree) -> Iterable[list[tuple[int, ...]]]:
    edges = [v for v in T.vertices if T.parent[v] >= 0]
    for mask in range(1 << len(edges)):
        owner = list(T.vertices)
        for k, v in enumerate(edges):
            if mask >> k & 1:
                a, b = owner[v], owner[T.parent[v]]
                if a != b:
                    owner = [b if o == a else o for o in owner]
        groups: dict[int, list[int]] = {}
        for v in T.vertices:
            groups.setdefault(owner[v], []).append(v)
        yield [tuple(g) for g in groups.values()]


def _quotient_legal(T: ColoredTree, blocks: Sequence[Sequence[int]], colors: Sequence[str]) -> bool:
    # legality of T/Theta checked on leaf-to-root words of the quotient
    owner = {}
    for b, blk in enumerate(blocks):
        for v in blk:
            owner[v] = b
    parent = []
    for blk in blocks:
        r = _block_root(T, blk)
        p = T.parent[r]
        parent.append(owner[p] if p >= 0 else -1)
    has_child = {p for p in parent if p >= 0}
    for b in range(len(blocks)):
        if b in has_child:
            continue
        word = []
        x = b
        while x >= 0:
            word.append(colors[x])
            x = parent[x]
        if not _word_ok(T.scheme, "".join(word)):
            return False
    return True


def _word_ok(scheme: Scheme, word: str) -> bool:
    return _WORDS[scheme].fullmatch(word) is not None


def contraction_systems(T: ColoredTree) -> list[System]:
    """All nontrivial contraction systems of T.

    Singleton blocks may keep their color; only the all-identity system is dropped.
    """
    out = []
    for blocks in _connected_partitions(T):
        opts = [[c for c in T.scheme.colors if _block_colors_ok(T, b, c)] for b in blocks]
        for cols in _iproduct(*opts):
            if all(len(b) == 1 and T.colors[b[0]] == c for b, c in zip(blocks, cols)):
                continue
            if _quotient_legal(T, blocks, cols):
                out.append(frozenset((frozenset(b), c) for b, c in zip(blocks, cols)))
    return out


def system_leq(a: System, b: System) -> bool:
    for blk, col in a:
        host = next((h for h in b if blk <= h[0]), None)
        if host is None:
            return False
        if host[1] in "RB" and col != host[1]:
            return False
    return True


def system_poset(T: ColoredTree) -> FinPoset:
    systems = contraction_systems(T)
    below = []
    for j, b in enumerate(systems):
        bits = 0
        for i, a in enumerate(systems):
            if i != j and system_leq(a, b):
                bits |= 1 << i
        below.append(bits)
    return FinPoset(systems, below)


def system_of(c: Contraction) -> System:
    return frozenset((frozenset(blk), col) for blk, col in c.blocks())


def verify_sys_iso(T: ColoredTree) -> Certificate:
    cert = Certificate("sys-iso", T.describe())
    to_w = _to_white(T)
    if to_w is not None and not to_w.is_trivial:
        P = link_poset(to_w).poset
    else:
        P = FinPoset([], [])
    S = system_poset(T)
    sidx = S.index
    fwd = {}
    ok_map = True
    for i, c in enumerate(P.elements):
        s = system_of(c)
        if s not in sidx:
            ok_map = False
            cert.details.setdefault("unmatched", []).append(c.target.describe())
            continue
        fwd[i] = sidx[s]
    back_ok = True
    for s in S.elements:
        target, _ = contract(T, [(tuple(b), col) for b, col in s])
        if not any(c.target == target for c in P.elements):
            back_ok = False
    cert.checks["same-size"] = len(P) == len(S)
    cert.checks["forward-defined"] = ok_map
    cert.checks["backward-defined"] = back_ok
    cert.checks["order-iso"] = ok_map and is_order_iso(P, S, fwd)
    cert.details["size"] = len(P)
    return cert


# join decomposition --------------------------------------------------------------------


def block_tree(T: ColoredTree, block: Sequence[int]) -> tuple[ColoredTree, dict[int, int]]:
    """The subtree on ``block`` as a standalone tree.

    Each child outside the block is replaced by its smallest subtree label.
    Returns the tree and the map from block vertices to its canonical vertices.
    """
    block = sorted(block)
    pos = {v: k for k, v in enumerate(block)}
    labels = []
    parent = []
    for v in block:
        lab = set(T.labels[v])
        for c in T.children[v]:
            if c not in pos:
                lab.add(T.min_label(c))
        labels.append(frozenset(lab))
        p = T.parent[v]
        parent.append(pos[p] if p in pos else -1)
    from .treekit import _canonical

    lab, par, col, perm = _canonical(labels, parent, [T.colors[v] for v in block])
    sub = ColoredTree._raw(lab, par, col, T.scheme)
    return sub, {v: perm[pos[v]] for v in block}


def verify_join_decomposition(T: ColoredTree, theta: System) -> Certificate:
    cert = Certificate("join-decomp", f"{T.describe()} | {sorted((sorted(b), c) for b, c in theta)}")
    blocks = sorted(((tuple(sorted(b)), c) for b, c in theta))
    factors = []  # per block: list of systems on T (as sets of pairs) incl. the trivial one first
    links = []
    for blk, eta in blocks:
        sub, vm = block_tree(T, blk)
        inv = {w: v for v, w in vm.items()}
        trivial = frozenset((frozenset({v}), T.colors[v]) for v in blk)
        top = corolla(sub.label_set, eta, T.scheme)
        c = contraction_between(sub, top)
        if c is None:
            cert.checks["block-contracts"] = False
            return cert
        opts = [trivial]
        if not c.is_trivial:
            cap = system_of(c)
            for s in contraction_systems(sub):
                if system_leq(s, cap):
                    opts.append(frozenset((frozenset(inv[w] for w in b), col) for b, col in s))
            links.append(link_poset(c).poset)
        else:
            links.append(FinPoset([], []))
        factors.append(opts)
    whole = [s for s in contraction_systems(T) if system_leq(s, theta)]
    identity = frozenset((frozenset({v}), T.colors[v]) for v in T.vertices)
    whole_set = set(whole) | {identity}
    images = {}
    for combo in _iproduct(*(range(len(f)) for f in factors)):
        s = frozenset().union(*(factors[k][i] for k, i in enumerate(combo)))
        images[combo] = s
    cert.checks["union-injective"] = len(set(images.values())) == len(images)
    cert.checks["union-onto"] = set(images.values()) == whole_set
    # componentwise order versus system order (index 0 is the added bottom)

    def fleq(k: int, i: int, j: int) -> bool:
        if i == 0:
            return True
        if j == 0:
            return False
        return system_leq(factors[k][i], factors[k][j])

    mono = True
    items = list(images.items())
    for a, sa in items:
        for b, sb in items:
            comp = all(fleq(k, i, j) for k, (i, j) in enumerate(zip(a, b)))
            sys_le = sa == sb or sa == identity or (sb != identity and system_leq(sa, sb))
            if comp != sys_le:
                mono = False
                break
        if not mono:
            break
    cert.checks["order-iso"] = mono
    # link of T -> T/Theta against the join of the block links
    target, c = contract(T, [(b, col) for b, col in blocks])
    left = link_poset(c).poset if not c.is_trivial else FinPoset([], [])
    right = join(*links) if links else FinPoset([], [])
    cert.checks["link-join-iso"] = poset_iso(left, right) is not None
    cert.details["sizes"] = [len(left), len(right)]
    return cert


# link balls -------------------------------------------------------------------------


def height_map(T: ColoredTree, face, scheme: Scheme | None = None) -> tuple[ColoredTree, Contraction]:
    """The contraction read off a face's relative-interior height function."""
    scheme = scheme or T.scheme
    H = height_polytope_rbw(T) if scheme is Scheme.RBW else height_polytope_five(T)
    h = {}
    for i, v in enumerate(H.variables):
        h[v] = face.witness[i]
    pinned = {"W": 0} if scheme is Scheme.RBW else {"W": -1, "V": 1}
    for v in T.vertices:
        if v not in h:
            h[v] = pinned[T.colors[v]]
    owner = list(T.vertices)
    for v in T.top_down:
        p = T.parent[v]
        if p >= 0 and h[v] == h[p]:
            owner[v] = owner[p]
    groups: dict[int, list[int]] = {}
    for v in T.vertices:
        groups.setdefault(owner[v], []).append(v)
    system = []
    for blk in groups.values():
        x = h[blk[0]]
        if scheme is Scheme.RBW:
            col = "R" if x > 0 else "B" if x < 0 else "W"
        else:
            col = "R" if x > 1 else "V" if x == 1 else "O" if x > -1 else "W" if x == -1 else "B"
        system.append((blk, col))
    return contract(T, system)


def verify_link_ball(c: Contraction, *, polytope: bool = True) -> Certificate:
    T = c.source
    cert = Certificate("link-ball", f"{T.describe()} -> {c.target.describe()}")
    lp = link_poset(c)
    P = lp.poset
    k = c.codim
    ok, fails = is_cw_poset(P)
    cert.checks["a:cw-poset"] = ok
    if fails:
        cert.details["cw-failures"] = [str(f) for f in fails[:3]]
    cert.checks["max-chain"] = P.dim() == k - 1
    bd = lp.boundary
    cc = chain_complex(bd)
    cert.checks["c:boundary-sphere"] = is_homology_sphere(cc, k - 2)
    chi = euler_of(bd)
    cert.checks["d:euler"] = chi == 1 + (-1) ** (k - 2)
    cert.checks["ball-euler"] = euler_of(P) == 1 and is_homology_ball(chain_complex(P))
    if polytope:
        full = _to_white(T)
        PT = link_poset(full).poset if full is not None and not full.is_trivial else FinPoset([], [])
        F = face_lattice(height_polytope_rbw(T))
        # explicit map I and an independent isomorphism search
        idx = {d.target: i for i, d in enumerate(PT.elements)}
        imap = {}
        good = len(F) == len(PT)
        for i, face in enumerate(F.elements):
            tgt, _ = height_map(T, face)
            if tgt not in idx:
                good = False
                break
            imap[i] = idx[tgt]
        Fop = opposite(F)
        cert.checks["b:height-map-iso"] = good and is_order_iso(Fop, PT, imap)
        if c.target.is_corolla and c.target.colors[0] == "W":
            cert.checks["b:poset-iso"] = poset_iso(Fop, PT) is not None
        # (e): P_c is the lower interval below c, i.e. the faces containing F_c
        if good:
            cpos = idx.get(c.target)
            lower = {i for i in range(len(PT)) if PT.leq(i, cpos)} if cpos is not None else set()
            cert.checks["e:interval"] = {d.target for d in P.elements} == {PT.elements[i].target for i in lower}
            back = {v: u for u, v in imap.items()}
            fc = back.get(cpos)
            faces_above = {i for i in range(len(F)) if fc is not None and F.leq(fc, i)}
            cert.checks["e:subpolytope"] = {imap[i] for i in faces_above} == lower
    cert.details["codim"] = k
    cert.details["size"] = len(P)
    return cert


def verify_five_link(T: ColoredTree) -> Certificate:
    if T.scheme is not Scheme.FIVE:
        raise ValueError("expected a five-colored tree")
    cert = Certificate("five-link", T.describe())
    F = face_lattice(height_polytope_five(T))
    P = opposite(F)
    blocks = five_blocks(T)
    lat = {c: face_lattice(H) for c, H in blocks.items()}
    J = join(*(opposite(lat[c]) for c in "RBO"))
    cert.checks["join-of-blocks"] = poset_iso(P, J) is not None
    for c in "RB":
        if blocks[c].dim:
            cert.checks[f"{c}-block-ball"] = is_homology_ball(chain_complex(lat[c]))
    nO = blocks["O"].dim
    if nO:
        cert.checks["O-block-sphere"] = is_homology_sphere(chain_complex(lat["O"]), nO - 1)
    nhat = sum(blocks[c].dim for c in "RBO")
    cc = chain_complex(P)
    if blocks["R"].dim or blocks["B"].dim:
        cert.checks["link-ball"] = is_homology_ball(cc) and P.dim() == nhat - 1
    else:
        cert.checks["link-sphere"] = is_homology_sphere(cc, nhat - 1)
    cert.checks["cw-poset"] = is_cw_poset(P)[0]
    # second route: the five-colored contractions out of T
    Q = tree_link(T)
    idx = {d.target: i for i, d in enumerate(Q.elements)}
    imap = {}
    good = len(Q) == len(P)
    for i, face in enumerate(F.elements):
        tgt, _ = height_map(T, face)
        if tgt not in idx:
            good = False
            break
        imap[i] = idx[tgt]
    cert.checks["contraction-route"] = good and is_order_iso(P, Q, imap)
    cert.details["size"] = len(P)
    return cert


def _drop_leaf(T: ColoredTree, v: int) -> ColoredTree:
    """Remove the leaf vertex v; its smallest label moves to the parent."""
    keep = [u for u in T.vertices if u != v]
    pos = {u: k for k, u in enumerate(keep)}
    labels = []
    parent = []
    for u in keep:
        lab = set(T.labels[u])
        if u == T.parent[v]:
            lab.add(min(T.labels[v]))
        labels.append(lab)
        p = T.parent[u]
        parent.append(pos[p] if p >= 0 else -1)
    return ColoredTree(labels, parent, [T.colors[u] for u in keep], T.scheme)


def verify_rwlocal_link(T: ColoredTree) -> Certificate:
    if T.scheme is not Scheme.RWLOCAL:
        raise ValueError("expected an RW-local tree")
    cert = Certificate("rwlocal-link", T.describe())
    P = tree_link(T)
    r = sum(1 for c in T.colors if c == "R")
    cc = chain_complex(P)
    if T.colors[T.root] == "W":
        cert.checks["sphere"] = is_homology_sphere(cc, r - 1)
    else:
        cert.checks["ball"] = is_homology_ball(cc) and P.dim() == r - 1
    cert.checks["cw-poset"] = is_cw_poset(P)[0]
    # one reduction step: a white leaf is inert, a red leaf suspends
    if len(T) > 1:
        leaves = [v for v in T.vertices if not T.children[v]]
        v = leaves[0]
        Tp = _drop_leaf(T, v)
        Pp = tree_link(Tp)
        if T.colors[v] == "W":
            cert.checks["white-leaf-inert"] = poset_iso(P, Pp) is not None
        else:
            cert.checks["red-leaf-suspends"] = poset_iso(P, join(Pp, antichain(2))) is not None
        cert.details["reduced"] = Tp.describe()
    cert.details["red"] = r
    cert.details["size"] = len(P)
    return cert


# cone and suspension lemmas ------------------------------------------------------------


def _white_link(T: ColoredTree) -> FinPoset:
    c = _to_white(T)
    if c is None or c.is_trivial:
        return FinPoset([], [])
    return link_poset(c).poset


def cone_reduction(T: ColoredTree, v: int) -> ColoredTree:
    """R(T, v) for a red leaf vertex v."""
    p = T.parent[v]
    if T.colors[v] != "R" or T.children[v] or p < 0:
        raise ValueError("v must be a red leaf vertex with a parent")
    if T.colors[p] in "RW":
        system = [((u,), T.colors[u]) for u in T.vertices if u not in (v, p)]
        system.append(((v, p), T.colors[p]))
        return contract(T, system)[0]
    cols = list(T.colors)
    cols[v] = "W"
    return T.recolor(cols)


def check_cone_lemma(T: ColoredTree, v: int) -> bool:
    from .posetkit import cone

    return poset_iso(_white_link(T), cone(_white_link(cone_reduction(T, v)))) is not None


def branches(T: ColoredTree) -> list[ColoredTree]:
    out = []
    for c in T.children[T.root]:
        stack = [c]
        blk = []
        while stack:
            u = stack.pop()
            blk.append(u)
            stack.extend(T.children[u])
        out.append(block_tree(T, blk)[0])
    return out


def check_branch_lemma(T: ColoredTree) -> bool:
    """Boundary of P_T versus the join of suspended branch boundaries (no red vertices)."""
    if "R" in T.colors:
        raise ValueError("the branch lemma is for trees without red vertices")
    left = _white_link(T)
    if len(left):
        left = LinkPoset(None, left).boundary
    parts = []
    for br in branches(T):
        if br.colors[br.root] == "B":
            bd = LinkPoset(None, _white_link(br)).boundary
            parts.append(suspension(bd))
    right = join(*parts) if parts else FinPoset([], [])
    return poset_iso(left, right) is not None


# sweeps ---------------------------------------------------------------------------------


def verify_elementary(c: Contraction) -> Certificate:
    """Factor into elementary steps, recompose, and compare lengths with codim."""
    checks = {}
    try:
        steps = elementary_decompose(c)
    except (AssertionError, ValueError) as exc:
        return Certificate("elementary", repr(c), {"decomposes": False}, {"error": str(exc)})
    checks["decomposes"] = True
    comp = None
    for _, st in steps:
        comp = st if comp is None else comp.then(st)
    checks["recomposes"] = comp is not None and comp.target == c.target and comp.vmap == c.vmap
    checks["length-is-codim"] = len(steps) == c.codim
    return Certificate("elementary", repr(c), checks, {"types": [k for k, _ in steps]})


def _job(args) -> list[dict]:
    kind, data = args
    T = data
    out = []
    if kind == "links":
        for c in contractions_from(T):
            out.append(verify_link_ball(c).to_json())
    elif kind == "elementary":
        for c in contractions_from(T):
            out.append(verify_elementary(c).to_json())
    elif kind == "join-decomp":
        for s in contraction_systems(T):
            out.append(verify_join_decomposition(T, s).to_json())
        out.append(verify_sys_iso(T).to_json())
    elif kind == "five":
        out.append(verify_five_link(T).to_json())
    elif kind == "rwlocal":
        out.append(verify_rwlocal_link(T).to_json())
    for d in out:
        if not d["ok"]:
            d["tree"] = tree_to_json(T)
    return out


_SWEEP_SCHEME = {"links": Scheme.RBW, "elementary": Scheme.RBW, "join-decomp": Scheme.RBW, "five": Scheme.FIVE, "rwlocal": Scheme.RWLOCAL}


def sweep(
    kind: str,
    labels_max: int = 4,
    *,
    workers: int = 1,
    sample5: int = 0,
    seed: int = 0,
    progress: Callable[[int], None] | None = None,
) -> list[dict]:
    """Run a certificate suite over every tree with 2..labels_max labels.

    ``sample5`` adds that many seeded random trees on five labels.
    Results come back in corpus order whatever the worker count.
    """
    if kind not in _SWEEP_SCHEME:
        raise ValueError(f"unknown sweep {kind!r}")
    if labels_max < 2:
        raise ValueError("labels_max must be at least 2")
    scheme = _SWEEP_SCHEME[kind]
    corpus = [t for n in range(2, labels_max + 1) for t in enumerate_colored(n, scheme)]
    if sample5:
        pool = enumerate_colored(5, scheme)
        corpus += random.Random(seed).sample(pool, min(sample5, len(pool)))
    jobs = [(kind, t) for t in corpus]
    results: list[dict] = []
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            for chunk in ex.map(_job, jobs, chunksize=8):
                results.extend(chunk)
    else:
        for k, j in enumerate(jobs):
            results.extend(_job(j))
            if progress:
                progress(k)
    log.info("sweep %s: %d certificates", kind, len(results))
    return results
