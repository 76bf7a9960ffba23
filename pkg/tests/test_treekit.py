from __future__ import annotations

import json
import re
from functools import lru_cache
from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from operadforge.treekit import (
    ContractionError,
    Scheme,
    act,
    codim,
    contract,
    contraction_between,
    contractions_from,
    corolla,
    elementary_decompose,
    enumerate_colored,
    enumerate_trees,
    five_to_rbw,
    is_legal,
    is_legal_words,
    make_tree,
    relabel,
    rw_to_rbw,
    tree_from_json,
    tree_to_dot,
    tree_to_json,
)


# independent oracles ------------------------------------------------------------------


def _set_partitions(items):
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in _set_partitions(rest):
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1 :]
        yield [[first]] + part


@lru_cache(maxsize=None)
def _count_trees(n: int) -> int:
    """Trees on n labels: a root label set plus child trees on blocks of size >= 2."""
    total = 0
    items = list(range(n))
    for r in range(n + 1):
        for root in combinations(items, r):
            rest = [x for x in items if x not in root]
            for part in _set_partitions(rest):
                if any(len(b) < 2 for b in part) or r + len(part) < 2:
                    continue
                prod = 1
                for b in part:
                    prod *= _count_trees(len(b))
                total += prod
    return total


def _rbw_path_ok(tree) -> bool:
    # every path read from the root down is B* W? R*
    pat = re.compile(r"B*W?R*")
    for v in tree.vertices:
        word = []
        u = v
        while u >= 0:
            word.append(tree.colors[u])
            u = tree.parent[u]
        if not pat.fullmatch("".join(reversed(word))):
            return False
    return True


def _count_colorings(n: int, colors: str, ok) -> int:
    from itertools import product

    total = 0
    for t in enumerate_trees(n):
        for cols in product(colors, repeat=len(t)):
            if ok(t, cols):
                total += 1
    return total


_RANK = {"R": 0, "V": 1, "O": 2, "W": 3, "B": 4}


def _five_ok(t, cols) -> bool:
    for v in t.vertices:
        p = t.parent[v]
        if p < 0:
            continue
        a, b = cols[v], cols[p]
        if _RANK[a] > _RANK[b] or (a == b and a in "VW"):
            return False
    return True


FIGURE_SOURCE = make_tree(
    {"a": [5], "b": [1], "c": [2, 6], "d": [3, 9], "e": [], "f": [4, 8], "g": [7, 10, 11]},
    {"b": "a", "c": "b", "d": "a", "e": "a", "f": "e", "g": "e"},
    {"a": "B", "b": "R", "c": "R", "d": "B", "e": "W", "f": "R", "g": "R"},
)
FIGURE_TARGET = make_tree(
    {"r": [3, 4, 5, 8, 9], "x": [1, 2, 6], "y": [7, 10, 11]},
    {"x": "r", "y": "r"},
    {"r": "W", "x": "R", "y": "R"},
)


# enumeration ------------------------------------------------------------------------------


@pytest.mark.parametrize("n,expected", [(2, 1), (3, 4), (4, 26), (5, 236)])
def test_tree_counts_match_oracle(n, expected):
    assert _count_trees(n) == expected
    assert len(enumerate_trees(n)) == expected


def test_trees_are_distinct_and_valid():
    trees = enumerate_trees(4)
    assert len(set(trees)) == len(trees)
    for t in trees:
        assert t.label_set == frozenset(range(1, 5))
        assert all(t.arity(v) >= 2 for v in t.vertices)


def _colored(t, cols, scheme=Scheme.RBW):
    return make_tree(
        {str(v): sorted(t.labels[v]) for v in t.vertices},
        {str(v): str(t.parent[v]) for v in t.vertices if t.parent[v] >= 0},
        {str(v): cols[v] for v in t.vertices},
        scheme,
    )


@pytest.mark.parametrize("n,expected", [(2, 3), (3, 18), (4, 170)])
def test_rbw_counts(n, expected):
    assert _count_colorings(n, "RBW", lambda t, cols: _rbw_path_ok(_colored(t, cols))) == expected
    assert len(enumerate_colored(n, Scheme.RBW)) == expected


@pytest.mark.parametrize("n,expected", [(2, 5), (3, 44)])
def test_five_color_counts(n, expected):
    assert _count_colorings(n, "RVOWB", _five_ok) == expected
    assert len(enumerate_colored(n, Scheme.FIVE)) == expected


@pytest.mark.parametrize("scheme", list(Scheme))
def test_pair_and_word_legality_agree(scheme):
    from itertools import product

    for n in (2, 3, 4):
        for t in enumerate_trees(n):
            for cols in product(scheme.colors, repeat=len(t)):
                tree = _colored(t, cols, scheme)
                assert is_legal(tree) == is_legal_words(tree)


def test_single_label_is_a_domain_error():
    with pytest.raises(ValueError):
        enumerate_trees(1)


# relabeling ---------------------------------------------------------------------------------

perm4 = st.permutations([1, 2, 3, 4])


@given(st.sampled_from(enumerate_colored(4, Scheme.RBW)), perm4, perm4)
@settings(max_examples=60, deadline=None)
def test_action_is_a_group_action(t, p, q):
    pq = tuple(p[q[i] - 1] for i in range(4))
    assert act(p, act(q, t)) == act(pq, t)
    inv = [0] * 4
    for i, x in enumerate(p):
        inv[x - 1] = i + 1
    assert act(inv, act(p, t)) == t


@given(st.sampled_from(enumerate_colored(4, Scheme.RBW)), perm4)
@settings(max_examples=60, deadline=None)
def test_relabeling_preserves_legality_and_codim(t, p):
    s = act(p, t)
    assert is_legal(s)
    assert codim(s) == codim(t)


def test_relabel_with_mapping():
    t = corolla([1, 2], "R")
    assert relabel(t, {1: 5, 2: 7}).label_set == frozenset({5, 7})


# contractions -------------------------------------------------------------------------------


def test_figure_contraction():
    assert codim(FIGURE_SOURCE) == 6
    c = contraction_between(FIGURE_SOURCE, FIGURE_TARGET)
    assert c is not None
    assert c.codim == 4
    assert [k for k, _ in elementary_decompose(c)] == [2, 5, 3, 6]


def test_contraction_between_is_unique_and_composes():
    for t in enumerate_colored(3, Scheme.RBW):
        targets = [c.target for c in contractions_from(t)]
        assert len(targets) == len(set(targets))
        for c in contractions_from(t):
            for d in contractions_from(c.target):
                e = c.then(d)
                assert contraction_between(t, d.target).vmap == e.vmap
                assert e.codim == c.codim + d.codim


def test_contract_rejects_bad_systems():
    t = FIGURE_SOURCE
    with pytest.raises(ContractionError) as err:
        contract(t, [((0,), "B")])
    assert err.value.code == "not-partition"
    with pytest.raises(ContractionError):
        contract(t, [(tuple(t.vertices), "R")])


@given(st.sampled_from([c for n in (3, 4) for t in enumerate_colored(n, Scheme.RBW) for c in contractions_from(t)]))
@settings(max_examples=80, deadline=None)
def test_elementary_steps_recompose(c):
    steps = elementary_decompose(c)
    assert len(steps) == c.codim
    comp = steps[0][1]
    for _, s in steps[1:]:
        comp = comp.then(s)
    assert comp.target == c.target and comp.vmap == c.vmap
    assert all(1 <= k <= 6 for k, _ in steps)


# functors and serialisation -----------------------------------------------------------------


def test_functors_land_in_rbw():
    for t in enumerate_colored(3, Scheme.FIVE):
        assert is_legal(five_to_rbw(t))
    for t in enumerate_colored(3, Scheme.RWLOCAL):
        assert is_legal(rw_to_rbw(t))


def test_json_round_trip_and_dot():
    for t in enumerate_colored(3, Scheme.RBW):
        data = json.loads(json.dumps(tree_to_json(t)))
        assert tree_from_json(data) == t
    dot = tree_to_dot(FIGURE_SOURCE)
    assert "red" in dot and "blue" in dot
