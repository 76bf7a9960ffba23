from __future__ import annotations

import pytest

from operadforge.linkcheck import (
    Certificate,
    LinkPoset,
    branches,
    check_branch_lemma,
    check_cone_lemma,
    link_poset,
    sweep,
    tree_link,
    verify_elementary,
    verify_link_ball,
)
from operadforge.posetkit import FinPoset, euler_of
from operadforge.treekit import Scheme, contraction_between, contractions_from, corolla, enumerate_colored, make_tree

RBW3 = [t for n in (2, 3) for t in enumerate_colored(n, Scheme.RBW)]
RBW4 = RBW3 + enumerate_colored(4, Scheme.RBW)


@pytest.mark.parametrize("kind", ["links", "elementary", "join-decomp", "five", "rwlocal"])
def test_small_sweeps_pass(kind):
    res = sweep(kind, 3)
    assert res
    bad = [r for r in res if not r["ok"]]
    assert not bad, bad[:1]


def test_sweep_order_is_independent_of_workers():
    assert sweep("elementary", 3, workers=2) == sweep("elementary", 3, workers=1)


def test_sweep_arguments():
    with pytest.raises(ValueError):
        sweep("nonsense", 3)
    with pytest.raises(ValueError):
        sweep("links", 1)
    assert len(sweep("rwlocal", 2, sample5=3, seed=1)) == len(sweep("rwlocal", 2)) + 3


def test_link_of_a_two_vertex_tree():
    t = make_tree({"r": [1], "c": [2, 3]}, {"c": "r"}, {"r": "B", "c": "R"})
    c = contraction_between(t, corolla([1, 2, 3], "W"))
    assert c is not None and c.codim == 2
    cert = verify_link_ball(c)
    assert cert.ok, cert.to_json()
    # a 1-ball: an edge with its two endpoints
    assert cert.details["size"] == 3


def test_boundary_needs_a_top_element():
    with pytest.raises(ValueError):
        LinkPoset(None, FinPoset.from_covers(["a", "b"], [])).boundary


def test_certificate_is_false_when_any_check_fails():
    cert = Certificate("demo", "x", {"a": True, "b": False})
    assert not cert.ok and cert.to_json()["ok"] is False


def test_tree_links_are_balls():
    for t in RBW3:
        P = tree_link(t)
        assert len(P) == 0 or euler_of(P) == 1


def test_cone_lemma():
    seen = 0
    for t in RBW4:
        for v in t.vertices:
            if t.colors[v] == "R" and not t.children[v] and t.parent[v] >= 0:
                assert check_cone_lemma(t, v), t.describe()
                seen += 1
    assert seen > 50


def test_branch_lemma():
    trees = [t for t in RBW4 if "R" not in t.colors]
    assert len(trees) > 10
    for t in trees:
        assert check_branch_lemma(t), t.describe()
    assert len(branches(trees[-1])) == len(trees[-1].children[trees[-1].root])
    with pytest.raises(ValueError):
        check_branch_lemma(corolla([1, 2], "R"))


def test_elementary_certificates():
    for t in RBW3:
        for c in contractions_from(t):
            cert = verify_elementary(c)
            assert cert.ok and len(cert.details["types"]) == c.codim


def test_link_poset_size_grows_with_codim():
    t = enumerate_colored(4, Scheme.RBW)[-1]
    for c in contractions_from(t):
        assert link_poset(c).poset.dim() == c.codim - 1
