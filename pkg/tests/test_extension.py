import random

import pytest
from hypothesis import given, settings, strategies as st

from bdsk.dynamics import AdmissiblePair, enumerate_admissible_pairs, make_system
from bdsk.extension import (
    ClosureError,
    Extension,
    build_subsystem,
    generated_subsystem,
    in_bar_ideal,
    iota_embed,
    partial_isometry_facets,
    projection_facets,
    structural_facets,
    tilde_equal,
    tilde_membership,
    tree_ops,
)
from bdsk.fixtures import FIXTURES, fx_arrow, fx_llw, fx_loop, fx_toep
from bdsk.ktheory import k_groups
from bdsk.randomgen import random_system

V, W = 0b01, 0b10


def test_iota_shapes():
    s = fx_arrow()
    assert iota_embed(s, (), V).nodes == (((), V),)
    assert iota_embed(s, ("e",), W).nodes == (((), 0), (("e",), W))
    assert iota_embed(s, (), 0).nodes == (((), 0),)
    with pytest.raises(ValueError):
        iota_embed(s, ("e",), V)


def test_tree_ops_examples():
    s = fx_arrow()
    ext = Extension(s)
    assert tree_ops(s, "theta:e", ext.iota((), V)) == ext.iota((), W)
    assert tree_ops(s, "join", ext.iota((), V), ext.iota((), W)) == ext.iota((), V | W)
    d = tree_ops(s, "diff", ext.iota((), V | W), ext.iota(("e",), W))
    assert d.nodes == (((), V | W), (("e",), 0))
    assert ext.value(d, ("e", "e")) == 0
    with pytest.raises(ValueError):
        tree_ops(s, "xor", d, d)


def test_null_ideal_examples():
    s = fx_arrow()
    ext = Extension(s)
    assert in_bar_ideal(s, ext.make({(): V, ("e",): 0}))
    assert not in_bar_ideal(fx_loop(), Extension(fx_loop()).iota((), 1))
    assert in_bar_ideal(s, ext.empty())


def test_tilde_equality_depends_on_j():
    s = fx_arrow()
    ext = Extension(s)
    assert tilde_equal(s, ext.iota((), V), ext.iota(("e",), W))
    s0 = make_system(["v", "w"], {"e": {"v": ["w"]}}, J=[])
    e0 = Extension(s0)
    assert not tilde_equal(s0, e0.iota((), V), e0.iota(("e",), W))


def test_membership_examples():
    s = fx_arrow()
    ext = Extension(s)
    assert tilde_membership(s, ext.iota((), V), "J")
    assert not tilde_membership(s, ext.iota((), W), "J")
    assert tilde_membership(s, ext.iota((), W), "I:e")
    # coordinate e of iota_e({w}) is {w}, but the ideal at word ee is trivial
    assert not tilde_membership(s, ext.iota(("e",), W), "I:e")
    with pytest.raises(ValueError):
        tilde_membership(s, ext.empty(), "K")


def test_subsystem_llw_frozen():
    s = fx_llw()
    sub = build_subsystem(s, AdmissiblePair(W, V | W))
    assert sub.generated.names == ["g[v|a=∅]", "g[w]"]
    doc = sub.system.to_document()
    assert doc["theta"] == {"a": {}, "b": {"g[v|a=∅]": ["g[w]"]}, "c": {"g[w]": ["g[w]"]}}
    assert doc["J"] == ["g[v|a=∅]", "g[w]"]
    r = k_groups(sub.system)
    assert (str(r.k0), str(r.k1)) == ("Z", "Z")


@pytest.mark.parametrize("name", sorted(FIXTURES))
def test_subsystem_extremes(name):
    s = FIXTURES[name]()
    full = k_groups(s)
    top = build_subsystem(s, AdmissiblePair(s.top_mask, s.top_mask))
    assert top.system.images == s.images and top.system.j_top == s.j_top
    r = k_groups(top.system)
    assert (r.k0, r.k1) == (full.k0, full.k1)
    pair = AdmissiblePair(0, s.j_top)
    if pair in list(enumerate_admissible_pairs(s)):
        assert build_subsystem(s, pair).system.n_atoms == 0


def test_toeplitz_compact_ideal():
    s = fx_toep()
    sub = build_subsystem(s, AdmissiblePair(0, 1))
    assert sub.generated.names == ["g[v|a=∅]"]
    r = k_groups(sub.system)
    assert (str(r.k0), str(r.k1)) == ("Z", "0")


def test_closure_is_enforced():
    s = fx_arrow()
    ext = Extension(s)
    with pytest.raises(ClosureError):
        generated_subsystem(ext, [ext.iota((), V)], close=False)
    closed = generated_subsystem(ext, [ext.iota((), V)], close=True)
    assert closed.names == ["g[v]", "g[w]"]
    assert closed.system.images == ((0b10, 0),)


@pytest.mark.parametrize("name", sorted(FIXTURES))
def test_facets_on_fixtures(name):
    s = FIXTURES[name]()
    ext = Extension(s)
    assert structural_facets(s, ext).passed
    assert all(r.passed for r in projection_facets(s, 3, ext))
    assert all(r.passed for r in partial_isometry_facets(s, 3, ext))


def _random_tree(ext, rng):
    s = ext.sys
    out = ext.empty()
    for _ in range(rng.randint(1, 4)):
        word = tuple(rng.choice(s.labels) for _ in range(rng.randint(0, 2)))
        top = ext.range_top(word)
        mask = rng.randint(0, s.top_mask) & top
        t = ext.iota(word, mask)
        op = rng.choice(["join", "diff", "meet"])
        out = getattr(ext, op)(out, t) if op != "meet" else ext.join(ext.meet(out, t), t)
    return out


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_tree_ops_are_boolean_modulo_null(seed):
    rng = random.Random(seed)
    s = random_system(rng, max_atoms=4, max_labels=3)
    ext = Extension(s)
    a, b, c = (_random_tree(ext, rng) for _ in range(3))
    eq = ext.equal
    assert eq(ext.meet(a, b), ext.meet(b, a))
    assert eq(ext.join(a, ext.join(b, c)), ext.join(ext.join(a, b), c))
    assert eq(ext.diff(a, ext.join(b, c)), ext.meet(ext.diff(a, b), ext.diff(a, c)))
    assert eq(ext.diff(a, ext.meet(b, c)), ext.join(ext.diff(a, b), ext.diff(a, c)))
    assert eq(ext.meet(a, ext.join(b, c)), ext.join(ext.meet(a, b), ext.meet(a, c)))
    label = rng.choice(s.labels)
    assert eq(ext.theta(label, ext.join(a, b)), ext.join(ext.theta(label, a), ext.theta(label, b)))
    assert eq(ext.theta(label, ext.diff(a, b)), ext.diff(ext.theta(label, a), ext.theta(label, b)))
