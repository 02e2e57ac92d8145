import pytest
from hypothesis import given, settings, strategies as st

from bdsk.dynamics import (
    AdmissiblePair,
    Digraph,
    SystemValidationError,
    classify_ideal,
    condition_k,
    delta_set,
    derived_ideals,
    enumerate_admissible_pairs,
    import_graph,
    is_admissible,
    make_system,
    quotient_system,
    theta_word,
    validate_system,
    vanishing_tail,
    vanishing_tail_mask,
)
from bdsk.fixtures import fx_arrow, fx_double_loops, fx_llw, fx_loop, fx_on, fx_toep
from bdsk.oracles import brute_force_pairs, condition_k_oracle, vanishing_tail_orbit
from bdsk.randomgen import random_system


def test_defaults_and_derived_ideals():
    s = fx_llw()
    d = derived_ideals(s)
    assert d.b_reg_top.atoms == ("v", "w")
    assert {k: t.atoms for k, t in d.r_tops.items()} == {"a": ("v",), "b": ("w",), "c": ("w",)}
    assert d.word_ideal_top(("a", "b")).atoms == ("w",)
    assert d.word_ideal_top(()).atoms == ("v", "w")
    assert s.j_top == 0b11


def test_theta_word_and_delta():
    s = fx_llw()
    v = s.algebra.element(["v"])
    assert theta_word(s, ("a", "a", "b"), v).atoms == ("w",)
    assert theta_word(s, ("c",), v).atoms == ()
    assert delta_set(s, v) == ("a", "b")
    assert delta_set(s, s.algebra.element(["w"])) == ("c",)


def test_unknown_label():
    with pytest.raises(KeyError):
        fx_loop().theta("zz", 1)


def test_validation_collects_all_errors():
    with pytest.raises(SystemValidationError) as info:
        validate_system({
            "atoms": ["u", "v", "w"],
            "labels": ["a"],
            "theta": {"a": {"u": ["w"], "v": ["w", "q"]}},
            "ideals": {"a": []},
            "J": ["w"],
        })
    errors = info.value.errors
    assert "theta[a][v]: unknown atom 'q'" in errors
    assert "theta[a]: images of u and v overlap at {w} (images of distinct atoms must be disjoint)" in errors
    assert "I_a does not contain R_a: missing {w}" in errors
    assert "J ⊄ B_reg: {w} emit no label" in errors


def test_validation_rejects_bad_shapes():
    with pytest.raises(SystemValidationError):
        validate_system({"atoms": "v", "labels": []})
    with pytest.raises(SystemValidationError):
        validate_system({"atoms": ["v"], "labels": ["a"], "theta": {"b": {}}})


def test_classify_ideal_llw():
    s = fx_llw()
    w = s.algebra.element(["w"])
    c = classify_ideal(s, w)
    assert c.hereditary and c.j_saturated
    assert c.b_h_top.atoms == ("v", "w")
    v = s.algebra.element(["v"])
    assert not classify_ideal(s, v).hereditary


def test_pairs_llw_frozen():
    lattice = enumerate_admissible_pairs(fx_llw())
    assert [(p.h_top, p.s_top) for p in lattice] == [(0, 3), (2, 3), (3, 3)]
    assert lattice.covers() == [(0, 1), (1, 2)]
    assert lattice.meet(1, 2) == 1 and lattice.join(0, 1) == 1


def test_pairs_toeplitz_frozen():
    assert [(p.h_top, p.s_top) for p in enumerate_admissible_pairs(fx_toep())] == [(0, 0), (0, 1), (1, 1)]


def test_pairs_cuntz():
    assert len(enumerate_admissible_pairs(fx_on(2))) == 2


def test_pairs_against_brute_force(rng):
    for _ in range(40):
        s = random_system(rng)
        got = [(p.h_top, p.s_top) for p in enumerate_admissible_pairs(s)]
        assert got == brute_force_pairs(s)
        for h, t in got:
            assert is_admissible(s, AdmissiblePair(h, t))


def test_quotient_llw():
    s = fx_llw()
    q = quotient_system(s, AdmissiblePair(0b10, 0b11))
    assert q.algebra.atoms == ("v",)
    assert q.images == ((1,), (0,), (0,))
    assert q.j_top == 1
    with pytest.raises(ValueError):
        quotient_system(s, AdmissiblePair(0b01, 0b11))


def test_condition_k_fixtures():
    assert condition_k(fx_loop()) == (False, ("v", ("a",)))
    assert condition_k(fx_llw()).holds is False
    assert condition_k(fx_on(2)).holds
    assert condition_k(fx_arrow()).holds
    assert condition_k(fx_double_loops()).holds
    # a two-cycle has a single first return of length two
    s = make_system(["u", "v"], {"x": {"u": ["v"]}, "y": {"v": ["u"]}})
    holds, (atom, word) = condition_k(s)
    assert not holds and len(word) == 2


@settings(max_examples=150, deadline=None)
@given(st.integers(1, 5), st.lists(st.tuples(st.integers(0, 4), st.integers(0, 4)), max_size=8))
def test_condition_k_matches_oracle(n, raw):
    edges = [(s % n, r % n) for s, r in raw]
    g = Digraph.from_pairs(n, edges)
    assert condition_k(import_graph(g)).holds == condition_k_oracle(n, edges)[0]


def test_vanishing_tails():
    s = fx_arrow()
    v = s.algebra.element(["v"])
    assert vanishing_tail(s, v) is True
    assert vanishing_tail(s, v, within_j=True) is False
    assert vanishing_tail(fx_loop(), fx_loop().algebra.top) is False
    assert vanishing_tail(s, s.algebra.empty, within_j=True)


def test_tails_against_orbit_oracle(rng):
    for _ in range(40):
        s = random_system(rng)
        for m in range(s.top_mask + 1):
            for within in (False, True):
                assert vanishing_tail_mask(s, m, within) == vanishing_tail_orbit(s, m, within)


def test_import_graph():
    g = Digraph(("p", "q"), (("e", "p", "q"), ("f", "q", "q")))
    s = import_graph(g)
    assert s.labels == ("e", "f")
    assert s.algebra.names(s.j_top) == ("p", "q")
    assert s.algebra.names(s.ideal_top("e")) == ("q",)
