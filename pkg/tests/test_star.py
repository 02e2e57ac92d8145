import itertools

import pytest
from hypothesis import given, settings, strategies as st

from bdsk.fixtures import fx_arrow, fx_llw, fx_loop, fx_toep
from bdsk.star import InvalidSymbol, StarAlgebra, Verdict, normalize


def test_toeplitz_relations_llw():
    alg = StarAlgebra(fx_llw())
    s = alg.sys
    for label in s.labels:
        top = s.ideal_top(label)
        subs = [m for m in range(top + 1) if m & ~top == 0]
        for a, b in itertools.product(subs, repeat=2):
            assert alg.s_star(label, a) * alg.s(label, b) == alg.p(a & b)
            for other in s.labels:
                if other != label:
                    assert (alg.s_star(label, a) * alg.s(other, s.ideal_top(other))).is_zero()
        for a in range(s.top_mask + 1):
            for b in subs:
                assert alg.p(a) * alg.s(label, b) == alg.s(label, s.theta(label, a) & b)


def test_projections_are_a_boolean_family():
    alg = StarAlgebra(fx_llw())
    for a, b in itertools.product(range(4), repeat=2):
        assert alg.p(a) * alg.p(b) == alg.p(a & b)
        assert alg.p(a) + alg.p(b) - alg.p(a & b) == alg.p(a | b)


def test_invalid_symbol():
    alg = StarAlgebra(fx_llw())
    with pytest.raises(InvalidSymbol):
        alg.s("c", ["v"])


def test_ck_verdicts():
    loop = StarAlgebra(fx_loop())
    ss = loop.s("a", ["v"]) * loop.s_star("a", ["v"])
    assert loop.equal_mod_ck(loop.p(["v"]), ss) is Verdict.EQUAL_MOD_CK
    assert loop.equal_mod_ck(loop.s_star("a", ["v"]) * loop.s("a", ["v"]), loop.p(["v"])) is Verdict.EQUAL_TOEPLITZ
    toep = StarAlgebra(fx_toep())
    ss_t = toep.s("a", ["v"]) * toep.s_star("a", ["v"])
    assert toep.equal_mod_ck(toep.p(["v"]), ss_t) is Verdict.NOT_PROVEN


def test_arrow_products_and_format():
    alg = StarAlgebra(fx_arrow())
    assert alg.p(["v"]) * alg.s("e", ["w"]) == alg.s("e", ["w"])
    x = alg.s("e", ["w"]) * alg.s_star("e", ["w"])
    assert alg.format(x) == "s_{e,w}s*_{e,w}"
    assert alg.equal_mod_ck(alg.p(["v"]), x).holds_mod_ck


def test_unitary_of_the_loop():
    alg = StarAlgebra(fx_loop())
    u = alg.one() - alg.p(["v"]) + alg.s("a", ["v"])
    assert alg.format(u) == "1 - p_v + s_{a,v}"
    assert u.adjoint() * u == alg.one()
    assert alg.equal_mod_ck(u * u.adjoint(), alg.one()) is Verdict.EQUAL_MOD_CK


def test_normalize_expression():
    alg = StarAlgebra(fx_llw())
    e = ("add", ("mul", ("s", "b", ["w"]), ("adj", ("s", "b", ["w"]))), ("scale", 2, ("p", ["w"])))
    x = normalize(alg, e)
    assert x == alg.s("b", ["w"]) * alg.s_star("b", ["w"]) + alg.p(["w"]) * 2


def _generators(alg):
    s = alg.sys
    out = [alg.p(1 << i) for i in range(s.n_atoms)]
    for label in s.labels:
        top = s.ideal_top(label)
        if top:
            out.append(alg.s(label, top))
            out.append(alg.s_star(label, top))
    return out


@settings(max_examples=80, deadline=None)
@given(st.lists(st.integers(0, 100), min_size=3, max_size=6))
def test_associativity_and_adjoint(picks):
    alg = StarAlgebra(fx_llw())
    gens = _generators(alg)
    xs = [gens[i % len(gens)] for i in picks]
    a = xs[0] * xs[1] + xs[2]
    b = xs[-1] * xs[-2]
    c = xs[1] + xs[-1] * 3
    assert (a * b) * c == a * (b * c)
    assert (a * b).adjoint() == b.adjoint() * a.adjoint()
    assert a.adjoint().adjoint() == a
