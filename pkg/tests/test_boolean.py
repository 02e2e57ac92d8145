import pytest
from hypothesis import given, strategies as st

from bdsk.boolean import (
    FiniteBooleanAlgebra,
    PrincipalIdeal,
    element_ops,
    iter_bits,
    popcount,
    quotient_algebra,
    stone_data,
    ultrafilter_contains,
)

ALG = FiniteBooleanAlgebra(("u", "v", "w", "x"))
masks = st.integers(min_value=0, max_value=ALG.top_mask)


def test_bits_and_names():
    assert list(iter_bits(0b1011)) == [0, 1, 3]
    assert popcount(0b1011) == 3
    assert ALG.names(0b0110) == ("v", "w")
    assert repr(ALG.element(["w", "u"])) == "{u,w}"


def test_duplicate_atoms_rejected():
    with pytest.raises(ValueError):
        FiniteBooleanAlgebra(("a", "a"))


def test_unknown_atom():
    with pytest.raises(KeyError):
        ALG.element(["nope"])


def test_mixed_algebras_rejected():
    other = FiniteBooleanAlgebra(("p",))
    with pytest.raises(ValueError):
        ALG.top & other.top


@given(masks, masks, masks)
def test_boolean_laws(a, b, c):
    x, y, z = ALG.from_mask(a), ALG.from_mask(b), ALG.from_mask(c)
    assert element_ops("meet", x, y | z) == (x & y) | (x & z)
    assert x - (y | z) == (x - y) & (x - z)
    assert (x - y) <= x
    assert ((x & y) | (x - y)) == x


def test_principal_ideal_members():
    ideal = PrincipalIdeal(ALG.element(["u", "w"]))
    assert [repr(m) for m in ideal.members()] == ["{}", "{u}", "{w}", "{u,w}"]
    assert ALG.element(["u"]) in ideal
    assert ALG.element(["v"]) not in ideal


def test_quotient_round_trip():
    q = quotient_algebra(ALG, ALG.element(["v"]))
    assert q.quotient.atoms == ("u", "w", "x")
    x = ALG.element(["u", "v", "x"])
    assert q.project(x).atoms == ("u", "x")
    assert q.equivalent(x, ALG.element(["u", "x"]))
    assert q.lift_mask(q.project_mask(x.mask)) == ALG.mask_of(["u", "x"])


def test_stone_duality():
    data = stone_data(ALG)
    assert data.ultrafilters == ALG.atoms
    a = ALG.element(["v", "x"])
    assert data.z_set(a) == frozenset({"v", "x"})
    assert ultrafilter_contains(ALG, "v", a)
    assert not ultrafilter_contains(ALG, "u", a)
