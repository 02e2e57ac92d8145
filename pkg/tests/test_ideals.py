import random

import pytest

from bdsk.dynamics import AdmissiblePair, condition_k, enumerate_admissible_pairs
from bdsk.fixtures import FIXTURES, fx_double_loops, fx_llw, fx_loop, fx_on
from bdsk.ideals import PreconditionError, ideal_k_groups, liftability_report, six_term_rank_check
from bdsk.ktheory import k_groups
from bdsk.randomgen import random_system


def _texts(r):
    return str(r.k0), str(r.k1)


def test_llw_ideal_report():
    s = fx_llw()
    rep = ideal_k_groups(s, AdmissiblePair(0b10, 0b11))
    assert _texts(rep.ideal) == ("Z", "Z")
    assert _texts(rep.quotient) == ("Z", "Z")
    assert _texts(rep.full) == ("Z", "Z")
    assert rep.rank_alternating_sum == 0
    assert six_term_rank_check(s, rep.pair, rep)


@pytest.mark.parametrize("name", sorted(FIXTURES))
def test_extreme_pairs(name):
    s = FIXTURES[name]()
    full = k_groups(s)
    rep = ideal_k_groups(s, AdmissiblePair(s.top_mask, s.top_mask))
    assert (rep.ideal.k0, rep.ideal.k1) == (full.k0, full.k1)
    assert rep.ideal.smith.invariant_factors == full.smith.invariant_factors
    bottom = AdmissiblePair(0, s.j_top)
    if bottom in list(enumerate_admissible_pairs(s)):
        r = ideal_k_groups(s, bottom).ideal
        assert r.k0.is_trivial and r.k1.is_trivial


def test_six_term_random():
    rng = random.Random(3)
    for _ in range(40):
        s = random_system(rng)
        for pair in enumerate_admissible_pairs(s):
            assert six_term_rank_check(s, pair)


def test_liftability_fixtures():
    assert liftability_report(fx_on(2)).liftable
    rep = liftability_report(fx_double_loops())
    assert rep.liftable and len(rep.pairs) == 3
    with pytest.raises(PreconditionError, match=r"witness \(v,a\)"):
        liftability_report(fx_loop())


def test_liftability_random_with_kernels():
    rng = random.Random(11)
    seen = 0
    while seen < 3:
        s = random_system(rng, density=0.9)
        if not condition_k(s).holds:
            continue
        rep = liftability_report(s)
        assert rep.liftable
        seen += sum(p.kernel_rank for p in rep.pairs) > 0
