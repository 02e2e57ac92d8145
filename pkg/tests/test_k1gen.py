import random

import pytest

from bdsk.fixtures import fx_double_loops, fx_llw, fx_loop, fx_on
from bdsk.k1gen import (
    KernelElement,
    NotInKernel,
    build_unitary,
    k1_generators,
    partition_cells,
    signed_index_data,
    verify_certificate,
)
from bdsk.ktheory import k_groups
from bdsk.randomgen import random_kernel_systems
from bdsk.star import Verdict


def _unitary_text(cert):
    return {ij: cert.algebra.format(e) for ij, e in cert.U.entries.items()}


def test_loop_certificate_frozen():
    (cert,) = k1_generators(fx_loop())
    assert cert.passed
    assert cert.U.size == 1
    assert _unitary_text(cert) == {(0, 0): "1 - p_v + s_{a,v}"}


def test_llw_certificate_frozen():
    (cert,) = k1_generators(fx_llw())
    assert cert.passed
    assert _unitary_text(cert) == {(0, 0): "1 - p_w + s_{c,w}"}


def test_negated_vector_gives_adjoint():
    s = fx_llw()
    x = KernelElement.from_vector(s, [0, -1])
    cert = build_unitary(s, x)
    verify_certificate(s, cert)
    assert cert.passed
    assert _unitary_text(cert) == {(0, 0): "1 - p_w + s*_{c,w}"}
    pos = build_unitary(s, x.negate(), cert.algebra)
    assert cert.V.entries == pos.V.adjoint().entries


def test_check_levels():
    (cert,) = k1_generators(fx_loop())
    levels = {r.name: (r.level, r.verdict) for r in cert.transcript}
    assert levels["P V = V"] == ("toeplitz", Verdict.EQUAL_TOEPLITZ)
    assert levels["V V* = P"][0] == "ck"
    assert len(cert.transcript) == 12


def test_not_in_kernel():
    s = fx_llw()
    with pytest.raises(NotInKernel):
        KernelElement.from_vector(s, [1, 0]).check(s)


def test_no_generators_without_k1():
    assert k1_generators(fx_on(2)) == []
    assert k1_generators(fx_double_loops()) == []


def test_support_on_non_atoms():
    # coefficients on overlapping elements are refined into cells before counting
    s = fx_llw()
    x = KernelElement.from_support(s, [(["v", "w"], 1), (["v"], -1)])
    assert x.atom_vector(s) == [0, 1]
    cert = build_unitary(s, x)
    verify_certificate(s, cert)
    assert cert.passed


def test_partition_cells():
    assert sorted(partition_cells([0b011, 0b110])) == [0b001, 0b010, 0b100]


def test_cardinality_on_random_systems():
    rng = random.Random(5)
    for s in random_kernel_systems(rng, 15):
        for vec in k_groups(s).k1_basis:
            data = signed_index_data(s, KernelElement.from_vector(s, vec))
            assert len(data.l_plus) == len(data.l_minus)
