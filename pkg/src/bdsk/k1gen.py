"""Explicit unitaries representing K1 classes.

For a kernel vector ``x = sum k_A chi_A`` of ``(1 - Phi)`` on ``J`` we build
the signed index sets, a block partition of the sets involved, the partial
isometry ``V_x``, its support projection ``P_x`` and the unitary
``U_x = V_x + (1 - P_x)`` as matrices over the symbolic Toeplitz algebra,
then check the identities that make ``U_x`` a unitary modulo the
Cuntz-Krieger relations.

Block partition and bijections are fixed canonically: blocks are the cells
of the partition generated by ``F ∪ {theta_a(A)}`` (ordered by lowest
atom), and each block's index list is sorted with ``(A, i)`` entries before
``(A, label, i)`` entries, then by ``A`` in input order, label order and
``i``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .boolean import iter_bits
from .dynamics import RelativeGBDS
from .ktheory import k_groups, one_minus_phi
from .star import AlgebraElement, StarAlgebra, SymbolicMatrix, Verdict

# (A index, i) and (A index, label, i)
PlainEntry = tuple[int, int]
LabelledEntry = tuple[int, str, int]
Entry = tuple  # either of the above


class NotInKernel(ValueError):
    pass


@dataclass(frozen=True)
class KernelElement:
    """``x = sum k_A chi_A`` with each ``A`` a nonempty element below ``J``."""

    support: tuple[tuple[int, int], ...]  # (mask of A, k_A), in input order

    @classmethod
    def from_vector(cls, sys: RelativeGBDS, vector: Sequence[int]) -> KernelElement:
        """From coordinates over the atoms of ``J`` (as in a kernel basis)."""
        j_idx = list(iter_bits(sys.j_top))
        if len(vector) != len(j_idx):
            raise ValueError("vector length must equal the number of atoms below J")
        x = cls(tuple((1 << a, k) for a, k in zip(j_idx, vector) if k))
        x.check(sys)
        return x

    @classmethod
    def from_support(cls, sys: RelativeGBDS, support: Iterable[tuple[Iterable[str] | int, int]]) -> KernelElement:
        items = []
        for elem, k in support:
            mask = elem if isinstance(elem, int) else sys.algebra.mask_of(elem)
            if k:
                items.append((mask, int(k)))
        x = cls(tuple(items))
        x.check(sys)
        return x

    def atom_vector(self, sys: RelativeGBDS) -> list[int]:
        out = [0] * sys.n_atoms
        for mask, k in self.support:
            for a in iter_bits(mask):
                out[a] += k
        return out

    def negate(self) -> KernelElement:
        return KernelElement(tuple((m, -k) for m, k in self.support))

    def check(self, sys: RelativeGBDS) -> None:
        masks = [m for m, _ in self.support]
        if len(set(masks)) != len(masks):
            raise ValueError("support sets must be distinct")
        for m in masks:
            if not m or m & ~sys.j_top:
                raise NotInKernel("support sets must be nonempty elements below J")
        vec = self.atom_vector(sys)
        j_idx = list(iter_bits(sys.j_top))
        if any(vec[a] for a in range(sys.n_atoms) if not sys.j_top >> a & 1):
            raise NotInKernel("vector has weight outside J")
        image = one_minus_phi(sys).apply([vec[a] for a in j_idx])
        if any(image):
            raise NotInKernel(f"(1 - Phi) x = {list(image)} is not zero")


@dataclass(frozen=True)
class SignedIndexData:
    l_plus: tuple[Entry, ...]
    l_minus: tuple[Entry, ...]
    f_bar: tuple[int, ...]
    blocks: tuple[int, ...]
    block_plus: tuple[tuple[Entry, ...], ...]
    block_minus: tuple[tuple[Entry, ...], ...]
    i_plus: tuple[tuple[int, int, str, int, int], ...]
    i_minus: tuple[tuple[int, int, str, int, int], ...]
    j_plus: tuple[tuple[int, int, int], ...]
    j_minus: tuple[tuple[int, int, str, int], ...]
    k_plus: tuple[tuple[int, int, str, int], ...]
    k_minus: tuple[tuple[int, int, int], ...]
    h_plus: tuple[tuple[int, int, str, int], ...]
    h_minus: tuple[tuple[int, int, str, int], ...]

    @property
    def heights(self) -> tuple[int, ...]:
        return tuple(len(b) for b in self.block_plus)

    def index(self) -> tuple[tuple[int, int], ...]:
        """The matrix index set as ``(i, block mask)`` pairs, ``i`` starting at 1."""
        return tuple((i, b) for b, h in zip(self.blocks, self.heights) for i in range(1, h + 1))


def _entry_key(sys: RelativeGBDS, e: Entry) -> tuple:
    if len(e) == 2:
        return (0, e[0], -1, e[1])
    return (1, e[0], sys.label_index[e[1]], e[2])


def partition_cells(masks: Iterable[int]) -> list[int]:
    """Cells of the partition of ``join(masks)`` generated by the given sets."""
    masks = list(masks)
    signature: dict[tuple[bool, ...], int] = {}
    join = 0
    for m in masks:
        join |= m
    for a in iter_bits(join):
        sig = tuple(bool(m >> a & 1) for m in masks)
        signature[sig] = signature.get(sig, 0) | (1 << a)
    return sorted(signature.values(), key=lambda c: c & -c)


def l_eta(sys: RelativeGBDS, x: KernelElement, entries: Sequence[Entry], atom: int) -> list[Entry]:
    """Entries whose set (``A`` or ``theta_label(A)``) contains the atom."""
    out = []
    for e in entries:
        mask = x.support[e[0]][0]
        if len(e) == 3:
            mask = sys.theta(e[1], mask)
        if mask >> atom & 1:
            out.append(e)
    return out


class CardinalityMismatch(AssertionError):
    pass


def signed_index_data(sys: RelativeGBDS, x: KernelElement) -> SignedIndexData:
    support = x.support
    labels = sys.labels
    l_plus: list[Entry] = []
    l_minus: list[Entry] = []
    for n, (mask, k) in enumerate(support):
        for label in labels:
            if sys.theta(label, mask):
                for i in range(1, -k + 1):
                    l_plus.append((n, label, i))
                for i in range(1, k + 1):
                    l_minus.append((n, label, i))
        for i in range(1, k + 1):
            l_plus.append((n, i))
        for i in range(1, -k + 1):
            l_minus.append((n, i))
    key = lambda e: _entry_key(sys, e)  # noqa: E731
    l_plus.sort(key=key)
    l_minus.sort(key=key)

    for a in range(sys.n_atoms):
        if len(l_eta(sys, x, l_plus, a)) != len(l_eta(sys, x, l_minus, a)):
            raise CardinalityMismatch(
                f"|L+| != |L-| at atom {sys.algebra.atoms[a]}; the vector is not in the kernel"
            )

    f_bar: list[int] = []
    for mask, _ in support:
        if mask not in f_bar:
            f_bar.append(mask)
    for mask, _ in support:
        for label in labels:
            image = sys.theta(label, mask)
            if image and image not in f_bar:
                f_bar.append(image)
    blocks = partition_cells(f_bar)
    block_plus = []
    block_minus = []
    for b in blocks:
        low = (b & -b).bit_length() - 1
        plus = tuple(l_eta(sys, x, l_plus, low))
        minus = tuple(l_eta(sys, x, l_minus, low))
        if len(plus) != len(minus):
            raise CardinalityMismatch("block cardinalities differ")
        block_plus.append(plus)
        block_minus.append(minus)

    def inside(b: int, m: int) -> bool:
        return b & ~m == 0

    i_plus, i_minus, j_plus, j_minus = [], [], [], []
    k_plus, k_minus, h_plus, h_minus = [], [], [], []
    for n, (mask, k) in enumerate(support):
        below_a = [bi for bi, b in enumerate(blocks) if inside(b, mask)]
        delta = [label for label in labels if sys.theta(label, mask)]
        for i in range(1, abs(k) + 1):
            for label in labels:
                image = sys.theta(label, mask)
                below_img = [ci for ci, c in enumerate(blocks) if image and inside(c, image)]
                for bi in below_a:
                    for ci in below_img:
                        (i_plus if k > 0 else i_minus).append((n, i, label, bi, ci))
                for ci in below_img:
                    (j_minus if k < 0 else k_plus).append((n, i, label, ci))
            for bi in below_a:
                (j_plus if k > 0 else k_minus).append((n, i, bi))
                for label in delta:
                    (h_plus if k > 0 else h_minus).append((n, i, label, bi))
    return SignedIndexData(
        tuple(l_plus), tuple(l_minus), tuple(f_bar), tuple(blocks),
        tuple(block_plus), tuple(block_minus),
        tuple(i_plus), tuple(i_minus), tuple(j_plus), tuple(j_minus),
        tuple(k_plus), tuple(k_minus), tuple(h_plus), tuple(h_minus),
    )


@dataclass
class CheckRecord:
    name: str
    level: str  # "toeplitz" or "ck"
    verdict: Verdict

    @property
    def passed(self) -> bool:
        if self.level == "toeplitz":
            return self.verdict is Verdict.EQUAL_TOEPLITZ
        return self.verdict.holds_mod_ck


@dataclass
class UnitaryCertificate:
    x: KernelElement
    data: SignedIndexData
    algebra: StarAlgebra
    V: SymbolicMatrix
    P: SymbolicMatrix
    U: SymbolicMatrix
    transcript: list[CheckRecord] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return bool(self.transcript) and all(r.passed for r in self.transcript)


class _Positions:
    """Matrix positions of block-list entries under the canonical bijections."""

    def __init__(self, data: SignedIndexData):
        self.offsets = []
        pos = 0
        for h in data.heights:
            self.offsets.append(pos)
            pos += h
        self.plus = [{e: self.offsets[b] + r for r, e in enumerate(lst)} for b, lst in enumerate(data.block_plus)]
        self.minus = [{e: self.offsets[b] + r for r, e in enumerate(lst)} for b, lst in enumerate(data.block_minus)]


def _add(entries: dict, ij: tuple[int, int], value: AlgebraElement) -> None:
    entries[ij] = entries[ij] + value if ij in entries else value


def _pbspc(alg: StarAlgebra, sys: RelativeGBDS, label: str, b: int, c: int) -> AlgebraElement:
    """``p_B s_{label, theta(B)} p_C``."""
    return alg.p(b) * alg.s(label, sys.theta(label, b)) * alg.p(c)


def build_matrices(sys: RelativeGBDS, x: KernelElement, data: SignedIndexData, alg: StarAlgebra):
    pos = _Positions(data)
    blocks = data.blocks
    index = data.index()
    v: dict = {}
    for n, i, label, bi, ci in data.i_plus:
        term = _pbspc(alg, sys, label, blocks[bi], blocks[ci])
        _add(v, (pos.plus[bi][(n, i)], pos.minus[ci][(n, label, i)]), term)
    for n, i, label, bi, ci in data.i_minus:
        term = _pbspc(alg, sys, label, blocks[bi], blocks[ci]).adjoint()
        _add(v, (pos.plus[ci][(n, label, i)], pos.minus[bi][(n, i)]), term)
    p: dict = {}
    for n, i, bi in data.j_plus:
        r = pos.plus[bi][(n, i)]
        _add(p, (r, r), alg.p(blocks[bi]))
    for n, i, label, ci in data.j_minus:
        r = pos.plus[ci][(n, label, i)]
        _add(p, (r, r), alg.p(blocks[ci]))
    V = SymbolicMatrix(alg, index, v)
    P = SymbolicMatrix(alg, index, p)
    U = V + (SymbolicMatrix.identity(alg, index) - P)
    return V, P, U


def _expected_forms(sys: RelativeGBDS, data: SignedIndexData, alg: StarAlgebra, index):
    """The closed forms for ``P_x`` (via K sets), ``V_x*``, ``V_x V_x*`` and ``V_x* V_x``."""
    pos = _Positions(data)
    blocks = data.blocks
    p_alt: dict = {}
    for n, i, label, ci in data.k_plus:
        r = pos.minus[ci][(n, label, i)]
        _add(p_alt, (r, r), alg.p(blocks[ci]))
    for n, i, bi in data.k_minus:
        r = pos.minus[bi][(n, i)]
        _add(p_alt, (r, r), alg.p(blocks[bi]))
    v_star: dict = {}
    for n, i, label, bi, ci in data.i_plus:
        term = alg.p(blocks[ci]) * alg.s(label, sys.theta(label, blocks[bi])).adjoint() * alg.p(blocks[bi])
        _add(v_star, (pos.minus[ci][(n, label, i)], pos.plus[bi][(n, i)]), term)
    for n, i, label, bi, ci in data.i_minus:
        term = alg.p(blocks[bi]) * alg.s(label, sys.theta(label, blocks[bi])) * alg.p(blocks[ci])
        _add(v_star, (pos.minus[bi][(n, i)], pos.plus[ci][(n, label, i)]), term)

    def ss_star(label: str, b: int) -> AlgebraElement:
        s = alg.s(label, sys.theta(label, b))
        return s * s.adjoint()

    vv: dict = {}
    for n, i, label, bi in data.h_plus:
        r = pos.plus[bi][(n, i)]
        _add(vv, (r, r), ss_star(label, blocks[bi]))
    for n, i, label, ci in data.j_minus:
        r = pos.plus[ci][(n, label, i)]
        _add(vv, (r, r), alg.p(blocks[ci]))
    vsv: dict = {}
    for n, i, label, ci in data.k_plus:
        r = pos.minus[ci][(n, label, i)]
        _add(vsv, (r, r), alg.p(blocks[ci]))
    for n, i, label, bi in data.h_minus:
        r = pos.minus[bi][(n, i)]
        _add(vsv, (r, r), ss_star(label, blocks[bi]))
    make = lambda e: SymbolicMatrix(alg, index, e)  # noqa: E731
    return make(p_alt), make(v_star), make(vv), make(vsv)


def build_unitary(sys: RelativeGBDS, x: KernelElement, algebra: StarAlgebra | None = None) -> UnitaryCertificate:
    x.check(sys)
    alg = algebra or StarAlgebra(sys)
    data = signed_index_data(sys, x)
    V, P, U = build_matrices(sys, x, data, alg)
    return UnitaryCertificate(x, data, alg, V, P, U)


def verify_certificate(sys: RelativeGBDS, cert: UnitaryCertificate) -> list[CheckRecord]:
    alg = cert.algebra
    V, P, U = cert.V, cert.P, cert.U
    index = V.index
    one = SymbolicMatrix.identity(alg, index)
    p_alt, v_star, vv_form, vsv_form = _expected_forms(sys, cert.data, alg, index)
    Vs = V.adjoint()
    VVs = V @ Vs
    VsV = Vs @ V
    t = "toeplitz"
    records = [
        CheckRecord("P projection (P*P = P)", t, (P.adjoint() @ P).compare(P)),
        CheckRecord("P via K sets", t, P.compare(p_alt)),
        CheckRecord("V* closed form", t, Vs.compare(v_star)),
        CheckRecord("V V* closed form", t, VVs.compare(vv_form)),
        CheckRecord("V* V closed form", t, VsV.compare(vsv_form)),
        CheckRecord("V V* V = V", t, (VVs @ V).compare(V)),
        CheckRecord("P V = V", t, (P @ V).compare(V)),
        CheckRecord("V P = V", t, (V @ P).compare(V)),
        CheckRecord("V V* = P", "ck", VVs.compare(P)),
        CheckRecord("V* V = P", "ck", VsV.compare(P)),
        CheckRecord("U U* = 1", "ck", (U @ U.adjoint()).compare(one)),
        CheckRecord("U* U = 1", "ck", (U.adjoint() @ U).compare(one)),
    ]
    cert.transcript = records
    return records


def k1_generators(sys: RelativeGBDS) -> list[UnitaryCertificate]:
    """One verified certificate per kernel basis vector."""
    alg = StarAlgebra(sys)
    out = []
    for vec in k_groups(sys).k1_basis:
        cert = build_unitary(sys, KernelElement.from_vector(sys, vec), alg)
        verify_certificate(sys, cert)
        out.append(cert)
    return out


def describe_entry(sys: RelativeGBDS, x: KernelElement, e: Entry) -> str:
    names = ",".join(sys.algebra.names(x.support[e[0]][0]))
    if len(e) == 2:
        return f"({{{names}}},{e[1]})"
    return f"({{{names}}},{e[1]},{e[2]})"
