"""Finite Boolean algebras presented as powersets of their atoms.

Every element is a bitmask over the atom sequence of its algebra: bit ``i``
is set when atom ``i`` lies below the element.  Ideals of a finite algebra
are principal and are stored by their top element.  Ultrafilters of a
finite algebra are exactly the principal filters of atoms, so the Stone
space is the atom set and ``Z(A)`` is the set of atoms below ``A``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Iterable, Iterator, NamedTuple


def iter_bits(mask: int) -> Iterator[int]:
    """Yield the indices of the set bits of ``mask`` in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def popcount(mask: int) -> int:
    return bin(mask).count("1")


@dataclass(frozen=True)
class FiniteBooleanAlgebra:
    """The powerset algebra on an ordered sequence of named atoms."""

    atoms: tuple[str, ...]

    def __post_init__(self) -> None:
        atoms = tuple(self.atoms)
        object.__setattr__(self, "atoms", atoms)
        if len(set(atoms)) != len(atoms):
            raise ValueError(f"duplicate atom names in {atoms!r}")
        for a in atoms:
            if not isinstance(a, str):
                raise TypeError(f"atom names must be strings, got {a!r}")

    @cached_property
    def index(self) -> dict[str, int]:
        return {a: i for i, a in enumerate(self.atoms)}

    def __len__(self) -> int:
        return len(self.atoms)

    @property
    def top_mask(self) -> int:
        return (1 << len(self.atoms)) - 1

    @property
    def empty(self) -> Element:
        return Element(self, 0)

    @property
    def top(self) -> Element:
        return Element(self, self.top_mask)

    def mask_of(self, names: Iterable[str]) -> int:
        mask = 0
        for name in names:
            try:
                mask |= 1 << self.index[name]
            except KeyError:
                raise KeyError(f"unknown atom {name!r}") from None
        return mask

    def element(self, names: Iterable[str] = ()) -> Element:
        return Element(self, self.mask_of(names))

    def from_mask(self, mask: int) -> Element:
        return Element(self, mask)

    def names(self, mask: int) -> tuple[str, ...]:
        """Atom names below ``mask``, in atom order."""
        return tuple(self.atoms[i] for i in iter_bits(mask))

    def atom(self, name: str) -> Element:
        return Element(self, 1 << self.index[name])

    def elements(self) -> Iterator[Element]:
        """All ``2**n`` elements in bitmask order."""
        for mask in range(1 << len(self.atoms)):
            yield Element(self, mask)


@dataclass(frozen=True)
class Element:
    algebra: FiniteBooleanAlgebra
    mask: int

    def __post_init__(self) -> None:
        if self.mask < 0 or self.mask > self.algebra.top_mask:
            raise ValueError("element mask exceeds the atom set")

    def _check(self, other: Element) -> None:
        if other.algebra is not self.algebra and other.algebra != self.algebra:
            raise ValueError("operands belong to different Boolean algebras")

    def __and__(self, other: Element) -> Element:
        self._check(other)
        return Element(self.algebra, self.mask & other.mask)

    def __or__(self, other: Element) -> Element:
        self._check(other)
        return Element(self.algebra, self.mask | other.mask)

    def __sub__(self, other: Element) -> Element:
        self._check(other)
        return Element(self.algebra, self.mask & ~other.mask)

    def __le__(self, other: Element) -> bool:
        self._check(other)
        return self.mask & ~other.mask == 0

    def __bool__(self) -> bool:
        return self.mask != 0

    @property
    def atoms(self) -> tuple[str, ...]:
        return self.algebra.names(self.mask)

    def __iter__(self) -> Iterator[str]:
        return iter(self.atoms)

    def __repr__(self) -> str:
        return "{" + ",".join(self.atoms) + "}"


def element_ops(kind: str, x: Element, y: Element) -> Element:
    """Apply ``meet``, ``join`` or ``diff`` atomwise."""
    if kind == "meet":
        return x & y
    if kind == "join":
        return x | y
    if kind == "diff":
        return x - y
    raise ValueError(f"unknown element operation {kind!r}")


@dataclass(frozen=True)
class PrincipalIdeal:
    """The ideal ``{B : B <= top}``."""

    top: Element

    def __contains__(self, element: Element) -> bool:
        return element <= self.top

    def members(self) -> Iterator[Element]:
        algebra = self.top.algebra
        sub = self.top.mask
        # enumerate submasks of top
        s = sub
        out = []
        while True:
            out.append(s)
            if s == 0:
                break
            s = (s - 1) & sub
        for mask in sorted(out):
            yield Element(algebra, mask)


@dataclass(frozen=True)
class QuotientPresentation:
    """``B / (down-set of h)``, re-atomized on the surviving atoms."""

    algebra: FiniteBooleanAlgebra
    h: Element
    quotient: FiniteBooleanAlgebra
    surviving: tuple[int, ...]

    def project_mask(self, mask: int) -> int:
        out = 0
        for j, i in enumerate(self.surviving):
            if mask >> i & 1:
                out |= 1 << j
        return out

    def project(self, element: Element) -> Element:
        if element.algebra != self.algebra:
            raise ValueError("element does not belong to the quotiented algebra")
        return Element(self.quotient, self.project_mask(element.mask))

    def lift_mask(self, qmask: int) -> int:
        """The largest representative disjoint from ``h``."""
        out = 0
        for j in iter_bits(qmask):
            out |= 1 << self.surviving[j]
        return out

    def equivalent(self, x: Element, y: Element) -> bool:
        return (x.mask ^ y.mask) & ~self.h.mask == 0


def quotient_algebra(algebra: FiniteBooleanAlgebra, h: Element) -> QuotientPresentation:
    if h.algebra != algebra:
        raise ValueError("h does not belong to the algebra")
    surviving = tuple(i for i in range(len(algebra)) if not h.mask >> i & 1)
    quotient = FiniteBooleanAlgebra(tuple(algebra.atoms[i] for i in surviving))
    return QuotientPresentation(algebra, h, quotient, surviving)


class StoneData(NamedTuple):
    ultrafilters: tuple[str, ...]
    z_set: Callable[[Element], frozenset[str]]


def stone_data(algebra: FiniteBooleanAlgebra) -> StoneData:
    """Ultrafilters (one per atom) and the clopen sets ``Z(A)``."""

    def z_set(element: Element) -> frozenset[str]:
        if element.algebra != algebra:
            raise ValueError("element does not belong to the algebra")
        return frozenset(element.atoms)

    return StoneData(algebra.atoms, z_set)


def ultrafilter_contains(algebra: FiniteBooleanAlgebra, atom: str, element: Element) -> bool:
    """Membership ``A in eta_a``, i.e. ``a <= A``."""
    return bool(element.mask >> algebra.index[atom] & 1)
