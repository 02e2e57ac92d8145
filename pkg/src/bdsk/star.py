"""Exact symbolic computation in the Toeplitz algebra of a finite system.

Every element is a finite rational combination of monomials
``s_{mu,a} s*_{nu,a}`` with ``a`` an atom of ``I_mu ∩ I_nu``, plus an
optional coefficient on a formal unit.  Products of monomials reduce to a
single monomial or to zero, so the monomial span is closed and the normal
form is simply the coefficient table.

Equality modulo the Cuntz-Krieger relation on ``J`` is tested against the
span of the defect generators ``s_{mu,b} d_b s*_{nu,b}`` (``b`` an atom of
``J``); see :meth:`StarAlgebra.equal_mod_ck`.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from numbers import Rational
from typing import Any, Iterable, Mapping, Sequence

from .boolean import iter_bits
from .dynamics import RelativeGBDS

Word = tuple[str, ...]
Monomial = tuple[Word, int, Word]


class Verdict(str, Enum):
    EQUAL_TOEPLITZ = "equal-toeplitz"
    EQUAL_MOD_CK = "equal-mod-ck"
    NOT_PROVEN = "not-proven"

    @property
    def holds_mod_ck(self) -> bool:
        return self is not Verdict.NOT_PROVEN


class InvalidSymbol(ValueError):
    pass


def _is_prefix(p: Word, w: Word) -> bool:
    return len(p) <= len(w) and w[: len(p)] == p


class AlgebraElement:
    __slots__ = ("algebra", "terms", "unit")

    def __init__(self, algebra: StarAlgebra, terms: Mapping[Monomial, Fraction] | None = None, unit: Rational = 0):
        self.algebra = algebra
        self.terms = {m: Fraction(c) for m, c in (terms or {}).items() if c}
        self.unit = Fraction(unit)

    # arithmetic -----------------------------------------------------------
    def _coerce(self, other: Any) -> AlgebraElement:
        if isinstance(other, AlgebraElement):
            if other.algebra is not self.algebra:
                raise ValueError("elements of different algebras")
            return other
        if isinstance(other, (int, Fraction)):
            return AlgebraElement(self.algebra, unit=other)
        return NotImplemented

    def __add__(self, other: Any) -> AlgebraElement:
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        terms = dict(self.terms)
        for m, c in other.terms.items():
            terms[m] = terms.get(m, 0) + c
        return AlgebraElement(self.algebra, terms, self.unit + other.unit)

    __radd__ = __add__

    def __neg__(self) -> AlgebraElement:
        return AlgebraElement(self.algebra, {m: -c for m, c in self.terms.items()}, -self.unit)

    def __sub__(self, other: Any) -> AlgebraElement:
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other: Any) -> AlgebraElement:
        return (-self) + other

    def scale(self, c: Rational) -> AlgebraElement:
        return AlgebraElement(self.algebra, {m: c * v for m, v in self.terms.items()}, c * self.unit)

    def __mul__(self, other: Any) -> AlgebraElement:
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.algebra.multiply(self, other)

    def __rmul__(self, other: Any) -> AlgebraElement:
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def adjoint(self) -> AlgebraElement:
        return AlgebraElement(
            self.algebra, {(nu, a, mu): c for (mu, a, nu), c in self.terms.items()}, self.unit
        )

    @property
    def star(self) -> AlgebraElement:
        return self.adjoint()

    # comparison -----------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms and self.unit == 0

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            return not self.terms and self.unit == other
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        return self.algebra is other.algebra and self.terms == other.terms and self.unit == other.unit

    __hash__ = None  # type: ignore[assignment]

    def sorted_terms(self) -> list[tuple[Monomial, Fraction]]:
        return sorted(self.terms.items(), key=lambda mc: self.algebra.monomial_key(mc[0]))

    def __repr__(self) -> str:
        return self.algebra.format(self)


@dataclass(frozen=True)
class CKCheck:
    verdict: Verdict
    residual_terms: int = 0


class StarAlgebra:
    """Monomial calculus for one system; elements hold a reference back to it."""

    def __init__(self, sys: RelativeGBDS):
        self.sys = sys
        self._word_tops: dict[Word, int] = {}

    # validity -------------------------------------------------------------
    def word_top(self, word: Word) -> int:
        top = self._word_tops.get(word)
        if top is None:
            top = self.sys.word_ideal_top(word)
            self._word_tops[word] = top
        return top

    def is_valid(self, m: Monomial) -> bool:
        mu, a, nu = m
        bit = 1 << a
        return bool(self.word_top(mu) & bit and self.word_top(nu) & bit)

    def monomial_key(self, m: Monomial) -> tuple:
        mu, a, nu = m
        li = self.sys.label_index
        return (len(mu) + len(nu), len(mu), tuple(li[x] for x in mu), tuple(li[x] for x in nu), a)

    # constructors ---------------------------------------------------------
    def zero(self) -> AlgebraElement:
        return AlgebraElement(self)

    def one(self) -> AlgebraElement:
        return AlgebraElement(self, unit=1)

    def monomial(self, mu: Sequence[str], atom: int | str, nu: Sequence[str], coeff: Rational = 1) -> AlgebraElement:
        a = self.sys.algebra.index[atom] if isinstance(atom, str) else atom
        m = (tuple(mu), a, tuple(nu))
        if not self.is_valid(m):
            raise InvalidSymbol(f"atom {self.sys.algebra.atoms[a]} is not in the word ideals of {m[0]!r}, {m[2]!r}")
        return AlgebraElement(self, {m: Fraction(coeff)})

    def _mask(self, elem: int | Iterable[str]) -> int:
        if isinstance(elem, int):
            return elem
        return self.sys.algebra.mask_of(elem)

    def p(self, elem: int | Iterable[str]) -> AlgebraElement:
        """The projection ``p_A``, expanded over the atoms of ``A``."""
        return AlgebraElement(self, {((), a, ()): Fraction(1) for a in iter_bits(self._mask(elem))})

    def s(self, label: str, elem: int | Iterable[str]) -> AlgebraElement:
        return self.s_word((label,), elem)

    def s_word(self, word: Sequence[str], elem: int | Iterable[str]) -> AlgebraElement:
        """``s_{w,A}`` for ``A`` in the word ideal ``I_w``."""
        word = tuple(word)
        mask = self._mask(elem)
        for x in word:
            self.sys._label(x)
        if mask & ~self.word_top(word):
            raise InvalidSymbol(f"{self.sys.algebra.names(mask)} is not in the ideal of word {word!r}")
        return AlgebraElement(self, {(word, a, ()): Fraction(1) for a in iter_bits(mask)})

    def s_star(self, label: str, elem: int | Iterable[str]) -> AlgebraElement:
        return self.s(label, elem).adjoint()

    # multiplication -------------------------------------------------------
    def multiply_monomials(self, m1: Monomial, m2: Monomial) -> Monomial | None:
        mu, a, nu = m1
        mu2, b, nu2 = m2
        sys = self.sys
        if nu == mu2:
            return (mu, a, nu2) if a == b else None
        if _is_prefix(nu, mu2):
            rest = mu2[len(nu):]
            if sys.theta_word(rest, 1 << a) >> b & 1:
                return (mu + rest, b, nu2)
            return None
        if _is_prefix(mu2, nu):
            rest = nu[len(mu2):]
            if sys.theta_word(rest, 1 << b) >> a & 1:
                return (mu, a, nu2 + rest)
            return None
        return None

    def multiply(self, x: AlgebraElement, y: AlgebraElement) -> AlgebraElement:
        terms: dict[Monomial, Fraction] = {}
        for m1, c1 in x.terms.items():
            for m2, c2 in y.terms.items():
                m = self.multiply_monomials(m1, m2)
                if m is not None:
                    terms[m] = terms.get(m, 0) + c1 * c2
        if y.unit:
            for m, c in x.terms.items():
                terms[m] = terms.get(m, 0) + c * y.unit
        if x.unit:
            for m, c in y.terms.items():
                terms[m] = terms.get(m, 0) + c * x.unit
        return AlgebraElement(self, terms, x.unit * y.unit)

    # Cuntz-Krieger defects -------------------------------------------------
    def defect_generator(self, mu: Word, b: int, nu: Word) -> AlgebraElement:
        """``s_{mu,b} d_b s*_{nu,b}`` in normal form; ``b`` must be an atom of ``J``."""
        if not self.sys.j_top >> b & 1:
            raise InvalidSymbol(f"atom {self.sys.algebra.atoms[b]} is not in J")
        terms = {(mu, b, nu): Fraction(1)}
        for k, label in enumerate(self.sys.labels):
            for c in iter_bits(self.sys.images[k][b]):
                terms[(mu + (label,), c, nu + (label,))] = Fraction(-1)
        return AlgebraElement(self, terms)

    def ck_defect(self, elem: int | Iterable[str]) -> AlgebraElement:
        """``d_A = p_A - sum over labels of s_{a,theta_a(A)} s*_{a,theta_a(A)}``."""
        mask = self._mask(elem)
        if mask & ~self.sys.j_top:
            raise InvalidSymbol("d_A is only defined for A in J")
        out = self.zero()
        for b in iter_bits(mask):
            out = out + self.defect_generator((), b, ())
        return out

    def ck_reduce(self, r: AlgebraElement) -> AlgebraElement | None:
        """Try to write ``r`` as a combination of defect generators.

        Returns ``None`` when ``r`` lies in their span and the leftover
        residual otherwise.  The shortest monomials of a combination of
        generators are exactly the leading terms of the shortest generators
        involved, and no generator longer than ``maxlen(r) - 2`` can take
        part, so this greedy elimination decides span membership.
        """
        if r.unit:
            return r
        if not r.terms:
            return None
        limit = max(len(mu) + len(nu) for mu, _, nu in r.terms) - 2
        work = AlgebraElement(self, r.terms)
        while work.terms:
            shortest = min(len(mu) + len(nu) for mu, _, nu in work.terms)
            if shortest > limit:
                return work
            lead = [m for m in work.terms if len(m[0]) + len(m[2]) == shortest]
            for m in sorted(lead, key=self.monomial_key):
                mu, b, nu = m
                if not self.sys.j_top >> b & 1:
                    return work
                work = work - self.defect_generator(mu, b, nu).scale(work.terms[m])
        return None

    def equal_mod_ck(self, x: AlgebraElement, y: AlgebraElement) -> Verdict:
        r = x - y
        if r.is_zero():
            return Verdict.EQUAL_TOEPLITZ
        return Verdict.EQUAL_MOD_CK if self.ck_reduce(r) is None else Verdict.NOT_PROVEN

    # display ----------------------------------------------------------------
    def format_monomial(self, m: Monomial) -> str:
        mu, a, nu = m
        atom = self.sys.algebra.atoms[a]
        if not mu and not nu:
            return f"p_{atom}"
        parts = []
        if mu:
            parts.append(f"s_{{{''.join(mu) if all(len(x) == 1 for x in mu) else '.'.join(mu)},{atom}}}")
        if nu:
            parts.append(f"s*_{{{''.join(nu) if all(len(x) == 1 for x in nu) else '.'.join(nu)},{atom}}}")
        return "".join(parts)

    def format(self, x: AlgebraElement) -> str:
        pieces: list[str] = []
        if x.unit:
            pieces.append(_coeff_text(x.unit, "1"))
        for m, c in x.sorted_terms():
            pieces.append(_coeff_text(c, self.format_monomial(m)))
        if not pieces:
            return "0"
        text = pieces[0]
        for piece in pieces[1:]:
            text += f" - {piece[1:]}" if piece.startswith("-") else f" + {piece}"
        return text

    def to_json(self, x: AlgebraElement) -> dict:
        atoms = self.sys.algebra.atoms
        return {
            "unit": str(x.unit),
            "terms": [
                {"mu": list(mu), "atom": atoms[a], "nu": list(nu), "coeff": str(c)}
                for (mu, a, nu), c in x.sorted_terms()
            ],
        }


def _coeff_text(c: Fraction, body: str) -> str:
    if c == 1:
        return body
    if c == -1:
        return f"-{body}"
    return f"{c}*{body}" if body != "1" else str(c)


# -- formal expressions ---------------------------------------------------------


def normalize(algebra: StarAlgebra, expr: Any) -> AlgebraElement:
    """Evaluate a nested-tuple expression to normal form.

    Forms: ``("p", atoms)``, ``("s", label, atoms)``, ``("sw", word, atoms)``,
    ``("adj", e)``, ``("add", e, ...)``, ``("mul", e, ...)``,
    ``("scale", c, e)``, ``("one",)``, ``("zero",)``, or an
    :class:`AlgebraElement` (already normal).
    """
    if isinstance(expr, AlgebraElement):
        return expr
    head, *args = expr
    if head == "p":
        return algebra.p(args[0])
    if head == "s":
        return algebra.s(args[0], args[1])
    if head == "sw":
        return algebra.s_word(args[0], args[1])
    if head == "adj":
        return normalize(algebra, args[0]).adjoint()
    if head == "add":
        out = algebra.zero()
        for e in args:
            out = out + normalize(algebra, e)
        return out
    if head == "mul":
        out = algebra.one()
        for e in args:
            out = out * normalize(algebra, e)
        return out
    if head == "scale":
        return normalize(algebra, args[1]).scale(Fraction(args[0]))
    if head == "one":
        return algebra.one()
    if head == "zero":
        return algebra.zero()
    raise ValueError(f"unknown expression head {head!r}")


# -- matrices over the algebra ---------------------------------------------------


class SymbolicMatrix:
    """Square matrix with :class:`AlgebraElement` entries; absent entries are zero."""

    def __init__(self, algebra: StarAlgebra, index: Sequence[Any], entries: Mapping[tuple[int, int], AlgebraElement] | None = None):
        self.algebra = algebra
        self.index = tuple(index)
        self.entries = {ij: e for ij, e in (entries or {}).items() if not e.is_zero()}

    @property
    def size(self) -> int:
        return len(self.index)

    def _same(self, other: SymbolicMatrix) -> None:
        if other.index != self.index or other.algebra is not self.algebra:
            raise ValueError("matrices over different index sets")

    def __getitem__(self, ij: tuple[int, int]) -> AlgebraElement:
        return self.entries.get(ij, self.algebra.zero())

    @classmethod
    def identity(cls, algebra: StarAlgebra, index: Sequence[Any]) -> SymbolicMatrix:
        return cls(algebra, index, {(i, i): algebra.one() for i in range(len(index))})

    def __add__(self, other: SymbolicMatrix) -> SymbolicMatrix:
        self._same(other)
        out = dict(self.entries)
        for ij, e in other.entries.items():
            out[ij] = out[ij] + e if ij in out else e
        return SymbolicMatrix(self.algebra, self.index, out)

    def __neg__(self) -> SymbolicMatrix:
        return SymbolicMatrix(self.algebra, self.index, {ij: -e for ij, e in self.entries.items()})

    def __sub__(self, other: SymbolicMatrix) -> SymbolicMatrix:
        return self + (-other)

    def __matmul__(self, other: SymbolicMatrix) -> SymbolicMatrix:
        self._same(other)
        rows: dict[int, list[tuple[int, AlgebraElement]]] = {}
        for (k, j), e in other.entries.items():
            rows.setdefault(k, []).append((j, e))
        out: dict[tuple[int, int], AlgebraElement] = {}
        for (i, k), e in self.entries.items():
            for j, f in rows.get(k, ()):
                prod = e * f
                out[(i, j)] = out[(i, j)] + prod if (i, j) in out else prod
        return SymbolicMatrix(self.algebra, self.index, out)

    def adjoint(self) -> SymbolicMatrix:
        return SymbolicMatrix(self.algebra, self.index, {(j, i): e.adjoint() for (i, j), e in self.entries.items()})

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SymbolicMatrix):
            return NotImplemented
        return self.index == other.index and (self - other).entries == {}

    __hash__ = None  # type: ignore[assignment]

    def compare(self, other: SymbolicMatrix) -> Verdict:
        """Entrywise comparison; the weakest entry verdict wins."""
        self._same(other)
        diff = self - other
        if not diff.entries:
            return Verdict.EQUAL_TOEPLITZ
        for e in diff.entries.values():
            if self.algebra.ck_reduce(e) is not None:
                return Verdict.NOT_PROVEN
        return Verdict.EQUAL_MOD_CK

    def to_json(self) -> dict:
        return {
            "size": self.size,
            "entries": [
                {"row": i, "col": j, "value": self.algebra.to_json(e), "text": self.algebra.format(e)}
                for (i, j), e in sorted(self.entries.items())
            ],
        }
