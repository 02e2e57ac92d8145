"""The word-indexed extension of a finite system and its finitely generated pieces.

An element of the extension is a family ``(A_beta)`` indexed by words, with
``A_{beta a} = theta_a(A_beta)`` at all but finitely many places.  Such a
family is stored as a finite prefix-closed tree: every unstored coordinate
is obtained by pushing the value of its deepest stored ancestor forward.
Families that stay inside ``J`` and vanish eventually form the null ideal;
the extension proper is the quotient by it, so equality of trees is always
decided by a null test on their symmetric difference and never syntactically.

The extension is infinite, so it is never built.  Only the Boolean
subalgebras generated by finitely many trees (and closed under the shifted
actions when asked) are materialized, re-atomized as finite systems.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, Sequence

from .boolean import iter_bits
from .dynamics import (
    AdmissiblePair,
    RelativeGBDS,
    is_admissible,
    validate_system,
    vanishing_tail_mask,
)
from .star import StarAlgebra, Verdict

Word = tuple[str, ...]


class ClosureError(RuntimeError):
    """A generated subalgebra failed to be closed under the actions (a bug, not an outcome)."""


@dataclass(frozen=True)
class TreeElement:
    """Stored coordinates of a family; ``()`` (the root) is always present."""

    nodes: tuple[tuple[Word, int], ...]

    @property
    def table(self) -> dict[Word, int]:
        return dict(self.nodes)

    @property
    def root(self) -> int:
        return self.nodes[0][1]

    @property
    def carrier(self) -> tuple[Word, ...]:
        return tuple(w for w, _ in self.nodes)


def _sort_key(sys: RelativeGBDS) -> Callable[[Word], tuple]:
    li = sys.label_index
    return lambda w: (len(w), tuple(li[x] for x in w))


class Extension:
    """Tree calculus for one system, with memoized tails and projections."""

    def __init__(self, sys: RelativeGBDS):
        self.sys = sys
        self._key = _sort_key(sys)
        self._range_tops: dict[Word, int] = {}
        self._tails: dict[tuple[int, bool], bool] = {}

    # construction ----------------------------------------------------------
    def range_top(self, word: Word) -> int:
        top = self._range_tops.get(word)
        if top is None:
            top = self.sys.theta_word(word, self.sys.top_mask)
            self._range_tops[word] = top
        return top

    def make(self, table: Mapping[Word, int], check: bool = True) -> TreeElement:
        """Canonical tree from a prefix-closed table (missing prefixes are filled by propagation)."""
        nodes = dict(table)
        nodes.setdefault((), 0)
        for w in list(nodes):
            for k in range(1, len(w)):
                if w[:k] not in nodes:
                    nodes[w[:k]] = self.value_in(nodes, w[:k])
        if check:
            for w, v in nodes.items():
                if w and v & ~self.range_top(w):
                    raise ValueError(f"coordinate {'.'.join(w)} is not below the range of its word")
        # prune leaves equal to what their parent propagates, until stable
        changed = True
        while changed:
            changed = False
            has_child = {w[:-1] for w in nodes if w}
            for w in sorted(nodes, key=self._key, reverse=True):
                if not w or w in has_child:
                    continue
                if nodes[w] == self.sys.theta(w[-1], nodes[w[:-1]]):
                    del nodes[w]
                    changed = True
                    break
        return TreeElement(tuple(sorted(nodes.items(), key=lambda kv: self._key(kv[0]))))

    def value_in(self, nodes: Mapping[Word, int], word: Word) -> int:
        k = len(word)
        while word[:k] not in nodes:
            k -= 1
        return self.sys.theta_word(word[k:], nodes[word[:k]])

    def value(self, t: TreeElement, word: Sequence[str]) -> int:
        return self.value_in(t.table, tuple(word))

    def empty(self) -> TreeElement:
        return TreeElement((((), 0),))

    def iota(self, word: Sequence[str], mask: int) -> TreeElement:
        """``iota_gamma(A)``: ``A`` at ``gamma``, pushed forward below it, empty elsewhere."""
        word = tuple(word)
        for x in word:
            self.sys._label(x)
        if mask & ~self.range_top(word):
            raise ValueError(f"{self.sys.algebra.names(mask)} is not in the range of word {word!r}")
        table = {word[:k]: 0 for k in range(len(word))}
        table[word] = mask
        return self.make(table)

    def full(self, mask: int) -> TreeElement:
        """The family propagated from ``mask`` at the root (same as ``iota``)."""
        return self.make({(): mask})

    # Boolean operations ----------------------------------------------------
    def combine(self, op: Callable[[int, int], int], s: TreeElement, t: TreeElement) -> TreeElement:
        a, b = s.table, t.table
        words = set(a) | set(b)
        return self.make({w: op(self.value_in(a, w), self.value_in(b, w)) for w in words}, check=False)

    def meet(self, s: TreeElement, t: TreeElement) -> TreeElement:
        return self.combine(lambda x, y: x & y, s, t)

    def join(self, s: TreeElement, t: TreeElement) -> TreeElement:
        return self.combine(lambda x, y: x | y, s, t)

    def diff(self, s: TreeElement, t: TreeElement) -> TreeElement:
        return self.combine(lambda x, y: x & ~y, s, t)

    def sym_diff(self, s: TreeElement, t: TreeElement) -> TreeElement:
        return self.combine(lambda x, y: x ^ y, s, t)

    def theta(self, label: str, t: TreeElement) -> TreeElement:
        """The shifted action: the subtree at ``label``."""
        self.sys._label(label)
        table = t.table
        if (label,) not in table:
            return self.make({(): self.sys.theta(label, t.root)}, check=False)
        return self.make({w[1:]: v for w, v in table.items() if w and w[0] == label}, check=False)

    def theta_word(self, word: Sequence[str], t: TreeElement) -> TreeElement:
        for label in word:
            t = self.theta(label, t)
        return t

    # the null ideal ----------------------------------------------------------
    def _tail(self, mask: int) -> bool:
        key = (mask, True)
        out = self._tails.get(key)
        if out is None:
            out = vanishing_tail_mask(self.sys, mask, True)
            self._tails[key] = out
        return out

    def is_null(self, t: TreeElement) -> bool:
        """Membership in the null ideal: inside ``J`` everywhere and eventually empty."""
        sys = self.sys
        table = t.table
        for w, v in table.items():
            if v & ~sys.j_top:
                return False
            for label in sys.labels:
                if w + (label,) not in table and not self._tail(sys.theta(label, v)):
                    return False
        return True

    def equal(self, s: TreeElement, t: TreeElement) -> bool:
        return self.is_null(self.sym_diff(s, t))

    def leq(self, s: TreeElement, t: TreeElement) -> bool:
        return self.is_null(self.diff(s, t))

    def in_j(self, t: TreeElement) -> bool:
        return t.root & ~self.sys.j_top == 0

    def in_ideal(self, label: str, t: TreeElement) -> bool:
        """Membership in the extended ideal of ``label``: the excess over ``theta_beta(top I_label)`` is null."""
        top = self.sys.ideal_top(label)
        return self.is_null(self.diff(t, self.full(top)))

    def delta(self, t: TreeElement) -> tuple[str, ...]:
        return tuple(label for label in self.sys.labels if not self.is_null(self.theta(label, t)))

    # display -----------------------------------------------------------------
    def serialize(self, t: TreeElement) -> str:
        names = self.sys.algebra.names
        parts = [",".join(names(t.root)) or "∅"]
        for w, v in t.nodes[1:]:
            parts.append(f"{'.'.join(w)}={','.join(names(v)) or '∅'}")
        return "[" + "|".join(parts) + "]"

    def to_json(self, t: TreeElement) -> list[dict]:
        names = self.sys.algebra.names
        return [{"word": list(w), "value": list(names(v))} for w, v in t.nodes]


# -- functional interface over plain systems --------------------------------------------


def iota_embed(sys: RelativeGBDS, word: Sequence[str], mask: int, ext: Extension | None = None) -> TreeElement:
    return (ext or Extension(sys)).iota(word, mask)


def tree_ops(sys: RelativeGBDS, kind: str, *args: TreeElement, ext: Extension | None = None) -> TreeElement:
    """``meet``, ``join``, ``diff`` on two trees or ``theta:<label>`` on one."""
    ext = ext or Extension(sys)
    if kind in ("meet", "join", "diff"):
        s, t = args
        return getattr(ext, kind)(s, t)
    if kind.startswith("theta:"):
        (t,) = args
        return ext.theta(kind.split(":", 1)[1], t)
    raise ValueError(f"unknown tree operation {kind!r}")


def in_bar_ideal(sys: RelativeGBDS, t: TreeElement) -> bool:
    return Extension(sys).is_null(t)


def tilde_equal(sys: RelativeGBDS, s: TreeElement, t: TreeElement) -> bool:
    return Extension(sys).equal(s, t)


def tilde_membership(sys: RelativeGBDS, t: TreeElement, which: str) -> bool:
    """``which`` is ``"J"`` or ``"I:<label>"``."""
    ext = Extension(sys)
    if which == "J":
        return ext.in_j(t)
    if which.startswith("I:"):
        return ext.in_ideal(which[2:], t)
    raise ValueError(f"unknown membership target {which!r}")


# -- finitely generated subalgebras -----------------------------------------------


@dataclass
class GeneratedSubsystem:
    ext: Extension
    cells: list[TreeElement]
    names: list[str]
    system: RelativeGBDS

    def express(self, t: TreeElement) -> int | None:
        return _express(self.ext, self.cells, t)

    def mask_of(self, t: TreeElement) -> int:
        m = self.express(t)
        if m is None:
            raise ClosureError(f"{self.ext.serialize(t)} is not in the generated subalgebra")
        return m


def _express(ext: Extension, cells: Sequence[TreeElement], t: TreeElement) -> int | None:
    """Mask of cells whose join equals ``t`` modulo the null ideal, if any."""
    mask = 0
    covered = ext.empty()
    for k, c in enumerate(cells):
        if ext.is_null(ext.meet(c, t)):
            continue
        if not ext.is_null(ext.diff(c, t)):
            return None
        mask |= 1 << k
        covered = ext.join(covered, c)
    if not ext.is_null(ext.diff(t, covered)):
        return None
    return mask


def refine(ext: Extension, cells: list[TreeElement], g: TreeElement) -> list[TreeElement]:
    """Split the cells by ``g`` and add the part of ``g`` they miss."""
    out: list[TreeElement] = []
    covered = ext.empty()
    for c in cells:
        inside = ext.meet(c, g)
        outside = ext.diff(c, g)
        if not ext.is_null(inside):
            out.append(inside)
        if not ext.is_null(outside):
            out.append(outside)
        covered = ext.join(covered, c)
    rest = ext.diff(g, covered)
    if not ext.is_null(rest):
        out.append(rest)
    return out


def generated_subsystem(
    ext: Extension,
    gens: Iterable[TreeElement],
    close: bool = True,
    max_cells: int | None = None,
) -> GeneratedSubsystem:
    """Re-atomize the subalgebra generated by ``gens`` as a finite system.

    With ``close`` the shifted images of cells are added as generators until
    the subalgebra is invariant; without it, invariance is asserted.
    """
    sys = ext.sys
    gens = list(gens)
    limit = max_cells if max_cells is not None else max(64, 4 * len(gens) + 64)
    cells: list[TreeElement] = []
    for g in gens:
        cells = refine(ext, cells, g)
        if len(cells) > limit:
            raise ClosureError(f"more than {limit} cells; aborting")
    while True:
        missing = None
        images: list[list[int]] = [[0] * len(cells) for _ in sys.labels]
        for k, label in enumerate(sys.labels):
            for i, c in enumerate(cells):
                image = ext.theta(label, c)
                m = _express(ext, cells, image)
                if m is None:
                    missing = image
                    break
                images[k][i] = m
            if missing is not None:
                break
        if missing is None:
            break
        if not close:
            raise ClosureError(f"image {ext.serialize(missing)} escapes the generated subalgebra")
        cells = refine(ext, cells, missing)
        if len(cells) > limit:
            raise ClosureError(f"more than {limit} cells; aborting")
    names = ["g" + ext.serialize(c) for c in cells]
    ideal_tops = []
    for label in sys.labels:
        top = 0
        for i, c in enumerate(cells):
            if ext.in_ideal(label, c):
                top |= 1 << i
        ideal_tops.append(top)
    j_top = 0
    for i, c in enumerate(cells):
        if ext.in_j(c):
            j_top |= 1 << i
    theta = {
        label: {names[i]: [names[j] for j in iter_bits(images[k][i])] for i in range(len(cells)) if images[k][i]}
        for k, label in enumerate(sys.labels)
    }
    # full validation doubles as a runtime check of the structural claims
    system = validate_system(
        {
            "atoms": names,
            "labels": list(sys.labels),
            "theta": theta,
            "ideals": {label: [names[i] for i in iter_bits(ideal_tops[k])] for k, label in enumerate(sys.labels)},
            "J": [names[i] for i in iter_bits(j_top)],
        }
    )
    return GeneratedSubsystem(ext, cells, names, system)


# -- the subsystem attached to an admissible pair ----------------------------------


@dataclass
class SubsystemResult:
    pair: AdmissiblePair
    generated: GeneratedSubsystem
    generators: dict[int, TreeElement] = field(default_factory=dict)

    @property
    def system(self) -> RelativeGBDS:
        return self.generated.system

    @property
    def dictionary(self) -> dict[str, TreeElement]:
        return dict(zip(self.generated.names, self.generated.cells))


def generator_tree(ext: Extension, h_top: int, mask: int) -> TreeElement:
    """``iota(A)`` minus ``iota_a(theta_a(A))`` over the labels that survive modulo ``H``."""
    sys = ext.sys
    out = ext.iota((), mask)
    for label in sys.labels:
        image = sys.theta(label, mask)
        if image & ~h_top:
            out = ext.diff(out, ext.iota((label,), image))
    return out


def build_subsystem(sys: RelativeGBDS, pair: AdmissiblePair, ext: Extension | None = None) -> SubsystemResult:
    if not is_admissible(sys, pair):
        raise ValueError("pair is not admissible")
    ext = ext or Extension(sys)
    s = pair.s_top
    generators = {}
    sub = s
    masks = []
    while True:
        masks.append(sub)
        if sub == 0:
            break
        sub = (sub - 1) & s
    for mask in sorted(masks):
        generators[mask] = generator_tree(ext, pair.h_top, mask)
    generated = generated_subsystem(ext, generators.values(), close=False, max_cells=1 << max(len(generators), 1))
    return SubsystemResult(pair, generated, generators)


# -- facets of the isomorphism with the extension ------------------------------------


@dataclass
class FacetResult:
    name: str
    word: Word
    element: int
    verdict: Verdict

    @property
    def passed(self) -> bool:
        return self.verdict.holds_mod_ck


def _words(labels: Sequence[str], max_len: int) -> list[Word]:
    out: list[Word] = [()]
    frontier: list[Word] = [()]
    for _ in range(max_len):
        frontier = [w + (x,) for w in frontier for x in labels]
        out.extend(frontier)
    return out


def projection_facets(sys: RelativeGBDS, max_len: int = 3, ext: Extension | None = None) -> list[FacetResult]:
    """``p_{iota_gamma(C)} = s_{gamma,iota(C)} s*_{gamma,iota(C)}`` for ``|gamma| <= max_len``, ``C`` in the range of ``gamma``."""
    ext = ext or Extension(sys)
    results = []
    for word in _words(sys.labels, max_len):
        if not word:
            continue
        top = ext.range_top(word)
        if not top:
            continue
        atoms = list(iter_bits(top))
        gens = [ext.iota(word[k:], 1 << a) for k in range(len(word) + 1) for a in atoms]
        gen = generated_subsystem(ext, gens, close=True)
        alg = StarAlgebra(gen.system)
        for mask in range(1, top + 1):
            if mask & ~top:
                continue
            lhs = alg.p(gen.mask_of(ext.iota(word, mask)))
            s = alg.s_word(word, gen.mask_of(ext.iota((), mask)))
            verdict = alg.equal_mod_ck(lhs, s * s.adjoint())
            results.append(FacetResult("projection", word, mask, verdict))
    return results


def partial_isometry_facets(sys: RelativeGBDS, max_len: int = 3, ext: Extension | None = None) -> list[FacetResult]:
    """``s_{a,iota_gamma(B)} = s_{a,iota(C)} p_{iota_gamma(B)}`` with ``C = top(I_a)`` and ``B`` in ``I_{a gamma}``."""
    ext = ext or Extension(sys)
    results = []
    for label in sys.labels:
        c_top = sys.ideal_top(label)
        for word in _words(sys.labels, max_len - 1 if max_len > 0 else 0):
            b_top = sys.word_ideal_top((label,) + word)
            if not b_top:
                continue
            gens = [ext.iota((), c_top)] + [ext.iota(word, 1 << a) for a in iter_bits(b_top)]
            gen = generated_subsystem(ext, gens, close=True)
            alg = StarAlgebra(gen.system)
            c_mask = gen.mask_of(ext.iota((), c_top))
            for mask in range(1, b_top + 1):
                if mask & ~b_top:
                    continue
                b_mask = gen.mask_of(ext.iota(word, mask))
                verdict = alg.equal_mod_ck(alg.s(label, b_mask), alg.s(label, c_mask) * alg.p(b_mask))
                results.append(FacetResult("partial-isometry", (label,) + word, mask, verdict))
    return results


@dataclass
class StructuralFacets:
    injective: bool
    intertwining: bool
    j_compatible: bool
    failures: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.injective and self.intertwining and self.j_compatible


def structural_facets(sys: RelativeGBDS, ext: Extension | None = None) -> StructuralFacets:
    """Exhaustive over elements: ``iota`` is injective, intertwines the actions and detects ``J``."""
    ext = ext or Extension(sys)
    names = sys.algebra.names
    trees = [ext.iota((), m) for m in range(sys.top_mask + 1)]
    failures = []
    injective = intertwining = j_ok = True
    for a in range(len(trees)):
        for b in range(a + 1, len(trees)):
            if ext.equal(trees[a], trees[b]):
                injective = False
                failures.append(f"iota identifies {names(a)} and {names(b)}")
    for m, t in enumerate(trees):
        for label in sys.labels:
            if not ext.equal(ext.iota((), sys.theta(label, m)), ext.theta(label, t)):
                intertwining = False
                failures.append(f"iota does not intertwine {label} at {names(m)}")
        if ext.in_j(t) != (m & ~sys.j_top == 0):
            j_ok = False
            failures.append(f"J-membership of iota({names(m)}) is wrong")
    return StructuralFacets(injective, intertwining, j_ok, failures)
