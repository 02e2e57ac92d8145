"""Relative generalized Boolean dynamical systems over finite atom sets.

A system is stored at atom level: for each label the image of every atom
is a bitmask, and images of distinct atoms under one label are disjoint.
The action on an arbitrary element is the join of the atom images.  Ideal
data (the ideals attached to labels and the relative ideal ``J``) is held
as top elements.

Mask-level methods on :class:`RelativeGBDS` are the working interface used
by the rest of the package; the module-level functions take and return
:class:`~bdsk.boolean.Element` values.
"""

from __future__ import annotations

from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, NamedTuple

from .boolean import Element, FiniteBooleanAlgebra, iter_bits, quotient_algebra

Word = tuple[str, ...]


class SystemValidationError(ValueError):
    """Raised with the complete list of problems found in a system description."""

    def __init__(self, errors: Sequence[str]):
        self.errors = list(errors)
        super().__init__("; ".join(self.errors))


@dataclass(frozen=True)
class RelativeGBDS:
    algebra: FiniteBooleanAlgebra
    labels: tuple[str, ...]
    # images[k][i] is the mask of theta_{labels[k]}(atom i)
    images: tuple[tuple[int, ...], ...]
    ideal_tops: tuple[int, ...]
    j_top: int

    @cached_property
    def label_index(self) -> dict[str, int]:
        return {label: k for k, label in enumerate(self.labels)}

    @property
    def n_atoms(self) -> int:
        return len(self.algebra)

    @property
    def top_mask(self) -> int:
        return self.algebra.top_mask

    def _label(self, label: str) -> int:
        try:
            return self.label_index[label]
        except KeyError:
            raise KeyError(f"unknown label {label!r}") from None

    def theta(self, label: str, mask: int) -> int:
        return self.theta_k(self._label(label), mask)

    def theta_k(self, k: int, mask: int) -> int:
        row = self.images[k]
        out = 0
        for i in iter_bits(mask):
            out |= row[i]
        return out

    def theta_word(self, word: Sequence[str], mask: int) -> int:
        # theta_{b1...bn} = theta_bn o ... o theta_b1: apply left to right
        for label in word:
            if not mask:
                if label not in self.label_index:
                    raise KeyError(f"unknown label {label!r}")
                continue
            mask = self.theta(label, mask)
        return mask

    def delta(self, mask: int) -> tuple[str, ...]:
        return tuple(label for k, label in enumerate(self.labels) if self.theta_k(k, mask))

    @cached_property
    def atom_delta(self) -> tuple[tuple[int, ...], ...]:
        """Label indices emitted by each atom."""
        return tuple(
            tuple(k for k in range(len(self.labels)) if self.images[k][i])
            for i in range(self.n_atoms)
        )

    @cached_property
    def b_reg_top(self) -> int:
        out = 0
        for i in range(self.n_atoms):
            if self.atom_delta[i]:
                out |= 1 << i
        return out

    def r_top(self, label: str) -> int:
        return self.theta(label, self.top_mask)

    def ideal_top(self, label: str) -> int:
        return self.ideal_tops[self._label(label)]

    def word_ideal_top(self, word: Sequence[str]) -> int:
        """Top of the word ideal: ``theta_{a2...an}(top(I_a1))``, or everything for the empty word."""
        if not word:
            return self.top_mask
        return self.theta_word(word[1:], self.ideal_top(word[0]))

    @cached_property
    def edges(self) -> tuple[tuple[int, int, int], ...]:
        """Atom-graph edges ``(source, label index, target)``."""
        out = []
        for k, row in enumerate(self.images):
            for i, image in enumerate(row):
                for j in iter_bits(image):
                    out.append((i, k, j))
        return tuple(out)

    @cached_property
    def successors(self) -> tuple[tuple[tuple[int, int], ...], ...]:
        succ: list[list[tuple[int, int]]] = [[] for _ in range(self.n_atoms)]
        for i, k, j in self.edges:
            succ[i].append((k, j))
        return tuple(tuple(s) for s in succ)

    def element(self, mask: int) -> Element:
        return Element(self.algebra, mask)

    def to_document(self) -> dict[str, Any]:
        """Explicit raw description (ideal tops and ``J`` included)."""
        names = self.algebra.names
        theta: dict[str, dict[str, list[str]]] = {}
        for k, label in enumerate(self.labels):
            entries = {
                self.algebra.atoms[i]: list(names(image))
                for i, image in enumerate(self.images[k])
                if image
            }
            theta[label] = entries
        return {
            "atoms": list(self.algebra.atoms),
            "labels": list(self.labels),
            "theta": theta,
            "ideals": {label: list(names(self.ideal_tops[k])) for k, label in enumerate(self.labels)},
            "J": list(names(self.j_top)),
        }


def _as_mapping(doc: Any) -> Mapping[str, Any]:
    if hasattr(doc, "to_dict"):
        return doc.to_dict()
    if not isinstance(doc, Mapping):
        raise SystemValidationError(["system description must be an object"])
    return doc


def validate_system(doc: Any) -> RelativeGBDS:
    """Build a system from a raw description, collecting every violation.

    The description has ``atoms``, ``labels``, ``theta`` (label -> atom ->
    list of atoms) and optionally ``ideals`` (label -> top of the label's
    ideal; default: the range of the label) and ``J`` (default: all
    emitting atoms).
    """
    doc = _as_mapping(doc)
    errors: list[str] = []
    atoms = doc.get("atoms")
    labels = doc.get("labels")
    if not isinstance(atoms, Sequence) or isinstance(atoms, str) or not all(isinstance(a, str) for a in atoms):
        raise SystemValidationError(["'atoms' must be an array of strings"])
    if not isinstance(labels, Sequence) or isinstance(labels, str) or not all(isinstance(a, str) for a in labels):
        raise SystemValidationError(["'labels' must be an array of strings"])
    if len(set(atoms)) != len(atoms):
        errors.append("duplicate atom names")
    if len(set(labels)) != len(labels):
        errors.append("duplicate label names")
    if errors:
        raise SystemValidationError(errors)
    algebra = FiniteBooleanAlgebra(tuple(atoms))
    index = algebra.index
    label_set = set(labels)

    def to_mask(names: Any, where: str) -> int:
        if not isinstance(names, Sequence) or isinstance(names, str):
            errors.append(f"{where}: expected an array of atoms")
            return 0
        mask = 0
        for name in names:
            if name not in index:
                errors.append(f"{where}: unknown atom {name!r}")
            else:
                mask |= 1 << index[name]
        return mask

    theta = doc.get("theta", {}) or {}
    if not isinstance(theta, Mapping):
        raise SystemValidationError(["'theta' must be an object"])
    for label in theta:
        if label not in label_set:
            errors.append(f"theta: unknown label {label!r}")
    images: list[tuple[int, ...]] = []
    for label in labels:
        table = theta.get(label, {}) or {}
        row = [0] * len(atoms)
        if not isinstance(table, Mapping):
            errors.append(f"theta[{label}]: expected an object")
            table = {}
        for src, targets in table.items():
            mask = to_mask(targets, f"theta[{label}][{src}]")
            if src not in index:
                errors.append(f"theta[{label}]: unknown atom {src!r}")
                continue
            row[index[src]] = mask
        seen = 0
        for i, image in enumerate(row):
            overlap = seen & image
            if overlap:
                owners = [algebra.atoms[j] for j in range(i) if row[j] & overlap]
                errors.append(
                    f"theta[{label}]: images of {', '.join(owners)} and {algebra.atoms[i]} overlap at "
                    f"{{{','.join(algebra.names(overlap))}}} (images of distinct atoms must be disjoint)"
                )
            seen |= image
        images.append(tuple(row))

    ideals = doc.get("ideals")
    ideal_tops: list[int] = []
    if ideals is not None and not isinstance(ideals, Mapping):
        errors.append("'ideals' must be an object")
        ideals = None
    if ideals is not None:
        for label in ideals:
            if label not in label_set:
                errors.append(f"ideals: unknown label {label!r}")
    for k, label in enumerate(labels):
        r_top = 0
        for image in images[k]:
            r_top |= image
        if ideals is not None and label in ideals:
            top = to_mask(ideals[label], f"ideals[{label}]")
            missing = r_top & ~top
            if missing:
                errors.append(
                    f"I_{label} does not contain R_{label}: missing {{{','.join(algebra.names(missing))}}}"
                )
        else:
            top = r_top
        ideal_tops.append(top)

    b_reg = 0
    for i in range(len(atoms)):
        if any(images[k][i] for k in range(len(labels))):
            b_reg |= 1 << i
    if "J" in doc and doc["J"] is not None:
        j_top = to_mask(doc["J"], "J")
        bad = j_top & ~b_reg
        if bad:
            errors.append(f"J ⊄ B_reg: {{{','.join(algebra.names(bad))}}} emit no label")
    else:
        j_top = b_reg
    if errors:
        raise SystemValidationError(errors)
    return RelativeGBDS(algebra, tuple(labels), tuple(images), tuple(ideal_tops), j_top)


def make_system(
    atoms: Sequence[str],
    theta: Mapping[str, Mapping[str, Sequence[str]]],
    labels: Sequence[str] | None = None,
    ideals: Mapping[str, Sequence[str]] | None = None,
    J: Sequence[str] | None = None,
) -> RelativeGBDS:
    """Convenience constructor around :func:`validate_system`."""
    doc: dict[str, Any] = {
        "atoms": list(atoms),
        "labels": list(labels) if labels is not None else list(theta),
        "theta": theta,
    }
    if ideals is not None:
        doc["ideals"] = ideals
    if J is not None:
        doc["J"] = J
    return validate_system(doc)


def _check(sys: RelativeGBDS, element: Element) -> int:
    if element.algebra != sys.algebra:
        raise ValueError("element does not belong to the system's algebra")
    return element.mask


def theta_word(sys: RelativeGBDS, word: Sequence[str], element: Element) -> Element:
    return sys.element(sys.theta_word(tuple(word), _check(sys, element)))


def delta_set(sys: RelativeGBDS, element: Element) -> tuple[str, ...]:
    return sys.delta(_check(sys, element))


class DerivedIdeals(NamedTuple):
    b_reg_top: Element
    r_tops: dict[str, Element]
    word_ideal_top: Any  # Callable[[Sequence[str]], Element]


def derived_ideals(sys: RelativeGBDS) -> DerivedIdeals:
    def word_ideal_top(word: Sequence[str]) -> Element:
        return sys.element(sys.word_ideal_top(tuple(word)))

    return DerivedIdeals(
        sys.element(sys.b_reg_top),
        {label: sys.element(sys.r_top(label)) for label in sys.labels},
        word_ideal_top,
    )


# -- ideals of the Boolean algebra -----------------------------------------


def is_hereditary_mask(sys: RelativeGBDS, h: int) -> bool:
    return all(sys.theta_k(k, h) & ~h == 0 for k in range(len(sys.labels)))


def is_j_saturated_mask(sys: RelativeGBDS, h: int) -> bool:
    # saturation on all of J reduces to atoms because theta is additive
    for i in iter_bits(sys.j_top & ~h):
        if all(sys.images[k][i] & ~h == 0 for k in range(len(sys.labels))):
            return False
    return True


def b_h_top_mask(sys: RelativeGBDS, h: int) -> int:
    """Top of ``B_H``: ``h`` plus the atoms that still emit modulo ``h``."""
    out = h
    for i in range(sys.n_atoms):
        if h >> i & 1:
            continue
        if any(sys.images[k][i] & ~h for k in range(len(sys.labels))):
            out |= 1 << i
    return out


class IdealClassification(NamedTuple):
    hereditary: bool
    j_saturated: bool
    b_h_top: Element


def classify_ideal(sys: RelativeGBDS, h: Element) -> IdealClassification:
    mask = _check(sys, h)
    return IdealClassification(
        is_hereditary_mask(sys, mask),
        is_j_saturated_mask(sys, mask),
        sys.element(b_h_top_mask(sys, mask)),
    )


@dataclass(frozen=True)
class AdmissiblePair:
    h_top: int
    s_top: int

    def leq(self, other: AdmissiblePair) -> bool:
        return self.h_top & ~other.h_top == 0 and self.s_top & ~other.s_top == 0


def is_admissible(sys: RelativeGBDS, pair: AdmissiblePair) -> bool:
    h, s = pair.h_top, pair.s_top
    if not (is_hereditary_mask(sys, h) and is_j_saturated_mask(sys, h)):
        return False
    if (h | sys.j_top) & ~s:
        return False
    return s & ~b_h_top_mask(sys, h) == 0


@dataclass(frozen=True)
class PairLattice:
    """Admissible pairs in ``(h, s)`` bitmask order, with the product order."""

    pairs: tuple[AdmissiblePair, ...]

    def __len__(self) -> int:
        return len(self.pairs)

    def __iter__(self):
        return iter(self.pairs)

    def __getitem__(self, i: int) -> AdmissiblePair:
        return self.pairs[i]

    def leq(self, i: int, j: int) -> bool:
        return self.pairs[i].leq(self.pairs[j])

    def order(self) -> list[tuple[int, int]]:
        n = len(self.pairs)
        return [(i, j) for i in range(n) for j in range(n) if i != j and self.leq(i, j)]

    def covers(self) -> list[tuple[int, int]]:
        """Hasse-diagram edges ``(lower, upper)``."""
        n = len(self.pairs)
        out = []
        for i, j in self.order():
            if not any(k not in (i, j) and self.leq(i, k) and self.leq(k, j) for k in range(n)):
                out.append((i, j))
        return out

    def meet(self, i: int, j: int) -> int | None:
        lower = [k for k in range(len(self.pairs)) if self.leq(k, i) and self.leq(k, j)]
        top = [k for k in lower if all(self.leq(m, k) for m in lower)]
        return top[0] if top else None

    def join(self, i: int, j: int) -> int | None:
        upper = [k for k in range(len(self.pairs)) if self.leq(i, k) and self.leq(j, k)]
        bottom = [k for k in upper if all(self.leq(k, m) for m in upper)]
        return bottom[0] if bottom else None


def _submasks(mask: int) -> list[int]:
    out = []
    s = mask
    while True:
        out.append(s)
        if s == 0:
            break
        s = (s - 1) & mask
    return sorted(out)


def enumerate_admissible_pairs(sys: RelativeGBDS) -> PairLattice:
    pairs = []
    for h in range(sys.top_mask + 1):
        if not (is_hereditary_mask(sys, h) and is_j_saturated_mask(sys, h)):
            continue
        low = h | sys.j_top
        high = b_h_top_mask(sys, h)
        if low & ~high:
            continue
        for extra in _submasks(high & ~low):
            pairs.append(AdmissiblePair(h, low | extra))
    pairs.sort(key=lambda p: (p.h_top, p.s_top))
    return PairLattice(tuple(pairs))


def quotient_system(sys: RelativeGBDS, pair: AdmissiblePair) -> RelativeGBDS:
    """The system on ``B/H`` with projected actions, ideals and ``J = [S]``."""
    if not is_admissible(sys, pair):
        raise ValueError(f"pair {pair} is not admissible")
    q = quotient_algebra(sys.algebra, sys.element(pair.h_top))
    images = tuple(
        tuple(q.project_mask(row[i]) for i in q.surviving)
        for row in sys.images
    )
    ideal_tops = tuple(q.project_mask(t) for t in sys.ideal_tops)
    return RelativeGBDS(q.quotient, sys.labels, images, ideal_tops, q.project_mask(pair.s_top))


# -- Condition (K) ------------------------------------------------------------


class ConditionK(NamedTuple):
    holds: bool
    witness: tuple[str, Word] | None


def _first_return_profile(sys: RelativeGBDS, a: int) -> tuple[int, Word | None]:
    """Number of first-return paths at atom ``a`` capped at 2, plus the word when unique.

    Paths may pass through any atom except ``a`` before the final step.
    Distinct paths carry distinct words because each label's action is
    injective on atoms (disjoint images), so counting paths counts words.
    """
    succ = sys.successors
    n = sys.n_atoms
    # forward reachability avoiding a
    starts = [j for _, j in succ[a] if j != a]
    fwd = set()
    stack = list(starts)
    while stack:
        v = stack.pop()
        if v in fwd:
            continue
        fwd.add(v)
        stack.extend(j for _, j in succ[v] if j != a and j not in fwd)
    # backward reachability to a avoiding a
    pred: list[list[int]] = [[] for _ in range(n)]
    into_a = set()
    for i, _, j in sys.edges:
        if j == a and i != a:
            into_a.add(i)
        elif i != a and j != a:
            pred[j].append(i)
    bwd = set()
    stack = list(into_a)
    while stack:
        v = stack.pop()
        if v in bwd:
            continue
        bwd.add(v)
        stack.extend(i for i in pred[v] if i not in bwd)
    live = fwd & bwd
    # a cycle among live atoms yields infinitely many first returns
    color = dict.fromkeys(live, 0)
    order: list[int] = []

    def visit(v: int) -> bool:
        color[v] = 1
        for _, j in succ[v]:
            if j in color:
                if color[j] == 1:
                    return True
                if color[j] == 0 and visit(j):
                    return True
        color[v] = 2
        order.append(v)
        return False

    for v in sorted(live):
        if color[v] == 0 and visit(v):
            return 2, None
    # count paths to a, capped, in reverse topological order
    count: dict[int, int] = {}
    for v in order:
        c = 0
        for _, j in succ[v]:
            if j == a:
                c += 1
            elif j in live:
                c += count[j]
        count[v] = min(c, 2)
    total = 0
    for _, j in succ[a]:
        total += 1 if j == a else count.get(j, 0)
    total = min(total, 2)
    if total != 1:
        return total, None
    labels = sys.labels
    word: list[str] = []
    v = a
    while True:
        step = None
        for k, j in succ[v]:
            if j == a and (v != a or not word):
                step = (k, j)
                break
            if j != a and j in live and count[j] == 1:
                step = (k, j)
                break
        assert step is not None
        word.append(labels[step[0]])
        v = step[1]
        if v == a:
            return 1, tuple(word)


def condition_k(sys: RelativeGBDS) -> ConditionK:
    """Decide Condition (K) by the single-first-return-word test at each atom."""
    for a in range(sys.n_atoms):
        total, word = _first_return_profile(sys, a)
        if total == 1:
            return ConditionK(False, (sys.algebra.atoms[a], word))
    return ConditionK(True, None)


# -- tails --------------------------------------------------------------------


def reachable_atoms(sys: RelativeGBDS, mask: int) -> int:
    """Atoms lying below some ``theta_gamma(A)``, including ``gamma`` empty."""
    seen = mask
    frontier = mask
    while frontier:
        nxt = 0
        for i in iter_bits(frontier):
            for _, j in sys.successors[i]:
                nxt |= 1 << j
        frontier = nxt & ~seen
        seen |= nxt
    return seen


def cyclic_atoms(sys: RelativeGBDS) -> int:
    """Atoms lying on a cycle of the atom graph."""
    out = 0
    for i in range(sys.n_atoms):
        first = 0
        for _, j in sys.successors[i]:
            first |= 1 << j
        if reachable_atoms(sys, first) >> i & 1:
            out |= 1 << i
    return out


def vanishing_tail_mask(sys: RelativeGBDS, mask: int, within_j: bool) -> bool:
    if not mask:
        return True
    reach = reachable_atoms(sys, mask)
    if reach & _cyclic(sys):
        return False
    if within_j and reach & ~sys.j_top:
        return False
    return True


def _cyclic(sys: RelativeGBDS) -> int:
    # memoized on the instance; frozen dataclasses still own a __dict__
    cached = sys.__dict__.get("_cyclic_atoms")
    if cached is None:
        cached = cyclic_atoms(sys)
        sys.__dict__["_cyclic_atoms"] = cached
    return cached


def vanishing_tail(sys: RelativeGBDS, element: Element, within_j: bool = False) -> bool:
    """Whether only finitely many words keep ``A`` nonempty (inside ``J`` when asked)."""
    return vanishing_tail_mask(sys, _check(sys, element), within_j)


# -- graphs -------------------------------------------------------------------


@dataclass(frozen=True)
class Digraph:
    vertices: tuple[str, ...]
    # (name, source, range)
    edges: tuple[tuple[str, str, str], ...] = field(default=())

    @classmethod
    def from_pairs(cls, n: int, pairs: Sequence[tuple[int, int]]) -> Digraph:
        vertices = tuple(f"v{i}" for i in range(n))
        edges = tuple((f"e{k}", vertices[s], vertices[r]) for k, (s, r) in enumerate(pairs))
        return cls(vertices, edges)


def import_graph(graph: Digraph) -> RelativeGBDS:
    """One atom per vertex and one label per edge; ``J`` is every emitting vertex."""
    algebra = FiniteBooleanAlgebra(graph.vertices)
    index = algebra.index
    names = [e[0] for e in graph.edges]
    if len(set(names)) != len(names):
        raise SystemValidationError(["edge names must be unique"])
    n = len(graph.vertices)
    images = []
    ideal_tops = []
    b_reg = 0
    for _, src, rng in graph.edges:
        row = [0] * n
        row[index[src]] = 1 << index[rng]
        images.append(tuple(row))
        ideal_tops.append(1 << index[rng])
        b_reg |= 1 << index[src]
    return RelativeGBDS(algebra, tuple(names), tuple(images), tuple(ideal_tops), b_reg)
