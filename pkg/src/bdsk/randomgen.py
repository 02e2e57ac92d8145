"""Seeded random systems, digraphs and integer matrices for the property suites."""

from __future__ import annotations

import random

from .boolean import iter_bits
from .dynamics import Digraph, RelativeGBDS, make_system
from .snf import IntegerMatrix


def random_system(
    rng: random.Random,
    max_atoms: int = 5,
    max_labels: int = 4,
    density: float = 0.45,
    min_atoms: int = 1,
) -> RelativeGBDS:
    """Disjoint images per label, random ideals above the ranges and a random ``J`` inside ``B_reg``."""
    n = rng.randint(min_atoms, max_atoms)
    m = rng.randint(1, max_labels)
    atoms = [f"x{i}" for i in range(n)]
    labels = [f"l{k}" for k in range(m)]
    theta: dict[str, dict[str, list[str]]] = {}
    for label in labels:
        table: dict[str, list[str]] = {}
        for b in atoms:
            # each target atom is claimed by at most one source, keeping images disjoint
            if rng.random() < density:
                table.setdefault(rng.choice(atoms), []).append(b)
        theta[label] = table
    ranges = {label: {b for imgs in theta[label].values() for b in imgs} for label in labels}
    ideals = {
        label: sorted(ranges[label] | {a for a in atoms if rng.random() < 0.25}, key=atoms.index)
        for label in labels
    }
    emitting = [a for a in atoms if any(theta[label].get(a) for label in labels)]
    if rng.random() < 0.5:
        j = emitting
    else:
        j = [a for a in emitting if rng.random() < 0.6]
    return make_system(atoms, theta, labels=labels, ideals=ideals, J=j)


def random_digraph(rng: random.Random, max_vertices: int = 6, max_edges: int = 12) -> Digraph:
    n = rng.randint(1, max_vertices)
    e = rng.randint(0, max_edges)
    return Digraph.from_pairs(n, [(rng.randrange(n), rng.randrange(n)) for _ in range(e)])


def random_matrix(rng: random.Random, max_rows: int = 8, max_cols: int = 8, bound: int = 9) -> IntegerMatrix:
    r = rng.randint(1, max_rows)
    c = rng.randint(1, max_cols)
    zero_bias = rng.random() * 0.5
    rows = [[0 if rng.random() < zero_bias else rng.randint(-bound, bound) for _ in range(c)] for _ in range(r)]
    return IntegerMatrix.from_rows(rows, c)


def random_kernel_systems(
    rng: random.Random, count: int, condition_k_only: bool = False, **kw
) -> list[RelativeGBDS]:
    """Random systems with nontrivial ``K1`` (rejection sampling), optionally also satisfying Condition (K)."""
    from .dynamics import condition_k
    from .ktheory import k_groups

    out = []
    while len(out) < count:
        sys = random_system(rng, **kw)
        if k_groups(sys).k1_free_rank and (not condition_k_only or condition_k(sys).holds):
            out.append(sys)
    return out


def atom_names(sys: RelativeGBDS, mask: int) -> list[str]:
    return [sys.algebra.atoms[i] for i in iter_bits(mask)]
