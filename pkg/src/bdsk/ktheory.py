"""K-groups of a finite system from the integer matrix of ``(1 - Phi)`` restricted to ``J``.

Rows are indexed by all atoms, columns by the atoms below ``J``.  ``K0`` is
the cokernel and ``K1`` the kernel of that matrix.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .boolean import Element, iter_bits
from .dynamics import Digraph, RelativeGBDS, import_graph
from .snf import IntegerMatrix, SmithDecomposition, hermite_rows, smith_normal_form


@dataclass(frozen=True)
class AbelianGroupPresentation:
    free_rank: int
    torsion: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        for a, b in zip(self.torsion, self.torsion[1:]):
            if b % a:
                raise ValueError("torsion factors must form a divisibility chain")
        if any(d <= 1 for d in self.torsion):
            raise ValueError("torsion factors must exceed 1")

    @property
    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    def __str__(self) -> str:
        parts = [f"Z/{d}" for d in self.torsion]
        if self.free_rank == 1:
            parts.append("Z")
        elif self.free_rank > 1:
            parts.append(f"Z^{self.free_rank}")
        return " + ".join(parts) if parts else "0"

    def to_dict(self) -> dict:
        return {"free_rank": self.free_rank, "torsion": list(self.torsion), "text": str(self)}


def cokernel_presentation(smith: SmithDecomposition, rows: int) -> AbelianGroupPresentation:
    return AbelianGroupPresentation(
        rows - smith.rank, tuple(d for d in smith.invariant_factors if d > 1)
    )


@dataclass(frozen=True)
class KTheoryResult:
    j_atoms: tuple[str, ...]
    b_atoms: tuple[str, ...]
    matrix: IntegerMatrix
    smith: SmithDecomposition
    k0: AbelianGroupPresentation
    k1_free_rank: int
    k1_basis: tuple[tuple[int, ...], ...]

    @property
    def k1(self) -> AbelianGroupPresentation:
        return AbelianGroupPresentation(self.k1_free_rank)


def phi_matrix(sys: RelativeGBDS) -> IntegerMatrix:
    """``entry[b][a]`` counts the labels sending atom ``a`` (below ``J``) onto atom ``b``."""
    j_idx = list(iter_bits(sys.j_top))
    rows = [[0] * len(j_idx) for _ in range(sys.n_atoms)]
    for c, a in enumerate(j_idx):
        for row in sys.images:
            for b in iter_bits(row[a]):
                rows[b][c] += 1
    return IntegerMatrix.from_rows(rows, len(j_idx))


def one_minus_phi(sys: RelativeGBDS) -> IntegerMatrix:
    j_idx = list(iter_bits(sys.j_top))
    phi = phi_matrix(sys)
    rows = [
        [int(b == a) - phi[b, c] for c, a in enumerate(j_idx)]
        for b in range(sys.n_atoms)
    ]
    return IntegerMatrix.from_rows(rows, len(j_idx))


def kernel_basis(smith: SmithDecomposition) -> tuple[tuple[int, ...], ...]:
    """A basis of the integer kernel, presented in Hermite form."""
    v = smith.V
    raw = [v.column(j) for j in range(smith.rank, v.cols)]
    return tuple(hermite_rows(raw))


def k_groups(sys: RelativeGBDS) -> KTheoryResult:
    matrix = one_minus_phi(sys)
    smith = smith_normal_form(matrix)
    basis = kernel_basis(smith)
    return KTheoryResult(
        j_atoms=sys.algebra.names(sys.j_top),
        b_atoms=sys.algebra.atoms,
        matrix=matrix,
        smith=smith,
        k0=cokernel_presentation(smith, matrix.rows),
        k1_free_rank=matrix.cols - smith.rank,
        k1_basis=basis,
    )


@dataclass(frozen=True)
class K0Class:
    """Coordinates of a class: torsion parts (value, modulus), then free parts."""

    torsion: tuple[tuple[int, int], ...]
    free: tuple[int, ...]

    @property
    def is_zero(self) -> bool:
        return all(x == 0 for x, _ in self.torsion) and all(x == 0 for x in self.free)

    def to_dict(self) -> dict:
        return {
            "torsion": [{"value": x, "modulus": d} for x, d in self.torsion],
            "free": list(self.free),
        }


def k0_class_vector(result: KTheoryResult, vector: Sequence[int]) -> K0Class:
    y = result.smith.U.apply(vector)
    torsion = tuple(
        (y[i] % d, d) for i, d in enumerate(result.smith.invariant_factors) if d > 1
    )
    free = tuple(y[i] for i in range(result.smith.rank, len(y)))
    return K0Class(torsion, free)


def k0_class(sys: RelativeGBDS, element: Element, result: KTheoryResult | None = None) -> K0Class:
    """The class of ``p_A`` read off in the Smith basis (basis dependent, not canonical)."""
    if element.algebra != sys.algebra:
        raise ValueError("element does not belong to the system's algebra")
    result = result or k_groups(sys)
    chi = [(element.mask >> i) & 1 for i in range(sys.n_atoms)]
    return k0_class_vector(result, chi)


def graph_matrix(graph: Digraph) -> IntegerMatrix:
    """``I - A^t`` with columns restricted to emitting vertices, built from the edge list."""
    pos = {name: i for i, name in enumerate(graph.vertices)}
    n = len(graph.vertices)
    adjacency = [[0] * n for _ in range(n)]
    for _, s, r in graph.edges:
        adjacency[pos[s]][pos[r]] += 1
    regular = [i for i in range(n) if any(adjacency[i])]
    rows = [[int(w == v) - adjacency[v][w] for v in regular] for w in range(n)]
    return IntegerMatrix.from_rows(rows, len(regular))


def graph_cross_check(graph: Digraph) -> dict:
    """Compare the system pipeline with the classical graph-algebra computation."""
    from .oracles import naive_smith_invariants

    pipeline = k_groups(import_graph(graph))
    m = graph_matrix(graph)
    rank, factors = naive_smith_invariants(m)
    classical_k0 = AbelianGroupPresentation(m.rows - rank, tuple(d for d in factors if d > 1))
    classical_k1 = AbelianGroupPresentation(m.cols - rank)
    match = pipeline.k0 == classical_k0 and pipeline.k1 == classical_k1
    return {
        "pipeline": {"K0": pipeline.k0.to_dict(), "K1": pipeline.k1.to_dict()},
        "classical": {"K0": classical_k0.to_dict(), "K1": classical_k1.to_dict()},
        "match": match,
    }
