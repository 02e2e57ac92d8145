"""Seeded oracle suites shared by the ``selftest`` command and the test-suite."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Callable

from .dynamics import condition_k, enumerate_admissible_pairs, import_graph, vanishing_tail_mask
from .extension import Extension, projection_facets, structural_facets
from .k1gen import KernelElement, signed_index_data
from .ktheory import graph_cross_check, k_groups
from .oracles import (
    brute_force_pairs,
    condition_k_oracle,
    determinantal_invariants,
    naive_smith_invariants,
    vanishing_tail_orbit,
)
from .randomgen import random_digraph, random_matrix, random_system
from .snf import IntegerMatrix, determinant, smith_normal_form


@dataclass
class SuiteResult:
    name: str
    cases: int = 0
    failures: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures


def smith_case(m: IntegerMatrix) -> str | None:
    """``None`` when the decomposition is sound and matches both oracles, else a reason."""
    sd = smith_normal_form(m)
    if sd.U @ m @ sd.V != sd.D:
        return "U M V != D"
    if abs(determinant(sd.U)) != 1 or abs(determinant(sd.V)) != 1:
        return "non-unimodular transform"
    diag = sd.invariant_factors
    if any(b % a for a, b in zip(diag, diag[1:])):
        return "divisibility chain broken"
    for i in range(sd.D.rows):
        for j in range(sd.D.cols):
            if i != j and sd.D[i, j]:
                return "off-diagonal entry"
    rank, naive = naive_smith_invariants(m)
    if rank != sd.rank or naive != diag:
        return f"oracle mismatch {naive} vs {diag}"
    if min(m.rows, m.cols) <= 5 and determinantal_invariants(m) != diag:
        return "determinantal mismatch"
    return None


def suite_smith(rng: random.Random, count: int) -> SuiteResult:
    out = SuiteResult("smith-normal-form")
    for _ in range(count):
        m = random_matrix(rng)
        out.cases += 1
        reason = smith_case(m)
        if reason:
            out.failures.append(f"{m.tolist()}: {reason}")
    return out


def suite_graphs(rng: random.Random, count: int) -> SuiteResult:
    out = SuiteResult("graph-cross-check")
    for _ in range(count):
        g = random_digraph(rng)
        out.cases += 1
        if not graph_cross_check(g)["match"]:
            out.failures.append(repr(g))
    return out


def suite_condition_k(rng: random.Random, count: int) -> SuiteResult:
    out = SuiteResult("condition-k")
    for _ in range(count):
        g = random_digraph(rng, max_vertices=5, max_edges=8)
        pos = {v: i for i, v in enumerate(g.vertices)}
        edges = [(pos[s], pos[r]) for _, s, r in g.edges]
        out.cases += 1
        if condition_k(import_graph(g)).holds != condition_k_oracle(len(g.vertices), edges)[0]:
            out.failures.append(repr(edges))
    return out


def suite_systems(rng: random.Random, count: int) -> SuiteResult:
    """Pairs and tails against brute force, and the cardinality identity for kernel vectors."""
    out = SuiteResult("systems")
    for _ in range(count):
        sys = random_system(rng)
        out.cases += 1
        got = [(p.h_top, p.s_top) for p in enumerate_admissible_pairs(sys)]
        if got != brute_force_pairs(sys):
            out.failures.append(f"pairs {sys.to_document()}")
        for m in range(sys.top_mask + 1):
            for within in (False, True):
                if vanishing_tail_mask(sys, m, within) != vanishing_tail_orbit(sys, m, within):
                    out.failures.append(f"tail {m} {within} {sys.to_document()}")
        for vec in k_groups(sys).k1_basis:
            try:
                signed_index_data(sys, KernelElement.from_vector(sys, vec))
            except AssertionError as exc:
                out.failures.append(f"cardinality {exc}")
    return out


def suite_extension(rng: random.Random, count: int, max_word_len: int = 3) -> SuiteResult:
    out = SuiteResult("extension")
    for _ in range(count):
        sys = random_system(rng, max_atoms=4, max_labels=3)
        ext = Extension(sys)
        out.cases += 1
        facets = structural_facets(sys, ext)
        out.failures.extend(facets.failures)
        for r in projection_facets(sys, max_word_len, ext):
            if not r.passed:
                out.failures.append(f"projection facet {r.word} {r.element}")
    return out


SUITES: dict[str, tuple[Callable[..., SuiteResult], int]] = {
    "smith-normal-form": (suite_smith, 100),
    "graph-cross-check": (suite_graphs, 50),
    "condition-k": (suite_condition_k, 300),
    "systems": (suite_systems, 30),
    "extension": (suite_extension, 5),
}


def run_selftest(seed: int = 0, scale: float = 1.0, max_word_len: int = 3) -> list[SuiteResult]:
    results = []
    for name, (fn, count) in SUITES.items():
        rng = random.Random(f"{seed}:{name}")
        n = max(1, int(count * scale))
        if name == "extension":
            results.append(fn(rng, n, max_word_len))
        else:
            results.append(fn(rng, n))
    return results
