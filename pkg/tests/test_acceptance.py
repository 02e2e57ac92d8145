"""Acceptance suite: eleven criteria, each reported as one PASS/FAIL line.

Run under pytest (lines appear in the terminal summary) or directly with
``python3 tests/test_acceptance.py``.
"""

from __future__ import annotations

import itertools
import random
import time

import pytest

from bdsk.cli import execute
from bdsk.document import SystemDocument, parse_system, serialize_graph, serialize_system
from bdsk.dynamics import (
    AdmissiblePair,
    Digraph,
    condition_k,
    enumerate_admissible_pairs,
    import_graph,
    make_system,
)
from bdsk.extension import Extension, build_subsystem, partial_isometry_facets, projection_facets, structural_facets
from bdsk.fixtures import FIXTURES, fx_double_loops, fx_llw, fx_loop, fx_on
from bdsk.ideals import PreconditionError, ideal_k_groups, liftability_report, six_term_rank_check
from bdsk.k1gen import CardinalityMismatch, KernelElement, k1_generators, l_eta, signed_index_data
from bdsk.ktheory import AbelianGroupPresentation, graph_cross_check, k_groups
from bdsk.oracles import condition_k_oracle, naive_smith_invariants
from bdsk.randomgen import random_digraph, random_kernel_systems, random_matrix, random_system
from bdsk.report import validate_report
from bdsk.selftest import smith_case

RESULTS: dict[int, str] = {}


def _suite_systems(seed: int, count: int, **kw):
    rng = random.Random(seed)
    return [random_system(rng, **kw) for _ in range(count)]


# -- 1 ----------------------------------------------------------------------------


def cuntz_family():
    start = time.perf_counter()
    bad = []
    for n in range(2, 7):
        r = k_groups(fx_on(n))
        rank, diag = naive_smith_invariants(r.matrix)
        classical = AbelianGroupPresentation(0, (n - 1,) if n > 2 else ())
        if r.k0 != classical or not r.k1.is_trivial or diag != (n - 1,) or rank != 1:
            bad.append(f"n={n}: K0={r.k0} K1={r.k1}")
    elapsed = time.perf_counter() - start
    ok = not bad and elapsed < 1.0
    return ok, f"n=2..6 exact, {elapsed:.3f}s" + (f"; {bad}" if bad else "")


# -- 2 ----------------------------------------------------------------------------


def graph_cross_check_suite():
    start = time.perf_counter()
    rng = random.Random(2002)
    bad = 0
    for _ in range(200):
        g = random_digraph(rng, max_vertices=6, max_edges=12)
        bad += not graph_cross_check(g)["match"]
    elapsed = time.perf_counter() - start
    return bad == 0 and elapsed < 30, f"200 digraphs, {bad} mismatches, {elapsed:.2f}s"


# -- 3 ----------------------------------------------------------------------------


def smith_soundness():
    start = time.perf_counter()
    rng = random.Random(3003)
    failures = [r for r in (smith_case(random_matrix(rng, 8, 8)) for _ in range(500)) if r]
    elapsed = time.perf_counter() - start
    return not failures and elapsed < 30, f"500 matrices, {len(failures)} failures, {elapsed:.2f}s"


# -- 4 ----------------------------------------------------------------------------


def same_cardinality():
    rng = random.Random(4004)
    systems = random_kernel_systems(rng, 100, max_atoms=5, max_labels=4)
    checked = failures = 0
    for s in systems:
        for vec in k_groups(s).k1_basis:
            x = KernelElement.from_vector(s, vec)
            try:
                data = signed_index_data(s, x)
            except CardinalityMismatch:
                failures += 1
                continue
            for atom in range(s.n_atoms):
                checked += 1
                if len(l_eta(s, x, data.l_plus, atom)) != len(l_eta(s, x, data.l_minus, atom)):
                    failures += 1
    return failures == 0 and checked > 0, f"100 systems with K1 != 0, {checked} (vector, atom) checks, {failures} failures"


# -- 5 ----------------------------------------------------------------------------


def k1_certificates():
    systems = [fx_loop(), fx_llw()] + random_kernel_systems(random.Random(5005), 50)
    certs = failures = 0
    for s in systems:
        for cert in k1_generators(s):
            certs += 1
            failures += not cert.passed
    (loop_cert,) = k1_generators(fx_loop())
    alg = loop_cert.algebra
    expected = alg.s("a", ["v"]) + (alg.one() - alg.p(["v"]))
    exact = loop_cert.U.size == 1 and loop_cert.U[0, 0] == expected
    return failures == 0 and exact and certs >= 52, (
        f"{certs} certificates, {failures} failing; loop unitary {alg.format(loop_cert.U[0, 0])}"
    )


# -- 6 ----------------------------------------------------------------------------


def _subsets(seq):
    return itertools.chain.from_iterable(itertools.combinations(seq, k) for k in range(len(seq) + 1))


def small_systems(max_atoms: int = 2, max_labels: int = 2):
    """Every system on at most two atoms and two labels, with every ideal and J choice."""
    for n in range(1, max_atoms + 1):
        atoms = [f"x{i}" for i in range(n)]
        for m in range(1, max_labels + 1):
            labels = [f"l{k}" for k in range(m)]
            for choice in itertools.product(itertools.product(range(n + 1), repeat=n), repeat=m):
                theta = {}
                for label, sources in zip(labels, choice):
                    table: dict = {}
                    for b, src in enumerate(sources):
                        if src < n:
                            table.setdefault(atoms[src], []).append(atoms[b])
                    theta[label] = table
                ranges = [{b for v in theta[x].values() for b in v} for x in labels]
                emitting = [a for a in atoms if any(theta[x].get(a) for x in labels)]
                extras = [list(_subsets([a for a in atoms if a not in r])) for r in ranges]
                for extra in itertools.product(*extras):
                    ideals = {x: sorted(ranges[i] | set(extra[i])) for i, x in enumerate(labels)}
                    for j in _subsets(emitting):
                        yield make_system(atoms, theta, labels=labels, ideals=ideals, J=list(j))


def extension_facets():
    systems = list(small_systems())
    n_small = len(systems)
    systems += _suite_systems(6006, 200, max_atoms=4, max_labels=3)
    systems += list(f() for f in FIXTURES.values())
    eq1 = failures = 0
    for s in systems:
        ext = Extension(s)
        if not structural_facets(s, ext).passed:
            failures += 1
        for r in projection_facets(s, 3, ext):
            eq1 += 1
            failures += not r.passed
    for f in FIXTURES.values():
        failures += sum(not r.passed for r in partial_isometry_facets(f(), 3))
    return failures == 0, f"{n_small} exhaustive small + 200 random + fixtures; {eq1} projection identities; {failures} failures"


# -- 7 ----------------------------------------------------------------------------


def subsystem_sanity():
    bad = []
    for name, make in FIXTURES.items():
        s = make()
        full = k_groups(s)
        top = ideal_k_groups(s, AdmissiblePair(s.top_mask, s.top_mask), full=full).ideal
        if (top.k0, top.k1, top.smith.invariant_factors) != (full.k0, full.k1, full.smith.invariant_factors):
            bad.append(f"{name}: (B,B)")
        bottom = AdmissiblePair(0, s.j_top)
        if bottom in list(enumerate_admissible_pairs(s)):
            sub = build_subsystem(s, bottom)
            r = k_groups(sub.system)
            if sub.system.n_atoms or not (r.k0.is_trivial and r.k1.is_trivial):
                bad.append(f"{name}: (0,J)")
    s = fx_llw()
    rep = ideal_k_groups(s, AdmissiblePair(0b10, 0b11))
    groups = [(str(r.k0), str(r.k1)) for r in (rep.ideal, rep.quotient, rep.full)]
    if groups != [("Z", "Z")] * 3 or rep.rank_alternating_sum != 0:
        bad.append(f"llw: {groups}, rank sum {rep.rank_alternating_sum}")
    return not bad, f"fixtures extremes and the two-loop-edge pair; {bad or 'all as expected'}"


# -- 8 ----------------------------------------------------------------------------


def six_term_suite():
    pairs = failures = 0
    for s in _suite_systems(8008, 100):
        full = k_groups(s)
        ext = Extension(s)
        for pair in enumerate_admissible_pairs(s):
            pairs += 1
            failures += not six_term_rank_check(s, pair, ideal_k_groups(s, pair, ext, full))
    return failures == 0, f"100 systems, {pairs} pairs, {failures} violations"


# -- 9 ----------------------------------------------------------------------------


def liftability_suite():
    candidates = _suite_systems(8008, 100)
    candidates += _suite_systems(9009, 150, density=0.9)
    candidates += random_kernel_systems(random.Random(9010), 40, condition_k_only=True, density=0.8)
    candidates += [f() for f in FIXTURES.values()] + [fx_double_loops()]
    systems = vectors = failures = 0
    for s in candidates:
        if not condition_k(s).holds:
            continue
        systems += 1
        rep = liftability_report(s)
        vectors += sum(p.kernel_rank for p in rep.pairs)
        failures += not rep.liftable
    try:
        liftability_report(fx_loop())
        refused = False
    except PreconditionError as exc:
        refused = "witness (v,a)" in str(exc)
    return failures == 0 and refused and vectors > 0, (
        f"{systems} systems with Condition (K), {vectors} subsystem kernel vectors, "
        f"{failures} failures; loop refused: {refused}"
    )


# -- 10 ---------------------------------------------------------------------------


def _out_degree_sorted_graphs(n: int, max_edges: int):
    """Digraphs on ``n`` vertices whose out-degrees are non-increasing.

    Every digraph is isomorphic to one of these, so the list covers all
    digraphs up to relabelling.
    """

    def degrees(i, prev, left):
        if i == n:
            yield ()
            return
        for d in range(min(prev, left), -1, -1):
            for rest in degrees(i + 1, d, left - d):
                yield (d,) + rest

    for ds in degrees(0, max_edges, max_edges):
        pools = [list(itertools.combinations_with_replacement(range(n), d)) for d in ds]
        for choice in itertools.product(*pools):
            yield [(s, r) for s, targets in enumerate(choice) for r in targets]


def condition_k_exhaustive():
    checked = mismatches = 0
    for n in range(1, 6):
        for edges in _out_degree_sorted_graphs(n, 8):
            checked += 1
            got = condition_k(import_graph(Digraph.from_pairs(n, edges))).holds
            if got != condition_k_oracle(n, edges)[0]:
                mismatches += 1
    return mismatches == 0, f"{checked} digraphs (<= 5 vertices, <= 8 edges, up to relabelling), {mismatches} mismatches"


# -- 11 ---------------------------------------------------------------------------


def cli_suite(tmp_dir):
    problems = []
    rng = random.Random(1111)
    docs = [SystemDocument.from_system(f()) for f in FIXTURES.values()]
    docs += [SystemDocument.from_system(random_system(rng), explicit=e) for _ in range(100) for e in (True, False)]
    for doc in docs:
        text = serialize_system(doc)
        if parse_system(text) != doc or serialize_system(parse_system(text)) != text:
            problems.append("round trip")
    reports = 0

    def run(*argv, expect=0):
        nonlocal reports
        code, rep = execute([str(a) for a in argv])
        validate_report(rep)
        reports += 1
        if code != expect:
            problems.append(f"{argv[0]} exit {code}")
        return rep

    paths = {}
    for name, make in FIXTURES.items():
        s = make()
        p = tmp_dir / f"{name}.system"
        p.write_text(serialize_system(SystemDocument.from_system(s)), encoding="utf-8")
        paths[name] = p
        for cmd in ("validate", "k-theory", "k0-class", "k1-generators", "condition-k", "ideals", "facets"):
            run(cmd, p)
        n_pairs = len(enumerate_admissible_pairs(s))
        for i in range(n_pairs):
            run("quotient", p, "--pair", i)
            run("ideal-k", p, "--pair", i)
        run("liftability", p, expect=0 if condition_k(s).holds else 2)
        run("fixture", name)
        g = tmp_dir / f"{name}.graph"
        g.write_text(serialize_graph(Digraph.from_pairs(s.n_atoms, [(a, b) for a, _, b in s.edges])))
        run("import-graph", g)
        run("cross-check", g)
    run("selftest", "--scale", "0.1")

    r = run("k-theory", paths["fx-loop"])["result"]
    if (r["K0"]["text"], r["K1"]["text"]) != ("Z", "Z"):
        problems.append("loop K-groups")
    r = run("condition-k", paths["fx-loop"])["result"]
    if r != {"holds": False, "witness": {"atom": "v", "word": ["a"]}}:
        problems.append("loop witness")
    r = run("ideals", paths["fx-llw"])["result"]
    if len(r["pairs"]) != 3 or r["covers"] != [[0, 1], [1, 2]]:
        problems.append("llw lattice")
    r = run("ideal-k", paths["fx-llw"], "--pair", 1)["result"]
    if [r[k]["K1"]["text"] for k in ("ideal", "quotient", "full")] != ["Z"] * 3:
        problems.append("llw ideal K-groups")
    r = run("k-theory", paths["fx-on3"])["result"]
    if r["K0"]["torsion"] != [2] or r["K1"]["free_rank"] != 0:
        problems.append("cuntz K-groups")
    r = run("liftability", paths["fx-loop"], expect=2)
    if r["errors"] != ["Condition (K) fails, witness (v,a)"]:
        problems.append("loop refusal")
    return not problems, f"{len(docs)} documents round-tripped, {reports} schema-valid reports; {problems or 'no problems'}"


# -- harness ---------------------------------------------------------------------

CRITERIA = [
    (1, "Cuntz family K-groups", cuntz_family),
    (2, "graph cross-check", graph_cross_check_suite),
    (3, "Smith normal form soundness", smith_soundness),
    (4, "signed index sets have equal size", same_cardinality),
    (5, "K1 unitary certificates", k1_certificates),
    (6, "extension facets", extension_facets),
    (7, "subsystem sanity", subsystem_sanity),
    (8, "six-term rank identity", six_term_suite),
    (9, "K0-liftability", liftability_suite),
    (10, "Condition (K) exhaustive", condition_k_exhaustive),
    (11, "command line and reports", cli_suite),
]


def _line(number: int, title: str, ok: bool, detail: str) -> str:
    return f"{'PASS' if ok else 'FAIL'}  criterion {number:2d}  {title}: {detail}"


@pytest.mark.parametrize("number,title,fn", CRITERIA, ids=[f"c{n:02d}-{t.replace(' ', '-')}" for n, t, _ in CRITERIA])
def test_criterion(number, title, fn, tmp_path):
    ok, detail = fn(tmp_path) if fn is cli_suite else fn()
    line = _line(number, title, ok, detail)
    RESULTS[number] = line
    print(line)
    assert ok, line


if __name__ == "__main__":
    import sys
    import tempfile
    from pathlib import Path

    all_ok = True
    for number, title, fn in CRITERIA:
        try:
            if fn is cli_suite:
                with tempfile.TemporaryDirectory() as d:
                    ok, detail = fn(Path(d))
            else:
                ok, detail = fn()
        except Exception as exc:  # report and keep going
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        all_ok &= ok
        print(_line(number, title, ok, detail), flush=True)
    sys.exit(0 if all_ok else 1)
