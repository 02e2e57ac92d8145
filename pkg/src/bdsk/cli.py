"""Command-line entry point.

Exit status: 0 on success, 1 when an input fails to parse or validate,
2 when a command's precondition is not met (an out-of-range pair index,
or liftability requested for a system without Condition (K)).
"""

from __future__ import annotations

import argparse
import json
import sys as _sys
from pathlib import Path
from typing import Sequence

from .document import DocumentError, SystemDocument, load_system, parse_graph
from .dynamics import RelativeGBDS, SystemValidationError, condition_k, enumerate_admissible_pairs, import_graph, quotient_system
from .extension import Extension, partial_isometry_facets, projection_facets, structural_facets
from .fixtures import FIXTURES
from .ideals import PreconditionError, ideal_k_groups, liftability_report
from .k1gen import k1_generators
from .ktheory import graph_cross_check, k0_class, k_groups
from .report import envelope, k_pair, pair_dict, render_text
from .selftest import run_selftest

SYSTEM_COMMANDS = (
    "validate", "k-theory", "k0-class", "k1-generators", "condition-k",
    "ideals", "quotient", "ideal-k", "liftability", "facets",
)
GRAPH_COMMANDS = ("import-graph", "cross-check")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--figure-dir", type=Path, help="write figures (PNG) for the report here")
    parser = argparse.ArgumentParser(prog="bdsk", description="Finite relative Boolean dynamical systems toolkit.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in SYSTEM_COMMANDS:
        p = sub.add_parser(name, parents=[common])
        p.add_argument("input", help="system document (JSON), or - for stdin")
        if name in ("quotient", "ideal-k"):
            p.add_argument("--pair", type=int, required=True, help="index from the ideals listing")
        if name == "k0-class":
            p.add_argument("--element", action="append", default=[],
                           help="comma-separated atoms; repeatable; default: every atom")
        if name == "facets":
            p.add_argument("--max-word-len", type=int, default=3)
    for name in GRAPH_COMMANDS:
        p = sub.add_parser(name, parents=[common])
        p.add_argument("input", help="graph document (JSON), or - for stdin")
    p = sub.add_parser("selftest", parents=[common])
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--scale", type=float, default=1.0, help="multiply suite sizes")
    p.add_argument("--max-word-len", type=int, default=3)
    p = sub.add_parser("fixture", parents=[common])
    p.add_argument("name", choices=sorted(FIXTURES))
    return parser


def _read(path: str) -> str:
    if path == "-":
        return _sys.stdin.read()
    return Path(path).read_text(encoding="utf-8")


def _doc(sys: RelativeGBDS) -> dict:
    return SystemDocument.from_system(sys).to_dict()


def _pair(sys: RelativeGBDS, index: int):
    lattice = enumerate_admissible_pairs(sys)
    if not 0 <= index < len(lattice):
        raise PreconditionError(f"pair index {index} out of range (0..{len(lattice) - 1})")
    return lattice, lattice[index]


def _figures(args, sys: RelativeGBDS, lattice=None) -> list[str]:
    if not args.figure_dir:
        return []
    from . import plotting

    args.figure_dir.mkdir(parents=True, exist_ok=True)
    stem = Path(args.input).stem if args.input != "-" else "stdin"
    out = [str(plotting.atom_graph(sys, args.figure_dir / f"{stem}-atom-graph.png"))]
    if lattice is not None:
        out.append(str(plotting.hasse_diagram(sys, lattice, args.figure_dir / f"{stem}-pairs-hasse.png")))
    return out


def _run_system(args, sys: RelativeGBDS) -> tuple[dict, list[str]]:
    cmd = args.command
    names = sys.algebra.names
    if cmd == "validate":
        return {
            "valid": True,
            "system": _doc(sys),
            "b_reg": list(names(sys.b_reg_top)),
            "ranges": {label: list(names(sys.r_top(label))) for label in sys.labels},
        }, _figures(args, sys)
    if cmd == "k-theory":
        k = k_groups(sys)
        return {
            "K0": k.k0.to_dict(),
            "K1": k.k1.to_dict(),
            "matrix": k.matrix.tolist(),
            "row_atoms": list(k.b_atoms),
            "column_atoms": list(k.j_atoms),
            "invariant_factors": list(k.smith.invariant_factors),
            "k1_basis": [list(v) for v in k.k1_basis],
        }, _figures(args, sys)
    if cmd == "k0-class":
        k = k_groups(sys)
        if args.element:
            masks = []
            for item in args.element:
                atoms = [a for a in item.split(",") if a]
                try:
                    masks.append(sys.algebra.mask_of(atoms))
                except (KeyError, ValueError) as exc:
                    raise SystemValidationError([f"--element {item!r}: {exc}"]) from None
        else:
            masks = [1 << i for i in range(sys.n_atoms)]
        return {
            "K0": k.k0.to_dict(),
            "classes": [
                {"element": list(names(m)), "class": k0_class(sys, sys.element(m), k).to_dict()} for m in masks
            ],
        }, []
    if cmd == "k1-generators":
        k = k_groups(sys)
        certs = []
        for cert in k1_generators(sys):
            certs.append({
                "vector": cert.x.atom_vector(sys),
                "support": [{"element": list(names(m)), "coefficient": c} for m, c in cert.x.support],
                "size": cert.U.size,
                "unitary": [
                    {"row": i, "col": j, "text": cert.algebra.format(e)}
                    for (i, j), e in sorted(cert.U.entries.items())
                ],
                "checks": [
                    {"name": r.name, "level": r.level, "verdict": r.verdict.value, "passed": r.passed}
                    for r in cert.transcript
                ],
                "passed": cert.passed,
            })
        return {"K1": k.k1.to_dict(), "certificates": certs}, []
    if cmd == "condition-k":
        ck = condition_k(sys)
        witness = None if ck.holds else {"atom": ck.witness[0], "word": list(ck.witness[1])}
        return {"holds": ck.holds, "witness": witness}, _figures(args, sys)
    if cmd == "ideals":
        lattice = enumerate_admissible_pairs(sys)
        return {
            "pairs": [pair_dict(sys, lattice, p, i) for i, p in enumerate(lattice)],
            "order": [list(x) for x in lattice.order()],
            "covers": [list(x) for x in lattice.covers()],
        }, _figures(args, sys, lattice)
    if cmd == "quotient":
        lattice, pair = _pair(sys, args.pair)
        q = quotient_system(sys, pair)
        return {"pair": pair_dict(sys, lattice, pair, args.pair), "system": _doc(q), **k_pair(k_groups(q))}, []
    if cmd == "ideal-k":
        lattice, pair = _pair(sys, args.pair)
        rep = ideal_k_groups(sys, pair)
        ext = rep.subsystem.generated.ext
        return {
            "pair": pair_dict(sys, lattice, pair, args.pair),
            "subsystem": _doc(rep.subsystem.system),
            "dictionary": [
                {"atom": name, "tree": ext.to_json(tree)} for name, tree in rep.subsystem.dictionary.items()
            ],
            "ideal": k_pair(rep.ideal),
            "quotient": k_pair(rep.quotient),
            "full": k_pair(rep.full),
            "six_term": {"alternating_rank_sum": rep.rank_alternating_sum, "holds": rep.rank_alternating_sum == 0},
        }, []
    if cmd == "liftability":
        rep = liftability_report(sys)
        lattice = enumerate_admissible_pairs(sys)
        pairs = []
        for i, p in enumerate(rep.pairs):
            pairs.append({
                **pair_dict(sys, lattice, p.pair, i),
                "kernel_rank": p.kernel_rank,
                "vanishes": p.vanishes,
                "independent": p.independent,
                "passed": p.passed,
            })
        return {"condition_k": True, "pairs": pairs, "liftable": rep.liftable}, []
    if cmd == "facets":
        ext = Extension(sys)
        st = structural_facets(sys, ext)
        proj = projection_facets(sys, args.max_word_len, ext)
        part = partial_isometry_facets(sys, args.max_word_len, ext)

        def summary(results):
            return {
                "checked": len(results),
                "failures": [{"word": list(r.word), "element": list(names(r.element))} for r in results if not r.passed],
            }

        return {
            "max_word_len": args.max_word_len,
            "injective": st.injective,
            "intertwining": st.intertwining,
            "j_compatible": st.j_compatible,
            "projection": summary(proj),
            "partial_isometry": summary(part),
            "passed": st.passed and all(r.passed for r in proj + part),
        }, []
    raise AssertionError(cmd)


def execute(argv: Sequence[str]) -> tuple[int, dict]:
    """Run one command; returns the exit status and the report."""
    args = build_parser().parse_args(list(argv))
    cmd = args.command
    try:
        if cmd == "selftest":
            suites = run_selftest(args.seed, args.scale, args.max_word_len)
            ok = all(s.passed for s in suites)
            result = {
                "seed": args.seed,
                "suites": [
                    {"name": s.name, "cases": s.cases, "failures": s.failures, "passed": s.passed} for s in suites
                ],
                "passed": ok,
            }
            return (0 if ok else 1), envelope(cmd, result)
        if cmd == "fixture":
            return 0, envelope(cmd, {"name": args.name, "system": _doc(FIXTURES[args.name]())})
        text = _read(args.input)
        if cmd in GRAPH_COMMANDS:
            graph = parse_graph(text)
            if cmd == "import-graph":
                return 0, envelope(cmd, {"system": _doc(import_graph(graph))})
            check = graph_cross_check(graph)
            return 0, envelope(cmd, check)
        sys = load_system(text)
        result, figures = _run_system(args, sys)
        report = envelope(cmd, result)
        if figures:
            report["figures"] = figures
        return 0, report
    except (DocumentError, SystemValidationError) as exc:
        return 1, envelope(cmd, errors=list(exc.errors))
    except OSError as exc:
        return 1, envelope(cmd, errors=[str(exc)])
    except PreconditionError as exc:
        return 2, envelope(cmd, errors=[str(exc)])


def main(argv: Sequence[str] | None = None) -> int:
    argv = list(_sys.argv[1:] if argv is None else argv)
    parser_args = build_parser().parse_args(argv)
    code, report = execute(argv)
    if parser_args.format == "json":
        _sys.stdout.write(json.dumps(report, indent=2, ensure_ascii=False) + "\n")
    else:
        stream = _sys.stdout if report["status"] == "ok" else _sys.stderr
        stream.write(render_text(report))
    return code


if __name__ == "__main__":
    raise SystemExit(main())
