"""Report payloads for each command, their JSON schemas, and plain-text rendering."""

from __future__ import annotations

from typing import Any

import jsonschema

from .dynamics import AdmissiblePair, PairLattice, RelativeGBDS

SCHEMA_VERSION = "1.0"

# -- schema fragments ---------------------------------------------------------

_STR_LIST = {"type": "array", "items": {"type": "string"}}
_INT_LIST = {"type": "array", "items": {"type": "integer"}}
GROUP = {
    "type": "object",
    "required": ["free_rank", "torsion", "text"],
    "properties": {
        "free_rank": {"type": "integer", "minimum": 0},
        "torsion": {"type": "array", "items": {"type": "integer", "minimum": 2}},
        "text": {"type": "string"},
    },
}
K_PAIR = {"type": "object", "required": ["K0", "K1"], "properties": {"K0": GROUP, "K1": GROUP}}
PAIR = {
    "type": "object",
    "required": ["index", "H", "S"],
    "properties": {"index": {"type": "integer"}, "H": _STR_LIST, "S": _STR_LIST},
}
SYSTEM = {
    "type": "object",
    "required": ["atoms", "labels", "theta"],
    "properties": {
        "atoms": _STR_LIST,
        "labels": _STR_LIST,
        "theta": {"type": "object", "additionalProperties": {"type": "object", "additionalProperties": _STR_LIST}},
        "ideals": {"type": "object", "additionalProperties": _STR_LIST},
        "J": _STR_LIST,
    },
}
K0_CLASS = {
    "type": "object",
    "required": ["torsion", "free"],
    "properties": {
        "torsion": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["value", "modulus"],
                "properties": {"value": {"type": "integer"}, "modulus": {"type": "integer", "minimum": 2}},
            },
        },
        "free": _INT_LIST,
    },
}
VERDICT = {"enum": ["equal-toeplitz", "equal-mod-ck", "not-proven"]}
SUITE = {
    "type": "object",
    "required": ["name", "cases", "failures", "passed"],
    "properties": {
        "name": {"type": "string"},
        "cases": {"type": "integer"},
        "failures": _STR_LIST,
        "passed": {"type": "boolean"},
    },
}


def _obj(required: list[str], **props: Any) -> dict:
    return {"type": "object", "required": required, "properties": props}


RESULT_SCHEMAS: dict[str, dict] = {
    "validate": _obj(
        ["valid", "system", "b_reg", "ranges"],
        valid={"const": True}, system=SYSTEM, b_reg=_STR_LIST,
        ranges={"type": "object", "additionalProperties": _STR_LIST},
    ),
    "k-theory": _obj(
        ["K0", "K1", "matrix", "row_atoms", "column_atoms", "invariant_factors", "k1_basis"],
        K0=GROUP, K1=GROUP,
        matrix={"type": "array", "items": _INT_LIST},
        row_atoms=_STR_LIST, column_atoms=_STR_LIST,
        invariant_factors=_INT_LIST,
        k1_basis={"type": "array", "items": _INT_LIST},
    ),
    "k0-class": _obj(
        ["K0", "classes"],
        K0=GROUP,
        classes={"type": "array", "items": _obj(["element", "class"], element=_STR_LIST, **{"class": K0_CLASS})},
    ),
    "k1-generators": _obj(
        ["K1", "certificates"],
        K1=GROUP,
        certificates={
            "type": "array",
            "items": _obj(
                ["vector", "size", "unitary", "checks", "passed"],
                vector=_INT_LIST,
                size={"type": "integer", "minimum": 1},
                unitary={"type": "array", "items": _obj(["row", "col", "text"])},
                checks={
                    "type": "array",
                    "items": _obj(["name", "level", "verdict", "passed"], level={"enum": ["toeplitz", "ck"]}, verdict=VERDICT),
                },
                passed={"type": "boolean"},
            ),
        },
    ),
    "condition-k": _obj(
        ["holds", "witness"],
        holds={"type": "boolean"},
        witness={
            "oneOf": [
                {"type": "null"},
                _obj(["atom", "word"], atom={"type": "string"}, word=_STR_LIST),
            ]
        },
    ),
    "ideals": _obj(
        ["pairs", "order", "covers"],
        pairs={"type": "array", "items": PAIR},
        order={"type": "array", "items": _INT_LIST},
        covers={"type": "array", "items": _INT_LIST},
    ),
    "quotient": _obj(["pair", "system", "K0", "K1"], pair=PAIR, system=SYSTEM, K0=GROUP, K1=GROUP),
    "ideal-k": _obj(
        ["pair", "subsystem", "dictionary", "ideal", "quotient", "full", "six_term"],
        pair=PAIR,
        subsystem=SYSTEM,
        dictionary={
            "type": "array",
            "items": _obj(
                ["atom", "tree"],
                atom={"type": "string"},
                tree={"type": "array", "items": _obj(["word", "value"], word=_STR_LIST, value=_STR_LIST)},
            ),
        },
        ideal=K_PAIR, quotient=K_PAIR, full=K_PAIR,
        six_term=_obj(["alternating_rank_sum", "holds"], alternating_rank_sum={"type": "integer"}, holds={"type": "boolean"}),
    ),
    "liftability": _obj(
        ["condition_k", "pairs", "liftable"],
        condition_k={"const": True},
        pairs={
            "type": "array",
            "items": {
                "allOf": [
                    PAIR,
                    _obj(
                        ["kernel_rank", "vanishes", "independent", "passed"],
                        kernel_rank={"type": "integer"}, vanishes={"type": "boolean"},
                        independent={"type": "boolean"}, passed={"type": "boolean"},
                    ),
                ]
            },
        },
        liftable={"type": "boolean"},
    ),
    "import-graph": _obj(["system"], system=SYSTEM),
    "cross-check": _obj(["pipeline", "classical", "match"], pipeline=K_PAIR, classical=K_PAIR, match={"type": "boolean"}),
    "selftest": _obj(["seed", "suites", "passed"], seed={"type": "integer"}, suites={"type": "array", "items": SUITE}, passed={"type": "boolean"}),
    "facets": _obj(
        ["max_word_len", "injective", "intertwining", "j_compatible", "projection", "partial_isometry", "passed"],
        max_word_len={"type": "integer"},
        injective={"type": "boolean"}, intertwining={"type": "boolean"}, j_compatible={"type": "boolean"},
        projection=_obj(["checked", "failures"]), partial_isometry=_obj(["checked", "failures"]),
        passed={"type": "boolean"},
    ),
    "fixture": _obj(["name", "system"], name={"type": "string"}, system=SYSTEM),
}

ENVELOPE = {
    "type": "object",
    "required": ["schema_version", "command", "status"],
    "properties": {
        "schema_version": {"const": SCHEMA_VERSION},
        "command": {"type": "string"},
        "status": {"enum": ["ok", "error"]},
        "result": {"type": "object"},
        "errors": _STR_LIST,
        "figures": _STR_LIST,
    },
    "if": {"properties": {"status": {"const": "ok"}}},
    "then": {"required": ["result"]},
    "else": {"required": ["errors"]},
}


def validate_report(report: dict) -> None:
    """Raise :class:`jsonschema.ValidationError` unless ``report`` fits its command's schema."""
    jsonschema.validate(report, ENVELOPE)
    if report["status"] == "ok" and report["command"] in RESULT_SCHEMAS:
        jsonschema.validate(report["result"], RESULT_SCHEMAS[report["command"]])


def envelope(command: str, result: dict | None = None, errors: list[str] | None = None) -> dict:
    out: dict[str, Any] = {"schema_version": SCHEMA_VERSION, "command": command}
    if errors:
        out["status"] = "error"
        out["errors"] = list(errors)
    else:
        out["status"] = "ok"
        out["result"] = result or {}
    return out


def pair_dict(sys: RelativeGBDS, lattice: PairLattice | None, pair: AdmissiblePair, index: int) -> dict:
    names = sys.algebra.names
    return {"index": index, "H": list(names(pair.h_top)), "S": list(names(pair.s_top))}


def k_pair(result) -> dict:
    return {"K0": result.k0.to_dict(), "K1": result.k1.to_dict()}


# -- text ---------------------------------------------------------------------


def _set(names: list[str]) -> str:
    return "{" + ",".join(names) + "}"


def render_text(report: dict) -> str:
    cmd = report["command"]
    if report["status"] == "error":
        return "\n".join(f"error: {e}" for e in report["errors"]) + "\n"
    r = report["result"]
    lines: list[str] = []
    if cmd == "validate":
        s = r["system"]
        lines.append(f"valid: {len(s['atoms'])} atoms, {len(s['labels'])} labels")
        lines.append(f"B_reg = {_set(r['b_reg'])}, J = {_set(s['J'])}")
    elif cmd == "k-theory":
        lines.append(f"K0 = {r['K0']['text']}")
        lines.append(f"K1 = {r['K1']['text']}")
        for vec in r["k1_basis"]:
            lines.append(f"  kernel vector {vec} over {_set(r['column_atoms'])}")
    elif cmd == "k0-class":
        lines.append(f"K0 = {r['K0']['text']}")
        for c in r["classes"]:
            tors = ", ".join(f"{t['value']} mod {t['modulus']}" for t in c["class"]["torsion"])
            lines.append(f"  [p_{_set(c['element'])}]: torsion ({tors}) free {c['class']['free']}")
    elif cmd == "k1-generators":
        lines.append(f"K1 = {r['K1']['text']}")
        for c in r["certificates"]:
            status = "verified" if c["passed"] else "NOT verified"
            lines.append(f"  vector {c['vector']}: {c['size']}x{c['size']} unitary, {status}")
            for e in c["unitary"]:
                lines.append(f"    U[{e['row']},{e['col']}] = {e['text']}")
    elif cmd == "condition-k":
        if r["holds"]:
            lines.append("holds")
        else:
            w = r["witness"]
            lines.append(f"fails; witness atom {w['atom']}, word {'.'.join(w['word'])}")
    elif cmd == "ideals":
        lines.append(f"{len(r['pairs'])} admissible pairs")
        for p in r["pairs"]:
            lines.append(f"  {p['index']}: H = {_set(p['H'])}, S = {_set(p['S'])}")
        lines.append("covers: " + ", ".join(f"{a} < {b}" for a, b in r["covers"]))
    elif cmd == "quotient":
        lines.append(f"quotient by pair {r['pair']['index']}: atoms {_set(r['system']['atoms'])}")
        lines.append(f"K0 = {r['K0']['text']}, K1 = {r['K1']['text']}")
    elif cmd == "ideal-k":
        lines.append(f"pair {r['pair']['index']}: H = {_set(r['pair']['H'])}, S = {_set(r['pair']['S'])}")
        lines.append(f"subsystem atoms: {', '.join(r['subsystem']['atoms']) or 'none'}")
        for key in ("ideal", "quotient", "full"):
            lines.append(f"{key}: K0 = {r[key]['K0']['text']}, K1 = {r[key]['K1']['text']}")
        six = r["six_term"]
        lines.append(f"six-term rank sum = {six['alternating_rank_sum']} ({'ok' if six['holds'] else 'VIOLATED'})")
    elif cmd == "liftability":
        for p in r["pairs"]:
            lines.append(
                f"  pair {p['index']}: {p['kernel_rank']} kernel vectors, "
                f"{'pass' if p['passed'] else 'FAIL'}"
            )
        lines.append("K0-liftable" if r["liftable"] else "liftability NOT verified")
    elif cmd in ("import-graph", "fixture"):
        import json

        return json.dumps(r["system"], indent=2, ensure_ascii=False) + "\n"
    elif cmd == "cross-check":
        p, c = r["pipeline"], r["classical"]
        lines.append(f"pipeline:  K0 = {p['K0']['text']}, K1 = {p['K1']['text']}")
        lines.append(f"classical: K0 = {c['K0']['text']}, K1 = {c['K1']['text']}")
        lines.append("match" if r["match"] else "MISMATCH")
    elif cmd == "selftest":
        for s in r["suites"]:
            lines.append(f"{'PASS' if s['passed'] else 'FAIL'} {s['name']} ({s['cases']} cases)")
            lines.extend(f"    {f}" for f in s["failures"][:5])
    elif cmd == "facets":
        for key in ("injective", "intertwining", "j_compatible"):
            lines.append(f"{key}: {r[key]}")
        for key in ("projection", "partial_isometry"):
            lines.append(f"{key}: {r[key]['checked']} checked, {len(r[key]['failures'])} not proven")
    for f in report.get("figures", []):
        lines.append(f"figure: {f}")
    return "\n".join(lines) + "\n"
