"""System and graph documents: JSON parsing, canonical form and serialization."""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Any

import jsonschema

from .dynamics import Digraph, RelativeGBDS, SystemValidationError, validate_system

_ATOM_LIST = {"type": "array", "items": {"type": "string"}}

SYSTEM_SCHEMA = {
    "type": "object",
    "required": ["atoms", "labels"],
    "additionalProperties": False,
    "properties": {
        "atoms": _ATOM_LIST,
        "labels": _ATOM_LIST,
        "theta": {
            "type": "object",
            "additionalProperties": {"type": "object", "additionalProperties": _ATOM_LIST},
        },
        "ideals": {"type": "object", "additionalProperties": _ATOM_LIST},
        "J": _ATOM_LIST,
    },
}

GRAPH_SCHEMA = {
    "type": "object",
    "required": ["vertices", "edges"],
    "additionalProperties": False,
    "properties": {
        "vertices": _ATOM_LIST,
        "edges": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["name", "source", "range"],
                "additionalProperties": False,
                "properties": {
                    "name": {"type": "string"},
                    "source": {"type": "string"},
                    "range": {"type": "string"},
                },
            },
        },
    },
}


class DocumentError(ValueError):
    """Malformed input: not JSON, or not of the expected shape."""

    def __init__(self, errors: list[str]):
        super().__init__("; ".join(errors))
        self.errors = errors


def _load(text: str, schema: dict) -> dict:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError([f"invalid JSON: {exc}"]) from None
    validator = jsonschema.Draft7Validator(schema)
    problems = sorted(validator.iter_errors(raw), key=lambda e: list(e.path))
    if problems:
        raise DocumentError(
            [f"{'/'.join(map(str, p.path)) or '<root>'}: {p.message}" for p in problems]
        )
    return raw


@dataclass(frozen=True)
class SystemDocument:
    """Syntactic form of a system file; ``ideals`` and ``J`` are ``None`` when omitted."""

    atoms: tuple[str, ...]
    labels: tuple[str, ...]
    theta: tuple[tuple[str, tuple[tuple[str, tuple[str, ...]], ...]], ...]
    ideals: tuple[tuple[str, tuple[str, ...]], ...] | None = None
    J: tuple[str, ...] | None = None

    @classmethod
    def from_dict(cls, raw: dict) -> SystemDocument:
        """Canonicalize: sections and lists in declaration order, empty images dropped."""
        atoms = tuple(raw["atoms"])
        labels = tuple(raw["labels"])
        apos = {a: i for i, a in enumerate(atoms)}
        lpos = {x: i for i, x in enumerate(labels)}

        def order_atoms(names) -> tuple[str, ...]:
            # unknown names sort last; semantic validation reports them
            return tuple(sorted(dict.fromkeys(names), key=lambda a: (apos.get(a, len(apos)), a)))

        def order_keys(keys, pos) -> list:
            return sorted(keys, key=lambda a: (pos.get(a, len(pos)), a))

        table = raw.get("theta") or {}
        theta = []
        for label in order_keys(table, lpos):
            rows = table[label] or {}
            entries = tuple(
                (src, order_atoms(rows[src])) for src in order_keys(rows, apos) if rows[src]
            )
            if entries:
                theta.append((label, entries))
        ideals = None
        if raw.get("ideals") is not None:
            ideals = tuple((x, order_atoms(raw["ideals"][x])) for x in order_keys(raw["ideals"], lpos))
        j = order_atoms(raw["J"]) if raw.get("J") is not None else None
        return cls(atoms, labels, tuple(theta), ideals, j)

    def to_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {
            "atoms": list(self.atoms),
            "labels": list(self.labels),
            "theta": {label: {src: list(t) for src, t in rows} for label, rows in self.theta},
        }
        if self.ideals is not None:
            out["ideals"] = {x: list(t) for x, t in self.ideals}
        if self.J is not None:
            out["J"] = list(self.J)
        return out

    def to_system(self) -> RelativeGBDS:
        return validate_system(self.to_dict())

    @classmethod
    def from_system(cls, sys: RelativeGBDS, explicit: bool = True) -> SystemDocument:
        doc = sys.to_document()
        if not explicit:
            doc.pop("ideals", None)
            doc.pop("J", None)
        return cls.from_dict(doc)


def parse_system(text: str) -> SystemDocument:
    return SystemDocument.from_dict(_load(text, SYSTEM_SCHEMA))


def serialize_system(doc: SystemDocument) -> str:
    return json.dumps(doc.to_dict(), indent=2, ensure_ascii=False) + "\n"


def load_system(text: str) -> RelativeGBDS:
    """Parse and validate; raises :class:`DocumentError` or :class:`SystemValidationError`."""
    return parse_system(text).to_system()


def parse_graph(text: str) -> Digraph:
    raw = _load(text, GRAPH_SCHEMA)
    vertices = tuple(raw["vertices"])
    errors = []
    if len(set(vertices)) != len(vertices):
        errors.append("duplicate vertex names")
    known = set(vertices)
    edges = []
    for e in raw["edges"]:
        for end in ("source", "range"):
            if e[end] not in known:
                errors.append(f"edge {e['name']}: unknown {end} {e[end]!r}")
        edges.append((e["name"], e["source"], e["range"]))
    if len({e[0] for e in edges}) != len(edges):
        errors.append("edge names must be unique")
    if errors:
        raise SystemValidationError(errors)
    return Digraph(vertices, tuple(edges))


def serialize_graph(graph: Digraph) -> str:
    doc = {
        "vertices": list(graph.vertices),
        "edges": [{"name": n, "source": s, "range": r} for n, s, r in graph.edges],
    }
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"
