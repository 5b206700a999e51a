"""JSON schemas, parsing with located errors, and canonical serialization.

Every reader validates against a JSON schema first (``ParseError`` with the
JSON path and line), then builds the domain value, whose constructors raise
``InvariantViolation`` subclasses for semantic problems.
"""
from __future__ import annotations

import dataclasses
import json
import os
import tempfile
from typing import Any

import jsonschema

from .errors import ParseError
from .homology import HomologyReport
from .poset import Poset, build_poset, natural_key
from .sheaf import Diagram, FlabbinessWitness, Section, build_diagram
from .simplicial import Multigraph, SimplicialComplex, SimplicialMap, build_multigraph, build_simplicial_map

_ID = {"type": ["string", "integer"]}

POSET_SCHEMA = {
    "type": "object",
    "required": ["elements", "covers"],
    "properties": {
        "elements": {"type": "array", "items": _ID},
        "covers": {"type": "array", "items": {"type": "array", "items": _ID, "minItems": 2, "maxItems": 2}},
    },
    "additionalProperties": False,
}

DIAGRAM_SCHEMA = {
    "type": "object",
    "required": ["poset", "stalks", "maps"],
    "properties": {
        "poset": POSET_SCHEMA,
        "stalks": {"type": "object", "additionalProperties": {"type": "array", "items": _ID}},
        "maps": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["from", "to", "map"],
                "properties": {
                    "from": _ID,
                    "to": _ID,
                    "map": {"type": "object", "additionalProperties": _ID},
                },
                "additionalProperties": False,
            },
        },
    },
    "additionalProperties": False,
}

COMPLEX_SCHEMA = {
    "type": "object",
    "required": ["facets"],
    "properties": {
        "vertices": {"type": "array", "items": _ID},
        "facets": {"type": "array", "items": {"type": "array", "items": _ID}},
    },
    "additionalProperties": False,
}

MULTIGRAPH_SCHEMA = {
    "type": "object",
    "required": ["vertices", "edges"],
    "properties": {
        "vertices": {"type": "array", "items": _ID},
        "edges": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["ends", "multiplicity"],
                "properties": {
                    "ends": {"type": "array", "items": _ID, "minItems": 2, "maxItems": 2},
                    "multiplicity": {"type": "integer", "minimum": 1},
                },
                "additionalProperties": False,
            },
        },
    },
    "additionalProperties": False,
}

MAP_SCHEMA = {
    "type": "object",
    "required": ["source", "target", "vertex_map"],
    "properties": {
        "source": COMPLEX_SCHEMA,
        "target": COMPLEX_SCHEMA,
        "vertex_map": {"type": "object", "additionalProperties": _ID},
    },
    "additionalProperties": False,
}

_DEGREE_MAP = {"type": "object", "propertyNames": {"pattern": "^-?[0-9]+$"}}

HOMOLOGY_REPORT_SCHEMA = {
    "type": "object",
    "required": ["betti", "torsion"],
    "properties": {
        "betti": {**_DEGREE_MAP, "additionalProperties": {"type": "integer", "minimum": 0}},
        "torsion": {
            **_DEGREE_MAP,
            "additionalProperties": {"type": "array", "items": {"type": "integer", "minimum": 2}},
        },
    },
    "additionalProperties": False,
}

DECOMPOSITION_REPORT_SCHEMA = {
    "type": "object",
    "required": ["status", "match", "applicable", "hypotheses", "per_simplex", "predicted_betti", "actual"],
    "properties": {
        "status": {"enum": ["verified", "mismatch", "not-applicable"]},
        "match": {"type": "boolean"},
        "applicable": {"type": "boolean"},
        "hypotheses": {"type": "object", "additionalProperties": {"type": "boolean"}},
        "per_simplex": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["simplex", "dim", "spheres", "link_betti"],
            },
        },
        "predicted_betti": {"type": ["object", "null"]},
        "actual": HOMOLOGY_REPORT_SCHEMA,
        "base": HOMOLOGY_REPORT_SCHEMA,
    },
}

SCHEMAS = {
    "poset": POSET_SCHEMA,
    "diagram": DIAGRAM_SCHEMA,
    "complex": COMPLEX_SCHEMA,
    "multigraph": MULTIGRAPH_SCHEMA,
    "map": MAP_SCHEMA,
    "homology": HOMOLOGY_REPORT_SCHEMA,
    "decomposition": DECOMPOSITION_REPORT_SCHEMA,
}


# ---------------------------------------------------------------------------
# locating errors

def _json_path(parts) -> str:
    out = "$"
    for p in parts:
        out += f"[{p}]" if isinstance(p, int) else f".{p}"
    return out


def _locate(text: str, parts) -> int | None:
    """Line of the value at ``parts`` in already-valid JSON ``text``."""
    dec = json.JSONDecoder()
    ws = " \t\n\r"
    idx = 0

    def skip(i: int) -> int:
        while i < len(text) and text[i] in ws:
            i += 1
        return i

    try:
        idx = skip(0)
        for key in parts:
            if text[idx] == "{":
                i = skip(idx + 1)
                while text[i] != "}":
                    k, i = json.decoder.scanstring(text, i + 1)
                    i = skip(skip(i) + 1)  # past ':'
                    if k == key:
                        break
                    _, i = dec.raw_decode(text, i)
                    i = skip(i)
                    if text[i] == ",":
                        i = skip(i + 1)
                else:
                    return None
                idx = i
            elif text[idx] == "[":
                i = skip(idx + 1)
                for _ in range(key):
                    _, i = dec.raw_decode(text, i)
                    i = skip(skip(i) + 1)
                idx = i
            else:
                return None
    except (IndexError, ValueError, TypeError):
        return None
    return text.count("\n", 0, idx) + 1


def loads(text: str, source: str = "<input>") -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{source}: invalid JSON: {exc.msg}", path="$", line=exc.lineno) from None


def validate(data: Any, kind: str, text: str | None = None) -> None:
    schema = SCHEMAS[kind]
    err = jsonschema.exceptions.best_match(jsonschema.Draft202012Validator(schema).iter_errors(data))
    if err is not None:
        parts = list(err.absolute_path)
        line = _locate(text, parts) if text is not None else None
        raise ParseError(f"not a valid {kind}: {err.message}", path=_json_path(parts), line=line)


# ---------------------------------------------------------------------------
# readers

def poset_from_json(data: dict) -> Poset:
    return build_poset(data["elements"], data["covers"])


def diagram_from_json(data: dict) -> Diagram:
    base = poset_from_json(data["poset"])
    maps = {}
    for k, entry in enumerate(data["maps"]):
        key = (str(entry["from"]), str(entry["to"]))
        if key in maps:
            raise ParseError(f"second map for cover {key}", path=f"$.maps[{k}]")
        maps[key] = entry["map"]
    return build_diagram(base, data["stalks"], maps)


def complex_from_json(data: dict) -> SimplicialComplex:
    return SimplicialComplex.from_facets(data["facets"], data.get("vertices"))


def multigraph_from_json(data: dict) -> Multigraph:
    return build_multigraph(data["vertices"], [(*e["ends"], e["multiplicity"]) for e in data["edges"]])


def map_from_json(data: dict) -> SimplicialMap:
    return build_simplicial_map(
        complex_from_json(data["source"]), complex_from_json(data["target"]), data["vertex_map"]
    )


def homology_from_json(data: dict) -> HomologyReport:
    return HomologyReport(
        {int(k): v for k, v in sorted(data["betti"].items(), key=lambda kv: int(kv[0]))},
        {int(k): tuple(v) for k, v in sorted(data["torsion"].items(), key=lambda kv: int(kv[0])) if v},
    )


_READERS = {
    "poset": poset_from_json,
    "diagram": diagram_from_json,
    "complex": complex_from_json,
    "multigraph": multigraph_from_json,
    "map": map_from_json,
    "homology": homology_from_json,
}


def parse(text: str, kind: str, source: str = "<input>"):
    data = loads(text, source)
    validate(data, kind, text)
    return _READERS[kind](data)


def read(path: str, kind: str):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from None
    return parse(text, kind, source=path)


# ---------------------------------------------------------------------------
# writers

def poset_to_json(p: Poset) -> dict:
    el = p.elements
    covers = sorted((a, b) for a in range(len(p)) for b in p.upper_cover_idx(a))
    return {"elements": list(el), "covers": [[el[a], el[b]] for a, b in covers]}


def diagram_to_json(d: Diagram) -> dict:
    b = d.base
    maps = []
    for a in range(len(b)):
        for t in b.upper_cover_idx(a):
            s_name, t_name = b.elements[a], b.elements[t]
            maps.append({"from": s_name, "to": t_name, "map": d.edge_map(s_name, t_name)})
    return {
        "poset": poset_to_json(b),
        "stalks": {e: list(d.stalk(e)) for e in b.elements},
        "maps": maps,
    }


def complex_to_json(k: SimplicialComplex) -> dict:
    return {"vertices": list(k.vertices), "facets": [list(f) for f in k.facets]}


def multigraph_to_json(g: Multigraph) -> dict:
    return {
        "vertices": list(g.vertices),
        "edges": [{"ends": [u, v], "multiplicity": m} for u, v, m in g.edges],
    }


def map_to_json(f: SimplicialMap) -> dict:
    return {
        "source": complex_to_json(f.source),
        "target": complex_to_json(f.target),
        "vertex_map": {v: f.vertex_map[v] for v in f.source.vertices},
    }


def homology_to_json(r: HomologyReport) -> dict:
    return {
        "betti": {str(k): v for k, v in sorted(r.betti.items())},
        "torsion": {str(k): list(v) for k, v in sorted(r.torsion.items()) if v},
    }


def decomposition_to_json(rep) -> dict:
    out = {
        "status": rep.status,
        "match": rep.match,
        "applicable": rep.applicable,
        "hypotheses": dict(rep.hypothesis_flags),
        "components": rep.components,
        "per_simplex": [
            {"simplex": t.element, "dim": t.dim, "spheres": t.count,
             "link_betti": {str(k): v for k, v in sorted(t.link_betti.items())}}
            for t in rep.per_simplex
        ],
        "predicted_betti": None if rep.predicted_betti is None
        else {str(k): v for k, v in sorted(rep.predicted_betti.items())},
        "actual": homology_to_json(rep.actual_betti),
        "base": homology_to_json(rep.base_betti),
        "notes": list(rep.notes),
    }
    if rep.witness is not None:
        out["witness"] = to_jsonable(rep.witness)
    if rep.base_cm is not None:
        out["base_cm"] = to_jsonable(rep.base_cm)
    if rep.inflation_cm is not None:
        out["inflation_cm"] = to_jsonable(rep.inflation_cm)
    return out


def to_jsonable(obj: Any) -> Any:
    """Plain JSON data for witnesses and verdicts; sets become sorted lists."""
    if isinstance(obj, (str, int, float, bool)) or obj is None:
        return obj
    if isinstance(obj, Section):
        return {k: obj.choice[k] for k in sorted(obj.choice, key=natural_key)}
    if isinstance(obj, FlabbinessWitness):
        return {
            "U": sorted(obj.u, key=natural_key),
            "V": sorted(obj.v, key=natural_key),
            "section": to_jsonable(obj.section),
        }
    if isinstance(obj, HomologyReport):
        return homology_to_json(obj)
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {f.name: to_jsonable(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (set, frozenset)):
        return sorted((to_jsonable(x) for x in obj), key=lambda x: natural_key(str(x)))
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(x) for x in obj]
    return str(obj)


def dumps(obj: Any) -> str:
    """Canonical text: sorted keys, two-space indent, trailing newline."""
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def write_atomic(path: str, text: str) -> None:
    folder = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=folder, prefix=".inflate-kit-")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
