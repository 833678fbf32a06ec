"""JSON documents for algebras: exact rationals as strings, 1-based indices.

    {"schema": 1, "dim": 4, "labels": ["x1", ...],
     "brackets": [{"a": 2, "b": 3, "c": 4, "coeffs": {"1": "1"}}, ...],
     "derivation": [["1", "0", ...], ...]}          # optional, row-major

Parsing applies skew normalization but never checks the fundamental identity.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .algebra import SignConflictError, ThreeLieAlgebra
from .algebra import _insert as insert_entry
from .kernel import LinearMap, format_rational, parse_rational

SCHEMA_VERSION = 1
_TOP_KEYS = {"schema", "dim", "labels", "brackets", "derivation"}
_ENTRY_KEYS = {"a", "b", "c", "coeffs"}


class DocumentError(ValueError):
    """Malformed document; ``code`` is a stable error name, ``where`` a field path or line:column."""

    def __init__(self, code: str, where: str, message: str):
        self.code = code
        self.where = where
        self.message = message
        super().__init__(f"{code} at {where}: {message}")


@dataclass
class AlgebraDocument:
    algebra: ThreeLieAlgebra
    derivation: LinearMap | None = None


def _is_int(x) -> bool:
    return isinstance(x, int) and not isinstance(x, bool)


def _rational(x, where: str):
    if not isinstance(x, str):
        raise DocumentError("PARSE_ERROR", where, f"rationals must be strings, got {type(x).__name__}")
    try:
        return parse_rational(x)
    except ValueError as exc:
        raise DocumentError("PARSE_ERROR", where, str(exc)) from None


def _index(x, dim: int, where: str) -> int:
    if isinstance(x, str) and x.strip().isdigit():
        x = int(x)
    if not _is_int(x):
        raise DocumentError("PARSE_ERROR", where, f"index must be an integer, got {x!r}")
    if not 1 <= x <= dim:
        raise DocumentError("INDEX_OUT_OF_RANGE", where, f"index {x} outside 1..{dim}")
    return x - 1


def load_json(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError("PARSE_ERROR", f"line {exc.lineno} column {exc.colno}", exc.msg) from None


def document_from_data(data) -> AlgebraDocument:
    if not isinstance(data, dict):
        raise DocumentError("PARSE_ERROR", "$", "document must be a JSON object")
    unknown = sorted(set(data) - _TOP_KEYS)
    if unknown:
        raise DocumentError("PARSE_ERROR", f"$.{unknown[0]}", "unknown field")
    if data.get("schema") != SCHEMA_VERSION:
        raise DocumentError("PARSE_ERROR", "$.schema", f"expected schema {SCHEMA_VERSION}")
    dim = data.get("dim")
    if not _is_int(dim) or dim < 0:
        raise DocumentError("PARSE_ERROR", "$.dim", "dim must be a non-negative integer")
    labels = data.get("labels")
    if labels is not None:
        if not isinstance(labels, list) or not all(isinstance(s, str) for s in labels):
            raise DocumentError("PARSE_ERROR", "$.labels", "labels must be a list of strings")
        if len(labels) != dim:
            raise DocumentError("PARSE_ERROR", "$.labels", f"{len(labels)} labels for dim {dim}")
    entries = data.get("brackets", [])
    if not isinstance(entries, list):
        raise DocumentError("PARSE_ERROR", "$.brackets", "brackets must be a list")
    table: list = []
    for pos, entry in enumerate(entries):
        where = f"$.brackets[{pos}]"
        if not isinstance(entry, dict):
            raise DocumentError("PARSE_ERROR", where, "entry must be an object")
        unknown = sorted(set(entry) - _ENTRY_KEYS)
        missing = sorted(_ENTRY_KEYS - set(entry))
        if unknown or missing:
            raise DocumentError("PARSE_ERROR", where, f"expected fields a, b, c, coeffs (got {sorted(entry)})")
        key = tuple(_index(entry[f], dim, f"{where}.{f}") for f in "abc")
        coeffs = entry["coeffs"]
        if not isinstance(coeffs, dict):
            raise DocumentError("PARSE_ERROR", f"{where}.coeffs", "coeffs must be an object")
        img = {}
        for k, v in coeffs.items():
            kk = _index(k, dim, f"{where}.coeffs.{k}")
            if kk in img:
                raise DocumentError("PARSE_ERROR", f"{where}.coeffs.{k}", "repeated output index")
            img[kk] = _rational(v, f"{where}.coeffs.{k}")
        table.append((key, img, where))
    alg = _assemble(dim, table, labels)
    der = None
    if "derivation" in data and data["derivation"] is not None:
        der = _matrix(data["derivation"], dim, "$.derivation")
    return AlgebraDocument(alg, der)


def _assemble(dim: int, table: list, labels) -> ThreeLieAlgebra:
    acc: dict = {}
    for key, img, where in table:
        try:
            insert_entry(acc, dim, key, img)
        except SignConflictError:
            shown = ",".join(str(i + 1) for i in key)
            raise DocumentError("SIGN_CONFLICT", where,
                                f"bracket [{shown}] contradicts an earlier entry under skew symmetry") from None
    return ThreeLieAlgebra(dim, acc, labels)


def _matrix(rows, dim: int, where: str) -> LinearMap:
    if not isinstance(rows, list) or len(rows) != dim:
        raise DocumentError("PARSE_ERROR", where, f"expected {dim} rows")
    out = []
    for i, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != dim:
            raise DocumentError("PARSE_ERROR", f"{where}[{i}]", f"expected {dim} entries")
        out.append([_rational(x, f"{where}[{i}][{j}]") for j, x in enumerate(row)])
    return LinearMap.from_rows(out, dim)


def parse_document(text: str) -> AlgebraDocument:
    return document_from_data(load_json(text))


def parse_algebra(text: str) -> tuple:
    """(algebra, derivation or None) from document text."""
    doc = parse_document(text)
    return doc.algebra, doc.derivation


def document_data(alg: ThreeLieAlgebra, derivation: LinearMap | None = None) -> dict:
    """Canonical form: sorted triples a < b < c, sorted output indices, reduced fractions."""
    data = {
        "schema": SCHEMA_VERSION,
        "dim": alg.dim,
        "labels": list(alg.labels),
        "brackets": [
            {"a": a + 1, "b": b + 1, "c": c + 1,
             "coeffs": {str(k + 1): format_rational(v) for k, v in sorted(img.items())}}
            for (a, b, c), img in alg.table()
        ],
    }
    if derivation is not None:
        data["derivation"] = [[format_rational(x) for x in row] for row in derivation.tolist()]
    return data


def serialize_algebra(alg: ThreeLieAlgebra, derivation: LinearMap | None = None) -> str:
    return json.dumps(document_data(alg, derivation), indent=1) + "\n"


def format_vector(img: dict, labels) -> str:
    """Sparse vector as a readable sum, e.g. "x1 - 1/2 x3"; "0" when empty."""
    parts = []
    for k, v in sorted(img.items()):
        mag = abs(v)
        coef = "" if mag == 1 else format_rational(mag) + " "
        sign = "-" if v < 0 else "+"
        parts.append((sign, f"{coef}{labels[k]}"))
    if not parts:
        return "0"
    head_sign, head = parts[0]
    out = ("-" if head_sign == "-" else "") + head
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


def format_span(sub, labels) -> str:
    idx = sub.coordinate_indices()
    if idx is not None:
        return "<" + ", ".join(labels[i] for i in idx) + ">"
    vecs = [format_vector({i: x for i, x in enumerate(b) if x}, labels) for b in sub.basis]
    return "<" + ", ".join(vecs) + ">"
