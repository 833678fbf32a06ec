"""Reference bracket tables and the line-by-line diff against a generated algebra.

A reference table is a list of printed lines [x_a, x_b, x_c] = value in the
order they were written, some carrying an ``annotation`` that explains why the
line cannot be trusted on its own (a conflicting duplicate, or a clash with
another line under the invariant form).  Annotations are judged against the
table itself, never against the engine.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources
from itertools import combinations

from .algebra import SignConflictError, ThreeLieAlgebra, sort_with_sign
from .document import DocumentError, _index, _rational, format_vector, load_json

MATCH = "match"
MISSING = "missing"
CONFLICTING = "conflicting"


@dataclass(frozen=True)
class TableLine:
    position: int        # 1-based position in the printed table
    triple: tuple        # 0-based, as printed
    value: dict          # sparse, 0-based
    annotation: str | None = None

    @property
    def key(self) -> tuple:
        return sort_with_sign(self.triple)[0]

    def normalized(self) -> dict:
        """Value of the bracket on the sorted key."""
        sign = sort_with_sign(self.triple)[1]
        return {k: sign * v for k, v in self.value.items()}


@dataclass(frozen=True)
class ReferenceTable:
    name: str
    dim: int
    labels: tuple
    lines: tuple
    input_note: str = ""

    @property
    def annotated(self) -> tuple:
        return tuple(ln for ln in self.lines if ln.annotation)


def reference_from_data(data) -> ReferenceTable:
    if not isinstance(data, dict) or data.get("kind") != "reference-table":
        raise DocumentError("PARSE_ERROR", "$.kind", "not a reference-table document")
    dim = data.get("dim")
    if not isinstance(dim, int) or isinstance(dim, bool) or dim < 0:
        raise DocumentError("PARSE_ERROR", "$.dim", "dim must be a non-negative integer")
    labels = tuple(data.get("labels") or [f"x{i + 1}" for i in range(dim)])
    if len(labels) != dim:
        raise DocumentError("PARSE_ERROR", "$.labels", f"{len(labels)} labels for dim {dim}")
    lines = []
    for pos, entry in enumerate(data.get("lines", [])):
        where = f"$.lines[{pos}]"
        if not isinstance(entry, dict) or not isinstance(entry.get("coeffs"), dict):
            raise DocumentError("PARSE_ERROR", where, "line must have a, b, c and coeffs")
        triple = tuple(_index(entry.get(f), dim, f"{where}.{f}") for f in "abc")
        if len(set(triple)) < 3:
            raise DocumentError("SIGN_CONFLICT", where, "repeated index in a printed bracket")
        value = {_index(k, dim, f"{where}.coeffs.{k}"): _rational(v, f"{where}.coeffs.{k}")
                 for k, v in entry["coeffs"].items()}
        value = {k: v for k, v in value.items() if v}
        lines.append(TableLine(pos + 1, triple, value, entry.get("annotation") or None))
    return ReferenceTable(str(data.get("name", "")), dim, labels, tuple(lines), data.get("input_note", ""))


def load_reference(text: str) -> ReferenceTable:
    return reference_from_data(load_json(text))


def builtin_text(filename: str) -> str:
    return resources.files("trilie").joinpath("data", filename).read_text(encoding="utf-8")


def builtin_reference(name: str = "manin16") -> ReferenceTable:
    return load_reference(builtin_text(f"{name}_table.json"))


# -- internal consistency -------------------------------------------------------


def conflicting_duplicates(table: ReferenceTable) -> list:
    """Positions of lines whose bracket is printed again with a different value."""
    groups: dict = {}
    for ln in table.lines:
        groups.setdefault(ln.key, []).append(ln)
    bad = []
    for group in groups.values():
        values = {tuple(sorted(ln.normalized().items())) for ln in group}
        if len(values) > 1:
            bad.extend(ln.position for ln in group)
    return sorted(bad)


def invariance_clashes(table: ReferenceTable, pairing) -> list:
    """Pairs of line positions that violate ([u,v,w],z) + (w,[u,v,z]) = 0 together.

    ``pairing(i)`` is the partner index of basis vector i under a form with
    (e_i, e_pairing(i)) = 1 and all other basis pairings zero.  Lines that are
    conflicting duplicates are left out; so are violations involving a bracket
    the table does not print, since those only show the table is incomplete.
    """
    skip = set(conflicting_duplicates(table))
    by_key: dict = {}
    for ln in table.lines:
        if ln.position not in skip:
            by_key[ln.key] = ln
    try:
        alg = ThreeLieAlgebra.from_entries(table.dim, [(k, ln.normalized()) for k, ln in by_key.items()])
    except SignConflictError:
        return []
    n = table.dim
    clashes = set()
    for (u, v, w), ln in by_key.items():
        for first, second, third in ((u, v, w), (v, w, u), (w, u, v)):
            for z in range(n):
                if z in (first, second):
                    continue
                other = sort_with_sign((first, second, z))[0]
                if other not in by_key:
                    continue
                lhs = alg.structure_constant(pairing(z), first, second, third)
                rhs = alg.structure_constant(pairing(third), first, second, z)
                if lhs + rhs:
                    pair = tuple(sorted((ln.position, by_key[other].position)))
                    clashes.add(pair)
    return sorted(clashes)


# -- diff -----------------------------------------------------------------------


@dataclass(frozen=True)
class DiffEntry:
    key: tuple               # 1-based sorted triple
    position: int | None     # printed position, None for unprinted engine entries
    expected: str
    found: str
    classification: str
    annotation: str | None = None


@dataclass(frozen=True)
class DiffReport:
    entries: tuple

    def _count(self, cls: str, annotated: bool | None = None) -> int:
        return sum(1 for e in self.entries if e.classification == cls
                   and (annotated is None or bool(e.annotation) == annotated))

    @property
    def printed(self) -> int:
        return sum(1 for e in self.entries if e.position is not None)

    @property
    def matched(self) -> int:
        return self._count(MATCH, annotated=False)

    @property
    def unannotated(self) -> int:
        return sum(1 for e in self.entries if e.position is not None and not e.annotation)

    @property
    def annotated(self) -> int:
        return sum(1 for e in self.entries if e.annotation)

    @property
    def annotated_agree(self) -> int:
        return self._count(MATCH, annotated=True)

    @property
    def unexpected(self) -> tuple:
        """Conflicts on lines nobody flagged: the engine disagrees with a trusted line."""
        return tuple(e for e in self.entries if e.classification == CONFLICTING and not e.annotation)

    @property
    def missing(self) -> tuple:
        return tuple(e for e in self.entries if e.classification == MISSING)

    def ok(self, strict: bool = False) -> bool:
        if self.unexpected:
            return False
        if strict:
            return self.annotated_agree == self.annotated and not self.missing
        return True

    def summary_lines(self) -> list:
        return [
            f"printed lines: {self.printed}",
            f"matched: {self.matched} of {self.unannotated} non-annotated lines",
            f"annotated: {self.annotated} lines ({self.annotated_agree} agree with the engine, "
            f"{self.annotated - self.annotated_agree} differ)",
            f"unannotated conflicts: {len(self.unexpected)}",
            f"engine entries absent from the table: {len(self.missing)}",
        ]


def diff_table(generated: ThreeLieAlgebra, table: ReferenceTable) -> DiffReport:
    """Compare every printed line, then list generated brackets the table never prints."""
    if generated.dim != table.dim:
        raise DocumentError("DIM_MISMATCH", "$.dim", f"generated dim {generated.dim}, table dim {table.dim}")
    labels = table.labels
    entries = []
    seen = set()
    for ln in table.lines:
        seen.add(ln.key)
        want = ln.normalized()
        got = generated.bracket_basis(*ln.key)
        cls = MATCH if got == want else CONFLICTING
        key1 = tuple(i + 1 for i in ln.key)
        entries.append(DiffEntry(key1, ln.position, format_vector(want, labels),
                                 format_vector(got, labels), cls, ln.annotation))
    for key, img in generated.table():
        if key not in seen:
            entries.append(DiffEntry(tuple(i + 1 for i in key), None, "0",
                                     format_vector(img, labels), MISSING))
    entries.sort(key=lambda e: (e.key, e.position is None, e.position or 0))
    return DiffReport(tuple(entries))


def render_diff(report: DiffReport, labels, strict: bool = False) -> list:
    out = []
    for e in report.entries:
        br = "[" + ",".join(labels[i - 1] for i in e.key) + "]"
        where = f"line {e.position}" if e.position is not None else "unprinted"
        text = f"{e.classification:<11} {br:<16} printed {e.expected:<8} engine {e.found:<8} ({where})"
        if e.annotation:
            text += f"  annotated: {e.annotation}"
        out.append(text)
    out.extend(report.summary_lines())
    out.append("result: " + ("pass" if report.ok(strict) else "FAIL"))
    return out


def diff_data(report: DiffReport, strict: bool = False) -> dict:
    return {
        "entries": [
            {"key": list(e.key), "position": e.position, "expected": e.expected, "found": e.found,
             "classification": e.classification, "annotation": e.annotation}
            for e in report.entries
        ],
        "printed": report.printed,
        "matched": report.matched,
        "non_annotated": report.unannotated,
        "annotated": report.annotated,
        "annotated_agree": report.annotated_agree,
        "unannotated_conflicts": len(report.unexpected),
        "missing": len(report.missing),
        "ok": report.ok(strict),
    }


def dumps(data) -> str:
    return json.dumps(data, indent=1, sort_keys=False) + "\n"
