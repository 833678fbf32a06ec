"""Command-line front end: ``python -m trilie <command> ...``.

Every command prints a deterministic report and exits 0 only when every
requested check passed.  Failures carry a stable error code.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from pathlib import Path

from . import analysis
from .algebra import ThreeLieAlgebra, check_fundamental_identity
from .bialgebra import (
    ClosedFormMismatch,
    check_local_cocycle,
    check_round_trip,
    cybe_bracket,
    delta_from_r,
    dual_algebra,
    r_matrix,
)
from .derivation import NotDerivation, NotInvolutive, adapt, check_grading, eigen_split, is_derivation
from .document import (
    DocumentError,
    document_data,
    format_span,
    format_vector,
    load_json,
    parse_document,
)
from .document import _matrix as parse_matrix
from .kernel import LinearMap, coordinate_subspace, format_rational, parse_rational
from .manin import PipelineError, build_manin, form_matrix_rows
from .reference import builtin_reference, builtin_text, diff_data, diff_table, load_reference, render_diff
from .report import Report
from .representation import RepresentationError, b1, b1_closed_form

STAGES = ["validate", "split", "semidirect", "bialgebra", "dual", "manin"]

# built-in examples: input document, relabelling of the total algebra, candidate ideal (1-based)
EXAMPLES = {
    "manin16": {
        "input": "manin16.json",
        "table": "manin16_table.json",
        "total_labels": [f"x{i}" for i in range(1, 17)],
        "ideal": [1, 2, 7, 8, 9, 10, 15, 16],
    },
}

# stage names raised by the pipeline, mapped to error codes
STAGE_CODES = {
    "fundamental identity": "FI_VIOLATION",
    "grading": "GRADING_VIOLATION",
    "semidirect product": "CLOSED_FORM_MISMATCH",
    "r-matrix": "CYBE_VIOLATION",
    "comultiplication": "CLOSED_FORM_MISMATCH",
    "local cocycle": "COCYCLE_VIOLATION",
    "dual algebra": "DUAL_NOT_THREE_LIE",
    "duality round trip": "ROUND_TRIP_MISMATCH",
    "coadjoint action of B1": "MODULE_AXIOM_VIOLATION",
    "coadjoint action of B2": "MODULE_AXIOM_VIOLATION",
    "semidirect closed forms": "CLOSED_FORM_MISMATCH",
    "total bracket": "BRACKET_CONFLICT",
    "block restrictions": "RESTRICTION_MISMATCH",
    "matched pair": "MATCHED_PAIR_VIOLATION",
}

TRIPLE_CODES = {
    "fundamental identity": "FI_VIOLATION",
    "invariance": "INVARIANCE_VIOLATION",
    "isotropy of B1": "NOT_ISOTROPIC",
    "isotropy of B2": "NOT_ISOTROPIC",
    "B1 subalgebra": "NOT_SUBALGEBRA",
    "B2 subalgebra": "NOT_SUBALGEBRA",
    "[B1,B1,B2] in B2": "CONTAINMENT_VIOLATION",
    "[B2,B2,B1] in B1": "CONTAINMENT_VIOLATION",
}


class CommandError(Exception):
    def __init__(self, code: str, message: str):
        self.code = code
        super().__init__(message)


class Output:
    """Collects report lines (text) and fields (json) for one command."""

    def __init__(self, fmt: str):
        self.fmt = fmt
        self.lines: list = []
        self.data: dict = {"checks": []}
        self.ok = True

    def line(self, text: str = "") -> None:
        self.lines.append(text)

    def field(self, key: str, value) -> None:
        self.data[key] = value

    def check(self, rep: Report) -> bool:
        self.ok = self.ok and rep.ok
        parts = rep.extra.get("parts")
        if parts:
            # part names repeat across stages, so keep the parent's name in front
            parts = [p if p.check.startswith(rep.check) else replace(p, check=f"{rep.check}: {p.check}")
                     for p in parts]
        else:
            parts = [rep]
        for p in parts:
            self.lines.append(_render_report(p))
            self.data["checks"].append(_report_data(p))
        return rep.ok

    def flag(self, name: str, ok: bool, detail: str = "") -> bool:
        self.ok = self.ok and ok
        self.lines.append(f"[{'pass' if ok else 'FAIL'}] {name}" + (f": {detail}" if detail else ""))
        self.data["checks"].append({"check": name, "ok": ok, "detail": detail})
        return ok

    def error(self, code: str, message: str) -> None:
        self.ok = False
        self.lines.append(f"error {code}: {message}")
        self.data["error"] = {"code": code, "message": message}

    def render(self) -> str:
        if self.fmt == "json":
            self.data["ok"] = self.ok
            return json.dumps(self.data, indent=1) + "\n"
        return "\n".join(self.lines + ["result: " + ("pass" if self.ok else "FAIL")]) + "\n"


def _public(x):
    """Witness tuples are 0-based internally; show them 1-based."""
    if isinstance(x, tuple) and all(isinstance(i, int) for i in x):
        return [i + 1 for i in x]
    if isinstance(x, dict):
        return {str(k): (v + 1 if isinstance(v, int) and k != "identity" else v) for k, v in x.items()}
    if x is None:
        return None
    return str(x)


def _render_report(rep: Report) -> str:
    if rep.ok:
        return f"[pass] {rep.check} ({rep.checked} checked)"
    text = f"[FAIL] {rep.check} at {_public(rep.witness)}"
    return text + (f" ({rep.detail})" if rep.detail else "")


def _report_data(rep: Report) -> dict:
    return {"check": rep.check, "ok": rep.ok, "checked": rep.checked,
            "witness": _public(rep.witness), "detail": rep.detail}


# -- inputs ----------------------------------------------------------------------


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise CommandError("IO_ERROR", f"{path}: {exc.strerror}") from None


def _derivation(spec: str | None, dim: int) -> LinearMap | None:
    """``--derivation``: a file (bare matrix or full document) or an inline diagonal "1,1,1,-1"."""
    if spec is None:
        return None
    if Path(spec).is_file():
        data = load_json(_read(spec))
        if isinstance(data, dict):
            data = data.get("derivation")
        rows = data
    elif spec.lstrip().startswith("["):
        rows = load_json(spec)
    else:
        try:
            diag = [parse_rational(x) for x in spec.split(",")]
        except ValueError as exc:
            raise DocumentError("PARSE_ERROR", "--derivation", str(exc)) from None
        if len(diag) != dim:
            raise DocumentError("PARSE_ERROR", "--derivation", f"{len(diag)} diagonal entries for dim {dim}")
        return LinearMap.diagonal(diag)
    return parse_matrix(rows, dim, "--derivation")


def _load_input(args) -> tuple:
    if getattr(args, "example_name", None):
        ex = EXAMPLES[args.example_name]
        doc = parse_document(builtin_text(ex["input"]))
    else:
        if not args.input:
            raise CommandError("USAGE", "--input is required")
        doc = parse_document(_read(args.input))
    der = _derivation(args.derivation, doc.algebra.dim) if args.derivation else doc.derivation
    return doc.algebra, der


def _graded(alg: ThreeLieAlgebra, der: LinearMap | None, out: Output) -> tuple:
    """Adapted algebra and grading; raises CommandError with NOT_INVOLUTIVE / NOT_DERIVATION."""
    if der is None:
        raise CommandError("MISSING_DERIVATION", "this command needs an involutive derivation")
    try:
        new, g, p = adapt(alg, der)
    except NotInvolutive as exc:
        raise CommandError("NOT_INVOLUTIVE", str(exc)) from None
    except NotDerivation:
        rep = is_derivation(alg, der)
        raise CommandError("NOT_DERIVATION", f"Leibniz rule fails on basis triple {_public(rep.witness)}") from None
    if p.is_identity():
        new = new.relabel(alg.labels)
    return new, g, p


# -- stages ----------------------------------------------------------------------


def run_validate(alg, der, out: Output) -> None:
    out.field("dim", alg.dim)
    out.line(f"dim = {alg.dim}, nonzero brackets = {len(alg.constants)}")
    fi = check_fundamental_identity(alg)
    out.check(fi)
    if not fi.ok:
        out.error("FI_VIOLATION", f"fundamental identity fails at {_public(fi.witness)}")
        return
    if der is not None:
        if not (der @ der).is_identity():
            out.flag("derivation squares to the identity", False)
            out.error("NOT_INVOLUTIVE", "the derivation does not square to the identity")
            return
        out.flag("derivation squares to the identity", True)
        rep = is_derivation(alg, der)
        out.check(rep)
        if not rep.ok:
            out.error("NOT_DERIVATION", f"Leibniz rule fails at {_public(rep.witness)}")
            return
        out.check(check_grading(eigen_split(alg, der), alg))


def run_split(alg, der, out: Output) -> tuple:
    new, g, p = _graded(alg, der, out)
    og = eigen_split(alg, der)
    out.line(f"s = {g.s}")
    out.line(f"A+ = {format_span(og.plus_space, alg.labels)} (dim {og.plus_space.dim})")
    out.line(f"A- = {format_span(og.minus_space, alg.labels)} (dim {og.minus_space.dim})")
    out.field("s", g.s)
    out.field("plus_basis", [[format_rational(x) for x in v] for v in og.plus_space.basis])
    out.field("minus_basis", [[format_rational(x) for x in v] for v in og.minus_space.basis])
    out.field("adapted", document_data(new, g.map))
    out.check(check_grading(g, new))
    return new, g


def run_semidirect(alg, der, out: Output) -> tuple:
    new, g = run_split(alg, der, out)
    try:
        generic = b1(new, verify=False)
    except RepresentationError as exc:
        raise CommandError("MODULE_AXIOM_VIOLATION", str(exc)) from None
    fi = check_fundamental_identity(generic)
    out.check(fi)
    if not fi.ok:
        raise CommandError("FI_VIOLATION", f"B1 fails the fundamental identity at {_public(fi.witness)}")
    closed = b1_closed_form(new, g)
    if closed != generic:
        key = next(k for k in sorted(set(closed.constants) | set(generic.constants))
                   if closed.constants.get(k) != generic.constants.get(k))
        out.flag("B1 closed form equals the coadjoint construction", False)
        raise CommandError("CLOSED_FORM_MISMATCH", f"B1 differs at {_public(key)}")
    out.flag("B1 closed form equals the coadjoint construction", True,
             f"{len(generic.constants)} nonzero brackets")
    out.field("b1", document_data(generic))
    return new, g, generic


def run_bialgebra(alg, der, out: Output) -> tuple:
    new, g, b1alg = run_semidirect(alg, der, out)
    r = r_matrix(g)
    cy = cybe_bracket(r, b1alg)
    if cy:
        out.flag("CYBE bracket of r vanishes", False)
        raise CommandError("CYBE_VIOLATION", f"[[r,r,r]] nonzero at {_public(next(iter(sorted(cy))))}")
    out.flag("CYBE bracket of r vanishes", True)
    try:
        com = delta_from_r(b1alg, g, new)
    except ClosedFormMismatch as exc:
        out.flag("comultiplication closed form", False)
        raise CommandError("CLOSED_FORM_MISMATCH", str(exc)) from None
    out.flag("comultiplication closed form", True, f"Δ nonzero on {len(com.delta)} basis vectors")
    rep = out.check(check_local_cocycle(com, b1alg))
    if not rep:
        raise CommandError("COCYCLE_VIOLATION", "a part of Δ is not a 1-cocycle")
    return new, g, b1alg, com


def run_dual(alg, der, out: Output) -> tuple:
    new, g, b1alg, com = run_bialgebra(alg, der, out)
    try:
        b2alg = dual_algebra(com, new, g)
    except ClosedFormMismatch as exc:
        out.flag("B2 closed form", False)
        raise CommandError("CLOSED_FORM_MISMATCH", str(exc)) from None
    except ValueError as exc:
        raise CommandError("DUAL_NOT_THREE_LIE", str(exc)) from None
    out.check(check_fundamental_identity(b2alg))
    out.flag("B2 closed form equals the Δ-transpose construction", True,
             f"{len(b2alg.constants)} nonzero brackets")
    if not out.check(check_round_trip(com, b2alg)):
        raise CommandError("ROUND_TRIP_MISMATCH", "transposing B2 does not give back Δ")
    out.field("b2", document_data(b2alg))
    return new, g, b1alg, b2alg


def run_manin(alg, der, out: Output, labels=None, show_table: bool = True):
    new, g, p = _graded(alg, der, out)
    out.line(f"s = {g.s}")
    try:
        triple = build_manin(new, g, closed_forms=True, matched_pair=True)
    except PipelineError as exc:
        rep = exc.report
        if rep is not None:
            out.check(rep)
        code = STAGE_CODES.get(exc.stage, "STAGE_FAILURE")
        if exc.stage == "manin triple" and rep is not None:
            code = TRIPLE_CODES.get(rep.extra.get("failed", ""), "STAGE_FAILURE")
        raise CommandError(code, str(exc)) from None
    out.flag("closed forms agree with the generic constructions", True, "B1, r-matrix CYBE, Δ, B2, both semidirect brackets")
    for rep in triple.reports:
        out.check(rep)
    total = triple.total if labels is None else triple.total.relabel(labels)
    out.line(f"Manin triple of dimension {total.dim} with {len(total.constants)} nonzero brackets")
    if show_table:
        for (a, b, c), img in total.table():
            out.line(f"  [{total.labels[a]},{total.labels[b]},{total.labels[c]}] = {format_vector(img, total.labels)}")
        out.line("form matrix rows:")
        for row in form_matrix_rows(triple.form):
            out.line("  " + " ".join(format_rational(x) for x in row))
    out.field("algebra", document_data(total))
    out.field("form", [[format_rational(x) for x in row] for row in form_matrix_rows(triple.form)])
    return total


def run_analysis(alg: ThreeLieAlgebra, out: Output, bound: int | None, ideal=None) -> None:
    labels = alg.labels
    der = analysis.derived_series(alg, bound)
    low = analysis.lower_central_series(alg, bound)
    first = der.term(1)
    out.line(f"dim B^1 = {first.dim}")
    out.line(f"B^1 = {format_span(first, labels)}")
    for r, t in enumerate(der.terms, start=1):
        out.line(f"B^({r}) dim {t.dim} = {format_span(t, labels)}")
    out.line(f"derived series: {der.verdict}")
    for r, t in enumerate(low.terms, start=1):
        out.line(f"B^{r} dim {t.dim}")
    if low.stable:
        out.line(f"B^{len(low.terms) + 1} = B^{len(low.terms)}")
    out.line(f"lower central series: {low.verdict}")
    z = analysis.centre(alg)
    out.line(f"centre dim {z.dim} = {format_span(z, labels)}")
    out.field("analysis", {
        "derived_dims": list(der.dims), "derived_verdict": der.verdict,
        "lower_central_dims": list(low.dims), "lower_central_verdict": low.verdict,
        "lower_central_stable": low.stable, "centre_dim": z.dim,
    })
    if ideal is not None:
        sub = coordinate_subspace(alg.dim, [i - 1 for i in ideal])
        rep = analysis.check_ideal(alg, sub)
        flags = rep.extra
        out.line(f"I = {format_span(sub, labels)}: ideal {flags['is_ideal']}, "
                 f"[I,I,I] = 0 {flags['abelian_weak']}, [I,I,B] = 0 {flags['abelian_strong']}")
        if flags["is_ideal"] and flags["abelian_strong"]:
            out.line(f"abelian ideal dim {sub.dim}")
        out.flag("I is an ideal with [I,I,B] = 0", flags["is_ideal"] and flags["abelian_strong"])
        second = der.term(2) if len(der.terms) >= 2 else None
        if second is not None:
            out.line(f"B^(2) equals I: {second == sub}")
        probe = analysis.minimality_probe(alg, sub)
        out.line(probe.summary())
        out.data["analysis"].update({
            "ideal": list(ideal), "is_ideal": flags["is_ideal"], "abelian_weak": flags["abelian_weak"],
            "abelian_strong": flags["abelian_strong"],
            "derived_second_equals_ideal": second == sub if second is not None else None,
            "minimality_probe": probe.summary(),
        })


def _run_stage(stage: str, alg, der, out: Output, labels=None):
    if stage == "validate":
        run_validate(alg, der, out)
        return None
    if stage == "split":
        run_split(alg, der, out)
    elif stage == "semidirect":
        run_semidirect(alg, der, out)
    elif stage == "bialgebra":
        run_bialgebra(alg, der, out)
    elif stage == "dual":
        run_dual(alg, der, out)
    elif stage == "manin":
        return run_manin(alg, der, out, labels)
    return None


# -- commands --------------------------------------------------------------------


def cmd_stage(args, out: Output) -> None:
    alg, der = _load_input(args)
    total = _run_stage(args.command, alg, der, out)
    if args.command == "manin" and args.analyze and total is not None:
        run_analysis(total, out, args.bound)


def cmd_analyze(args, out: Output) -> None:
    alg, _ = _load_input(args)
    ideal = _ideal_list(args.ideal, alg.dim) if args.ideal else None
    run_analysis(alg, out, args.bound, ideal)


def _ideal_list(text: str, dim: int) -> list:
    try:
        idx = [int(x) for x in text.split(",")]
    except ValueError:
        raise DocumentError("PARSE_ERROR", "--ideal", f"expected comma-separated indices, got {text!r}") from None
    bad = [i for i in idx if not 1 <= i <= dim]
    if bad:
        raise DocumentError("INDEX_OUT_OF_RANGE", "--ideal", f"index {bad[0]} outside 1..{dim}")
    return idx


def cmd_example(args, out: Output) -> None:
    ex = EXAMPLES[args.name]
    args.example_name = args.name
    alg, der = _load_input(args)
    out.line(f"example {args.name}: dim {alg.dim}, stage {args.run}")
    total = _run_stage(args.run, alg, der, out, ex["total_labels"])
    if args.analyze:
        if total is None:
            raise CommandError("USAGE", "--analyze needs --run manin")
        run_analysis(total, out, args.bound, ex["ideal"])


def cmd_diff(args, out: Output) -> None:
    if args.reference:
        table = load_reference(_read(args.reference))
    else:
        table = builtin_reference("manin16")
    if args.input:
        generated = parse_document(_read(args.input)).algebra
    else:
        args.example_name = "manin16"
        args.derivation = None
        alg, der = _load_input(args)
        sub = Output(out.fmt)
        generated = run_manin(alg, der, sub, show_table=False)
        if not sub.ok:
            raise CommandError("STAGE_FAILURE", "regenerating the example failed")
    report = diff_table(generated, table)
    if table.input_note:
        out.line(f"input: {table.input_note}")
    for ln in render_diff(report, table.labels, args.strict)[:-1]:
        out.line(ln)
    out.data["diff"] = diff_data(report, args.strict)
    if not report.ok(args.strict):
        out.ok = False


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="trilie", description="3-Lie algebra bialgebra and Manin triple toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, needs_input=True):
        if needs_input:
            p.add_argument("--input", help="algebra document (JSON)")
            p.add_argument("--derivation", help="derivation matrix file, inline JSON matrix, or diagonal '1,1,-1'")
        p.add_argument("--bound", type=int, default=None, help="maximum number of series terms")
        p.add_argument("--format", choices=["text", "json"], default="text")

    for name in STAGES:
        p = sub.add_parser(name, help=f"run the pipeline up to the {name} stage")
        common(p)
        if name == "manin":
            p.add_argument("--analyze", action="store_true", help="series and ideal report for the total algebra")
        p.set_defaults(func=cmd_stage)
    p = sub.add_parser("analyze", help="derived and lower central series of an algebra")
    common(p)
    p.add_argument("--ideal", help="comma-separated 1-based basis indices of a candidate ideal")
    p.set_defaults(func=cmd_analyze)
    p = sub.add_parser("example", help="run a built-in example")
    p.add_argument("name", choices=sorted(EXAMPLES))
    p.add_argument("--run", choices=STAGES, default="manin")
    p.add_argument("--analyze", action="store_true")
    p.add_argument("--derivation", default=None, help=argparse.SUPPRESS)
    common(p, needs_input=False)
    p.set_defaults(func=cmd_example)
    p = sub.add_parser("diff-table", help="compare a generated algebra with a reference table")
    p.add_argument("--input", help="generated algebra document; default regenerates the manin16 example")
    p.add_argument("--reference", help="reference table document; default is the built-in manin16 table")
    p.add_argument("--strict", action="store_true", help="annotated discrepancies and unprinted entries fail")
    common(p, needs_input=False)
    p.set_defaults(func=cmd_diff)
    return parser


def main(argv=None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    out = Output(args.format)
    try:
        args.func(args, out)
    except DocumentError as exc:
        out.error(exc.code, f"{exc.where}: {exc.message}")
    except CommandError as exc:
        out.error(exc.code, str(exc))
    stdout.write(out.render())
    return 0 if out.ok else 1


if __name__ == "__main__":
    sys.exit(main())
