"""Command-line front end.

Exit status: 0 on success, 1 when ``--strict`` is set and the verdict is
"not equivalent" or "vanishes", 2 on any input error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .analyzer import Signature, analyze, analyze_saddle, classify_cobordism, disc_operation_target
from .branes import BraneContext
from .document import (
    DiagramEntry,
    InputDocument,
    dumps,
    entry_to_json,
    load_json,
    parse,
    parse_context,
    sewing_entry,
)
from .errors import InputError, SemanticError, SewcalcError
from .normalizer import disc_normal_form, equivalence, normal_form, saddle_normal_form
from .saddle import saddle_degree_shift, sewing_degree_shift
from .sewing import canonical_decomposition, compose, decompose, edge_count_relation

OK, VERDICT, INPUT = 0, 1, 2


def _read(path: str) -> bytes:
    try:
        return Path(path).read_bytes()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}", code="io") from None


def _document(args) -> InputDocument:
    if not args.input:
        raise InputError("--in is required", code="usage")
    return parse(_read(args.input))


def _context(args, doc: InputDocument | None, required: bool = True) -> BraneContext | None:
    if args.context:
        return parse_context(_read(args.context))
    if doc is not None and doc.context is not None:
        return doc.context
    if required:
        raise InputError("a brane context is needed: pass --context or add a 'context' field", code="usage")
    return None


def _selected(args, doc: InputDocument) -> list[DiagramEntry]:
    if args.diagram:
        return [doc.get(args.diagram)]
    return list(doc.diagrams)


def _sewing(entry: DiagramEntry):
    if entry.kind != "sewing":
        raise SemanticError(f"diagram {entry.name!r} is a {entry.kind} diagram, not a sewing diagram",
                            "$.diagrams", code="wrong-kind")
    return entry.sewing()


def _emit(args, payload: dict, text: str):
    if args.format == "json":
        sys.stdout.write(dumps(payload))
    else:
        sys.stdout.write(text.rstrip("\n") + "\n")


def cmd_validate(args) -> int:
    doc = _document(args)
    ctx = _context(args, doc, required=False)
    lines = []
    out = []
    for entry in doc.diagrams:
        info = {"name": entry.name, "kind": entry.kind}
        if entry.kind == "sewing":
            t = entry.sewing()
            e, e2, p1, p2, p3, holds = edge_count_relation(t)
            info.update({"census": [p1, p2, p3], "edges": e, "target_edges": e2,
                         "target": [list(x) for x in t.target.label_pairs()]})
            if ctx is not None:
                info["degree_shift"] = sewing_degree_shift(ctx, t)
        elif entry.kind == "saddle":
            d = entry.saddle(ctx)
            info.update({"simple": d.simple, "target": [list(x) for x in d.target.label_pairs()]})
            if ctx is not None:
                info["degree_shift"] = saddle_degree_shift(ctx, d)
        else:
            info["m"] = len(entry.arc_labels) // 2
        out.append(info)
        lines.append(f"{entry.name}: ok ({entry.kind})")
    _emit(args, {"diagrams": out, "status": "ok"}, "\n".join(lines) or "ok: no diagrams")
    return OK


def cmd_compose(args) -> int:
    doc = _document(args)
    first, second = (_sewing(doc.get(n)) for n in args.names)
    result = compose(first, second)
    entry = sewing_entry(f"{args.names[1]}∘{args.names[0]}", result)
    body = entry_to_json(entry)
    body["target"] = [list(x) for x in result.target.label_pairs()]
    _emit(args, body, dumps(body))
    return OK


def cmd_decompose(args) -> int:
    doc = _document(args)
    entry = _one(args, doc)
    parts = decompose(_sewing(entry))
    body = {"diagrams": [entry_to_json(sewing_entry(f"{entry.name}.{i + 1}", p)) for i, p in enumerate(parts)]}
    text = "\n".join(f"{entry.name}.{i + 1}: {_kind(p)} {_edges(p.source)} -> {_edges(p.target)}" for i, p in enumerate(parts))
    _emit(args, body, text or f"{entry.name}: trivial")
    return OK


def cmd_canonical(args) -> int:
    doc = _document(args)
    entry = _one(args, doc)
    stages = canonical_decomposition(_sewing(entry))
    names = ("products", "saddles", "coproducts")
    body = {"diagrams": [entry_to_json(sewing_entry(f"{entry.name}.{n}", t)) for n, t in zip(names, stages)]}
    text = "\n".join(f"{n}: {len(t.moves)} moves, {_edges(t.source)} -> {_edges(t.target)}" for n, t in zip(names, stages))
    _emit(args, body, text)
    return OK


def _normal_form(entry: DiagramEntry, ctx):
    if entry.kind == "sewing":
        return normal_form(entry.sewing())
    if entry.kind == "saddle":
        return saddle_normal_form(entry.saddle(ctx))
    return disc_normal_form(entry.arc_labels)


def cmd_normalize(args) -> int:
    doc = _document(args)
    ctx = _context(args, doc, required=False)
    out, lines = [], []
    for entry in _selected(args, doc):
        nf = _normal_form(entry, ctx)
        out.append({"name": entry.name, "digest": nf.digest(), "normal_form": nf.to_dict()})
        words = "; ".join(" ".join(c.word) for c in nf.components)
        lines.append(f"{entry.name}: {nf.digest()[:16]} [{words}]")
    _emit(args, {"diagrams": out}, "\n".join(lines))
    return OK


def cmd_equivalent(args) -> int:
    doc = _document(args)
    a, b = (_sewing(doc.get(n)) for n in args.names)
    result = equivalence(a, b)
    verdict = "equivalent" if result.equivalent else "not equivalent"
    body = {"verdict": verdict, "diagrams": list(args.names)}
    if result.ambiguous:
        body["note"] = result.reason
    _emit(args, body, verdict + (f" ({result.reason})" if result.ambiguous else ""))
    return VERDICT if args.strict and not result.equivalent else OK


def _report(entry: DiagramEntry, ctx: BraneContext):
    if entry.kind == "sewing":
        t = entry.sewing()
        return analyze(ctx, t, entry.inputs), normal_form(t)
    if entry.kind == "saddle":
        d = entry.saddle(ctx)
        nf = saddle_normal_form(d) if d.all_interior else None
        return analyze_saddle(ctx, d), nf
    return disc_operation_target(ctx, entry.arc_labels), disc_normal_form(entry.arc_labels)


def cmd_analyze(args) -> int:
    doc = _document(args)
    ctx = _context(args, doc)
    out, lines = [], []
    vanishes = False
    for entry in _selected(args, doc):
        report, nf = _report(entry, ctx)
        vanishes = vanishes or report.vanishes
        item = {"name": entry.name, "report": report.to_dict()}
        if nf is not None:
            item["normal_form_digest"] = nf.digest()
        out.append(item)
        lines.append(f"{entry.name}:")
        lines.append(f"  degree shift: {report.degree_shift}")
        lines.append(f"  target: contained in {report.target}")
        lines.append(f"  vanishes: {'yes' if report.vanishes else 'no'}")
        lines.extend(f"    - {r}" for r in report.reasons)
        if report.value is not None:
            v = report.value
            lines.append(f"  value: diagonal image of [{v.base}] into {v.factors} factors, degree {v.degree}")
        lines.append(f"  classification: {report.classification}")
    _emit(args, {"diagrams": out}, "\n".join(lines))
    return VERDICT if args.strict and vanishes else OK


def _signature(args) -> Signature:
    if args.input:
        obj = load_json(_read(args.input), "signature")
        allowed = {"genus", "windows", "closed_in", "closed_out", "open_boundaries"}
        if not isinstance(obj, dict) or set(obj) - allowed:
            raise InputError(f"signature fields must be among {sorted(allowed)}", code="schema")
        fields = obj
    else:
        bounds = []
        if args.open:
            for part in args.open.split(";"):
                bounds.append(tuple(x.strip() for x in part.split(",") if x.strip()))
        fields = {"genus": args.genus, "windows": args.windows, "closed_in": args.closed_in,
                  "closed_out": args.closed_out, "open_boundaries": bounds}
    try:
        return Signature(**fields)
    except (TypeError, ValueError) as exc:
        raise InputError(str(exc), code="semantic") from None


def cmd_classify(args) -> int:
    sig = _signature(args)
    verdict = classify_cobordism(sig)
    _emit(args, {"classification": verdict}, verdict)
    return VERDICT if args.strict and verdict == "Vanishes" else OK


def _one(args, doc) -> DiagramEntry:
    if args.diagram:
        return doc.get(args.diagram)
    if len(doc.diagrams) != 1:
        raise InputError("pick a diagram with --diagram", code="usage")
    return doc.diagrams[0]


def _edges(eu) -> str:
    return "{" + ", ".join(f"{t}→{h}" for t, h in eu.label_pairs()) + "}"


def _kind(t) -> str:
    return "product" if type(t.moves[0]).__name__ == "TypeI" else "coproduct"


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--context", metavar="PATH", help="brane context JSON")
    common.add_argument("--in", dest="input", metavar="PATH", help="diagram document JSON")
    common.add_argument("--diagram", metavar="NAME", help="restrict to one named diagram")
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--strict", action="store_true", help="exit 1 on negative verdicts")

    parser = argparse.ArgumentParser(prog="sewcalc", description="Sewing and saddle diagram calculus for open string operations.")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("validate", parents=[common], help="check a document").set_defaults(func=cmd_validate)
    p = sub.add_parser("compose", parents=[common], help="compose diagram A then B")
    p.add_argument("names", nargs=2, metavar="NAME")
    p.set_defaults(func=cmd_compose)
    sub.add_parser("decompose", parents=[common], help="split into elementary diagrams").set_defaults(func=cmd_decompose)
    sub.add_parser("canonical", parents=[common], help="products, saddles, coproducts").set_defaults(func=cmd_canonical)
    sub.add_parser("normalize", parents=[common], help="normal form digests").set_defaults(func=cmd_normalize)
    p = sub.add_parser("equivalent", parents=[common], help="compare two diagrams")
    p.add_argument("names", nargs=2, metavar="NAME")
    p.set_defaults(func=cmd_equivalent)
    sub.add_parser("analyze", parents=[common], help="targets, shifts and vanishing").set_defaults(func=cmd_analyze)
    p = sub.add_parser("classify", parents=[common], help="classify a cobordism signature")
    p.add_argument("--genus", type=int, default=0)
    p.add_argument("--windows", type=int, default=0)
    p.add_argument("--closed-in", type=int, default=0)
    p.add_argument("--closed-out", type=int, default=0)
    p.add_argument("--open", default="", help='open strings per boundary, e.g. "in,out;in"')
    p.set_defaults(func=cmd_classify)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except SewcalcError as exc:
        if isinstance(exc, InputError):
            message = str(exc)
        else:
            where = args.diagram or ",".join(getattr(args, "names", None) or []) or "$"
            message = f"{exc.code}: {where}: {exc}"
        sys.stderr.write(f"error: {message}\n")
        return INPUT


if __name__ == "__main__":
    sys.exit(main())
