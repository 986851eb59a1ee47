"""Command-line front end.

Exit codes: 0 for success, equal or all-pass; 1 for not-equal or some-fail;
2 for usage and parse errors (diagnostics go to stderr).
"""
from __future__ import annotations

import argparse
import sys
from typing import Optional, Sequence

from .freecat import BRAIDED, PLAIN, Multiarrow, OneCell, validate
from .syntax import ParseError, format_objseq, format_term, parse_term

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    """Bad input: reported on stderr with exit code 2."""


# ---------------------------------------------------------------------------
# ASCII diagrams


def render_ascii(f: OneCell) -> str:
    """One row per basic cell over fixed-width wire columns.

    Each row draws the wires entering the cell: ``|`` for untouched wires,
    ``[name]`` across a multiarrow's inputs and ``X`` across a crossing's
    two blocks. The wires leaving the cell are listed after ``=>``.
    """
    stages = f.stages()
    boxes = [len(c.arrow) + 2 for c in f.cells if isinstance(c, Multiarrow) and c.inputs]
    width = max([len(o) for s in stages for o in s] + boxes + [1]) + 2

    def labels(wires) -> str:
        return "".join(o.center(width) for o in wires).rstrip() or "(no wires)"

    def span(text: str, columns: int, fill: str) -> str:
        size = max(columns * width, len(text) + 2)
        return text.center(size, fill)

    rows = [labels(f.source)]
    for c, after in zip(f.cells, stages[1:]):
        pre = "".join("|".center(width) for _ in c.prefix)
        post = "".join("|".center(width) for _ in c.suffix)
        if isinstance(c, Multiarrow):
            body = span(f"[{c.arrow}]", len(c.inputs), "-")
        else:
            # the X sits on the boundary between the two blocks
            cut = max(len(c.left) * width - 1, 0)
            body = "-" * cut + "X" + "-" * ((len(c.left) + len(c.right)) * width - cut - 1)
        rows.append(f"{pre}{body}{post}".rstrip() + "   => " + format_objseq(after))
    return "\n".join(rows) + "\n"


# ---------------------------------------------------------------------------
# helpers


def _theory(source: str):
    from .signature import TheoryError, load_theory

    try:
        return load_theory(source)
    except KeyError as exc:
        raise UsageError(exc.args[0]) from exc
    except OSError as exc:
        raise UsageError(f"cannot read theory {source}: {exc.strerror}") from exc
    except TheoryError as exc:
        raise UsageError(f"{source}:\n{exc}") from exc


def _mode(args) -> str:
    return BRAIDED if args.braided else PLAIN


def _term(T, text: str, mode: str) -> OneCell:
    return _parse_valid(T.base, text, mode)


def _parse_valid(mg, text: str, mode: str) -> OneCell:
    try:
        f = parse_term(text, mg)
    except ParseError as exc:
        raise UsageError(f"term {text!r}: {exc}") from exc
    problems = validate(mg, f, mode)
    if problems:
        raise UsageError(f"term {text!r}: " + "; ".join(problems))
    return f


def _read(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from exc


# ---------------------------------------------------------------------------
# subcommands


def cmd_normalize(args, out) -> int:
    from .rewrite import normalize

    T = _theory(args.theory)
    mode = _mode(args)
    nf, path = normalize(_term(T, args.term, mode), mode)
    print(format_term(nf), file=out)
    print(f"steps: {len(path)}", file=out)
    if args.path:
        for s in path.steps:
            print(f"  {s}", file=out)
    return EXIT_OK


def cmd_decide(args, out) -> int:
    from .rewrite import decide_equal

    T = _theory(args.theory)
    mode = _mode(args)
    f, g = _term(T, args.left, mode), _term(T, args.right, mode)
    if (f.source, f.target) != (g.source, g.target):
        print("NOT EQUAL (boundaries differ)", file=out)
        return EXIT_FAIL
    path = decide_equal(f, g, mode)
    if path is None:
        print("NOT EQUAL", file=out)
        return EXIT_FAIL
    print(f"EQUAL ({len(path)} steps)", file=out)
    print(format_term(f), file=out)
    for s in path.steps:
        print(f"  {s}  =>  {format_term(s.after)}", file=out)
    return EXIT_OK


def cmd_weigh(args, out) -> int:
    from .measures import measure

    T = _theory(args.theory)
    mode = _mode(args)
    m = measure(_term(T, args.term, mode), mode)
    if mode == BRAIDED:
        names = ("overbraid width", "crossing weight", "multiarrow-crossing inversions",
                 "prefix weight", "trivial crossings")
        print(str(m), file=out)
        for name, v in zip(names, m.values):
            print(f"  {name}: {v}", file=out)
    else:
        print(f"prefix weight: {m.prefix}", file=out)
    return EXIT_OK


def cmd_cp(args, out) -> int:
    from .rewrite import critical_pairs

    T = _theory(args.theory)
    if args.max_cells < 0 or args.max_wires < 0:
        raise UsageError("bounds must be non-negative")
    report = critical_pairs(T.base, _mode(args), args.max_cells, args.max_wires)
    print(report.summary(), file=out)
    return EXIT_OK if report.ok else EXIT_FAIL


def cmd_check(args, out) -> int:
    from .components import check_script, parse_script
    from .signature import data_text

    T = _theory(args.theory)
    try:
        text = _read(args.script)
    except UsageError:
        try:
            text = data_text(args.script)
        except (FileNotFoundError, OSError):
            raise UsageError(f"cannot read {args.script}") from None
    try:
        script = parse_script(text)
    except ParseError as exc:
        raise UsageError(f"{args.script}: {exc}") from exc
    report = check_script(T, script)
    for line in report.lines():
        print(line, file=out)
    passed = sum(r.ok for r in report.results)
    print(f"{passed}/{len(report.results)} lemmas pass", file=out)
    return EXIT_OK if report.ok else EXIT_FAIL


def _split_sequent(text: str) -> tuple[str, str]:
    for turnstile in ("⊢", "|-"):
        if turnstile in text:
            ctx, expr = text.split(turnstile, 1)
            return ctx.strip(), expr.strip()
    raise UsageError("expected a sequent of the form 'CONTEXT |- EXPRESSION'")


def cmd_interp(args, out) -> int:
    from .components import ComponentError, check_expr1, infer_expr2
    from .interp import free_model, interp_expr1, interp_expr2
    from .syntax import Parser, context_names, parse_context, parse_expr1_text, parse_expr2_text

    T = _theory(args.theory)
    ctx_text, expr_text = _split_sequent(args.sequent)
    try:
        p = Parser.of(ctx_text)
        ctx = parse_context(p)
        p.expect_end()
    except ParseError as exc:
        raise UsageError(f"context: {exc}") from exc
    names = context_names(ctx)
    M = free_model(T)
    try:
        e1 = parse_expr1_text(expr_text, names)
    except ParseError:
        e1 = None
    try:
        if e1 is not None:
            check_expr1(T, ctx, e1)
            print(format_term(interp_expr1(M, ctx, e1)), file=out)
            return EXIT_OK
        e2 = parse_expr2_text(expr_text, names)
        infer_expr2(T, ctx, e2)
    except ParseError as exc:
        raise UsageError(f"expression: {exc}") from exc
    except ComponentError as exc:
        raise UsageError(f"expression: {exc}") from exc
    for line in interp_expr2(M, ctx, e2).lines():
        print(line, file=out)
    return EXIT_OK


def cmd_render(args, out) -> int:
    if args.theory is None:
        # any name that is not an arrow of example-G0 is taken as an object
        from .signature import Multigraph
        from .syntax import IDENT, tokenize

        base = _theory("example-G0").base
        try:
            words = {t.text for t in tokenize(args.term) if t.kind == IDENT}
        except ParseError as exc:
            raise UsageError(f"term {args.term!r}: {exc}") from exc
        objects = tuple(sorted(set(base.objects) | (words - set(base.arrows) - {"x", "id"})))
        mg = Multigraph(objects, base.arrows)
    else:
        mg = _theory(args.theory).base
    # rendering accepts crossings regardless of mode
    print(render_ascii(_parse_valid(mg, args.term, BRAIDED)), end="", file=out)
    return EXIT_OK


# ---------------------------------------------------------------------------
# entry points


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="graycoh", description="Coherence engine for free (braided) Gray monoids.")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def term_command(name: str, help_: str, *positionals: str):
        p = sub.add_parser(name, help=help_)
        p.add_argument("--theory", required=True, help="builtin theory name or theory file")
        p.add_argument("--braided", action="store_true", help="use the braided rewriting system")
        for pos in positionals:
            p.add_argument(pos)
        return p

    p = term_command("normalize", "print the normal form and step count", "term")
    p.add_argument("--path", action="store_true", help="also print every rewrite step")
    p.set_defaults(run=cmd_normalize)
    term_command("decide", "decide whether two parallel terms are connected", "left", "right").set_defaults(run=cmd_decide)
    term_command("weigh", "print the termination measure", "term").set_defaults(run=cmd_weigh)

    p = term_command("cp", "check that all peaks join in small terms")
    p.add_argument("--max-cells", type=int, required=True)
    p.add_argument("--max-wires", type=int, default=3, help="longest source sequence (default 3)")
    p.set_defaults(run=cmd_cp)

    p = sub.add_parser("check", help="check a proof script")
    p.add_argument("--theory", required=True)
    p.add_argument("script", help="script file, or the name of a bundled script such as kelly.gpf")
    p.set_defaults(run=cmd_check)

    p = sub.add_parser("interp", help="interpret 'CONTEXT |- EXPRESSION' in the free model")
    p.add_argument("--theory", required=True)
    p.add_argument("sequent")
    p.set_defaults(run=cmd_interp)

    p = sub.add_parser("render", help="draw a term as ASCII")
    p.add_argument("--theory", help="theory supplying objects and arrows (default: the arrows of "
                   "example-G0, with any other name read as an object)")
    p.add_argument("term")
    p.set_defaults(run=cmd_render)
    return parser


def run(argv: Optional[Sequence[str]] = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.run(args, out)
    except UsageError as exc:
        print(f"graycoh {args.command}: {exc}", file=err)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
