"""Command line front end.

Exit status: 0 success, 1 usage error, 2 data error, 3 unresolved collision.
Diagnostics go to stderr as ``Code: message``.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from typing import BinaryIO, Sequence

from . import __version__
from .compose import default_rasm, dump_rasm, load_rasm, POINT_GLYPHS
from .errors import TashkilError, UnresolvedCollision
from .ingest import lint_order, reorder_text, segment
from .metrics import default_metrics, dump_metrics, load_metrics
from .pipeline import Shaper
from .render import load_outlines, plans_to_json, to_svg
from .solver import CollisionPolicy, SolverConfig, config_overrides, parse_config
from .strategies import StrategyMode, compare
from .taxonomy import default_table, dump_table, format_scalar, load_table

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_COLLISION = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        raise UsageError(f"{self.prog}: {message}")


def _add_input(p: argparse.ArgumentParser) -> None:
    p.add_argument("--input", "-i", default="-", help="UTF-8 text file (default: stdin)")
    p.add_argument("--output", "-o", default="-", help="output file (default: stdout)")


def _add_assets(p: argparse.ArgumentParser) -> None:
    p.add_argument("--taxonomy", help="mark classification table")
    p.add_argument("--metrics", help="glyph metrics file")
    p.add_argument("--rasm", help="skeleton (rasm) table")


def _add_shaping(p: argparse.ArgumentParser) -> None:
    _add_assets(p)
    p.add_argument("--config", help="key=value solver configuration file")
    p.add_argument("--skeleton", action="store_true", help="split dotted letters into skeleton + dots")
    p.add_argument("--gap", type=float)
    p.add_argument("--scale-min", type=float)
    p.add_argument("--scale-max", type=float)
    p.add_argument("--fill-ratio", type=float)
    p.add_argument("--policy", choices=[c.value for c in CollisionPolicy], dest="collision_policy")
    p.add_argument("--kasra-under-shadda", choices=["below", "above"])


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="tashkil",
        description="Layered placement of Arabic diacritics. "
                    "Subcommands: shape, lint, compare, validate, dump-assets.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND", parser_class=_Parser)

    p = sub.add_parser("shape", help="shape text into a placement plan (JSON) or SVG")
    _add_input(p)
    _add_shaping(p)
    p.add_argument("--mode", default=StrategyMode.LAYERED.value, choices=[m.value for m in StrategyMode])
    p.add_argument("--format", default="json", choices=["json", "svg"])
    p.add_argument("--outlines", help="optional outline table for SVG output")

    p = sub.add_parser("lint", help="report marks typed out of stacking order")
    _add_input(p)
    p.add_argument("--taxonomy", help="mark classification table")
    p.add_argument("--format", default="text", choices=["text", "json"])
    p.add_argument("--fix", action="store_true", help="write the text with marks reordered")

    p = sub.add_parser("compare", help="shape with every strategy and report differences")
    _add_input(p)
    _add_shaping(p)

    p = sub.add_parser("validate", help="check taxonomy, metrics and rasm tables")
    _add_assets(p)

    p = sub.add_parser("dump-assets", help="print the built-in tables and defaults")
    p.add_argument("--what", default="all", choices=["all", "taxonomy", "metrics", "rasm", "config"])
    return parser


def _read_input(path: str, stdin: BinaryIO) -> bytes:
    if path == "-":
        return stdin.read()
    with open(path, "rb") as f:
        return f.read()


def _write(path: str, data: bytes, stdout: BinaryIO) -> None:
    if path == "-":
        stdout.write(data)
    else:
        with open(path, "wb") as f:
            f.write(data)


def _shaper(args) -> Shaper:
    taxonomy = load_table(args.taxonomy) if args.taxonomy else default_table()
    metrics = load_metrics(args.metrics) if args.metrics else default_metrics()
    rasm = load_rasm(args.rasm) if args.rasm else None
    cfg = SolverConfig.for_metrics(metrics)
    if args.config:
        with open(args.config, encoding="utf-8") as f:
            cfg = replace(cfg, **parse_config(f.read()))
    flags = [(k, str(getattr(args, k))) for k in
             ("gap", "scale_min", "scale_max", "fill_ratio", "collision_policy", "kasra_under_shadda")
             if getattr(args, k) is not None]
    cfg = replace(cfg, **config_overrides(flags))
    return Shaper(taxonomy, metrics, cfg, rasm, args.skeleton)


def _cmd_shape(args, stdin, stdout) -> int:
    shaper = _shaper(args)
    plans = shaper.shape(_read_input(args.input, stdin), args.mode)
    if args.format == "svg":
        outlines = load_outlines(args.outlines) if args.outlines else None
        data = to_svg(plans, shaper.metrics, outlines=outlines)
    else:
        data = plans_to_json(plans)
    _write(args.output, data, stdout)
    return EXIT_OK


def _cmd_lint(args, stdin, stdout) -> int:
    taxonomy = load_table(args.taxonomy) if args.taxonomy else default_table()
    raw = _read_input(args.input, stdin)
    if args.fix:
        _write(args.output, reorder_text(raw, taxonomy).encode("utf-8"), stdout)
        return EXIT_OK
    report = [v for w in segment(raw) for v in lint_order(w, taxonomy)]
    if args.format == "json":
        data = json.dumps([v.as_dict() for v in report], ensure_ascii=False) + "\n"
    else:
        data = "".join(v.as_line() + "\n" for v in report)
    _write(args.output, data.encode("utf-8"), stdout)
    return EXIT_OK


def _cmd_compare(args, stdin, stdout) -> int:
    shaper = _shaper(args)
    reports = [
        compare(shaper.layered(w), shaper.metrics, shaper.cfg, label=w.text).as_dict()
        for w in segment(_read_input(args.input, stdin))
    ]
    data = json.dumps(reports, ensure_ascii=False, indent=1) + "\n"
    _write(args.output, data.encode("utf-8"), stdout)
    return EXIT_OK


def _cmd_validate(args, stdin, stdout, stderr) -> int:
    taxonomy = load_table(args.taxonomy) if args.taxonomy else default_table()
    metrics = load_metrics(args.metrics) if args.metrics else default_metrics()
    rasm = load_rasm(args.rasm) if args.rasm else default_rasm()
    problems = []
    for scalar in sorted(taxonomy.entries):
        if scalar not in metrics:
            problems.append(f"taxonomy mark {format_scalar(scalar)} has no metrics")
    for letter, entry in sorted(rasm.items()):
        for s in (letter, entry.skeleton):
            if s not in metrics:
                problems.append(f"rasm letter {format_scalar(s)} has no metrics")
        if entry.dots and POINT_GLYPHS[entry.dots_side, entry.dots] not in metrics:
            problems.append(f"point glyph for {format_scalar(letter)} has no metrics")
    for p in dict.fromkeys(problems):
        stderr.write(f"MissingMetrics: {p}\n")
    if problems:
        return EXIT_DATA
    stdout.write(
        f"ok: {len(taxonomy)} marks, {len(metrics.glyphs)} glyphs, {len(rasm)} rasm entries\n".encode()
    )
    return EXIT_OK


def _cmd_dump(args, stdout) -> int:
    sections = {
        "taxonomy": lambda: dump_table(default_table()),
        "metrics": lambda: dump_metrics(default_metrics()),
        "rasm": lambda: dump_rasm(default_rasm()),
        "config": lambda: "".join(
            f"{k}={v}\n" for k, v in
            [("mode", StrategyMode.LAYERED.value), ("units_per_em", str(default_metrics().units_per_em)),
             *SolverConfig.for_metrics(default_metrics()).as_pairs()]
        ),
    }
    names = list(sections) if args.what == "all" else [args.what]
    parts = []
    for name in names:
        text = sections[name]()
        parts.append(f"# --- {name} ---\n{text}" if args.what == "all" else text)
    stdout.write("".join(parts).encode("utf-8"))
    return EXIT_OK


def run(argv: Sequence[str] | None = None, stdin: BinaryIO | None = None,
        stdout: BinaryIO | None = None, stderr=None) -> int:
    stdin = stdin or sys.stdin.buffer
    stdout = stdout or sys.stdout.buffer
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise UsageError("tashkil: a subcommand is required (see --help)")
    except UsageError as e:
        stderr.write(f"UsageError: {e}\n")
        return EXIT_USAGE
    try:
        if args.command == "shape":
            return _cmd_shape(args, stdin, stdout)
        if args.command == "lint":
            return _cmd_lint(args, stdin, stdout)
        if args.command == "compare":
            return _cmd_compare(args, stdin, stdout)
        if args.command == "validate":
            return _cmd_validate(args, stdin, stdout, stderr)
        return _cmd_dump(args, stdout)
    except UnresolvedCollision as e:
        stderr.write(f"{e.code}: {e}\n")
        return EXIT_COLLISION
    except TashkilError as e:
        stderr.write(f"{e.code}: {e}\n")
        return EXIT_DATA
    except OSError as e:
        stderr.write(f"IOError: {e}\n")
        return EXIT_DATA


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
