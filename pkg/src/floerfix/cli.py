"""Command line front end: ``floerfix {hfk,bound,mapclass,kunneth,selftest}``."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import dataclass, field

from . import grid, mapclass, selftest
from .grid import BigradedRanks, GridError

EXIT_OK, EXIT_INVARIANT, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    paths: list[str] = field(default_factory=list)
    json: bool = False
    seed: int | None = None
    iters: int | None = None
    max_grid: int = grid.DEFAULT_MAX_GRID
    threads: int = 1

    def __post_init__(self):
        if self.command != "selftest" and (self.seed is not None or self.iters is not None):
            raise InputError("--seed and --iters are only valid for selftest")


def _read(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from None


def _load_grid(path: str, cfg: RunConfig) -> grid.GridDiagram:
    try:
        return grid.read_grid(_read(path), max_grid=cfg.max_grid)
    except GridError as exc:
        raise InputError(f"{path}: {exc}") from None


def _load_table(path: str, cfg: RunConfig) -> tuple[BigradedRanks, dict]:
    """A rank table from a grid file or from the JSON written by ``hfk --json``."""
    text = _read(path)
    if text.lstrip().startswith("{"):
        try:
            data = json.loads(text)
            table = BigradedRanks({(m, a): r for a, m, r in data["table"]})
        except (ValueError, KeyError, TypeError) as exc:
            raise InputError(f"{path}: not a rank table document ({exc})") from None
        return table, {"table_file": path}
    g = _load_grid(path, cfg)
    return grid.knot_floer_ranks(g, max_grid=cfg.max_grid, threads=cfg.threads), {
        "n": g.n, "x_marks": list(g.x_marks), "o_marks": list(g.o_marks)}


def _summary(h: BigradedRanks) -> dict:
    rep = grid.fixed_point_bound(h)
    return {
        "genus": rep.genus,
        "fibered": rep.fibered,
        "r": rep.r,
        "bound": rep.bound,
        "contradiction": rep.contradiction,
    }


def _table_lines(h: BigradedRanks) -> list[str]:
    lines = [f"  {'alexander':>9}  {'maslov':>6}  {'rank':>4}"]
    lines += [f"  {a:>9}  {m:>6}  {r:>4}" for a, m, r in h.triples()]
    return lines


def _summary_lines(s: dict) -> list[str]:
    out = [f"genus: {s['genus']}", f"fibered: {'yes' if s['fibered'] else 'no'}"]
    out.append(f"r: {s['r'] if s['r'] is not None else 'n/a'}")
    if s["contradiction"]:
        out.append("bound: contradiction (fibered table with r = 0)")
    elif s["bound"] is None:
        out.append("bound: not applicable (knot is not fibered)")
    else:
        out.append(f"bound: {s['bound']}")
    return out


def _emit(cfg: RunConfig, doc: dict, lines: list[str]) -> None:
    if cfg.json:
        sys.stdout.write(json.dumps(doc, indent=2, sort_keys=True) + "\n")
    else:
        sys.stdout.write("\n".join(lines) + "\n")


def _table_doc(h: BigradedRanks) -> list[list[int]]:
    return [list(t) for t in h.triples()]


def cmd_hfk(cfg: RunConfig) -> int:
    h, source = _load_table(cfg.paths[0], cfg)
    s = _summary(h)
    doc = {"source": source, "table": _table_doc(h), "mirror_table": _table_doc(h.mirror()),
           "alexander_totals": [[a, r] for a, r in h.alexander_totals().items()], **s}
    lines = []
    if "n" in source:
        lines.append(f"grid size: {source['n']}")
    lines.append("hat knot Floer homology over F2 (alexander, maslov, rank):")
    lines += _table_lines(h)
    lines.append("mirror orientation (alexander, maslov) -> (-alexander, -maslov):")
    lines += _table_lines(h.mirror())
    lines += _summary_lines(s)
    _emit(cfg, doc, lines)
    return EXIT_INVARIANT if s["contradiction"] else EXIT_OK


def cmd_bound(cfg: RunConfig) -> int:
    h, source = _load_table(cfg.paths[0], cfg)
    s = _summary(h)
    _emit(cfg, {"source": source, **s}, _summary_lines(s))
    return EXIT_INVARIANT if s["contradiction"] else EXIT_OK


def cmd_kunneth(cfg: RunConfig) -> int:
    if len(cfg.paths) != 2:
        raise InputError("kunneth needs exactly two inputs")
    h1, _ = _load_table(cfg.paths[0], cfg)
    h2, _ = _load_table(cfg.paths[1], cfg)
    h = grid.kunneth_convolve(h1, h2)
    s = _summary(h)
    doc = {"table": _table_doc(h), "alexander_totals": [[a, r] for a, r in h.alexander_totals().items()], **s}
    lines = ["connected sum (alexander, maslov, rank):", *_table_lines(h), *_summary_lines(s)]
    _emit(cfg, doc, lines)
    return EXIT_OK


def cmd_mapclass(cfg: RunConfig) -> int:
    path = cfg.paths[0]
    try:
        d = mapclass.loads(_read(path))
    except mapclass.DecompositionError as exc:
        raise InputError(f"{path}: {exc}") from None
    report = mapclass.verify_bound(d, strict=False)
    for w in report.warnings:
        print(f"warning: {w}", file=sys.stderr)
    lines = ["summands:"]
    lines += [f"  {k:<20} {v:>4}" for k, v in report.breakdown]
    lines += [
        f"rank (corrected):    {report.rank}",
        f"rank (uncorrected):  {report.rank_uncorrected}",
        f"flip-twist annuli:   {report.n_flip}",
        f"nielsen number:      {report.nielsen}",
        f"lefschetz number:    {report.lefschetz}",
        f"slack (rank - N):    {report.slack}",
        "checks:",
    ]
    lines += [f"  {k:<32} {'pass' if ok else 'FAIL'}" for k, ok in report.checks.items()]
    _emit(cfg, report.to_dict(), lines)
    return EXIT_OK if report.ok else EXIT_INVARIANT


def cmd_selftest(cfg: RunConfig) -> int:
    seed = 0 if cfg.seed is None else cfg.seed
    iters = 1000 if cfg.iters is None else cfg.iters
    results = selftest.run(seed, iters, cfg.threads)
    failed = sum(len(r.failures) for r in results)
    doc = {
        "seed": seed,
        "iters": iters,
        "suites": [{"name": r.name, "cases": r.cases, "failures": r.failures} for r in results],
        "passed": failed == 0,
    }
    lines = [f"selftest seed={seed} iters={iters}"]
    for r in results:
        lines.append(f"  {r.name:<28} cases {r.cases:>5}  failures {len(r.failures)}")
        lines += [f"    {f}" for f in r.failures]
    lines.append("PASS" if failed == 0 else f"FAIL ({failed} failures; rerun with --seed {seed} to reproduce)")
    _emit(cfg, doc, lines)
    return EXIT_OK if failed == 0 else EXIT_INVARIANT


COMMANDS = {
    "hfk": cmd_hfk,
    "bound": cmd_bound,
    "kunneth": cmd_kunneth,
    "mapclass": cmd_mapclass,
    "selftest": cmd_selftest,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit a JSON document instead of text")
    common.add_argument("--threads", type=int, default=1, metavar="K", help="worker threads (output is identical)")
    common.add_argument("--max-grid", type=int, default=grid.DEFAULT_MAX_GRID, metavar="N",
                        help=f"largest grid size accepted (default {grid.DEFAULT_MAX_GRID})")

    parser = argparse.ArgumentParser(prog="floerfix", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("hfk", parents=[common], help="knot Floer homology table of a grid diagram")
    p.add_argument("path")
    p = sub.add_parser("bound", parents=[common], help="fixed point bound for a fibered knot's monodromy")
    p.add_argument("path")
    p = sub.add_parser("kunneth", parents=[common], help="rank table of a connected sum")
    p.add_argument("paths", nargs=2, metavar="path")
    p = sub.add_parser("mapclass", parents=[common], help="Floer rank, Nielsen and Lefschetz numbers of a decomposition")
    p.add_argument("path")
    p = sub.add_parser("selftest", parents=[common], help="randomized invariant suite")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--iters", type=int, default=None)
    return parser


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=logging.ERROR, format="%(levelname)s: %(message)s")
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    paths = args.paths if hasattr(args, "paths") else ([args.path] if hasattr(args, "path") else [])
    try:
        cfg = RunConfig(args.command, paths, args.json, getattr(args, "seed", None),
                        getattr(args, "iters", None), args.max_grid, max(1, args.threads))
        return COMMANDS[cfg.command](cfg)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except grid.GridError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
