"""Command-line interface.

Exit codes: 0 verified / success, 1 verification deviation, 2 usage or parse
error.  JSON goes to ``--out`` (default stdout); human-readable notes go to
stderr and are silenced by ``--quiet``.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from typing import Optional

from . import __version__
from .bsball import CORRECTED, LITERAL, LabeledTree, bs_ball, covering_to_K, covering_to_L, labeled_tree_ball
from .catalog import complex_BS, complex_K, complex_L
from .complexes import TwoComplex, validate_complex
from .config import ConfigError, RunConfig
from .covers import CellMapError, CellularMap, Voltage, VoltageError, build_cover, derive_cell_map, search_common_cover, verify_covering
from .presentations import PresentationError, auto_simplify, move_to_dict, pi1_from_complex
from .schreier import CyclicHom, HomError, subgroup_presentation
from .verify import run_paper_verify
from .words import Presentation, format_word_compact


class UsageError(Exception):
    pass


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


class _Out:
    def __init__(self, args):
        self.quiet = getattr(args, "quiet", False)
        self.path = getattr(args, "out", None)

    def note(self, msg: str) -> None:
        if not self.quiet:
            print(msg, file=sys.stderr)

    def emit(self, obj) -> None:
        text = dumps(obj)
        if self.path:
            with open(self.path, "w") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)


def _read_json(path: str):
    try:
        if path == "-":
            return json.load(sys.stdin)
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc


def _load_complex(path: str) -> TwoComplex:
    data = _read_json(path)
    try:
        return TwoComplex.from_dict(data)
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"{path} is not a complex file: {exc}") from exc


def _load_presentation(args) -> Presentation:
    try:
        if args.presentation:
            return Presentation.from_dict(_read_json(args.presentation))
        if args.generators is not None:
            return Presentation.from_text(args.generators, args.relator or [])
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"bad presentation: {exc}") from exc
    raise UsageError("give --presentation FILE or --generators ... --relator ...")


def _ints(params, n, what):
    if len(params) != n:
        raise UsageError(f"build {what} needs {n} integer argument(s)")
    try:
        return [int(x) for x in params]
    except ValueError as exc:
        raise UsageError(f"build {what}: {exc}") from exc


# --- commands ------------------------------------------------------------------


def cmd_build(args, out: _Out) -> int:
    t, params = args.target, args.params
    if t == "K":
        _ints(params, 0, t)
        out.emit(complex_K().to_dict())
    elif t == "L":
        _ints(params, 0, t)
        out.emit(complex_L().to_dict())
    elif t == "bs":
        n, m = _ints(params, 2, t)
        if n < 1 or m < 1:
            raise UsageError("bs needs positive n and m")
        out.emit(complex_BS(n, m).to_dict())
    elif t == "tree":
        (r,) = _ints(params, 1, t)
        out.emit(labeled_tree_ball(r).to_dict())
    elif t in ("ball", "map-K", "map-L"):
        r, lo, hi = _ints(params, 3, t)
        if lo >= hi:
            raise UsageError("need i_min < i_max")
        ball = bs_ball(labeled_tree_ball(r), lo, hi)
        if t == "ball":
            out.emit(ball.complex.to_dict())
        elif t == "map-K":
            out.emit(covering_to_K(ball, args.rule).to_dict())
        else:
            out.emit(covering_to_L(ball).to_dict())
        out.note(f"{t}: interior vertices {len(ball.interior)}")
    else:
        raise UsageError(f"unknown build target {t!r}")
    return 0


def cmd_verify_cover(args, out: _Out) -> int:
    if args.map:
        try:
            m = CellularMap.from_dict(_read_json(args.map), load=_read_json)
        except (KeyError, TypeError, ValueError) as exc:
            raise UsageError(f"bad map file: {exc}") from exc
        if args.all_interior:
            m = CellularMap(m.source, m.target, m.vertex_map, m.edge_map, m.cell_map, None)
    elif args.complex and args.voltage:
        base = _load_complex(args.complex)
        try:
            volt = Voltage.from_dict(_read_json(args.voltage))
        except (KeyError, TypeError, ValueError) as exc:
            raise UsageError(f"bad voltage file: {exc}") from exc
        try:
            _, m = build_cover(base, volt)
        except VoltageError as exc:
            out.emit({"pass": False, "findings": [{"severity": "error", "location": "voltage",
                                                   "message": str(exc), "data": {}}]})
            return 1
    else:
        raise UsageError("give --map FILE, or --complex FILE with --voltage FILE")
    try:
        if m.cell_map is None:
            m = derive_cell_map(m)
        rep = verify_covering(m)
    except CellMapError as exc:
        out.emit({"pass": False, "findings": [{"severity": "error", "location": "cell_map",
                                               "message": str(exc), "data": {}}]})
        return 1
    out.emit(rep.to_dict())
    out.note(f"covering check: {'pass' if rep.passed else 'FAIL'} ({len(rep.errors())} errors)")
    return 0 if rep.passed else 1


def cmd_pi1(args, out: _Out) -> int:
    cx = _load_complex(args.complex)
    tree = None
    if args.spanning_tree is not None:
        tree = [e for part in args.spanning_tree for e in part.split(",") if e]
    try:
        p = pi1_from_complex(cx, tree)
    except PresentationError as exc:
        raise UsageError(str(exc)) from exc
    out.emit(p.to_dict())
    out.note(f"pi_1 = {p}")
    return 0


def cmd_simplify(args, out: _Out) -> int:
    p = _load_presentation(args)
    q, log = auto_simplify(p)
    if args.rename:
        mapping = dict(x.split("=", 1) for x in args.rename)
        q = q.rename(mapping)
    out.emit(q.to_dict())
    if args.log:
        with open(args.log, "w") as fh:
            fh.write(dumps([move_to_dict(m) for m in log]))
    out.note(f"{len(log)} moves: {q}")
    return 0


def cmd_rs(args, out: _Out) -> int:
    p = _load_presentation(args)
    images = {}
    for item in args.image or []:
        g, _, r = item.partition(":")
        try:
            images[g] = int(r)
        except ValueError as exc:
            raise UsageError(f"bad --image {item!r}") from exc
    try:
        sub, k = subgroup_presentation(p, CyclicHom(args.modulus, images, args.designated or ""))
    except HomError as exc:
        raise UsageError(str(exc)) from exc
    d = sub.to_dict()
    d["index"] = k
    out.emit(d)
    out.note(f"index {k}: {sub}")
    return 0


def cmd_search(args, out: _Out) -> int:
    a, b = _load_complex(args.a), _load_complex(args.b)
    for name, cx in (("a", a), ("b", b)):
        if not validate_complex(cx).passed:
            raise UsageError(f"complex {name} is invalid")
    stats: dict = {}
    found = search_common_cover(a, b, args.max_a, args.max_b, stats)
    out.emit({
        "bounds": [args.max_a, args.max_b],
        "found": found is not None,
        "result": None if found is None else found.to_dict(),
        "compared": stats["compared"],
    })
    out.note("common cover found" if found else f"none up to ({args.max_a}, {args.max_b}) sheets")
    return 0


def _dot_quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def complex_to_dot(cx: TwoComplex, labels: Optional[dict] = None, name: str = "complex") -> str:
    lines = [f"digraph {_dot_quote(name)} {{"]
    for v in cx.vertices:
        lines.append(f"  {_dot_quote(v)};")
    for e in cx.edges:
        label = e.name if not labels or e.name not in labels else f"{e.name} {labels[e.name]}"
        lines.append(f"  {_dot_quote(e.tail)} -> {_dot_quote(e.head)} [label={_dot_quote(label)}];")
    for c in cx.cells:
        lines.append(f"  // cell {c.name}: {format_word_compact(c.boundary)}")
    lines.append("}")
    return "\n".join(lines) + "\n"


def cmd_export(args, out: _Out) -> int:
    data = _read_json(args.input)
    try:
        if isinstance(data, dict) and "labels" in data:
            tree = LabeledTree.from_dict(data)
            obj, cx = tree.to_dict(), TwoComplex.from_dict(data)
            labels = {n: f"({g},{d})" for n, (g, d) in data["labels"].items()}
        elif isinstance(data, dict) and "vertex_map" in data:
            m = CellularMap.from_dict(data, load=_read_json)
            obj, cx = m.to_dict(), m.source
            labels = {e: f"-> {m.edge_map[e]}" for e in m.edge_map}
        elif isinstance(data, dict) and "generators" in data:
            obj, cx, labels = Presentation.from_dict(data).to_dict(), None, None
        else:
            cx = TwoComplex.from_dict(data)
            obj, labels = cx.to_dict(), None
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"cannot parse {args.input}: {exc}") from exc
    if args.format == "json":
        out.emit(obj)
        return 0
    if cx is None:
        raise UsageError("dot export needs a complex, tree or map")
    text = complex_to_dot(cx, labels)
    if out.path:
        with open(out.path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_paper_verify(args, out: _Out) -> int:
    try:
        base = RunConfig.load(args.config).to_dict() if args.config else RunConfig().to_dict()
        for key, val in (("tree_radius", args.radius), ("heights", args.heights),
                         ("k_rule", args.k_rule), ("sheets", args.sheets), ("out", args.out)):
            if val is not None:
                base[key] = val
        cfg = RunConfig.from_dict(base)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    out.path = cfg.out
    start = time.perf_counter()
    report = run_paper_verify(cfg)
    if args.timings:
        report["metadata"] = {"wall_seconds": round(time.perf_counter() - start, 3)}
    out.emit(report)
    for s in report["steps"]:
        out.note(f"[{'ok' if s['ok'] else 'DEVIATION'}] {s['name']}: expected {s['expect']}, observed {s['observed']}")
    out.note("all steps as expected" if report["pass"] else "deviations found")
    return 0 if report["pass"] else 1


# --- parser --------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(2)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="write JSON here instead of stdout")
    common.add_argument("--quiet", action="store_true", help="suppress prose on stderr")

    p = _Parser(prog="nonleighton", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"nonleighton {__version__}")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    b = sub.add_parser("build", parents=[common], help="emit a catalog object as JSON")
    b.add_argument("target", help="K | L | bs N M | tree R | ball R IMIN IMAX | map-K R IMIN IMAX | map-L R IMIN IMAX")
    b.add_argument("params", nargs="*", type=str)
    b.add_argument("--rule", choices=(CORRECTED, LITERAL), default=CORRECTED)

    v = sub.add_parser("verify-cover", parents=[common], help="check a cellular map is a covering")
    v.add_argument("--map")
    v.add_argument("--complex")
    v.add_argument("--voltage")
    v.add_argument("--all-interior", action="store_true", help="ignore the map's interior set")

    s = sub.add_parser("pi1", parents=[common], help="fundamental group presentation of a complex")
    s.add_argument("--complex", required=True)
    s.add_argument("--spanning-tree", action="append", help="tree edges (repeat or comma-separate)")

    def pres_args(sp):
        sp.add_argument("--presentation", help="presentation JSON file")
        sp.add_argument("--generators", nargs="*")
        sp.add_argument("--relator", action="append", help='text form, e.g. "y^-1 c y c^-1"')

    s = sub.add_parser("simplify", parents=[common], help="greedy Tietze simplification")
    pres_args(s)
    s.add_argument("--rename", action="append", help="old=new, applied to the result")
    s.add_argument("--log", help="write the move log here")

    s = sub.add_parser("rs", parents=[common], help="kernel of a map onto Z/k")
    pres_args(s)
    s.add_argument("--modulus", type=int, required=True)
    s.add_argument("--image", action="append", help="gen:residue")
    s.add_argument("--designated")

    s = sub.add_parser("search-common-cover", parents=[common], help="bounded common finite cover search")
    s.add_argument("--a", required=True)
    s.add_argument("--b", required=True)
    s.add_argument("--max-a", type=int, default=3)
    s.add_argument("--max-b", type=int, default=3)

    s = sub.add_parser("export", parents=[common], help="render a complex, tree or map")
    s.add_argument("--input", required=True)
    s.add_argument("--format", choices=("dot", "json"), default="dot")

    s = sub.add_parser("paper-verify", parents=[common], help="replay every check end to end")
    s.add_argument("--config")
    s.add_argument("--radius", type=int)
    s.add_argument("--heights", type=int, nargs=2)
    s.add_argument("--k-rule", choices=(CORRECTED, LITERAL))
    s.add_argument("--sheets", type=int, nargs=2)
    s.add_argument("--timings", action="store_true", help="add wall-clock metadata (not deterministic)")
    return p


COMMANDS = {
    "build": cmd_build,
    "verify-cover": cmd_verify_cover,
    "pi1": cmd_pi1,
    "simplify": cmd_simplify,
    "rs": cmd_rs,
    "search-common-cover": cmd_search,
    "export": cmd_export,
    "paper-verify": cmd_paper_verify,
}


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if not args.command:
        parser.print_usage(sys.stderr)
        return 2
    out = _Out(args)
    try:
        return COMMANDS[args.command](args, out)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except BrokenPipeError:
        sys.stderr.close()
        return 0


if __name__ == "__main__":
    sys.exit(main())
