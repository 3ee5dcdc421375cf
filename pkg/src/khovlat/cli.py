"""Command-line front end: ``khovlat <verb> [input] [flags]``.

Exit status is 0 on success or a pass verdict, 1 on a fail verdict (or a
sweep disagreement, or a lattice that is not a snake), and 2 on bad input.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from importlib import resources
from pathlib import Path
from typing import Sequence

from .checker import check_lattice, order_independence_experiment, theorem_sweep
from .classify import (
    composition_matrix,
    is_1plus1plus1_free,
    is_2plus2_free,
    predict_khovanskii,
    recognize_snake,
    snake_poset,
)
from .poset import (
    DistributiveLattice,
    Poset,
    PosetError,
    PosetParseError,
    build_lattice,
    format_poset,
    join_irreducibles,
    lattice_from_order,
    lattice_to_dot,
    ordinal_decompose,
    parse_poset,
    width,
)
from .toric import cocomparability_graph, graph_to_dot

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    pass


def parse_poset_file(text: str) -> Poset:
    """Parse poset text; errors carry ``line`` and ``column``."""
    return parse_poset(text)


def fixture_dir() -> Path:
    return Path(str(resources.files("khovlat") / "fixtures"))


def resolve_input(name: str) -> Path:
    """Find ``name`` as given, then under ``$HK_SEED_DIR``, then among the bundled fixtures."""
    path = Path(name)
    if path.is_file():
        return path
    candidates = []
    seed = os.environ.get("HK_SEED_DIR")
    if seed:
        candidates += [Path(seed) / name, Path(seed) / path.name]
    candidates.append(fixture_dir() / path.name)
    for c in candidates:
        if c.is_file():
            return c
    raise InputError(f"{name}: no such file")


def read_text(name: str) -> tuple[str, str]:
    if name == "-":
        return "<stdin>", sys.stdin.read()
    path = resolve_input(name)
    return str(name), path.read_text(encoding="utf-8")


def load(name: str, as_lattice: bool) -> tuple[Poset, DistributiveLattice]:
    """Read a poset file; with ``as_lattice`` the file describes L(P) itself."""
    source, text = read_text(name)
    try:
        q = parse_poset_file(text)
    except PosetParseError as exc:
        raise InputError(f"{source}:{exc.line}:{exc.column}: {exc.message}") from None
    if not as_lattice:
        return q, build_lattice(q)
    try:
        lat = lattice_from_order(q)
    except PosetError as exc:
        raise InputError(f"{source}: {exc}") from None
    return join_irreducibles(lat), lat


def parse_order(text: str, lat: DistributiveLattice) -> list[int]:
    """Comma-separated 1-based element positions or element names, smallest variable first."""
    out = []
    names = {n: k for k, n in enumerate(lat.names)}
    for tok in (t.strip() for t in text.split(",")):
        if tok.isdigit():
            k = int(tok) - 1
            if not 0 <= k < len(lat):
                raise InputError(f"--order: position {tok} out of range 1..{len(lat)}")
            out.append(k)
        elif tok in names:
            out.append(names[tok])
        else:
            raise InputError(f"--order: unknown element {tok!r}")
    return out


def emit(obj) -> None:
    sys.stdout.write(json.dumps(obj, indent=2, ensure_ascii=False) + "\n")


def lattice_summary(lat: DistributiveLattice) -> dict:
    return {
        "size": len(lat),
        "elements": list(lat.names),
        "covers": [[i + 1, j + 1] for i, j in lat.covers()],
        "width": width(lat.to_poset()),
    }


# -- verbs --------------------------------------------------------------


def cmd_check(args) -> int:
    p, lat = load(args.input, args.as_lattice)
    ext = parse_order(args.order, lat) if args.order else None
    if args.bound is not None and (args.bound < 4 or args.bound % 2):
        raise InputError("--bound must be an even integer >= 4")
    try:
        report = check_lattice(lat, ext, args.bound, args.full, poset=p)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    if args.dot:
        sys.stdout.write(graph_to_dot(cocomparability_graph(lat)))
    elif args.pretty:
        v = report.verdict
        lines = [
            f"lattice      {report.lattice_size} elements, {report.generator_count} generators",
            f"order        {report.order.describe(lat.names)}",
            f"graph        {'bipartite' if report.bipartite else 'not bipartite'}, walk bound {report.bound}",
            f"walks        {report.walk_count} checked",
            f"verdict      {v.status}",
        ]
        if v.witness:
            w = v.witness
            lines.append("witness      " + ",".join("{%d,%d}" % tuple(e) for e in w["walk"]))
            lines.append(f"remainder    {w['remainder']}")
        sys.stdout.write("\n".join(lines) + "\n")
    else:
        emit(report.to_dict(traces=args.traces))
    return EXIT_OK if report.verdict.khovanskii else EXIT_FAIL


def cmd_classify(args) -> int:
    p, lat = load(args.input, args.as_lattice)
    out = {
        "poset": format_poset(p),
        "size": len(p),
        "ordinal_summands": [format_poset(b) for b in ordinal_decompose(p)],
        "free_2plus2": is_2plus2_free(p),
        "free_1plus1plus1": is_1plus1plus1_free(p),
        "snake_word": recognize_snake(lat),
        "predicted_khovanskii": predict_khovanskii(p),
    }
    if out["free_2plus2"] and len(p):
        out["composition_matrix"] = composition_matrix(p).to_json()
    if args.pretty:
        for k, v in out.items():
            if isinstance(v, str):
                v = v.strip().replace("\n", "; ")
            sys.stdout.write(f"{k:22} {v}\n")
    else:
        emit(out)
    return EXIT_OK


def cmd_lattice(args) -> int:
    _, lat = load(args.input, args.as_lattice)
    if args.dot:
        sys.stdout.write(lattice_to_dot(lat))
    elif args.graph:
        sys.stdout.write(graph_to_dot(cocomparability_graph(lat)))
    elif args.pretty:
        for k, name in enumerate(lat.names, start=1):
            ups = ", ".join(str(j + 1) for j in lat.upper_covers(k - 1))
            sys.stdout.write(f"{k:3}  {name:24} covered by: {ups}\n")
    else:
        emit(lattice_summary(lat))
    return EXIT_OK


def cmd_compmat(args) -> int:
    p, _ = load(args.input, args.as_lattice)
    try:
        m = composition_matrix(p)
    except PosetError as exc:
        raise InputError(str(exc)) from None
    if args.pretty:
        for row in m.to_json():
            sys.stdout.write("  ".join("{" + ",".join(c) + "}" if c else "-" for c in row) + "\n")
    else:
        emit(m.to_json())
    return EXIT_OK


def cmd_snake(args) -> int:
    if args.word is not None or (args.input and args.input.endswith(".word")):
        word = args.word
        if word is None:
            word = read_text(args.input)[1].strip()
        try:
            lat = snake_poset(word)
        except ValueError as exc:
            raise InputError(str(exc)) from None
        if args.dot:
            sys.stdout.write(lattice_to_dot(lat))
        else:
            emit({"word": word.lstrip("ε"), **lattice_summary(lat)})
        return EXIT_OK
    if not args.input:
        raise InputError("snake needs --word or an input file")
    _, lat = load(args.input, args.as_lattice)
    word = recognize_snake(lat)
    emit({"snake": word is not None, "word": word})
    return EXIT_OK if word is not None else EXIT_FAIL


def cmd_sweep(args) -> int:
    if args.max_n > 7 or args.max_n < 2:
        raise InputError("--max-n must lie in 2..7")
    report = theorem_sweep(args.max_n, jobs=args.jobs, strict=False)
    if args.pretty:
        for r in report.rows:
            sys.stdout.write(
                f"{r.id:10} irreducible={int(r.irreducible)} free={int(r.free)} "
                f"snake={r.snake if r.snake is not None else '-':10} direct={r.direct:16} "
                f"{'ok' if r.agrees else 'DISAGREE'}\n"
            )
        sys.stdout.write(f"{len(report.rows)} posets, {len(report.disagreements)} disagreements\n")
    else:
        emit(report.to_dict())
    return EXIT_OK if report.ok else EXIT_FAIL


def cmd_orders(args) -> int:
    p, _ = load(args.input, args.as_lattice)
    if args.k < 1:
        raise InputError("-k must be at least 1")
    out = order_independence_experiment(p, args.k, args.seed)
    if args.pretty:
        for r in out["runs"]:
            sys.stdout.write(f"{r['status']:16} {' < '.join(r['order'])}\n")
        sys.stdout.write(f"coincide: {out['coincide']}\n")
    else:
        emit(out)
    return EXIT_OK if out["coincide"] else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="khovlat", description="Khovanskii bases of Hibi-type binomials on L(P).")
    sub = ap.add_subparsers(dest="verb", required=True)

    def verb(name, fn, helptext, needs_input=True):
        sp = sub.add_parser(name, help=helptext)
        if needs_input:
            sp.add_argument("input", help="poset file, fixture name, or - for stdin")
            sp.add_argument("--as-lattice", action="store_true", help="the file describes the lattice itself")
        fmt = sp.add_mutually_exclusive_group()
        fmt.add_argument("--json", action="store_true", help="JSON output (default)")
        fmt.add_argument("--pretty", action="store_true", help="human-readable text")
        fmt.add_argument("--dot", action="store_true", help="Graphviz output where meaningful")
        sp.set_defaults(fn=fn)
        return sp

    sp = verb("check", cmd_check, "decide whether the Hibi binomials form a Khovanskii basis")
    sp.add_argument("--order", help="linear extension, comma-separated positions or names, smallest first")
    sp.add_argument("--bound", type=int, help="walk-length bound (even, >= 4)")
    sp.add_argument("--full", action="store_true", help="check every walk instead of stopping at the first failure")
    sp.add_argument("--traces", action=argparse.BooleanOptionalAction, default=True, help="include per-walk traces")

    verb("classify", cmd_classify, "forbidden subposets, snake word, prediction")

    sp = verb("lattice", cmd_lattice, "the lattice of order ideals")
    sp.add_argument("--graph", action="store_true", help="DOT of the co-comparability graph")

    verb("compmat", cmd_compmat, "composition matrix of a (2+2)-free poset")

    sp = sub.add_parser("snake", help="build a snake lattice from a word, or recognize one")
    sp.add_argument("input", nargs="?", help="poset file (recognize) or .word file (build)")
    sp.add_argument("--word", help="word over L, R (an optional leading ε is ignored)")
    sp.add_argument("--as-lattice", action="store_true")
    fmt = sp.add_mutually_exclusive_group()
    fmt.add_argument("--json", action="store_true")
    fmt.add_argument("--pretty", action="store_true")
    fmt.add_argument("--dot", action="store_true")
    sp.set_defaults(fn=cmd_snake)

    sp = verb("sweep", cmd_sweep, "classify every poset up to a size three ways", needs_input=False)
    sp.add_argument("--max-n", type=int, default=5)
    sp.add_argument("--jobs", type=int, default=1)

    sp = verb("orders", cmd_orders, "repeat the check under several compatible orders")
    sp.add_argument("-k", type=int, default=5, help="number of linear extensions to try")
    sp.add_argument("--seed", type=int, default=0)
    return ap


def run(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except InputError as exc:
        sys.stderr.write(f"khovlat: error: {exc}\n")
        return EXIT_INPUT


def main(argv: Sequence[str] | None = None) -> int:
    for stream in (sys.stdout, sys.stderr):
        if hasattr(stream, "reconfigure"):
            stream.reconfigure(encoding="utf-8", newline="\n")
    try:
        return run(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_INPUT
    except BrokenPipeError:
        # reader went away (e.g. piped into head); keep the interpreter quiet on exit
        os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
        return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
