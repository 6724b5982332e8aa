"""Command-line front end.

Predicates exit 0 when they hold and 1 when they do not (printing a witness
where one exists); malformed input exits 2.  ``--json`` switches every
command to a single machine-readable object on stdout.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from .decision import (
    CapExceeded,
    DecisionResult,
    bound_cardinality,
    emptiness_witness,
    filter_grammar,
    inclusion,
    intersection_empty,
    is_empty,
)
from .grammar import (
    GrammarError,
    format_grammar,
    is_alternative,
    is_normalized,
    normalize,
    parse_grammar,
    to_alternative,
    validate_regular,
)
from .oracle import gen_worstcase, language_upto
from .recognizer import build_ctx, member, reachable_profiles
from .spgraph import ParseError, format_graph, parse_graph


def _read(path: str) -> str:
    return sys.stdin.read() if path == "-" else Path(path).read_text()


def _load(path: str):
    return parse_grammar(_read(path))


def _emit(args, data: dict, lines) -> None:
    if args.json:
        print(json.dumps(data, sort_keys=True))
    else:
        for line in lines:
            print(line)


def _verdict(args, result, true_line: str, false_line: str) -> int:
    witness = None if result.witness is None else format_graph(result.witness)
    data = {"holds": result.holds, "witness": witness, "stats": result.stats}
    if result.holds:
        lines = [true_line]
    else:
        lines = [false_line.format(witness=witness)]
    _emit(args, data, lines)
    return 0 if result.holds else 1


def _cmd_check(args) -> int:
    g = _load(args.grammar)
    rep = validate_regular(g)
    data = {
        "regular": rep.ok,
        "normalized": rep.ok and is_normalized(g),
        "alternative": is_alternative(g),
        "nonterminals": len(g.pnames) + len(g.snames),
        "rules": len(g.rules),
        "offenders": [reason for _, reason in rep.offenders],
    }
    lines = [
        f"regular: {rep.ok}",
        f"normalized: {data['normalized']}",
        f"alternative: {data['alternative']}",
        f"nonterminals: {data['nonterminals']}, rules: {data['rules']}",
    ]
    lines += [f"  not regular: {reason}" for reason in data["offenders"]]
    _emit(args, data, lines)
    return 0 if rep.ok else 1


def _cmd_normalize(args) -> int:
    g = normalize(_load(args.grammar))
    if args.alternative:
        g = to_alternative(g)
    text = format_grammar(g)
    _emit(args, {"grammar": text}, [text.rstrip("\n")])
    return 0


def _cmd_member(args) -> int:
    g = _load(args.grammar)
    graph = parse_graph(_read(args.term) if args.term == "-" else args.term)
    ok = member(graph, g)
    _emit(args, {"member": ok, "graph": format_graph(graph)}, [str(ok).lower()])
    return 0 if ok else 1


def _cmd_empty(args) -> int:
    t0 = time.perf_counter()
    g = _load(args.grammar)
    empty = is_empty(g)
    wit = None if empty else emptiness_witness(g)
    stats = {
        "profiles_explored": 0,
        "iterations": 0,
        "wall_ms": (time.perf_counter() - t0) * 1000.0,
    }
    return _verdict(
        args,
        DecisionResult(empty, wit, stats),
        "true",
        "false: witness {witness}",
    )


def _cmd_intersect(args) -> int:
    grammars = [_load(p) for p in args.grammars]
    result = intersection_empty(grammars, cap=args.cap)
    return _verdict(args, result, "true", "false: witness {witness}")


def _cmd_include(args) -> int:
    left, right = _load(args.left), _load(args.right)
    result = inclusion(left, right, cap=args.cap)
    return _verdict(args, result, "holds", "fails: witness {witness}")


def _cmd_filter(args) -> int:
    left, right = _load(args.left), _load(args.right)
    mode = "reject" if args.reject else "accept"
    g = filter_grammar(left, right, mode=mode, cap=args.cap)
    text = format_grammar(g)
    _emit(args, {"grammar": text, "empty": is_empty(g)}, [text.rstrip("\n")])
    return 0


def _cmd_enumerate(args) -> int:
    g = _load(args.grammar)
    graphs = sorted(language_upto(g, args.edges), key=lambda x: (x.edges, x.key))
    _emit(
        args,
        {"count": len(graphs), "graphs": [format_graph(x) for x in graphs]},
        (format_graph(x) for x in graphs),
    )
    return 0


def _cmd_stats(args) -> int:
    g = _load(args.grammar)
    ctx = build_ctx(g)
    reach = reachable_profiles(ctx, cap=args.cap)
    bound = bound_cardinality(g, ctx)
    data = {
        "serial_profiles": reach.n_serial,
        "parallel_profiles": reach.n_parallel,
        "saturated": reach.saturated,
        "bound": bound,
        "working_nonterminals": len(ctx.grammar.pnames) + len(ctx.grammar.snames),
    }
    lines = [
        f"serial profiles: {reach.n_serial}",
        f"parallel profiles: {reach.n_parallel}",
        f"saturated: {reach.saturated}",
        f"profile bound: {bound}",
    ]
    _emit(args, data, lines)
    return 0


def _cmd_gen_worstcase(args) -> int:
    text = format_grammar(gen_worstcase(args.k))
    _emit(args, {"grammar": text}, [text.rstrip("\n")])
    return 0


def run(argv=None) -> int:
    ap = argparse.ArgumentParser(
        prog="spr",
        description="decide membership, emptiness, intersection and inclusion "
        "for series-parallel graph languages given by regular grammars",
    )
    ap.add_argument("--json", action="store_true", help="machine-readable output")
    ap.add_argument("--seed", type=int, default=None, help="seed for randomized features")
    ap.add_argument(
        "--cap",
        type=int,
        default=1_000_000,
        help="abort saturations beyond this many states (default 1000000)",
    )
    sub = ap.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("check", help="validate a grammar file")
    p.add_argument("grammar", help="grammar file, or - for stdin")
    p.set_defaults(handler=_cmd_check)

    p = sub.add_parser("normalize", help="print the normalized grammar")
    p.add_argument("grammar")
    p.add_argument("--alternative", action="store_true", help="also reroute edge rules")
    p.set_defaults(handler=_cmd_normalize)

    p = sub.add_parser("member", help="is the graph in the language?")
    p.add_argument("-g", "--grammar", required=True)
    p.add_argument("-t", "--term", required=True, help="graph term, or - for stdin")
    p.set_defaults(handler=_cmd_member)

    p = sub.add_parser("empty", help="is the language empty?")
    p.add_argument("grammar")
    p.set_defaults(handler=_cmd_empty)

    p = sub.add_parser("intersect", help="is the intersection of the languages empty?")
    p.add_argument("grammars", nargs="+")
    p.set_defaults(handler=_cmd_intersect)

    p = sub.add_parser("include", help="is the left language included in the right?")
    p.add_argument("-l", "--left", required=True)
    p.add_argument("-r", "--right", required=True)
    p.set_defaults(handler=_cmd_include)

    p = sub.add_parser("filter", help="grammar for the left graphs the right accepts")
    p.add_argument("-l", "--left", required=True)
    p.add_argument("-r", "--right", required=True)
    p.add_argument("--reject", action="store_true", help="keep rejected graphs instead")
    p.set_defaults(handler=_cmd_filter)

    p = sub.add_parser("enumerate", help="list all language graphs up to a size")
    p.add_argument("-g", "--grammar", required=True)
    p.add_argument("-n", "--edges", type=int, required=True)
    p.set_defaults(handler=_cmd_enumerate)

    p = sub.add_parser("stats", help="profile reachability statistics")
    p.add_argument("grammar")
    p.set_defaults(handler=_cmd_stats)

    p = sub.add_parser("gen-worstcase", help="emit the k-th string-matching grammar")
    p.add_argument("-k", type=int, required=True)
    p.set_defaults(handler=_cmd_gen_worstcase)

    args = ap.parse_args(argv)
    try:
        return args.handler(args)
    except CapExceeded as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except (ParseError, GrammarError, OSError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


def entry() -> None:
    raise SystemExit(run())
