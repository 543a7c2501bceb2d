"""Command line entry point.

Exit codes: 0 success, 2 input error, 3 size cap exceeded.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from dataclasses import asdict, dataclass
from pathlib import Path

from .bench import format_table, run_bench
from .errors import CapExceeded, InputError
from .hafnian import (
    hafnian_bruteforce,
    hafnian_labelring,
    hafnian_polyspace,
    permanent_bruteforce,
    permanent_ryser,
    permanent_via_hafnian,
)
from .matching import MAX_VERTICES, count_perfect_matchings, parse_graph
from .meter import SpaceMeter
from .rings import ZZ, ModRing
from .setcover import (
    count_exact_covers_bruteforce,
    count_exact_covers_dp,
    default_moduli,
    format_instance,
    parse_instance,
    recover_permanent_crt,
    reduce_permanent_to_setcover,
)
from .textio import parse_matrix

EXIT_INPUT = 2
EXIT_CAP = 3


@dataclass
class RunReport:
    command: str
    input_digest: str
    algo: str
    result: str
    seconds: float
    peak_live: int | None = None

    def to_json(self, timing: bool = True) -> str:
        d = asdict(self)
        if not timing:
            d.pop("seconds")
        return json.dumps(d, sort_keys=True)


def _read(path: str) -> tuple[str, str]:
    try:
        data = sys.stdin.read() if path == "-" else Path(path).read_text()
    except OSError as e:
        raise InputError(f"cannot read {path}: {e}") from None
    return data, hashlib.sha256(data.encode()).hexdigest()


def _finish(args, report: RunReport) -> None:
    print(report.result)
    if getattr(args, "report", None):
        Path(args.report).write_text(report.to_json() + "\n")


def _timed(fn):
    t0 = time.perf_counter()
    value = fn()
    return value, time.perf_counter() - t0


def cmd_count_pm(args) -> None:
    text, digest = _read(args.graph)
    g = parse_graph(text)
    meter = SpaceMeter() if args.threads <= 1 and args.algo != "bruteforce" else None
    count, secs = _timed(
        lambda: count_perfect_matchings(
            g, args.algo, crt=args.crt, workers=args.threads,
            max_vertices=args.max_vertices, meter=meter,
        )
    )
    _finish(args, RunReport(" ".join(args.argv), digest, args.algo, str(count), secs,
                            meter.peak if meter else None))


def _cap(args, algo: str, size: int) -> None:
    limit = args.max_vertices if args.max_vertices is not None else MAX_VERTICES[algo]
    if size > limit:
        raise CapExceeded(f"{algo} limited to dimension {limit}, got {size}")


def cmd_hafnian(args) -> None:
    text, digest = _read(args.matrix)
    B = parse_matrix(text)
    ring = ModRing(args.mod) if args.mod else ZZ
    _cap(args, args.algo, len(B))
    strict = not args.upper
    meter = SpaceMeter()
    if args.algo == "bruteforce":
        fn = lambda: hafnian_bruteforce(B, ring, strict)  # noqa: E731
        meter = None
    elif args.algo == "labelring":
        fn = lambda: hafnian_labelring(B, ring, strict, meter=meter)  # noqa: E731
    else:
        if args.threads > 1:
            meter = None
        fn = lambda: hafnian_polyspace(  # noqa: E731
            B, ring, strict, workers=args.threads, **({"meter": meter} if meter else {})
        )
    value, secs = _timed(fn)
    _finish(args, RunReport(" ".join(args.argv), digest, args.algo, str(value), secs,
                            meter.peak if meter else None))


def cmd_permanent(args) -> None:
    text, digest = _read(args.matrix)
    A = parse_matrix(text)
    if args.algo == "ryser":
        fn = lambda: permanent_ryser(A)  # noqa: E731
    elif args.algo == "bruteforce":
        fn = lambda: permanent_bruteforce(A)  # noqa: E731
    else:
        _cap(args, "polyspace", 2 * len(A))
        fn = lambda: permanent_via_hafnian(A, workers=args.threads)  # noqa: E731
    value, secs = _timed(fn)
    _finish(args, RunReport(" ".join(args.argv), digest, args.algo, str(value), secs))


def cmd_setcover(args) -> None:
    text, digest = _read(args.instance)
    inst = parse_instance(text)
    fn = count_exact_covers_dp if args.algo == "dp" else count_exact_covers_bruteforce
    value, secs = _timed(lambda: fn(inst))
    _finish(args, RunReport(" ".join(args.argv), digest, args.algo, str(value), secs))


def cmd_reduce(args) -> None:
    text, digest = _read(args.matrix)
    M = parse_matrix(text)
    if args.moduli:
        moduli = [int(x) for x in args.moduli.split(",")]
    elif args.modulus:
        moduli = [args.modulus]
    else:
        moduli = default_moduli(len(M))
    out = Path(args.out) if args.out else None
    for m in moduli:
        art = reduce_permanent_to_setcover(M, args.k, m, wide_blocks=args.wide_blocks)
        body = format_instance(art.instance)
        if out is None:
            if not args.auto_crt:
                sys.stdout.write(body)
        else:
            target = out if len(moduli) == 1 and not args.auto_crt else out.with_name(f"{out.name}.{m}")
            target.write_text(body)
    if args.auto_crt:
        value, secs = _timed(lambda: recover_permanent_crt(M, args.k, moduli, wide_blocks=args.wide_blocks))
        _finish(args, RunReport(" ".join(args.argv), digest, "reduce+dp+crt", str(value), secs))


def cmd_bench(args) -> None:
    rows = run_bench(
        args.family, args.min_n, args.max_n, args.algo, workers=args.threads,
        seed=args.seed, repeat=args.repeat, max_vertices=args.max_vertices,
    )
    print(format_table(rows), file=sys.stderr)
    for row in rows:
        print(row.csv())


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="pmcount", description="Exact hafnians, permanents and matching counts.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, threads=True):
        sp.add_argument("--report", help="write a JSON run report to this path")
        sp.add_argument("--max-vertices", type=int, default=None,
                        help="safety cap on the graph/matrix dimension")
        if threads:
            sp.add_argument("--threads", type=int, default=1,
                            help="worker processes for the polynomial-space subset loop")

    sp = sub.add_parser("count-pm", help="count perfect matchings of a graph file")
    sp.add_argument("graph")
    sp.add_argument("--algo", choices=["bruteforce", "labelring", "polyspace"], default="polyspace")
    sp.add_argument("--crt", action="store_true", help="evaluate modulo word-sized primes and recombine")
    common(sp)
    sp.set_defaults(func=cmd_count_pm)

    sp = sub.add_parser("hafnian", help="hafnian of a matrix file")
    sp.add_argument("matrix")
    ring = sp.add_mutually_exclusive_group()
    ring.add_argument("--mod", type=int, metavar="P", help="compute modulo P")
    ring.add_argument("--bigint", action="store_true", help="exact integers (default)")
    sp.add_argument("--algo", choices=["bruteforce", "labelring", "polyspace"], default="polyspace")
    sp.add_argument("--upper", action="store_true", help="read only the strict upper triangle")
    common(sp)
    sp.set_defaults(func=cmd_hafnian)

    sp = sub.add_parser("permanent", help="permanent of a matrix file")
    sp.add_argument("matrix")
    sp.add_argument("--algo", choices=["ryser", "hafnian", "bruteforce"], default="ryser")
    common(sp)
    sp.set_defaults(func=cmd_permanent)

    sp = sub.add_parser("setcover", help="count exact covers of an instance file")
    sp.add_argument("instance")
    sp.add_argument("--algo", choices=["dp", "bruteforce"], default="dp")
    common(sp, threads=False)
    sp.set_defaults(func=cmd_setcover)

    sp = sub.add_parser("reduce", help="reduce a 0/1 permanent to exact set cover counting")
    sp.add_argument("matrix")
    sp.add_argument("--k", type=int, required=True, help="rows per group; must divide n")
    mode = sp.add_mutually_exclusive_group()
    mode.add_argument("--modulus", type=int, help="emit the single instance for this modulus")
    mode.add_argument("--auto-crt", action="store_true",
                      help="emit one instance per modulus, count them and print the recovered permanent")
    sp.add_argument("--moduli", help="comma-separated pairwise coprime moduli (default: prime powers > n)")
    sp.add_argument("--out", help="instance file path (suffixed with .<modulus> for several moduli)")
    sp.add_argument("--wide-blocks", action="store_true", help="use |L_j| = 2 ceil(log2 n) + 2")
    common(sp, threads=False)
    sp.set_defaults(func=cmd_reduce)

    sp = sub.add_parser("bench", help="time matching counts over growing graphs")
    sp.add_argument("--family", choices=["complete", "random"], default="complete")
    sp.add_argument("--min-n", type=int, default=4)
    sp.add_argument("--max-n", type=int, default=12)
    sp.add_argument("--algo", choices=["bruteforce", "labelring", "polyspace"], default="polyspace")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--repeat", type=int, default=1, help="report the best of this many runs")
    common(sp)
    sp.set_defaults(func=cmd_bench)
    return p


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    args = build_parser().parse_args(argv)
    args.argv = argv
    try:
        args.func(args)
    except CapExceeded as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CAP
    except (InputError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    return 0


if __name__ == "__main__":
    sys.exit(main())
