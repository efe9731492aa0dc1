"""Command-line interface.

Results go to stdout as JSON (``--pretty`` for a human layout).  Exit codes:
0 computed, 2 precondition violated, 3 budget exceeded, 64 bad usage,
65 malformed literal, 70 cache conflict.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time

from . import __version__
from .bounds import BoundsRecord, bounds, brute_force_tag, table, table_csv
from .cache import DEFAULT_CACHE, RunManifest, cache_merge, digest, load_cache
from .cayley import (
    BadSubgraphCert,
    CirculantDigraph,
    find_bad_subgraph,
    find_bad_subgraph_colored,
    girth,
    parse_generators,
    verify_bad_subgraph,
)
from .conjecture import verify_conjecture
from .covering import enumerate_W, works_together
from .errors import BudgetExceeded, CacheConflict, LiteralError, PreconditionError
from .gf import CycVec
from .polyring import failure_certificate, normalize_to_e
from .search import SearchBudget, h_exact

EXIT_OK = 0
EXIT_PRECONDITION = 2
EXIT_BUDGET = 3
EXIT_USAGE = 64
EXIT_LITERAL = 65
EXIT_CACHE = 70


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    S = argparse.SUPPRESS
    p.add_argument("--threads", type=int, default=S, help="worker threads (env CYCCOVER_THREADS)")
    p.add_argument("--budget-bits", type=int, default=S, help="log2 of the largest map (env CYCCOVER_BUDGET_BITS)")
    p.add_argument("--deterministic", action="store_true", default=S, help="single-threaded, reproducible output")
    p.add_argument("--pretty", action="store_true", default=S, help="human-readable output")
    p.add_argument("--cache", default=S, help=f"bounds cache file (default ./{DEFAULT_CACHE})")
    p.add_argument("--no-cache", action="store_true", default=S, help="neither read nor write the cache")
    p.add_argument("--manifest", default=S, help="write a run manifest JSON to this path")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = _Parser(prog="cyccover", description=__doc__.splitlines()[0], parents=[common])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    def add(name, help_):
        return sub.add_parser(name, help=help_, parents=[common])

    p = add("works", "does a single vector work")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--q", type=int, default=2)
    p.add_argument("vector")

    p = add("together", "do vectors work together")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--q", type=int, default=2)
    p.add_argument("vectors", nargs="+")

    p = add("w-enum", "list the binary vectors that work")
    p.add_argument("--n", type=int, required=True)

    p = add("girth", "girth of a circulant digraph")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--gens", required=True, help="comma-separated generators, e.g. 1,6")

    p = add("badsub", "bad-subgraph certificate for (ê, v) or (ê, v, w)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("vector")
    p.add_argument("--pair", help="second vector w for the coloured version")
    p.add_argument("--verify", help="check this vertex list instead of searching")
    p.add_argument("--mode", choices=("out", "in"), default="out")

    p = add("h", "exact h_q(n) by search")
    p.add_argument("--q", type=int, default=2)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--time-limit", type=float)

    p = add("bounds", "rule-engine interval for h_q(n)")
    p.add_argument("--q", type=int, default=2)
    p.add_argument("--n", type=int, required=True)

    p = add("table", "bounds for n = 1..max")
    p.add_argument("--q", type=int, default=2)
    p.add_argument("--max", type=int, required=True, dest="max_n")
    p.add_argument("--escalate", action="store_true", help="settle open rows by exact search")
    p.add_argument("--csv", action="store_true", help="emit CSV instead of JSON")

    p = add("conjecture", "non-symmetric vectors working with ê")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--n", type=int)
    g.add_argument("--range", help="odd n in A..B")

    p = add("normalize", "multiply a working family so its first row is ê")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("vectors", nargs="+")

    p = add("certify-fail", "certificate that v does not work (odd q)")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("vector")
    return parser


def _opt(args, name, default=None):
    return getattr(args, name, default)


def _budget_bits(args) -> int | None:
    return _opt(args, "budget_bits")


def _threads(args) -> int:
    if _opt(args, "deterministic"):
        return 1
    t = _opt(args, "threads")
    if t is None:
        env = os.environ.get("CYCCOVER_THREADS")
        t = int(env) if env else 1
    return t


def _search_budget(args) -> SearchBudget:
    return SearchBudget.from_env(
        max_map_bits=_budget_bits(args),
        thread_count=_threads(args),
        time_limit=_opt(args, "time_limit"),
    )


def _vec(text: str, q: int, n: int) -> CycVec:
    return CycVec.parse(text, q=q, n=n)


def _cache_path(args) -> str | None:
    if _opt(args, "no_cache"):
        return None
    return _opt(args, "cache") or DEFAULT_CACHE


# -- commands ------------------------------------------------------------------------


def cmd_works(args):
    v = _vec(args.vector, args.q, args.n)
    rep = works_together([v], _budget_bits(args))
    out = rep.to_json()
    out["works"] = rep.covers
    return out


def cmd_together(args):
    vs = [_vec(t, args.q, args.n) for t in args.vectors]
    return works_together(vs, _budget_bits(args)).to_json()


def cmd_w_enum(args):
    vecs = [v.literal() for v in enumerate_W(args.n, _budget_bits(args))]
    return {"n": args.n, "count": len(vecs), "vectors": vecs}


def cmd_girth(args):
    A = parse_generators(args.gens, args.n)
    return {"n": args.n, "gens": sorted(A), "girth": girth(CirculantDigraph(args.n, A))}


def _parse_vertices(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(t) for t in text.split(",") if t.strip())
    except ValueError as exc:
        raise LiteralError(f"malformed vertex list {text!r}") from exc


def cmd_badsub(args):
    v = _vec(args.vector, 2, args.n)
    w = _vec(args.pair, 2, args.n) if args.pair else None
    if args.verify is not None:
        verts = _parse_vertices(args.verify)
        colors = None
        if w is not None:
            Av, Aw = set(v.support), set(w.support)
            colors = (tuple(sorted(Av - Aw)), tuple(sorted(Aw - Av)), tuple(sorted(Av & Aw)))
        cert = BadSubgraphCert(args.n, verts, args.mode, colors)
        return {"valid": verify_bad_subgraph(v, cert), "cert": cert.to_json()}
    if w is None:
        cert = find_bad_subgraph(v, _budget_bits(args))
    else:
        cert = find_bad_subgraph_colored(v, w, _budget_bits(args))
    return {"works_together": cert is None, "cert": None if cert is None else cert.to_json()}


def cmd_h(args):
    res = h_exact(args.q, args.n, _search_budget(args))
    path = _cache_path(args)
    if path:
        tag = brute_force_tag(res)
        upper = res.value if res.complete else bounds(args.q, args.n).upper
        cache_merge(path, [BoundsRecord(args.q, args.n, res.value, upper, [tag], [tag])])
    return res.to_json()


def cmd_bounds(args):
    path = _cache_path(args)
    known = load_cache(path) if path else {}
    return bounds(args.q, args.n, known).to_json()


def cmd_table(args):
    path = _cache_path(args)
    known = load_cache(path) if path else {}
    rows = table(args.q, args.max_n, args.escalate, _search_budget(args), known)
    if path and args.escalate:
        cache_merge(path, [r for r in rows if r.exact])
    return rows


def _parse_range(text: str) -> range:
    try:
        a, b = (int(t) for t in text.split(".."))
    except ValueError as exc:
        raise UsageError(f"malformed range {text!r}, expected A..B") from exc
    return range(a, b + 1)


def cmd_conjecture(args):
    ns = [args.n] if args.n is not None else [n for n in _parse_range(args.range) if n % 2]
    reports = [verify_conjecture(n, _budget_bits(args)).to_json() for n in ns]
    return reports[0] if args.n is not None else reports


def cmd_normalize(args):
    vs = [_vec(t, 2, args.p) for t in args.vectors]
    return {"p": args.p, "rows": [v.literal() for v in normalize_to_e(vs, args.p)]}


def cmd_certify_fail(args):
    v = _vec(args.vector, args.q, args.p)
    x = failure_certificate(v, args.p)
    from .polyring import CycPoly, mul_mod

    prod = mul_mod(CycPoly.from_vec(v), CycPoly.from_vec(x))
    return {"q": args.q, "p": args.p, "v": v.literal(), "x": x.literal(), "product": prod.literal()}


COMMANDS = {
    "works": cmd_works,
    "together": cmd_together,
    "w-enum": cmd_w_enum,
    "girth": cmd_girth,
    "badsub": cmd_badsub,
    "h": cmd_h,
    "bounds": cmd_bounds,
    "table": cmd_table,
    "conjecture": cmd_conjecture,
    "normalize": cmd_normalize,
    "certify-fail": cmd_certify_fail,
}


def _jsonable(command: str, result):
    if command == "table":
        return [r.to_json() for r in result]
    return result


def _render(command: str, result, args) -> str:
    if command == "table":
        if _opt(args, "csv"):
            return table_csv(result).rstrip("\n")
        if _opt(args, "pretty"):
            lines = [f"{'n':>4}  {'(l, u)':<8}  lower from / upper from"]
            for r in result:
                mark = "" if r.exact else "  open"
                lines.append(
                    f"{r.n:>4}  ({r.lower},{r.upper})    "
                    f"{', '.join(r.lower_rules)} / {', '.join(r.upper_rules)}{mark}"
                )
            return "\n".join(lines)
    result = _jsonable(command, result)
    if _opt(args, "pretty"):
        return json.dumps(result, indent=2, sort_keys=True)
    return json.dumps(result, sort_keys=True)


def dispatch(argv: list[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    argv = list(sys.argv[1:] if argv is None else argv)
    t0 = time.monotonic()
    try:
        args = build_parser().parse_args(argv)
        result = COMMANDS[args.command](args)
    except UsageError as exc:
        print(str(exc), file=stderr)
        return EXIT_USAGE
    except LiteralError as exc:
        print(f"malformed literal: {exc}", file=stderr)
        return EXIT_LITERAL
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=stderr)
        return EXIT_BUDGET
    except CacheConflict as exc:
        print(f"cache conflict: {exc}", file=stderr)
        return EXIT_CACHE
    except PreconditionError as exc:
        print(f"precondition violated: {exc}", file=stderr)
        return EXIT_PRECONDITION
    text = _render(args.command, result, args)
    print(text, file=stdout)
    manifest = _opt(args, "manifest")
    if manifest:
        m = RunManifest(
            command_line=["cyccover", *argv],
            library_version=__version__,
            budgets={"budget_bits": _budget_bits(args)},
            thread_count=_threads(args),
            wall_time=round(time.monotonic() - t0, 3),
            result_digest=digest(_jsonable(args.command, result)),
        )
        with open(manifest, "w") as fh:
            json.dump(m.to_json(), fh, indent=1, sort_keys=True)
    return EXIT_OK


def main() -> None:
    sys.exit(dispatch())


if __name__ == "__main__":
    main()
