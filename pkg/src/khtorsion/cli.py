"""``kh`` command line: compute, scan, families, version."""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import itertools
import json
import logging
import os
import sys
import time
from pathlib import Path

from . import __version__
from . import braid as br
from .budget import BudgetExceeded, MemoryBudget, estimate_generators, BYTES_PER_GENERATOR
from .diagram import LinkDiagram
from .families import REGISTRY, ExpressionError, describe, family, parse_family, sigma_string
from .homology import CLASSICAL, ParityError, Result, compute, torsion_summary

log = logging.getLogger("khtorsion")

EXIT_PARSE, EXIT_BUDGET, EXIT_INTERNAL = 2, 3, 4


class InternalError(RuntimeError):
    pass


def cache_key(word: br.BraidWord, mod_p=()) -> str:
    canon = json.dumps({"strands": word.strands, "letters": list(word.letters),
                        "mod_p": sorted(mod_p)}, sort_keys=True)
    return hashlib.sha256(canon.encode()).hexdigest()[:32]


def cached_compute(word: br.BraidWord, *, reduce=True, threads=1, memory_mb=4096,
                   force_large=False, cache_dir=None, mod_p=()) -> Result:
    path = None
    if cache_dir:
        path = Path(cache_dir) / f"{cache_key(word, mod_p)}.json"
        if path.exists():
            return Result.from_json_dict(json.loads(path.read_text()))
    diagram = LinkDiagram.from_braid(word)
    if not force_large:
        est = estimate_generators(diagram)
        if est * BYTES_PER_GENERATOR > memory_mb * 2**20:
            raise BudgetExceeded(
                "estimate", est, int(memory_mb * 2**20)) from None
    result = compute(word, reduce=reduce, threads=threads, budget=MemoryBudget(memory_mb),
                     mod_p=mod_p)
    if path is not None:
        path.parent.mkdir(parents=True, exist_ok=True)
        tmp = path.with_suffix(".tmp")
        tmp.write_text(result.to_json(CLASSICAL))
        tmp.replace(path)
    return result


def _word_from_args(args) -> br.BraidWord:
    if args.word is not None and args.family is not None:
        raise ExpressionError("give either --word or --family, not both")
    if args.family is not None:
        text = args.family
        if text in REGISTRY or text.startswith("conj4("):
            return family(text)
        return parse_family(text, args.strands)
    if args.strands is None:
        raise ExpressionError("--word needs --strands")
    return br.parse_braid(args.word or "", args.strands)


def _primes(text: str | None) -> tuple[int, ...]:
    if not text:
        return ()
    from .algebra import is_prime
    out = tuple(int(x) for x in text.split(","))
    bad = [p for p in out if not is_prime(p)]
    if bad:
        raise ExpressionError(f"--mod-p entries must be prime: {bad}")
    return out


def _render_table(result: Result, mode: str) -> str:
    table = result.table_in(mode)
    lines = []
    if result.word is not None:
        lines.append(f"braid: {result.word} on {result.word.strands} strands")
    lines.append(f"writhe {result.writhe}, components {result.components}, "
                 f"reduction {'on' if result.reduction_used else 'off'}")
    lines.append(table.render())
    tors = torsion_summary(result.table.to_classical())
    lines.append("torsion (i, j, order): " + (", ".join(map(str, tors)) if tors else "none"))
    if result.mod_p:
        for p, rows in result.mod_p.items():
            lines.append(f"mod {p} excess (i, j, extra): {rows or 'none'}")
    return "\n".join(lines) + "\n"


def cmd_compute(args) -> int:
    try:
        word = _word_from_args(args)
        primes = _primes(args.mod_p)
    except (ExpressionError, br.MalformedWordError, br.BraidDomainError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_PARSE
    try:
        result = cached_compute(word, reduce=args.reduce == "on", threads=args.threads,
                                memory_mb=args.memory_mb, force_large=args.force_large,
                                cache_dir=args.cache, mod_p=primes)
    except BudgetExceeded as e:
        if e.bigrading == "estimate":
            print(f"refused: {len(word)} crossings, estimated {e.size} generators "
                  f"(~{e.size * BYTES_PER_GENERATOR // 2**20} MB) exceeds the "
                  f"{args.memory_mb} MB budget; pass --force-large to try anyway",
                  file=sys.stderr)
        else:
            print(f"budget exceeded at bigrading {e.bigrading} (size {e.size})", file=sys.stderr)
        return EXIT_BUDGET
    except ParityError as e:
        print(f"internal consistency failure: {e}", file=sys.stderr)
        return EXIT_INTERNAL
    if args.check:
        from .complex import build_differentials, verify_d_squared
        report = verify_d_squared(build_differentials(LinkDiagram.from_braid(word)))
        if not report:
            print(f"internal consistency failure: d^2 != 0 at {report.bigrading}, "
                  f"entry {report.witness}", file=sys.stderr)
            return EXIT_INTERNAL
    if args.format == "json":
        sys.stdout.write(result.to_json(args.mode))
    else:
        sys.stdout.write(_render_table(result, args.mode))
    return 0


def _parse_range(spec: str) -> tuple[str, list[int]]:
    name, _, rng = spec.partition("=")
    if not rng:
        raise ExpressionError(f"bad --param {spec!r}; use name=lo:hi or name=a,b,c")
    if ":" in rng:
        lo, hi = (int(x) for x in rng.split(":"))
        return name.strip(), list(range(lo, hi + 1))
    return name.strip(), [int(x) for x in rng.split(",")]


def exhaustive_words(strands: int, max_length: int):
    """One representative per conjugacy-by-rotation-and-flip class of cyclically reduced words."""
    seen = set()
    for length in range(max_length + 1):
        for w in br.words(strands, length):
            if not br.is_cyclically_reduced(w.letters):
                continue
            flipped = tuple((strands - abs(k)) * (1 if k > 0 else -1) for k in w.letters)
            rep = min(br.rotation_class_rep(w.letters), br.rotation_class_rep(flipped))
            if rep in seen:
                continue
            seen.add(rep)
            yield {"word": " ".join(map(str, rep))}, br.BraidWord(strands, rep)


def family_instances(expr: str, ranges: list[tuple[str, list[int]]], strands=None):
    names = [n for n, _ in ranges]
    for values in itertools.product(*(v for _, v in ranges)):
        params = dict(zip(names, values))
        text = expr.format(**params)
        yield params, parse_family(text, strands)


def run_scan(instances, *, reduce=True, memory_mb=4096, cache_dir=None, torsion_filter=None,
             threads=1):
    rows = []
    for params, word in instances:
        t0 = time.perf_counter()
        try:
            result = cached_compute(word, reduce=reduce, threads=threads, memory_mb=memory_mb,
                                    cache_dir=cache_dir)
        except BudgetExceeded as e:
            log.warning("skipped %s: %s", params, e)
            continue
        except Exception as e:  # per-instance failures are logged, never fatal
            log.error("failed %s: %s", params, e)
            continue
        tors = torsion_summary(result.table.to_classical())
        if torsion_filter and not any(t % torsion_filter == 0 for _, _, t in tors):
            continue
        rows.append({
            "params": params,
            "n_crossings": len(word),
            "components": result.components,
            "writhe": result.writhe,
            "torsion": [list(t) for t in tors],
            "ms_elapsed": round((time.perf_counter() - t0) * 1000, 3),
        })
    return rows


def cmd_scan(args) -> int:
    try:
        if args.exhaustive:
            if args.strands is None:
                raise ExpressionError("--exhaustive needs --strands")
            instances = exhaustive_words(args.strands, args.max_length)
        else:
            if not args.family:
                raise ExpressionError("scan needs --family or --exhaustive")
            ranges = [_parse_range(p) for p in args.param]
            instances = list(family_instances(args.family, ranges, args.strands))
    except (ExpressionError, ValueError, KeyError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_PARSE
    rows = run_scan(instances, reduce=args.reduce == "on", memory_mb=args.memory_mb,
                    cache_dir=args.cache, torsion_filter=args.torsion_filter,
                    threads=args.threads)
    orders = sorted({t[2] for r in rows for t in r["torsion"]})
    if args.format == "json":
        json.dump({"rows": rows, "torsion_orders": orders}, sys.stdout, indent=2, sort_keys=True)
        sys.stdout.write("\n")
    else:
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(["params", "n_crossings", "components", "writhe", "torsion", "ms_elapsed"])
        for r in rows:
            params = ";".join(f"{k}={v}" for k, v in r["params"].items())
            tors = " ".join(f"({i},{j},{t})" for i, j, t in r["torsion"])
            writer.writerow([params, r["n_crossings"], r["components"], r["writhe"], tors,
                             r["ms_elapsed"]])
        sys.stdout.write(buf.getvalue())
    print(f"{len(rows)} instances; torsion orders seen: {orders or 'none'}", file=sys.stderr)
    return 0


def cmd_families(args) -> int:
    names = list(REGISTRY) + [f"conj4({m})" for m in range(0, args.conj4_max + 1)]
    infos = [describe(n) for n in names]
    if args.format == "json":
        json.dump(infos, sys.stdout, indent=2, sort_keys=True)
        sys.stdout.write("\n")
        return 0
    for info in infos:
        w = family(info["name"])
        print(f"{info['name']:<10} B_{info['strands']:<3} length {info['length']:<4} "
              f"writhe {info['writhe']:<4} components {info['components']}  {sigma_string(w)}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="kh", description="Integral Khovanov homology of braid closures")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--strands", type=int)
        p.add_argument("--mode", choices=["framed", "classical"], default="classical")
        p.add_argument("--reduce", choices=["on", "off"], default="on")
        p.add_argument("--threads", type=int, default=1)
        p.add_argument("--memory-mb", type=float, default=4096)
        p.add_argument("--format", choices=["table", "json", "csv"], default="table")
        p.add_argument("--cache", default=os.environ.get("KH_CACHE"))

    p = sub.add_parser("compute", help="homology of one braid closure")
    common(p)
    p.add_argument("--word")
    p.add_argument("--family")
    p.add_argument("--mod-p")
    p.add_argument("--force-large", action="store_true")
    p.add_argument("--check", action="store_true", help="also verify d^2 = 0 on the raw complex")
    p.set_defaults(func=cmd_compute)

    p = sub.add_parser("scan", help="homology over a parameterised family")
    common(p)
    p.add_argument("--family", help="expression with {name} placeholders, e.g. 'torus(2,{q})'")
    p.add_argument("--param", action="append", default=[], help="name=lo:hi or name=a,b,c")
    p.add_argument("--exhaustive", action="store_true", help="all words up to --max-length")
    p.add_argument("--max-length", type=int, default=6)
    p.add_argument("--torsion-filter", type=int, help="keep rows with a torsion order divisible by N")
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("families", help="list the named braids")
    p.add_argument("--format", choices=["table", "json"], default="table")
    p.add_argument("--conj4-max", type=int, default=4)
    p.set_defaults(func=cmd_families)

    p = sub.add_parser("version")
    p.set_defaults(func=lambda args: print(__version__) or 0)
    return parser


def main(argv=None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(message)s")
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
