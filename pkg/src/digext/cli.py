"""Command-line entry point: ``digext <subcommand> ...``.

Results go to stdout as JSON (``--tsv`` for tabular commands).  Exit status is
0 on success, 1 on a domain error (with an error object on stdout) and 2 on
usage errors.  ``contains`` exits 3 when the pattern is absent.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from pathlib import Path

from . import __version__
from .cache import ResultCache, default_path, file_digest, fingerprint
from .constructions import blow_up, complete_digraph, directed_cycle, dturan, transitive_tournament
from .digraph import Digraph, WeightParam, _num_json, pair_profile, read_digraph, vertex_weight, weighted_size
from .errors import DigraphError, InputError, ShardRequiredError

log = logging.getLogger("digext")

EXIT_OK, EXIT_DOMAIN, EXIT_USAGE, EXIT_ABSENT = 0, 1, 2, 3


# -- helpers -------------------------------------------------------------


def parse_pattern(text: str) -> Digraph:
    """``tt:r``, ``blowup:tt:r:t``, ``file:path``; a bare path is read as a file."""
    parts = text.split(":")
    try:
        if parts[0] == "tt" and len(parts) == 2:
            return transitive_tournament(int(parts[1]))
        if parts[0] == "blowup" and len(parts) == 4 and parts[1] == "tt":
            return blow_up(transitive_tournament(int(parts[2])), int(parts[3]))
    except ValueError:
        raise InputError(f"bad pattern {text!r}") from None
    path = text[5:] if text.startswith("file:") else text
    if not Path(path).exists():
        raise InputError(f"bad pattern {text!r}: expected tt:r, blowup:tt:r:t or file:path")
    return read_digraph(path)


def _read_json(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from None


def _host(path) -> Digraph:
    try:
        return read_digraph(path)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None


def _dump(obj) -> str:
    return json.dumps(obj, default=_num_json)


def _tsv(rows, header) -> str:
    lines = ["\t".join(header)]
    lines += ["\t".join(str(x) for x in row) for row in rows]
    return "\n".join(lines)


# -- commands ------------------------------------------------------------
# Each returns the text to print (plus an optional exit status).


def cmd_construct(args):
    fam = args.family
    if fam == "dturan":
        G = dturan(_need(args.n, "-n"), _need(args.r, "-r"))
    elif fam == "tt":
        G = transitive_tournament(_need(args.r, "-r"))
    elif fam == "blowup":
        G = blow_up(transitive_tournament(_need(args.r, "-r")), _need(args.t, "-t"))
    elif fam == "cycle":
        G = directed_cycle(_need(args.n, "-n"))
    else:
        G = complete_digraph(_need(args.n, "-n"))
    return G.to_text().rstrip("\n")


def _need(value, flag):
    if value is None:
        raise InputError(f"this family needs {flag}")
    return value


def cmd_weight(args):
    G = _host(args.graph)
    a = WeightParam.parse(args.a)
    f1, f2 = pair_profile(G)
    weights = [vertex_weight(G, v, a) for v in range(G.n)]
    if args.tsv:
        return _tsv([(v, _num_json(w)) for v, w in enumerate(weights)], ["vertex", "weight"])
    return _dump({"n": G.n, "a": a.as_json(), "f1": f1, "f2": f2, "e_a": weighted_size(G, a), "vertex_weights": weights})


def cmd_contains(args):
    from .patterns import contains

    G = _host(args.graph)
    found, witness = contains(G, parse_pattern(args.pattern), return_witness=True)
    text = _dump({"contains": found, "witness": None if witness is None else {str(k): v for k, v in sorted(witness.items())}})
    return text, EXIT_OK if found else EXIT_ABSENT


def cmd_pairs(args):
    from .patterns import pair_counts

    G = _host(args.graph)
    rows = []
    for (u, v), c in sorted(pair_counts(G).items()):
        rows.append((u, v, c, "good" if c >= args.theta * G.n else "bad"))
    if args.tsv or not args.json:
        return _tsv(rows, ["u", "v", "t3", "class"])
    return _dump([{"u": u, "v": v, "t3": c, "class": k} for u, v, c, k in rows])


def cmd_extremal(args):
    from .extremal import extremal_number

    mode = "construction-only" if args.construction_only else "exhaustive"
    rec = extremal_number(args.n, parse_pattern(args.pattern), WeightParam.parse(args.a), mode, args.shards, args.jobs)
    return _dump(rec.to_json())


def cmd_census(args):
    from .extremal import census

    row = census(args.n, args.cls, parse_pattern(args.pattern), args.alpha, args.shards, args.shard, args.jobs, args.strategy)
    if args.tsv:
        return _tsv([(row.n, row.cls, row.total, row.bipartite_editable, row.budget)], ["n", "class", "total", "editable", "budget"])
    return _dump(row.to_json())


def cmd_regularity(args):
    from .regularity import RegularityPartition, check_regular_pair, reduced_digraph

    G = _host(args.graph)
    if args.action == "check":
        if args.A is None or args.B is None:
            raise InputError("regularity check needs A.json and B.json")
        A, B = _read_json(args.A), _read_json(args.B)
        mode = "sampled" if args.samples is not None else "exact"
        trials = args.samples if args.samples is not None else 0
        v = check_regular_pair(G, A, B, args.eps, mode, args.seed or 0, trials)
        return _dump(v.to_json())
    if args.partition is None:
        raise InputError("regularity reduce needs --partition")
    P = RegularityPartition.from_json(_read_json(args.partition), args.eps, args.d)
    mode = "sampled" if args.samples is not None else "auto"
    trials = args.samples if args.samples is not None else 10_000
    R = reduced_digraph(G, P, args.eps, args.d, mode, args.seed or 0, trials, args.jobs)
    return _dump(R.to_json())


def cmd_embed(args):
    from .embedding import EmbeddingPlan, embed
    from .regularity import ReducedDigraph, RegularityPartition

    G = _host(args.host)
    R = ReducedDigraph.from_json(_read_json(args.reduced))
    P = RegularityPartition.from_json(_read_json(args.partition), R.eps, R.d)
    plan = EmbeddingPlan.from_json(_read_json(args.plan))
    res = embed(G, P, R, parse_pattern(args.pattern), plan, args.seed, args.restarts)
    return _dump(res.to_json()), EXIT_OK if res.success else EXIT_DOMAIN


def cmd_stability(args):
    from .stability import StabilityParams, bipartite_deletion_distance, dtu2_edit_distance, stability_audit

    G = _host(args.graph)
    if args.action == "audit":
        p = StabilityParams(args.gamma, args.beta, args.alpha, args.theta)
        return _dump(stability_audit(G, WeightParam.parse(args.a), p).to_json())
    fn = dtu2_edit_distance if args.mode == "dtu2" else bipartite_deletion_distance
    d, (S, T) = fn(G)
    return _dump({"mode": args.mode, "distance": d, "bipartition": [list(S), list(T)]})


def cmd_removal(args):
    from .stability import removal

    G = _host(args.graph)
    out, k = removal(G, parse_pattern(args.pattern), "exact" if args.exact else "greedy")
    if args.out:
        Path(args.out).write_text(out.to_text(), encoding="utf-8")
        return _dump({"deleted": k, "output": args.out})
    return f"# deleted={k}\n" + out.to_text().rstrip("\n")


def cmd_selftest(args):
    from . import selftest

    ok = selftest.run(args.only)
    return None, EXIT_OK if ok else EXIT_DOMAIN


COMMANDS = {
    "construct": cmd_construct,
    "weight": cmd_weight,
    "contains": cmd_contains,
    "pairs": cmd_pairs,
    "extremal": cmd_extremal,
    "census": cmd_census,
    "regularity": cmd_regularity,
    "embed": cmd_embed,
    "stability": cmd_stability,
    "removal": cmd_removal,
    "selftest": cmd_selftest,
}
CACHED = {"extremal", "census", "regularity", "stability", "embed"}
# flags that never change a result and so stay out of the cache key
_VOLATILE = {"cache", "jobs", "verbose", "func"}


# -- parser --------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, help="RNG seed (embed: seeds tie-breaking; default smallest index)")
    common.add_argument("--shards", type=int)
    common.add_argument("--shard", type=int)
    common.add_argument("--cache", help="JSON-lines cache file (default: $DIGEXT_CACHE)")
    common.add_argument("--jobs", type=int, default=1)
    common.add_argument("--tsv", action="store_true")
    common.add_argument("-v", "--verbose", action="store_true")

    ap = argparse.ArgumentParser(prog="digext", description="Weighted Turan-type problems for digraphs.")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("construct", parents=[common], help="emit a standard digraph")
    p.add_argument("--family", required=True, choices=["dturan", "tt", "blowup", "cycle", "complete"])
    p.add_argument("-n", type=int)
    p.add_argument("-r", type=int)
    p.add_argument("-t", type=int)

    p = sub.add_parser("weight", parents=[common], help="weighted size and vertex weights")
    p.add_argument("--a", default="2")
    p.add_argument("graph")

    p = sub.add_parser("contains", parents=[common], help="pattern containment (exit 3 if absent)")
    p.add_argument("--pattern", required=True)
    p.add_argument("graph")

    p = sub.add_parser("pairs", parents=[common], help="good/bad pair classification")
    p.add_argument("--theta", type=float, default=0.1)
    p.add_argument("--json", action="store_true")
    p.add_argument("graph")

    p = sub.add_parser("extremal", parents=[common], help="weighted extremal number")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--pattern", required=True)
    p.add_argument("--a", default="2")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--exhaustive", action="store_true", default=True)
    g.add_argument("--construction-only", action="store_true")

    p = sub.add_parser("census", parents=[common], help="labelled H-free census")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--class", dest="cls", required=True, choices=["o", "d", "oriented", "digraph"])
    p.add_argument("--pattern", required=True)
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--strategy", choices=["pruned", "flat"], default="pruned")

    p = sub.add_parser("regularity", parents=[common], help="regular pairs and reduced digraphs")
    p.add_argument("action", choices=["check", "reduce"])
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--d", type=float, default=0.0)
    g = p.add_mutually_exclusive_group()
    g.add_argument("--exact", action="store_true")
    g.add_argument("--samples", type=int)
    p.add_argument("--partition")
    p.add_argument("files", nargs="+", metavar="FILE", help="check: A.json B.json host.dg; reduce: host.dg")

    p = sub.add_parser("embed", parents=[common], help="greedy blow-up embedding")
    p.add_argument("--host", required=True)
    p.add_argument("--partition", required=True)
    p.add_argument("--reduced", required=True)
    p.add_argument("--pattern", required=True)
    p.add_argument("--plan", required=True)
    p.add_argument("--restarts", type=int, default=0)

    p = sub.add_parser("stability", parents=[common], help="stability audit and distances")
    p.add_argument("action", choices=["audit", "distance"])
    p.add_argument("--a", default="2")
    p.add_argument("--gamma", type=float, default=0.1)
    p.add_argument("--beta", type=float, default=0.1)
    p.add_argument("--alpha", type=float, default=0.1)
    p.add_argument("--theta", type=float, default=0.1)
    p.add_argument("--mode", choices=["dtu2", "bipartite"], default="dtu2")
    p.add_argument("graph")

    p = sub.add_parser("removal", parents=[common], help="delete edges until pattern-free")
    p.add_argument("--pattern", required=True)
    p.add_argument("--exact", action="store_true")
    p.add_argument("--out")
    p.add_argument("graph")

    p = sub.add_parser("selftest", parents=[common], help="quick acceptance checks")
    p.add_argument("--only", nargs="+", choices=["lemma1", "counting", "census", "corollary", "regularity", "embedding", "stability", "mexp"])
    return ap


def _split_files(args, ap):
    if args.command != "regularity":
        return
    f = args.files
    if args.action == "check":
        if len(f) != 3:
            ap.error("regularity check takes A.json B.json host.dg")
        args.A, args.B, args.graph = f
    else:
        if len(f) != 1:
            ap.error("regularity reduce takes a single host.dg")
        args.A = args.B = None
        args.graph = f[0]


def _cache_key(args) -> str:
    params = {k: v for k, v in vars(args).items() if k not in _VOLATILE}
    inputs = {}
    for k, v in params.items():
        if isinstance(v, str) and k in ("graph", "host", "A", "B", "partition", "reduced", "plan", "pattern"):
            path = v[5:] if v.startswith("file:") else v
            if Path(path).is_file():
                inputs[k] = file_digest(path)
    return fingerprint(args.command, params, inputs)


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    _split_files(args, ap)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    cache_path = args.cache or default_path()
    cache = ResultCache(cache_path) if cache_path and args.command in CACHED else None
    key = _cache_key(args) if cache else None
    if cache:
        hit = cache.get(key)
        if hit is not None:
            log.debug("cache hit %s", key[:12])
            text, status = hit["text"], hit["status"]
            if text is not None:
                print(text)
            return status
    t0 = time.perf_counter()
    try:
        res = COMMANDS[args.command](args)
    except DigraphError as exc:
        err = {"error": exc.kind, "message": str(exc)}
        if isinstance(exc, ShardRequiredError):
            err["required_shards"] = exc.required_shards
        print(_dump(err))
        return EXIT_DOMAIN
    text, status = res if isinstance(res, tuple) else (res, EXIT_OK)
    if cache and status in (EXIT_OK, EXIT_ABSENT):
        cache.put(key, {"text": text, "status": status}, time.perf_counter() - t0)
    if text is not None:
        print(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
