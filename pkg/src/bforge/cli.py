"""Command-line surface: construct, nq, verify, search, series, reproduce.

Reports are JSON on stdout with orders as decimal strings and a determinism
hash over everything except the timing fields.  Exit codes: 0 verified /
completed as expected, 1 verification or expectation failed, 2 invalid
parameters or parse error, 3 cap exceeded.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import re
import sys
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from . import __version__
from .beauville import (
    GenPair,
    check_beauville,
    check_strongly_real,
    check_strongly_real_via_base,
    exhaustive_search,
    paper_structure,
    recipe_congruence,
)
from .errors import CapExceeded, HomomorphismError, PcpSyntaxError, ShapeError
from .families import FAMILIES, PaperGroup, build_family, refinement_series, theta_automorphism
from .groups import (
    PcGroup,
    hom_from_images,
    induced_automorphism,
    lower_central_series,
    quotient_group,
)
from .nq import MAX_CLASS_BOUND, TriangleParams, triangle_quotient
from .pc import PcpFile, Word, parse_pcp, print_pcp


# -- element word grammar (CLI side): names, '*', '^INT', parentheses --------

_TOKEN_RE = re.compile(r"\s*([A-Za-z_][A-Za-z0-9_]*|\d+|\*|\^|\(|\)|-)")


def evaluate_word(group, named: dict[str, int], text: str) -> int:
    text = text.strip()
    if not text:
        raise ValueError("empty word")
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise ValueError(f"bad word syntax at {text[pos:]!r}")
        tokens.append(m.group(1))
        pos = m.end()
    tokens.append(None)
    cursor = 0

    def peek():
        return tokens[cursor]

    def take():
        nonlocal cursor
        tok = tokens[cursor]
        cursor += 1
        return tok

    def parse_int() -> int:
        sign = 1
        if peek() == "-":
            take()
            sign = -1
        tok = take()
        if tok is None or not tok.isdigit():
            raise ValueError("expected integer exponent")
        return sign * int(tok)

    def parse_atom() -> int:
        tok = take()
        if tok == "(":
            val = parse_product()
            if take() != ")":
                raise ValueError("unbalanced parenthesis")
        elif tok == "1":
            val = 0
        elif tok is not None and tok in named:
            val = named[tok]
        else:
            raise ValueError(f"unknown generator {tok!r}")
        if peek() == "^":
            take()
            val = group.pow(val, parse_int())
        return val

    def parse_product() -> int:
        val = parse_atom()
        while peek() in ("*",) or (peek() is not None and peek() != ")" and peek() != "^"):
            if peek() == "*":
                take()
            val = group.mul(val, parse_atom())
        return val

    out = parse_product()
    if peek() is not None:
        raise ValueError(f"trailing input in word: {tokens[cursor:]}")
    return out


# -- loading ------------------------------------------------------------------


@dataclass
class LoadedGroup:
    pg: PaperGroup
    pcp: PcpFile
    path: Path
    sha256: str


def load_group(path: str, cap: int) -> LoadedGroup:
    data = Path(path).read_bytes()
    pf = parse_pcp(data.decode("utf-8"))
    group = PcGroup(pf.presentation, cap=cap)
    named = {nm: group.gen_index(i) for i, nm in enumerate(pf.presentation.names)}
    coll = group.collector

    def of_word(w: Word) -> int:
        return group.index_of(coll.collect(w))

    if "x" in pf.distinguished and "y" in pf.distinguished:
        x, y = of_word(pf.distinguished["x"]), of_word(pf.distinguished["y"])
    elif "a" in pf.images and "b" in pf.images:
        x, y = of_word(pf.images["a"]), of_word(pf.images["b"])
    else:
        x, y = group.gen_index(0), group.gen_index(1)
    group.mark_generators([x, y])
    if pf.theta:
        n = pf.presentation.ngens
        theta = hom_from_images(
            group,
            group,
            [group.gen_index(i) for i in range(n)],
            [of_word(pf.theta[nm]) for nm in pf.presentation.names],
        )
        if not theta.is_automorphism:
            raise ValueError(f"{path}: theta stanza is not an automorphism")
    else:
        theta = theta_automorphism(group, x, y)
    family = pf.family or "file"
    p = pf.params.get("p", group.prime or 0)
    pg = PaperGroup(family, p, pf.params.get("k"), pf.params.get("n"), group, x, y, named, theta)
    return LoadedGroup(pg, pf, Path(path), hashlib.sha256(data).hexdigest())


def serialize_paper_group(pg: PaperGroup) -> str:
    pf = PcpFile(pg.presentation)
    pf.family = pg.family
    if pg.p:
        pf.params["p"] = pg.p
    if pg.k is not None:
        pf.params["k"] = pg.k
    if pg.n is not None:
        pf.params["n"] = pg.n
    g = pg.group
    pf.distinguished["x"] = g.word_of(pg.x)
    pf.distinguished["y"] = g.word_of(pg.y)
    for i, nm in enumerate(pg.presentation.names):
        pf.theta[nm] = g.word_of(pg.theta(g.gen_index(i)))
    return print_pcp(pf)


# -- result cache -------------------------------------------------------------


def cache_dir() -> Optional[Path]:
    root = os.environ.get("BFORGE_CACHE", ".bforge")
    if root == "":
        return None
    return Path(root)


def _pres_hash(pg: PaperGroup) -> str:
    from .pc import print_presentation

    return hashlib.sha256(print_presentation(pg.presentation).encode()).hexdigest()


def group_stats(pg: PaperGroup) -> dict:
    """Order/exponent/class of a group, via the result cache when present."""
    root = cache_dir()
    key = _pres_hash(pg)
    if root is not None:
        stats_path = root / "stats" / f"{key}.json"
        if stats_path.exists():
            try:
                cached = json.loads(stats_path.read_text())
                if cached.get("order") == str(pg.group.order):
                    return cached
            except (OSError, json.JSONDecodeError):
                pass
    stats = {
        "name": pg.group.name,
        "order": str(pg.group.order),
        "exponent": str(pg.group.exponent()),
        "class": pg.group.nilpotency_class(),
    }
    if root is not None:
        try:
            (root / "stats").mkdir(parents=True, exist_ok=True)
            (root / "groups").mkdir(parents=True, exist_ok=True)
            (root / "stats" / f"{key}.json").write_text(json.dumps(stats, sort_keys=True))
            gpath = root / "groups" / f"{key}.pcp"
            if not gpath.exists():
                gpath.write_text(serialize_paper_group(pg))
        except OSError:
            pass
    return stats


def record_sigma_digest(pg: PaperGroup, pair_desc: str, mask: int) -> None:
    root = cache_dir()
    if root is None:
        return
    key = _pres_hash(pg)
    digest = hashlib.sha256(mask.to_bytes((mask.bit_length() + 7) // 8 or 1, "little")).hexdigest()
    path = root / "sigma" / f"{key}.json"
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        data = json.loads(path.read_text()) if path.exists() else {}
        prior = data.get(pair_desc)
        if prior is not None and prior != digest:
            print(f"warning: sigma digest changed for {pair_desc}", file=sys.stderr)
        data[pair_desc] = digest
        path.write_text(json.dumps(data, sort_keys=True))
    except (OSError, json.JSONDecodeError):
        pass


# -- reports ------------------------------------------------------------------


def finish_report(payload: dict, t0: float) -> dict:
    canon = json.dumps(payload, sort_keys=True, separators=(",", ":"))
    payload["determinism_hash"] = hashlib.sha256(canon.encode()).hexdigest()
    payload["elapsed_ms"] = int((time.perf_counter() - t0) * 1000)
    return payload


def emit(payload: dict) -> None:
    print(json.dumps(payload, indent=2, sort_keys=True))


def pair_json(G, pair: GenPair) -> dict:
    return {
        "x": G.element_name(pair.x),
        "y": G.element_name(pair.y),
        "xy": G.element_name(pair.xy),
        "signature": [str(o) for o in pair.signature],
        "generating": pair.generating,
        "on_recipe": pair.on_recipe,
    }


def cert_json(G, cert) -> dict:
    out = {
        "pair1": pair_json(G, cert.pair1),
        "pair2": pair_json(G, cert.pair2),
        "beauville": cert.beauville,
        "intersection_witness": (
            G.element_name(cert.intersection_witness) if cert.intersection_witness else None
        ),
        "strongly_real": cert.strongly_real,
        "conjugators": (
            [G.element_name(g) for g in cert.conjugators] if cert.conjugators else None
        ),
        "diagnostics": list(cert.diagnostics),
    }
    return out


# -- commands -----------------------------------------------------------------


def cmd_construct(args) -> int:
    t0 = time.perf_counter()
    pg = build_family(args.family, p=args.p or 0, k=args.k or 0, n=args.n or 0, cap=args.max_order)
    text = serialize_paper_group(pg)
    if args.out:
        out = Path(args.out)
    else:
        tag = f"{pg.n}" if pg.family == "abelian" else f"{pg.p}_{pg.k}"
        out = Path(f"{pg.family.replace('-', '_')}_{tag}.pcp")
    out.write_text(text)
    payload = {
        "version": __version__,
        "command": ["construct", args.family, f"p={args.p}", f"k={args.k}", f"n={args.n}"],
        "group": group_stats(pg),
        "certificates": [],
        "artifact": str(out),
        "artifact_sha256": hashlib.sha256(text.encode()).hexdigest(),
    }
    emit(finish_report(payload, t0))
    return 0


def cmd_nq(args) -> int:
    t0 = time.perf_counter()
    tp = TriangleParams(args.p, args.k, args.r)
    lp = triangle_quotient(tp, args.class_bound, order_cap=args.max_order)
    pf = PcpFile(lp.pres)
    pf.family = "triangle-quotient"
    pf.params = {"p": tp.p, "k": tp.k, "r": tp.rr, "class": lp.nilpotency_class}
    pf.images["a"] = lp.a_word
    pf.images["b"] = lp.b_word
    text = print_pcp(pf)
    out = Path(args.out) if args.out else Path(f"tq_{tp.p}_{tp.k}_{tp.rr}_c{lp.nilpotency_class}.pcp")
    out.write_text(text)
    group = PcGroup(lp.pres, cap=args.max_order)
    payload = {
        "version": __version__,
        "command": ["nq", f"p={tp.p}", f"k={tp.k}", f"r={tp.rr}", f"class={args.class_bound}"],
        "group": {
            "name": lp.pres.name,
            "order": str(group.order),
            "exponent": str(group.exponent()),
            "class": lp.nilpotency_class,
        },
        "stabilized": lp.stabilized,
        "layer_sizes": {str(w): str(s) for w, s in lp.layer_sizes().items()},
        "certificates": [],
        "artifact": str(out),
        "artifact_sha256": hashlib.sha256(text.encode()).hexdigest(),
    }
    emit(finish_report(payload, t0))
    return 0


def cmd_verify(args) -> int:
    t0 = time.perf_counter()
    loaded = load_group(args.group, cap=args.max_order)
    pg = loaded.pg
    G = pg.group
    if args.paper_structure:
        n1, n2 = args.n1, args.n2
        if n1 is None or n2 is None:
            _, (r1, r2) = recipe_congruence(pg.p)
            n1 = r1 if n1 is None else n1
            n2 = r2 if n2 is None else n2
        pair1, pair2 = paper_structure(pg, n1, n2)
        pair_desc = f"paper-structure n1={n1} n2={n2}"
    elif args.pair1 and args.pair2:
        def mk(word_pair: str) -> GenPair:
            parts = word_pair.split(";")
            if len(parts) != 2:
                raise ValueError("pair must be two words separated by ';'")
            return GenPair.make(G, evaluate_word(G, pg.named, parts[0]), evaluate_word(G, pg.named, parts[1]))

        pair1, pair2 = mk(args.pair1), mk(args.pair2)
        pair_desc = f"pairs {args.pair1} | {args.pair2}"
    else:
        raise ValueError("need --pair1/--pair2 or --paper-structure")
    if args.strong:
        cert = check_strongly_real(G, pair1, pair2, pg.theta, search_conjugators=args.search_conjugators)
        verified = bool(cert.beauville and cert.strongly_real)
    else:
        cert = check_beauville(G, pair1, pair2)
        verified = cert.beauville
    from .beauville import sigma_mask

    record_sigma_digest(pg, pair_desc + " [1]", sigma_mask(G, pair1.x, pair1.y))
    record_sigma_digest(pg, pair_desc + " [2]", sigma_mask(G, pair2.x, pair2.y))
    payload = {
        "version": __version__,
        "command": ["verify", pair_desc, f"strong={args.strong}"],
        "input_sha256": loaded.sha256,
        "group": group_stats(pg),
        "certificates": [cert_json(G, cert)],
        "verified": verified,
    }
    emit(finish_report(payload, t0))
    return 0 if verified else 1


def cmd_search(args) -> int:
    t0 = time.perf_counter()
    loaded = load_group(args.group, cap=10**6)
    pg = loaded.pg
    theta = pg.theta if args.mode == "find-strongly-real" else None
    res = exhaustive_search(pg.group, args.mode, theta=theta, cap=args.max_order, jobs=args.jobs)
    payload = {
        "version": __version__,
        "command": ["search", args.mode, f"jobs={args.jobs}"],
        "input_sha256": loaded.sha256,
        "group": group_stats(pg),
        "certificates": [cert_json(pg.group, res.found)] if res.found else [],
        "found": res.found is not None,
        "counts": {
            "generating_pairs": res.generating_pairs,
            "distinct_sigma_sets": res.distinct_sigma_sets,
            "sigma_class_pairs_checked": res.sigma_pairs_checked,
        },
    }
    emit(finish_report(payload, t0))
    if args.mode == "prove-none":
        return 1 if res.found is not None else 0
    return 0 if res.found is not None else 1


def cmd_series(args) -> int:
    t0 = time.perf_counter()
    loaded = load_group(args.group, cap=args.max_order)
    pg = loaded.pg
    G = pg.group
    lcs = lower_central_series(G)
    cls = len(lcs.terms) - 1
    lo = args.from_weight if args.from_weight else 2
    hi = args.to_weight if args.to_weight else cls
    terms_json = []
    pairs = None
    if pg.family != "abelian" and pg.p:
        try:
            n1, n2 = args.n1, args.n2
            if n1 is None or n2 is None:
                _, (r1, r2) = recipe_congruence(pg.p)
                n1, n2 = r1, r2
            pairs = paper_structure(pg, n1, n2)
        except ValueError:
            pairs = None
    for i in range(lo, hi + 1):
        series = refinement_series(pg, i)
        for pos, term in enumerate(series.terms):
            entry = {
                "weight": i,
                "order": str(len(term)),
                "generators": [G.element_name(g) for g in (term.gens or ())],
                "normal": term.is_normal,
                "theta_invariant": series.theta_invariant[pos],
                "index_over_next": str(series.indices[pos]) if pos < len(series.indices) else None,
            }
            if pairs is not None and args.check_quotients:
                Q, proj = quotient_group(G, term)
                theta_q = induced_automorphism(Q, pg.theta)
                q1 = GenPair.make(Q, proj(pairs[0].x), proj(pairs[0].y))
                q2 = GenPair.make(Q, proj(pairs[1].x), proj(pairs[1].y))
                if Q.order <= args.sigma_cap:
                    cert = check_strongly_real(Q, q1, q2, theta_q)
                    entry["quotient_strongly_real"] = bool(cert.beauville and cert.strongly_real)
                else:
                    base_weight = 3 if pg.p > 3 else 4
                    ok, _ = check_strongly_real_via_base(Q, q1, q2, theta_q, base_weight)
                    entry["quotient_strongly_real"] = ok
            terms_json.append(entry)
    payload = {
        "version": __version__,
        "command": ["series", f"from={lo}", f"to={hi}"],
        "input_sha256": loaded.sha256,
        "group": group_stats(pg),
        "certificates": [],
        "terms": terms_json,
    }
    emit(finish_report(payload, t0))
    return 0


def cmd_reproduce(args) -> int:
    from .reproduce import run_criteria

    t0 = time.perf_counter()
    only = [int(x) for x in args.only.split(",")] if args.only else None
    results = run_criteria(only)
    for r in results:
        print(r.line(), file=sys.stderr)
        for d in r.details:
            print("    " + d, file=sys.stderr)
    payload = {
        "version": __version__,
        "command": ["reproduce"] + ([args.only] if args.only else []),
        "group": None,
        "certificates": [],
        "criteria": [
            {"number": r.number, "name": r.name, "ok": r.ok, "budget_s": r.budget_s}
            for r in results
        ],
        "all_pass": all(r.ok for r in results),
    }
    emit(finish_report(payload, t0))
    return 0 if all(r.ok for r in results) else 1


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="bforge", description=__doc__)
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="cmd", required=True)

    c = sub.add_parser("construct", help="build a named family member and write canonical .pcp")
    c.add_argument("--family", required=True, choices=list(FAMILIES))
    c.add_argument("--p", type=int)
    c.add_argument("--k", type=int)
    c.add_argument("--n", type=int)
    c.add_argument("--out")
    c.add_argument("--max-order", type=int, default=10**6)
    c.set_defaults(fn=cmd_construct)

    c = sub.add_parser("nq", help="nilpotent quotient of a triangle group")
    c.add_argument("--p", type=int, required=True)
    c.add_argument("--k", type=int, required=True)
    c.add_argument("--r", type=int)
    c.add_argument("--class", dest="class_bound", type=int, default=4, choices=range(1, MAX_CLASS_BOUND + 1))
    c.add_argument("--out")
    c.add_argument("--max-order", type=int, default=10**6)
    c.set_defaults(fn=cmd_nq)

    c = sub.add_parser("verify", help="verify a (strongly real) Beauville structure")
    c.add_argument("--group", required=True)
    c.add_argument("--pair1", help="two words separated by ';', e.g. 'x;y'")
    c.add_argument("--pair2")
    c.add_argument("--paper-structure", action="store_true")
    c.add_argument("--n1", type=int)
    c.add_argument("--n2", type=int)
    c.add_argument("--strong", action="store_true")
    c.add_argument("--search-conjugators", action="store_true")
    c.add_argument("--max-order", type=int, default=10**6)
    c.set_defaults(fn=cmd_verify)

    c = sub.add_parser("search", help="exhaustive structure search / non-existence certification")
    c.add_argument("--group", required=True)
    c.add_argument("--mode", required=True, choices=["find", "prove-none", "find-strongly-real"])
    c.add_argument("--jobs", type=int, default=1)
    c.add_argument("--max-order", type=int, default=None)
    c.set_defaults(fn=cmd_search)

    c = sub.add_parser("series", help="theta-invariant index-p refinement of the lower central series")
    c.add_argument("--group", required=True)
    c.add_argument("--from", dest="from_weight", type=int)
    c.add_argument("--to", dest="to_weight", type=int)
    c.add_argument("--n1", type=int)
    c.add_argument("--n2", type=int)
    c.add_argument("--check-quotients", action="store_true", default=True)
    c.add_argument("--no-check-quotients", dest="check_quotients", action="store_false")
    c.add_argument("--sigma-cap", type=int, default=10**4)
    c.add_argument("--max-order", type=int, default=10**6)
    c.set_defaults(fn=cmd_series)

    c = sub.add_parser("reproduce", help="run the full acceptance suite")
    c.add_argument("--only", help="comma-separated criterion numbers")
    c.set_defaults(fn=cmd_reproduce)
    return ap


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except CapExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (PcpSyntaxError, ShapeError, HomomorphismError, ValueError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
