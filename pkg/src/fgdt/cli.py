"""Command line front door: ``fgdt verify | design | search``.

Exit codes: 0 pass, 1 claim or search failure, 2 usage error, 3 resource cap.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from pathlib import Path

from . import design as dsg
from . import group as grp
from . import verify as ver
from .field import prime_power

EXIT_PASS, EXIT_FAIL, EXIT_USAGE, EXIT_CAP = 0, 1, 2, 3

# group tables are (order x plane points) int16; refuse anything larger up front
TABLE_BYTES_CAP = 1 << 30


class UsageError(Exception):
    pass


class ResourceCap(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    subcommand: str
    qs: tuple = ()
    q_is_range: bool = False
    claims: tuple = ()
    table1: int | None = None
    wbs: int | None = None
    type: str | None = None
    k: int | None = None
    lam: int | None = None
    points: str | None = None
    out: str | None = None
    format: str = "json"
    cache: str | None = None
    jobs: int = 1


# ---------------------------------------------------------------- parsing


def parse_q(text: str) -> tuple[tuple, bool]:
    """``"9"`` or ``"7..16"``; a range keeps only prime powers, a single q must be one."""
    try:
        if ".." in text:
            lo, hi = (int(x) for x in text.split("..", 1))
            if lo > hi:
                raise UsageError(f"empty q range {text!r}")
            return tuple(q for q in range(lo, hi + 1) if prime_power(q)), True
        q = int(text)
    except ValueError:
        raise UsageError(f"cannot parse q {text!r}") from None
    if prime_power(q) is None:
        raise UsageError(f"{q} is not a prime power")
    return (q,), False


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="fgdt", description="Flag-transitive 2-design verification suite")
    sub = p.add_subparsers(dest="subcommand", required=True)

    def common(sp):
        sp.add_argument("--out", help="output file (verify, design) or directory (search)")
        sp.add_argument("--format", choices=("json", "csv", "text"), default=None)
        sp.add_argument("--cache", help="group cache directory (FGDT_CACHE overrides)")
        sp.add_argument("--jobs", type=int, default=1, help="parallel worker processes")

    v = sub.add_parser("verify", help="run claim verifiers over a q range")
    v.add_argument("--q", help="single q or range a..b (default: every desk-scale q)")
    v.add_argument("--claim", action="append", default=[], help="claim id or prefix; repeatable or comma separated")
    common(v)

    d = sub.add_parser("design", help="construct and certify a design")
    g = d.add_mutually_exclusive_group(required=True)
    g.add_argument("--table1", type=int, help="Table 1 line number")
    g.add_argument("--wbs", type=int, help="Witt-Bose-Shrikhande space W(q), q even")
    d.add_argument("--k", type=int, help="override the block size (Table 1 lines only)")
    common(d)

    s = sub.add_parser("search", help="exhaustive search for invariant designs")
    s.add_argument("--q", required=True)
    s.add_argument("--type", choices=("I", "II"))
    s.add_argument("--k", type=int)
    s.add_argument("--lambda", dest="lam", type=int)
    s.add_argument("--points", choices=("internal", "external-lines"))
    common(s)
    return p


def build_config(argv) -> RunConfig:
    try:
        a = _parser().parse_args(argv)
    except SystemExit as e:
        if e.code in (0, None):
            raise
        raise UsageError("invalid arguments") from None
    if a.jobs < 1:
        raise UsageError("--jobs must be positive")
    cache = os.environ.get("FGDT_CACHE") or a.cache
    fmt = a.format or ("text" if a.subcommand == "design" else "json")
    if a.subcommand == "verify":
        qs, is_range = parse_q(a.q) if a.q else (tuple(sorted({q for c in ver.CLAIMS.values() for q in c.desk})), True)
        claims = tuple(c for arg in a.claim for c in arg.split(",") if c)
        for c in claims:
            if not any(ver.claim_matches(cid, c) for cid in ver.CLAIMS):
                raise UsageError(f"unknown claim {c!r}; known: {', '.join(sorted(ver.CLAIMS))}")
        return RunConfig("verify", qs, is_range, claims, out=a.out, format=fmt, cache=cache, jobs=a.jobs)
    if a.subcommand == "design":
        if a.table1 is not None and a.table1 not in dsg.TABLE1:
            raise UsageError(f"Table 1 has lines 1..{len(dsg.TABLE1)}, got {a.table1}")
        if a.wbs is not None:
            if prime_power(a.wbs) is None or a.wbs % 2 or a.wbs < 8:
                raise UsageError(f"W(q) needs an even prime power q >= 8, got {a.wbs}")
            if a.k is not None:
                raise UsageError("--k applies to Table 1 lines only")
        if a.k is not None and a.k < 2:
            raise UsageError("--k must be at least 2")
        return RunConfig("design", table1=a.table1, wbs=a.wbs, k=a.k, out=a.out, format=fmt, cache=cache, jobs=a.jobs)
    qs, is_range = parse_q(a.q)
    if is_range or len(qs) != 1:
        raise UsageError("search takes a single q")
    kind = _search_kind(a.type, a.points, qs[0])
    lam = 2 if a.lam is None else a.lam
    if lam < 1:
        raise UsageError("--lambda must be positive")
    return RunConfig("search", qs, False, type=kind, k=a.k, lam=lam, points=a.points, out=a.out, format=fmt, cache=cache, jobs=a.jobs)


def _search_kind(type_: str | None, points: str | None, q: int) -> str:
    implied = {"internal": "II", "external-lines": "I"}.get(points)
    if type_ and implied and type_ != implied:
        raise UsageError(f"--type {type_} conflicts with --points {points}")
    kind = type_ or implied
    if kind is None:
        raise UsageError("search needs --type or --points")
    if kind == "I" and (q % 2 or q <= 8):
        raise UsageError(f"type I needs even q > 8, got {q}")
    if kind == "II" and (q % 2 == 0 or q <= 5):
        raise UsageError(f"type II needs odd q > 5, got {q}")
    return kind


# ---------------------------------------------------------------- commands


def _check_budget(q: int) -> None:
    """Refuse a PSL(2,q)-sized group table that would not fit the memory budget."""
    order = q * (q * q - 1) // (2 if q % 2 else 1)
    points = q * q + q + 1
    if order * points * 2 > TABLE_BYTES_CAP:
        raise ResourceCap(f"group table for q={q} exceeds {TABLE_BYTES_CAP} bytes")


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).parent.mkdir(parents=True, exist_ok=True)
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_verify(cfg: RunConfig) -> int:
    tasks = ver.plan(cfg.qs, cfg.claims or None)
    if not tasks and not cfg.q_is_range:
        which = ", ".join(cfg.claims) or "any claim"
        raise UsageError(f"q={cfg.qs[0]} is not valid for {which}")
    reports = ver.verify_all(cfg.qs, cfg.claims or None, jobs=cfg.jobs)
    _emit(ver.render(reports, cfg.format), cfg.out)
    if cfg.out:
        counts = {s: sum(r.status == s for r in reports) for s in ("pass", "fail", "skipped")}
        print(" ".join(f"{k}={v}" for k, v in counts.items()), file=sys.stderr)
    return EXIT_FAIL if ver.any_failed(reports) else EXIT_PASS


def _summary_text(summary: dict) -> str:
    return "".join(f"{k}: {json.dumps(summary[k], sort_keys=True)}\n" for k in sorted(summary))


def cmd_design(cfg: RunConfig) -> int:
    if cfg.wbs is not None:
        _check_budget(cfg.wbs)
        W = dsg.witt_bose_shrikhande(cfg.wbs)
        D, lam = W.design, 1
        summary = {"construction": f"W({cfg.wbs})", "group": W.group.name, "group_order": W.group.order}
    else:
        res = dsg.table1_construct(cfg.table1, k=cfg.k)
        if res.design is None:
            print(f"table1 line {cfg.table1}: {'; '.join(res.notes)}", file=sys.stderr)
            return EXIT_FAIL
        D, lam = res.design, 2
        summary = {
            "construction": f"table1 line {cfg.table1}",
            "group": res.group_name,
            "group_order": res.group_order,
            "point_stabilizer": res.point_stabilizer,
            "block_stabilizer": res.block_stabilizer,
            "flag_transitive": res.flags.transitive,
            "flag_orbits": res.flags.orbits,
        }
        printed = dsg.TABLE1[cfg.table1].get("printed_k")
        if printed is not None:
            summary["printed_k"] = printed
        if res.notes:
            summary["notes"] = res.notes
    try:
        P = dsg.certify_design(D, lam)
    except dsg.NotADesign as e:
        print(f"certification failed: {e}", file=sys.stderr)
        return EXIT_FAIL
    summary.update(certified=True, v=P.v, b=P.b, r=P.r, k=P.k, **{"lambda": P.lam})
    if cfg.out:
        Path(cfg.out).parent.mkdir(parents=True, exist_ok=True)
        dsg.write_blocks(cfg.out, D, lam)
        if D.labels:
            dsg.write_labels(f"{cfg.out}.labels.json", D)
        text = json.dumps(summary, indent=1, sort_keys=True) + "\n" if cfg.format == "json" else _summary_text(summary)
        sys.stdout.write(text)
    else:
        k = len(D.blocks[0]) if D.blocks else 0
        sys.stdout.write("\n".join([f"{D.v} {D.b} {k} {lam}"] + [" ".join(map(str, B)) for B in D.blocks]) + "\n")
        sys.stderr.write(_summary_text(summary))
    return EXIT_PASS


def cmd_search(cfg: RunConfig) -> int:
    q = cfg.qs[0]
    _check_budget(q)
    v = q * (q - 1) // 2
    if v > dsg.SEARCH_POINT_CAP:
        raise ResourceCap(f"{v} points exceed the search cap {dsg.SEARCH_POINT_CAP}")
    k = cfg.k if cfg.k is not None else (q // 2 if cfg.type == "I" else q - 1)
    if not 2 <= k < v:
        raise UsageError(f"block size {k} outside 2..{v - 1}")
    run = ver.type1_search if cfg.type == "I" else ver.type2_search
    res, info = run(q, k, cfg.lam)
    files = []
    if cfg.out:
        out = Path(cfg.out)
        out.mkdir(parents=True, exist_ok=True)
        for i, D in enumerate(res.designs):
            name = f"design-{i:03d}.blocks"
            dsg.write_blocks(out / name, D, cfg.lam)
            files.append(name)
    summary = {
        "type": cfg.type,
        "q": q,
        "k": k,
        "lambda": cfg.lam,
        "points": info["points"],
        "candidates": res.candidates,
        "distinct_block_orbits": res.distinct_orbits,
        "designs": len(res.designs),
        "files": files,
    }
    text = json.dumps(summary, indent=1, sort_keys=True) + "\n"
    if cfg.out:
        (Path(cfg.out) / "summary.json").write_text(text)
    sys.stdout.write(text if cfg.format != "text" else _summary_text(summary))
    return EXIT_PASS


COMMANDS = {"verify": cmd_verify, "design": cmd_design, "search": cmd_search}


def main(argv=None) -> int:
    try:
        cfg = build_config(sys.argv[1:] if argv is None else argv)
        grp.set_cache_dir(cfg.cache)
        return COMMANDS[cfg.subcommand](cfg)
    except UsageError as e:
        print(f"fgdt: usage error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (ResourceCap, grp.CapExceeded, dsg.SearchCapExceeded) as e:
        print(f"fgdt: resource cap: {e}", file=sys.stderr)
        return EXIT_CAP


if __name__ == "__main__":
    sys.exit(main())
