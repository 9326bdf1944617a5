"""Command line entry point: ``hclab <command> <action> [flags]``."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import List, Optional

from . import __version__, workbench

COMMANDS = {
    "hecke": ("verify", "identity", "ds"),
    "steinberg": ("check", "chain"),
    "invariants": ("hilbert", "hom"),
    "words": ("count", "bottom", "adem"),
    "contraction": ("certify",),
    "chevalley": ("epi", "transrep"),
}


def _epilog() -> str:
    lines = ["commands:"]
    for cmd, actions in COMMANDS.items():
        lines.append(f"  {cmd} {'|'.join(actions)}")
    lines.append("")
    lines.append("guards (requests above these are refused with exit code 2):")
    for name, value in workbench.GUARDS.items():
        lines.append(f"  {name} = {value}")
    lines.append("")
    lines.append(f"exit codes: 0 verified, 1 verification failed, 2 guard or usage error.")
    lines.append(f"{workbench.ENV_CACHE_DIR} overrides --cache-dir.")
    return "\n".join(lines)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="hclab",
        description="Exact computations with Hecke algebras, Steinberg idempotents, invariant models and Dyer-Lashof words.",
        epilog=_epilog(),
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    ap.add_argument("--version", action="version", version=f"hclab {__version__}")
    ap.add_argument("command", choices=sorted(COMMANDS))
    ap.add_argument("action")
    ap.add_argument("--p", type=int)
    ap.add_argument("--n", type=int)
    ap.add_argument("--k", type=int)
    ap.add_argument("--m", type=int)
    ap.add_argument("--max-degree", type=int, dest="max_degree")
    ap.add_argument("--backend", choices=("hecke-regular", "invariants"))
    ap.add_argument("--lambda", type=int, dest="lambda_")
    ap.add_argument("--mu", type=int)
    ap.add_argument("--subgroup", help="subgroup tag, e.g. Borel, Full, Parabolic(1)")
    ap.add_argument("--target", help="target node N,K for invariants hom")
    ap.add_argument("--window", type=int, help="constraint degree for invariants hom (default: --max-degree)")
    ap.add_argument("--format", choices=workbench.FORMATS, default="json", dest="fmt")
    ap.add_argument("--out", help="write the report here instead of stdout")
    ap.add_argument("--cache-dir", dest="cache_dir")
    ap.add_argument("--cache", choices=workbench.CACHE_POLICIES, default="use")
    ap.add_argument("--jobs", type=int, default=1)
    return ap


def main(argv: Optional[List[str]] = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0) and 2
    if args.action not in COMMANDS[args.command]:
        print(f"hclab: {args.command} has actions {', '.join(COMMANDS[args.command])}", file=sys.stderr)
        return 2
    if args.jobs < 1:
        print("hclab: --jobs must be at least 1", file=sys.stderr)
        return 2
    req = workbench.make_request(
        args.command,
        args.action,
        args.fmt,
        p=args.p,
        n=args.n,
        k=args.k,
        m=args.m,
        max_degree=args.max_degree,
        backend=args.backend,
        lambda_=args.lambda_,
        mu=args.mu,
        subgroup=args.subgroup,
        target=args.target,
        window=args.window,
    )
    cache_dir = workbench.resolve_cache_dir(args.cache_dir)
    outcome = workbench.run(req, cache_dir, args.cache, args.jobs)
    print(f"hclab: cache {outcome.cache_status}", file=sys.stderr)
    for w in outcome.warnings:
        print(f"hclab: warning: {w}", file=sys.stderr)
    if args.out:
        Path(args.out).write_text(outcome.text, encoding="utf-8")
    else:
        sys.stdout.write(outcome.text)
    return outcome.exit_code


if __name__ == "__main__":
    sys.exit(main())
