"""``treeperim`` command line. Output is deterministic for a given argv and seed."""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from . import __version__
from .bounds import bounds_csv, peak_bounds, prior_bounds
from .compress import StepCapExceeded, aeolian_fix, down_fix, left_fix
from .oracle import OracleCapError, nesting_report, phi_peak, phi_profile_dp, profile_bruteforce
from .sep import gap_report, gaps_csv, optimal_layout, tree_pathwidth, vs_of_layout
from .suites import DEFAULT_SEED, SUITES, run_one
from .tree import RootedTree, TreeShape
from .vset import VertexSet, boundary_size
from .witness import (
    critical_size,
    local_structure_report,
    postorder_equality_rate,
    path_construct,
    verify_path_construction,
)


class UsageError(ValueError):
    pass


def int_range(text: str) -> list[int]:
    """Parse ``5``, ``2..8`` or ``2,3,7`` into a non-empty list of ints."""
    try:
        if ".." in text:
            a, b = text.split("..", 1)
            out = list(range(int(a), int(b) + 1))
        else:
            out = [int(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad integer range {text!r}") from exc
    if not out:
        raise argparse.ArgumentTypeError(f"empty range {text!r}")
    return out


@dataclass(frozen=True)
class RunConfig:
    qs: tuple[int, ...]
    ds: tuple[int, ...]
    fmt: str = "csv"
    seed: int = DEFAULT_SEED
    step_cap: int | None = None

    def __post_init__(self) -> None:
        if not self.qs or not self.ds:
            raise UsageError("q and d ranges must be non-empty")
        if self.step_cap is not None and self.step_cap <= 0:
            raise UsageError("step cap must be positive")

    def shapes(self) -> list[TreeShape]:
        return [TreeShape(q, d) for q in self.qs for d in self.ds]


def _config(args: argparse.Namespace) -> RunConfig:
    return RunConfig(
        tuple(getattr(args, "q", None) or [2]),
        tuple(getattr(args, "d", None) or [1]),
        getattr(args, "format", "csv"),
        getattr(args, "seed", DEFAULT_SEED),
        getattr(args, "step_cap", None),
    )


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True)


# -- subcommands -----------------------------------------------------------


def cmd_profile(args, out) -> int:
    cfg = _config(args)
    for sh in cfg.shapes():
        if args.method == "brute":
            values = profile_bruteforce(sh).tolist()
            if args.witness:
                raise UsageError("--witness needs the dp method")
            table = None
        else:
            table = phi_profile_dp(sh, want_witnesses=args.witness)
            values = table.values.tolist()
        if cfg.fmt == "json":
            rec = {"q": sh.q, "d": sh.d, "phi": values}
            if table is not None and args.witness:
                rec["witness"] = [table.witness(s).members() for s in range(sh.size + 1)]
            out.write(_dump(rec) + "\n")
        elif table is not None:
            out.write(table.to_csv(with_witness=args.witness))
        else:
            out.write("s,phi\n" + "".join(f"{s},{v}\n" for s, v in enumerate(values)))
    return 0


def cmd_peak(args, out) -> int:
    for sh in _config(args).shapes():
        out.write(f"{phi_peak(sh).peak}\n")
    return 0


def cmd_bounds(args, out) -> int:
    reps = []
    for q in args.q:
        for d in args.d:
            if args.prior:
                base = {"e": np.e, "2": 2.0, "10": 10.0}[args.log_base]
                reps.extend(prior_bounds(q, d, c=args.c, log_base=base))
            reps.append(peak_bounds(q, d))
    if args.format == "json":
        for r in reps:
            out.write(_dump(dict(zip(("q", "d", "source", "lower_real", "lower_int", "upper_real", "upper_int"), r.row()))) + "\n")
    else:
        out.write(bounds_csv(reps))
    return 0


def cmd_witness(args, out) -> int:
    cfg = _config(args)
    for sh in cfg.shapes():
        q, d = sh.q, sh.d
        if args.action == "critical":
            cs = critical_size(q, d)
            out.write(_dump({"q": q, "d": d, "size": cs.size, "regime": cs.regime, "D": cs.D}) + "\n")
        elif args.action == "construct":
            if args.s is None:
                raise UsageError("witness construct needs --s")
            for s in args.s:
                out.write(path_construct(sh, s).to_json() + "\n")
        elif args.action == "sweep":
            rep = verify_path_construction(sh)
            out.write(_dump(rep.__dict__) + "\n")
        elif args.action == "postorder":
            hits, total = postorder_equality_rate(sh)
            out.write(_dump({"q": q, "d": d, "equal": hits, "total": total}) + "\n")
    if args.action == "local":
        if args.s is None:
            raise UsageError("witness local needs --s")
        for s in args.s:
            out.write(_dump(local_structure_report(args.dsub, s, q=args.q[0] if args.q else 3).to_dict()) + "\n")
    return 0


def _start_set(sh: TreeShape, args, rng: np.random.Generator) -> VertexSet:
    if args.members is not None:
        return VertexSet.from_members(sh, json.loads(args.members))
    return VertexSet.random(sh, rng, args.size)


def cmd_compress(args, out) -> int:
    cfg = _config(args)
    fn = {"left": left_fix, "down": down_fix, "aeolian": aeolian_fix}[args.method]
    rng = np.random.default_rng(cfg.seed)
    for sh in cfg.shapes():
        S = _start_set(sh, args, rng)
        try:
            T, trace = fn(S, max_steps=cfg.step_cap)
        except StepCapExceeded as exc:
            print(f"step cap {exc.cap} exceeded on ({sh.q},{sh.d})", file=sys.stderr)
            return 1
        if args.trace:
            out.write(trace.to_jsonl())
        rec = {
            "q": sh.q,
            "d": sh.d,
            "method": args.method,
            "initial": S.members(),
            "final": T.members(),
            "boundary_before": boundary_size(sh, S.member),
            "boundary_after": boundary_size(sh, T.member),
            "steps": len(trace.steps),
        }
        out.write(_dump(rec) + "\n")
    return 0


def cmd_nesting(args, out) -> int:
    for sh in _config(args).shapes():
        out.write(_dump(nesting_report(sh).to_dict()) + "\n")
    return 0


def cmd_gap(args, out) -> int:
    reps = [gap_report(sh) for sh in _config(args).shapes()]
    if args.format == "json":
        for r in reps:
            out.write(_dump(dict(zip(("q", "d", "vs", "peak", "gap"), r.row()))) + "\n")
    else:
        out.write(gaps_csv(reps))
    return 0


def cmd_pathwidth(args, out) -> int:
    if args.parent is not None:
        t = RootedTree(json.loads(args.parent))
        out.write(f"{tree_pathwidth(t)}\n")
        return 0
    for sh in _config(args).shapes():
        if args.layout:
            L = optimal_layout(sh)
            out.write(_dump({"q": sh.q, "d": sh.d, "vs": vs_of_layout(sh, L), "layout": list(L.order)}) + "\n")
        else:
            out.write(f"{tree_pathwidth(sh)}\n")
    return 0


def cmd_verify(args, out) -> int:
    select = args.only or sorted(SUITES)
    failed = 0
    artifacts = {}
    for n in select:
        if n not in SUITES:
            raise UsageError(f"no criterion {n}")
        res = run_one(n)
        out.write(res.line() + "\n")
        out.flush()
        failed += not res.passed
        if res.artifact:
            artifacts[n] = res.artifact
    if args.out:
        path = Path(args.out)
        path.mkdir(parents=True, exist_ok=True)
        for n, art in artifacts.items():
            (path / f"criterion_{n:02d}.json").write_text(_dump(art) + "\n")
    out.write(f"{len(select) - failed}/{len(select)} criteria passed\n")
    return 1 if failed else 0


# -- parser ----------------------------------------------------------------


def _shape_flags(p: argparse.ArgumentParser, d_required: bool = True) -> None:
    p.add_argument("--q", type=int_range, required=d_required, help="branching factor(s): 3, 2..4 or 2,5")
    p.add_argument("--d", type=int_range, required=d_required, help="depth(s), same syntax as --q")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="treeperim", description="Vertex isoperimetry on complete q-ary trees.")
    ap.add_argument("--version", action="version", version=f"treeperim {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("profile", help="exact profile phi(s) for every s")
    _shape_flags(p)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--witness", action="store_true", help="add an optimal set per row")
    p.add_argument("--method", choices=("dp", "brute"), default="dp")
    p.set_defaults(func=cmd_profile)

    p = sub.add_parser("peak", help="maximum of the profile")
    _shape_flags(p)
    p.set_defaults(func=cmd_peak)

    p = sub.add_parser("bounds", help="closed-form bounds on the peak")
    _shape_flags(p)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--prior", action="store_true", help="also emit the three earlier bounds")
    p.add_argument("--c", type=float, default=None, help="constant for the c*d/sqrt(q) bound")
    p.add_argument("--log-base", choices=("e", "2", "10"), default="e")
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("witness", help="critical sizes and explicit constructions")
    p.add_argument("action", choices=("critical", "construct", "sweep", "postorder", "local"))
    _shape_flags(p, d_required=False)
    p.add_argument("--s", type=int_range, default=None)
    p.add_argument("--dsub", type=int, default=5, help="subtree depth for 'local'")
    p.set_defaults(func=cmd_witness)

    p = sub.add_parser("compress", help="run a compression to its fixpoint")
    _shape_flags(p)
    p.add_argument("--method", choices=("left", "down", "aeolian"), default="aeolian")
    p.add_argument("--members", default=None, help="JSON list of vertex ids; random otherwise")
    p.add_argument("--size", type=int, default=None, help="size of the random start set")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--step-cap", type=int, default=None)
    p.add_argument("--trace", action="store_true", help="emit one JSON line per step first")
    p.set_defaults(func=cmd_compress)

    p = sub.add_parser("nesting", help="whether optimal sets can be chained by inclusion")
    _shape_flags(p)
    p.set_defaults(func=cmd_nesting)

    p = sub.add_parser("gap", help="vertex separation minus peak")
    _shape_flags(p)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.set_defaults(func=cmd_gap)

    p = sub.add_parser("pathwidth", help="pathwidth of a complete tree or a parent array")
    _shape_flags(p, d_required=False)
    p.add_argument("--parent", default=None, help="JSON parent array, root marked -1")
    p.add_argument("--layout", action="store_true", help="emit an optimal layout")
    p.set_defaults(func=cmd_pathwidth)

    p = sub.add_parser("verify", help="run the acceptance suites")
    p.add_argument("--only", type=int_range, default=None, help="criterion numbers")
    p.add_argument("--out", default=None, help="directory for JSON artifacts")
    p.set_defaults(func=cmd_verify)
    return ap


def main(argv: Sequence[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if args.command == "pathwidth" and args.parent is None and not (args.q and args.d):
            raise UsageError("pathwidth needs --q and --d, or --parent")
        if args.command == "witness" and args.action != "local" and not (args.q and args.d):
            raise UsageError(f"witness {args.action} needs --q and --d")
        return args.func(args, out)
    except (UsageError, OracleCapError, ValueError, IndexError, OverflowError) as exc:
        print(f"treeperim: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
