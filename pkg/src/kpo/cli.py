"""``kpo`` command line.

Exit status: 0 success/true, 1 false, 2 usage or input error, 3 size limit.
Structured output is JSON on stdout; diagnostics go to stderr.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Sequence

from . import census as cz
from .invariants import filter_battery, profile
from .kgen import NotRealizable, k_equal, k_f_route, k_m_route
from .poset import (
    Kind,
    OrientedPoset,
    PosetError,
    SizeLimitExceeded,
    format_poset,
    parse_poset,
    realize_labeling,
)
from .transforms import (
    COMBINE_OPS,
    EMPTY,
    add_bottom,
    add_top,
    bar,
    combine,
    disjoint_union,
    layered_compose,
    ordinal_sum,
    remove_jump0,
    skew_to_poset,
    star,
)

EXIT_OK, EXIT_FALSE, EXIT_INPUT, EXIT_SIZE = 0, 1, 2, 3
EMPTY_TOKEN = ":empty"


class UsageError(Exception):
    pass


class _Inputs:
    """Reads poset files; ``-`` is stdin and may be used once."""

    def __init__(self) -> None:
        self.stdin_used = False

    def read(self, name: str) -> OrientedPoset:
        if name == EMPTY_TOKEN:
            return EMPTY
        if name == "-":
            if self.stdin_used:
                raise UsageError("stdin ('-') can only be read once")
            self.stdin_used = True
            text = sys.stdin.read()
        else:
            with open(name, encoding="utf-8") as fh:
                text = fh.read()
        return parse_poset(text)


def _emit(obj) -> None:
    print(json.dumps(obj, sort_keys=False))


def to_dot(P: OrientedPoset, labels: bool = False) -> str:
    lab = realize_labeling(P) if labels else None
    lines = ["digraph poset {", "  rankdir=BT;", "  node [shape=circle];"]
    for v in range(P.n):
        text = f"{v}" if lab is None else f"{v}:{lab.labels[v]}"
        lines.append(f'  {v} [label="{text}"];')
    for a, b, k in P.covers:
        # two parallel strokes for strict edges
        attr = ' [color="black:invis:black", penwidth=1.5]' if k is Kind.STRICT else ""
        lines.append(f"  {a} -> {b}{attr};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def cmd_show(args, inp: _Inputs) -> int:
    P = inp.read(args.file)
    if args.dot:
        if args.labels and not P.realizable:
            print("warning: no witness labeling, labels omitted", file=sys.stderr)
        sys.stdout.write(to_dot(P, labels=args.labels and P.realizable))
        return EXIT_OK
    lab = realize_labeling(P)
    _emit(
        {
            "n": P.n,
            "covers": [[a, b, k.value] for a, b, k in P.covers],
            "minimal": list(P.minimal),
            "maximal": list(P.maximal),
            "realizable": lab is not None,
            "naturally_labeled": P.naturally_labeled,
            "labeling": list(lab.labels) if (lab and args.labels) else None,
        }
    )
    return EXIT_OK


def cmd_k(args, inp: _Inputs) -> int:
    P = inp.read(args.file)
    exp = k_f_route(P) if args.basis == "F" else k_m_route(P)
    _emit(exp.to_json())
    return EXIT_OK


def cmd_eq(args, inp: _Inputs) -> int:
    A, B = inp.read(args.a), inp.read(args.b)
    equal = k_equal(A, B)
    _emit({"equal": equal})
    return EXIT_OK if equal else EXIT_FALSE


def cmd_invariants(args, inp: _Inputs) -> int:
    _emit(profile(inp.read(args.file)).to_json())
    return EXIT_OK


def cmd_filter(args, inp: _Inputs) -> int:
    _emit(filter_battery(inp.read(args.a), inp.read(args.b)).to_json())
    return EXIT_OK


TRANSFORMS = {
    "bar": bar,
    "star": star,
    "remove-jump0": remove_jump0,
    "add-top:w": lambda P: add_top(P, "w"),
    "add-top:s": lambda P: add_top(P, "s"),
    "add-bottom:w": lambda P: add_bottom(P, "w"),
    "add-bottom:s": lambda P: add_bottom(P, "s"),
}


def cmd_transform(args, inp: _Inputs) -> int:
    sys.stdout.write(format_poset(TRANSFORMS[args.op](inp.read(args.file))))
    return EXIT_OK


COMPOSE_ARITY = {"du": 2, "up": 2, "Up": 2, "layered": 5, **{op: 2 for op in COMBINE_OPS}}


def cmd_compose(args, inp: _Inputs) -> int:
    want = COMPOSE_ARITY[args.op]
    if len(args.files) != want:
        raise UsageError(f"--op {args.op} takes {want} posets, got {len(args.files)}")
    ps = [inp.read(f) for f in args.files]
    if args.op == "du":
        R = disjoint_union(*ps)
    elif args.op in ("up", "Up"):
        R = ordinal_sum(ps[0], ps[1], "w" if args.op == "up" else "s")
    elif args.op == "layered":
        R = layered_compose(*ps)
    else:
        R = combine(args.op, *ps)
        if not R.realizable:
            print("warning: result has no witness labeling", file=sys.stderr)
    sys.stdout.write(format_poset(R))
    return EXIT_OK


def cmd_skew(args, inp: _Inputs) -> int:
    sys.stdout.write(format_poset(skew_to_poset(args.shape)))
    return EXIT_OK


def default_jobs() -> int:
    raw = os.environ.get("KPO_JOBS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        raise UsageError(f"KPO_JOBS must be an integer, got {raw!r}") from None


def cmd_census(args, inp: _Inputs) -> int:
    jobs = args.jobs if args.jobs is not None else default_jobs()
    if args.n > cz.MAX_ENUM_N:
        raise SizeLimitExceeded(f"census limited to n <= {cz.MAX_ENUM_N}")
    records = cz.tag_explanations(cz.run_census(args.n, natural=args.natural, jobs=jobs))
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            cz.write_jsonl(records, fh)
        report = cz.summary(records)
        if args.verify:
            report["classification"] = cz.verify_classification(args.n, jobs=jobs).to_json()
        _emit(report)
    else:
        cz.write_jsonl(records, sys.stdout)
    return EXIT_OK


def cmd_verify(args, inp: _Inputs) -> int:
    jobs = args.jobs if args.jobs is not None else default_jobs()
    rep = cz.verify_classification(args.n, jobs=jobs)
    _emit(rep.to_json())
    return EXIT_OK if rep.ok else EXIT_FALSE


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="kpo", description="P-partition generating functions of labeled posets")
    sub = p.add_subparsers(dest="cmd", required=True)

    s = sub.add_parser("show", help="describe a poset, or render it as DOT")
    s.add_argument("file")
    s.add_argument("--dot", action="store_true")
    s.add_argument("--labels", action="store_true", help="include a witness labeling")
    s.set_defaults(func=cmd_show)

    s = sub.add_parser("k", help="expansion of K in the F or M basis")
    s.add_argument("file")
    s.add_argument("--basis", choices=("F", "M"), default="M")
    s.set_defaults(func=cmd_k)

    for name, func, help_ in (("eq", cmd_eq, "exit 0 iff K agrees"), ("filter", cmd_filter, "run the invariant battery")):
        s = sub.add_parser(name, help=help_)
        s.add_argument("a")
        s.add_argument("b")
        s.set_defaults(func=func)

    s = sub.add_parser("invariants", help="invariant profile")
    s.add_argument("file")
    s.set_defaults(func=cmd_invariants)

    s = sub.add_parser("transform", help="apply a unary construction")
    s.add_argument("file")
    s.add_argument("--op", required=True, choices=sorted(TRANSFORMS))
    s.set_defaults(func=cmd_transform)

    s = sub.add_parser("compose", help=f"combine posets ({EMPTY_TOKEN} stands for an empty block)")
    s.add_argument("--op", required=True, choices=sorted(COMPOSE_ARITY))
    s.add_argument("files", nargs="+")
    s.set_defaults(func=cmd_compose)

    s = sub.add_parser("skew", help="poset of a skew shape such as 443/21")
    s.add_argument("shape")
    s.set_defaults(func=cmd_skew)

    s = sub.add_parser("census", help="exhaustive K-equivalence census")
    s.add_argument("-n", type=int, required=True)
    s.add_argument("--natural", action="store_true", help="naturally labeled posets only")
    s.add_argument("--jobs", type=int, default=None, help="worker processes (default $KPO_JOBS or 1)")
    s.add_argument("--out", help="JSONL output file; a summary is then printed")
    s.add_argument("--verify", action="store_true", help="add the classification check to the summary")
    s.set_defaults(func=cmd_census)

    s = sub.add_parser("verify", help="check the few-linear-extension classification")
    s.add_argument("-n", type=int, required=True)
    s.add_argument("--jobs", type=int, default=None)
    s.set_defaults(func=cmd_verify)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INPUT
    try:
        return args.func(args, _Inputs())
    except SizeLimitExceeded as exc:
        print(f"kpo: size limit: {exc}", file=sys.stderr)
        return EXIT_SIZE
    except NotRealizable as exc:
        print(f"kpo: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (PosetError, UsageError, ValueError, OSError) as exc:
        print(f"kpo: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
