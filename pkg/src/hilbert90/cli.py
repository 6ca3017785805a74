"""Command line entry point ``hilbert90``.

Exit codes: 0 success, 1 domain or consistency failure, 2 resource cap
exceeded, 64 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

from hilbert90 import __version__
from hilbert90.errors import Hilbert90Error, ResourceError
from hilbert90.exactfield import RatFunc
from hilbert90.grading import project_degree, square_subfield_decompose
from hilbert90.permgroup import GrowthParams, OpenSubgroupSpec, canonicalize_open_subgroup, embedding_count
from hilbert90.permmod import product_decompose, tensor_power_report
from hilbert90.rng import default_seed
from hilbert90.semilin import CocycleModule, speiser_trivialize
from hilbert90.serialize import dumps, read_json
from hilbert90.unipmod import classify_module

EXIT_OK, EXIT_DOMAIN, EXIT_RESOURCE, EXIT_USAGE = 0, 1, 2, 64


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _document(path: str, index: int) -> dict:
    """A single JSON object, or item ``index`` of a corpus file ``{"kind", "items"}``."""
    data = read_json(path)
    if isinstance(data, dict) and "items" in data:
        return data["items"][index]
    return data


def _cmd_trivialize(args) -> int:
    m = CocycleModule.from_json(_document(args.module, args.index))
    w = speiser_trivialize(m, seed=args.seed)
    out = w.to_json()
    out["attempts"] = w.attempts
    print(dumps(out))
    return EXIT_OK


def _cmd_classify(args) -> int:
    m = CocycleModule.from_json(_document(args.module, args.index))
    print(dumps(classify_module(m, seed=args.seed)))
    return EXIT_OK


def _cmd_decompose(args) -> int:
    if args.what == "product":
        if len(args.params) != 2:
            raise argparse.ArgumentTypeError("decompose product takes a and b")
        a, b = args.params
        kappa = product_decompose(a, b)
        if args.json:
            print(dumps(kappa))
        else:
            print("s\tkappa_s")
            for s in sorted(kappa.kappa):
                print(f"{s}\t{kappa.kappa[s]}")
        return EXIT_OK
    if len(args.params) != 1 or args.level is None:
        raise argparse.ArgumentTypeError("decompose tensor-power takes N and --level n")
    (N,) = args.params
    report = tensor_power_report(N, args.level, seed=args.seed)
    if args.json:
        print(dumps(report))
    else:
        print("a = [" + ", ".join(str(x) for x in report["a"]) + "]")
        for step in report["alpha"]:
            status = "bijective" if step["bijective"] else "NOT bijective"
            print(f"alpha_{step['index']} at level {args.level}: {step['size']}x{step['size']}, "
                  f"exact rank {step['rank_exact']}, specialized rank {step['rank_specialized']}, {status}")
        if not report["alpha"]:
            print(f"no alpha step fits at level {args.level}")
    ok = all(s["bijective"] for s in report["alpha"])
    return EXIT_OK if ok else EXIT_DOMAIN


def _cmd_grade(args) -> int:
    f = RatFunc.parse(args.f, args.nvars)
    sl = project_degree(f, args.degree)
    print(dumps(sl) if args.json else str(sl.value))
    return EXIT_OK


def _cmd_split_squares(args) -> int:
    f = RatFunc.parse(args.f, args.nvars)
    parts = square_subfield_decompose(f)
    print(dumps({json.dumps(list(S), separators=(",", ":")): str(c) for S, c in parts.items()}))
    return EXIT_OK


def _cmd_growth(args) -> int:
    params = GrowthParams(args.q, args.v)
    print(embedding_count(params, args.n, args.N))
    return EXIT_OK


def _cmd_subgroup(args) -> int:
    spec = OpenSubgroupSpec.from_json(_document(args.spec, args.index))
    print(canonicalize_open_subgroup(spec, args.level).dumps())
    return EXIT_OK


def _cmd_check(args) -> int:
    from hilbert90.checks import CRITERIA, run_check

    picked = CRITERIA if args.only is None else [CRITERIA[i - 1] for i in args.only]
    ok = True
    for fn in picked:
        res = run_check(fn, level=args.level, seed=args.seed)
        print(res.line(), flush=True)
        for f in res.failures[:5]:
            print(f"      {f}")
        ok = ok and res.passed
    return EXIT_OK if ok else EXIT_DOMAIN


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="hilbert90", description="Exact semilinear-representation workbench.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)
    seed = default_seed()

    t = sub.add_parser("trivialize", help="average a cocycle module into a witness Phi")
    t.add_argument("module")
    t.add_argument("--seed", type=int, default=seed)
    t.add_argument("--index", type=int, default=0, help="item to use from a corpus file")
    t.set_defaults(run=_cmd_trivialize)

    c = sub.add_parser("classify", help="Jordan type of a module over the difference subfield")
    c.add_argument("module")
    c.add_argument("--seed", type=int, default=seed)
    c.add_argument("--index", type=int, default=0)
    c.set_defaults(run=_cmd_classify)

    d = sub.add_parser("decompose", help="product or tensor-power decompositions")
    d.add_argument("what", choices=["product", "tensor-power"])
    d.add_argument("params", type=int, nargs="+")
    d.add_argument("--level", type=int)
    d.add_argument("--seed", type=int, default=seed)
    d.add_argument("--json", action="store_true")
    d.set_defaults(run=_cmd_decompose)

    g = sub.add_parser("grade", help="homogeneous slice of degree d")
    g.add_argument("f")
    g.add_argument("--degree", type=int, required=True)
    g.add_argument("--nvars", type=int)
    g.add_argument("--json", action="store_true")
    g.set_defaults(run=_cmd_grade)

    s = sub.add_parser("split-squares", help="decompose over the squares subfield")
    s.add_argument("f")
    s.add_argument("--nvars", type=int)
    s.set_defaults(run=_cmd_split_squares)

    gr = sub.add_parser("growth", help="number of embeddings of rank n into rank N")
    gr.add_argument("--q", type=int, default=1)
    gr.add_argument("--v", type=int, default=0)
    gr.add_argument("--n", type=int, required=True)
    gr.add_argument("--N", type=int, required=True)
    gr.set_defaults(run=_cmd_growth)

    sg = sub.add_parser("subgroup", help="open subgroup operations")
    sg.add_argument("action", choices=["canon"])
    sg.add_argument("spec")
    sg.add_argument("--level", type=int, required=True)
    sg.add_argument("--index", type=int, default=0)
    sg.set_defaults(run=_cmd_subgroup)

    ck = sub.add_parser("check", help="run the property suite")
    ck.add_argument("scope", choices=["all"])
    ck.add_argument("--level", type=int)
    ck.add_argument("--seed", type=int, default=seed)
    ck.add_argument("--only", type=int, nargs="+", choices=range(1, 12), metavar="K")
    ck.set_defaults(run=_cmd_check)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if not getattr(args, "run", None):
        parser.print_help(sys.stderr)
        return EXIT_USAGE
    try:
        return args.run(args)
    except argparse.ArgumentTypeError as exc:
        print(f"hilbert90: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ResourceError as exc:
        print(f"hilbert90: resource limit: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except (Hilbert90Error, ValueError, ZeroDivisionError, OSError) as exc:
        print(f"hilbert90: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
