"""Command-line front end.

Subcommands: validate, homology, nerve, fold, check-laws, crosscheck-calcul.
Inputs are precubical JSON files or builtin categories (builtin:2_2,
builtin:G_3, builtin:I_2, builtin:fig1, ...).  All output goes to stdout,
diagnostics to stderr; identical flags give byte-identical output.
"""

from __future__ import annotations

import argparse
import json
import sys

from .config import Config, default_config
from .errors import (
    ClosureBudgetExceeded,
    CornerError,
    DimensionCap,
    ParseError,
)
from .fixtures import builtin_category
from .folding import fold_pipeline, phi_minus, is_folded
from .homology import (
    calcul_crosscheck,
    complex_homology,
    corner_complex,
    formal_complex,
    reduced_corner_complex,
)
from .molecule import build_free_category
from .nerve import axiom_report, classify, enumerate_cubes
from .precub import goubault_complex, parse_precubical, validate

USAGE_EXIT = 64

THEORIES = ("branching", "merging", "reduced-branching", "formal",
            "goubault-minus", "goubault-plus")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        sys.exit(USAGE_EXIT)


def _load_category(path: str, cfg: Config):
    if path.startswith("builtin:"):
        return builtin_category(path[len("builtin:"):], cfg)
    with open(path, "r", encoding="utf-8") as fh:
        K = parse_precubical(fh.read())
    report = validate(K)
    if not report.ok:
        raise CornerError(
            "input fails validation: "
            + "; ".join(v.message for v in report.violations))
    return build_free_category(K, cfg)


def _emit(doc, fmt: str):
    if fmt == "json":
        print(json.dumps(doc, indent=1, sort_keys=True))
    else:
        _emit_table(doc)


def _emit_table(doc, indent=""):
    if isinstance(doc, dict):
        for k in sorted(doc):
            v = doc[k]
            if isinstance(v, (dict, list)):
                print(f"{indent}{k}:")
                _emit_table(v, indent + "  ")
            else:
                print(f"{indent}{k}: {v}")
    elif isinstance(doc, list):
        for v in doc:
            if isinstance(v, (dict, list)):
                _emit_table(v, indent + "  ")
                print()
            else:
                print(f"{indent}{v}")
    else:
        print(f"{indent}{doc}")


def cmd_validate(args, cfg):
    if args.input.startswith("builtin:"):
        from .fixtures import builtin_json
        text = builtin_json(args.input[len("builtin:"):])
    else:
        with open(args.input, "r", encoding="utf-8") as fh:
            text = fh.read()
    K = parse_precubical(text)
    report = validate(K)
    _emit(report.as_json(), args.format)
    return 0 if report.ok else 1


def cmd_homology(args, cfg):
    theory = args.theory
    if theory.startswith("goubault"):
        if args.input.startswith("builtin:"):
            from .fixtures import builtin_json
            text = builtin_json(args.input[len("builtin:"):])
        else:
            with open(args.input, "r", encoding="utf-8") as fh:
                text = fh.read()
        K = parse_precubical(text)
        side = "-" if theory.endswith("minus") else "+"
        cx = goubault_complex(K, side)
        up_to = min(args.up_to if args.up_to is not None else K.max_dim,
                    len(cx.basis) - 1)
        summary = complex_homology(cx, up_to)
    else:
        C = _load_category(args.input, cfg)
        up_to = args.up_to if args.up_to is not None else cfg.max_dim - 1
        if theory == "branching":
            summary = complex_homology(corner_complex(C, "-", up_to, cfg), up_to)
        elif theory == "merging":
            summary = complex_homology(corner_complex(C, "+", up_to, cfg), up_to)
        elif theory == "reduced-branching":
            summary = complex_homology(reduced_corner_complex(C, up_to, cfg), up_to)
        elif theory == "formal":
            summary = complex_homology(formal_complex(C, up_to, cfg), up_to)
        else:
            raise CornerError(f"unknown theory {theory}")
    _emit({"theory": theory, "groups": summary.as_json()}, args.format)
    return 0


def cmd_nerve(args, cfg):
    C = _load_category(args.input, cfg)
    cubes = enumerate_cubes(C, args.dim, args.filter, cfg)
    doc = {"degree": args.dim, "cubes": []}
    for x in cubes:
        cls = classify(x)
        doc["cubes"].append({
            "images": x.as_json(),
            "branching": cls.branching,
            "merging": cls.merging,
            "thin": cls.thin,
        })
    _emit(doc, args.format)
    return 0


def cmd_fold(args, cfg):
    C = _load_category(args.input, cfg)
    cubes = enumerate_cubes(C, args.dim, "branching", cfg)
    if not 0 <= args.cube < len(cubes):
        raise CornerError(
            f"cube index {args.cube} out of range 0..{len(cubes) - 1}")
    x = cubes[args.cube]
    pipe = fold_pipeline(args.dim, cfg)
    print(f"cube {args.cube} of degree {args.dim}: interior "
          f"{C.label(x.interior)}, folded={is_folded(x)}")
    if args.trace:
        trace = []
        y = pipe.apply(x, trace)
        for mv, step in trace:
            cls = classify(step)
            print(f"  {mv}: interior {C.label(step.interior)} "
                  f"branching={cls.branching} thin={cls.thin} "
                  f"folded={is_folded(step)}")
    else:
        y = pipe.apply(x)
    same = y == phi_minus(x)
    print(f"pipeline length {len(pipe)}; result equals the folding "
          f"operator: {same}")
    return 0 if same else 1


def cmd_check_laws(args, cfg):
    C = _load_category(args.input, cfg)
    rep = axiom_report(C, args.dim, args.samples, args.seed, cfg)
    _emit(rep, args.format)
    return 0 if rep["ok"] else 1


def cmd_crosscheck(args, cfg):
    C = _load_category(args.input, cfg)
    up_to = args.up_to if args.up_to is not None else cfg.max_dim - 1
    rep = calcul_crosscheck(C, up_to, cfg)
    _emit(rep, args.format)
    return 0 if rep["ok"] else 1


def build_parser() -> _Parser:
    ap = _Parser(prog="cornerhomology",
                 description="corner homology of finite higher dimensional automata")
    ap.add_argument("--max-dim", type=int, default=None,
                    help="maximum cube degree (default 3, hard cap 4; "
                         "env CORNER_MAX_DIM)")
    ap.add_argument("--budget", type=int, default=None,
                    help="morphism/enumeration budget")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="validate a precubical JSON document")
    p.add_argument("input")
    p.add_argument("--format", choices=("json", "table"), default="json")
    p.set_defaults(fn=cmd_validate)

    p = sub.add_parser("homology", help="homology of an automaton or builtin")
    p.add_argument("input")
    p.add_argument("--theory", choices=THEORIES, default="branching")
    p.add_argument("--up-to", type=int, default=None,
                   help="top degree (default max_dim-1)")
    p.add_argument("--format", choices=("json", "table"), default="json")
    p.set_defaults(fn=cmd_homology)

    p = sub.add_parser("nerve", help="dump one degree of the cubical nerve")
    p.add_argument("input")
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--filter", choices=("all", "branching", "merging"),
                   default="all")
    p.add_argument("--format", choices=("json", "table"), default="json")
    p.set_defaults(fn=cmd_nerve)

    p = sub.add_parser("fold", help="fold one branching cube and trace the moves")
    p.add_argument("input")
    p.add_argument("--dim", type=int, default=2)
    p.add_argument("--cube", type=int, required=True,
                   help="index into the sorted branching cubes of that degree")
    p.add_argument("--trace", action="store_true")
    p.set_defaults(fn=cmd_fold)

    p = sub.add_parser("check-laws", help="run the operator-law harness")
    p.add_argument("input")
    p.add_argument("--dim", type=int, default=2, help="max degree of operands")
    p.add_argument("--samples", type=int, default=None,
                   help="per-law sample budget (default exhaustive)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--format", choices=("json", "table"), default="json")
    p.set_defaults(fn=cmd_check_laws)

    p = sub.add_parser("crosscheck-calcul",
                       help="compare corner homology with the simplicial nerve "
                            "of the shifted category")
    p.add_argument("input")
    p.add_argument("--up-to", type=int, default=None,
                   help="top corner degree (default max_dim-1)")
    p.add_argument("--format", choices=("json", "table"), default="json")
    p.set_defaults(fn=cmd_crosscheck)
    return ap


def run(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    base = default_config()
    cfg = Config(
        max_dim=args.max_dim if args.max_dim is not None else base.max_dim,
        budget=args.budget if args.budget is not None else base.budget,
    )
    try:
        return args.fn(args, cfg)
    except (DimensionCap, ClosureBudgetExceeded) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ParseError, CornerError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
