"""Command-line front end.

One subcommand per library entry point, JSON documents in and out.  Exit code
0 means the command succeeded with a passing verdict, 1 a negative verdict
(norm too large, extension failed, positivity violated, completion
infeasible), 2 malformed input.  All floating-point output is printed at 15
significant digits and the effective run configuration is echoed in every
document, so identical inputs produce byte-identical output.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from pathlib import Path

from .cfsolver import (
    CFInstance,
    EXTENDED,
    HypothesisError,
    cf_extend,
    necessary_condition,
    special_case_extend,
)
from .completion import (
    CompletionError,
    ParrottProblem,
    parrott_complete,
)
from .jsonio import (
    JSONInputError,
    family_from_json,
    family_to_json,
    grid_value_to_json,
    matrix_from_json,
    matrix_to_json,
    poly_from_json,
    poly_to_json,
    render_json,
)
from .koranyi import cayley_forward, kp_positive, schur_identity_check
from .nehari import hankel_norm, natural_depth
from .opnorm import op_norm, toeplitz_norm
from .polyalg import TorusGrid
from .slicing import (
    MembershipError,
    inverse_reformulate,
    reformulate,
    slice_decompose,
    slice_support,
)

DEFAULT_GRID = 128
DEFAULT_TOL = 1e-9
DEFAULT_MAX_ORDER = 12
DEFAULT_DEPTH = 8


@dataclass(frozen=True)
class RunConfig:
    """Effective numeric parameters of one command invocation."""

    grid: int = DEFAULT_GRID
    tol: float = DEFAULT_TOL
    max_order: int = DEFAULT_MAX_ORDER
    depth: int = DEFAULT_DEPTH
    seed: int = 0

    def __post_init__(self):
        if self.grid < 64 or self.grid & (self.grid - 1):
            raise JSONInputError(
                "config.grid", "must be a power of two, at least 64"
            )
        if not self.tol > 0:
            raise JSONInputError("config.tol", "must be positive")
        if self.max_order < 1:
            raise JSONInputError("config.max_order", "must be at least 1")
        if self.depth < 1:
            raise JSONInputError("config.depth", "must be at least 1")
        if self.seed < 0:
            raise JSONInputError("config.seed", "must be non-negative")

    def torus_grid(self) -> TorusGrid:
        return TorusGrid(points_per_axis=self.grid)

    def to_json(self) -> dict:
        return {
            "grid": self.grid,
            "tol": self.tol,
            "max_order": self.max_order,
            "depth": self.depth,
            "seed": self.seed,
        }


# ---------------------------------------------------------------------------
# input plumbing


def _load_document(args):
    path = getattr(args, "input", "-")
    if path == "-":
        text = sys.stdin.read()
    else:
        try:
            text = Path(path).read_text()
        except OSError as exc:
            raise JSONInputError("input", f"cannot read {path}: {exc}")
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise JSONInputError(
            "input",
            f"invalid JSON: {exc.msg} (line {exc.lineno}, column {exc.colno})",
        )


def _analytic_input(args):
    return poly_from_json(_load_document(args), "input", analytic=True)


def _instance(p) -> CFInstance:
    try:
        return CFInstance(p)
    except ValueError as exc:
        raise JSONInputError("input", str(exc))


def _coefficients(obj, field: str) -> list:
    if isinstance(obj, dict):
        if "coefficients" not in obj:
            raise JSONInputError(f"{field}.coefficients", "missing")
        for key in obj:
            if key != "coefficients":
                raise JSONInputError(f"{field}.{key}", "unknown field")
        obj = obj["coefficients"]
        field = f"{field}.coefficients"
    if not isinstance(obj, list):
        raise JSONInputError(field, "expected an array of coefficients")
    out = []
    for i, item in enumerate(obj):
        here = f"{field}[{i}]"
        if isinstance(item, (int, float)) and not isinstance(item, bool):
            out.append(complex(item))
        elif (isinstance(item, list) and len(item) == 2
              and all(isinstance(v, (int, float)) and not isinstance(v, bool)
                      for v in item)):
            out.append(complex(item[0], item[1]))
        else:
            raise JSONInputError(here, "expected a number or [re, im]")
    if not out:
        raise JSONInputError(field, "at least one coefficient is required")
    return out


# ---------------------------------------------------------------------------
# subcommand handlers: (args, config) -> (document, exit code)


def _cmd_reformulate(args, config: RunConfig):
    obj = _load_document(args)
    doc = {
        "command": "reformulate",
        "config": config.to_json(),
        "invert": bool(args.invert),
    }
    if args.invert:
        fam = family_from_json(obj, "input")
        try:
            p = inverse_reformulate(fam)
        except MembershipError as exc:
            raise JSONInputError("input", str(exc))
        doc.update({"n": fam.n, "d": fam.d, "poly": poly_to_json(p)})
    else:
        p = poly_from_json(obj, "input", analytic=True)
        try:
            fam = reformulate(p)
        except ValueError as exc:
            raise JSONInputError("input", str(exc))
        doc.update({
            "n": fam.n,
            "d": fam.d,
            "family": family_to_json(fam),
            "membership": [
                {
                    "level": r.level,
                    "image_ok": r.image_ok,
                    "printed_ok": r.printed_ok,
                    "agree": r.agree,
                }
                for r in fam.membership_reports()
            ],
        })
    return doc, 0


def _cmd_toeplitz_norm(args, config: RunConfig):
    fam = family_from_json(_load_document(args), "input")
    norm = toeplitz_norm(fam.symbols, config.torus_grid())
    doc = {
        "command": "toeplitz-norm",
        "config": config.to_json(),
        "n": fam.n,
        "d": fam.d,
        "norm": grid_value_to_json(norm),
    }
    return doc, 0


def _cmd_check_necessary(args, config: RunConfig):
    inst = _instance(_analytic_input(args))
    report = necessary_condition(inst, config.torus_grid(), config.tol)
    doc = {
        "command": "check-necessary",
        "config": config.to_json(),
        "n": inst.n,
        "d": inst.d,
        "toeplitz_norm": grid_value_to_json(report.toeplitz),
        "margin": report.margin,
        "ok": report.ok,
        "dmp_margin": (None if report.dmp_margin is None
                       else float(report.dmp_margin)),
        "agree": report.agree,
    }
    return doc, 0 if report.ok else 1


def _cmd_cf_extend(args, config: RunConfig):
    inst = _instance(_analytic_input(args))
    run = cf_extend(inst, config.max_order, config.torus_grid(), config.tol)
    steps = []
    for s in run.steps:
        steps.append({
            "order": s.order,
            "accepted": s.accepted,
            "unique": s.unique,
            "sampling_converged": s.sampling_converged,
            "image_ok": s.report.image_ok,
            "printed_ok": s.report.printed_ok,
            "offending_image": [list(a) for a in s.report.offending_image],
            "offending_printed": [list(a) for a in s.report.offending_printed],
            "norm_after": (None if s.norm_after is None
                           else grid_value_to_json(s.norm_after)),
            "candidate": poly_to_json(s.candidate),
        })
    doc = {
        "command": "cf-extend",
        "config": config.to_json(),
        "n": run.n,
        "target_order": run.target_order,
        "status": run.status,
        "definitive": run.definitive,
        "initial_norm": (None if run.initial_norm is None
                         else grid_value_to_json(run.initial_norm)),
        "extended_order": run.extended_order,
        "message": run.message,
        "steps": steps,
        "symbols": [poly_to_json(s) for s in run.symbols],
    }
    return doc, 0 if run.status == EXTENDED else 1


def _complex_pairs(seq):
    return None if seq is None else [[v.real, v.imag] for v in seq]


def _cmd_special_case(args, config: RunConfig):
    result = special_case_extend(
        args.alpha, args.beta, args.gamma, args.delta,
        order=config.max_order,
        grid=config.torus_grid(),
        tol=config.tol,
    )
    doc = {
        "command": "special-case",
        "config": config.to_json(),
        "case": result.case,
        "certified_bound": result.certified_bound,
        "sup_linear": grid_value_to_json(result.sup_linear),
        "prefactor_constant": _complex_pairs(result.seq_a),
        "prefactor_monomial": _complex_pairs(result.seq_b),
        "symbols": [poly_to_json(s) for s in result.symbols],
    }
    return doc, 0


def _cmd_parrott(args, config: RunConfig):
    obj = _load_document(args)
    if not isinstance(obj, dict):
        raise JSONInputError("input", "expected an object")
    for key in obj:
        if key not in ("a", "c", "d", "v"):
            raise JSONInputError(f"input.{key}", "unknown field")
    blocks = {}
    for key in ("a", "c", "d"):
        if key not in obj:
            raise JSONInputError(f"input.{key}", "missing")
        blocks[key] = matrix_from_json(obj[key], f"input.{key}")
    v = matrix_from_json(obj["v"], "input.v") if "v" in obj else None
    try:
        problem = ParrottProblem(blocks["a"], blocks["c"], blocks["d"])
    except ValueError as exc:
        raise JSONInputError("input", str(exc))
    solution = parrott_complete(problem, v=v, tol=config.tol)
    doc = {
        "command": "parrott",
        "config": config.to_json(),
        "x": matrix_to_json(solution.x),
        "norm": float(solution.norm),
        "unique": solution.unique,
        "defect_left_norm": op_norm(solution.factors.defect_left),
        "defect_right_norm": op_norm(solution.factors.defect_right),
    }
    return doc, 0


def _cmd_nehari_dist(args, config: RunConfig):
    phi = poly_from_json(_load_document(args), "input")
    if phi.nvars < 1:
        raise JSONInputError("input.nvars", "need at least one variable")
    depth = args.depth if args.depth is not None else natural_depth(phi)
    norm = hankel_norm(phi, config.torus_grid(), depth=depth)
    doc = {
        "command": "nehari-dist",
        "config": config.to_json(),
        "nvars": phi.nvars,
        "natural_depth": natural_depth(phi),
        "depth": depth,
        "norm": grid_value_to_json(norm),
        "slices": [
            {"index": j, "symbol": poly_to_json(slice_decompose(phi, j))}
            for j in slice_support(phi)
        ],
    }
    return doc, 0


def _cmd_kp_check(args, config: RunConfig):
    p = _analytic_input(args)
    if not p.vanishes_at_origin():
        raise JSONInputError("input", "the series must vanish at the origin")
    series = p if args.from_c else cayley_forward(p, config.depth)
    grid = config.torus_grid()
    rows = []
    positive = True
    for k in range(1, config.depth + 1):
        res = kp_positive(series, k, grid, config.tol)
        rows.append({
            "depth": k,
            "min_eig": float(res.min_eig),
            "converged": res.min_eig.converged,
            "positive": res.ok,
        })
        positive = positive and res.ok
    doc = {
        "command": "kp-check",
        "config": config.to_json(),
        "side": "c" if args.from_c else "a",
        "min_eigs": rows,
        "positive": positive,
    }
    return doc, 0 if positive else 1


def _cmd_kp_identity(args, config: RunConfig):
    seq = _coefficients(_load_document(args), "input")
    residual = schur_identity_check(seq)
    top = max(abs(v) for v in seq)
    bound = 1e-10 * (1.0 + top) ** len(seq)
    ok = residual <= bound
    doc = {
        "command": "kp-identity",
        "config": config.to_json(),
        "n": len(seq),
        "residual": residual,
        "bound": bound,
        "ok": ok,
    }
    return doc, 0 if ok else 1


def _cmd_selftest(args, config: RunConfig):
    from .acceptance import run_all

    results = run_all(config, progress=sys.stderr)
    doc = {
        "command": "selftest",
        "config": config.to_json(),
        "criteria": [
            {"name": r.name, "passed": r.passed, "details": r.details}
            for r in results
        ],
        "passed": all(r.passed for r in results),
    }
    return doc, 0 if doc["passed"] else 1


_HANDLERS = {
    "reformulate": _cmd_reformulate,
    "toeplitz-norm": _cmd_toeplitz_norm,
    "check-necessary": _cmd_check_necessary,
    "cf-extend": _cmd_cf_extend,
    "special-case": _cmd_special_case,
    "parrott": _cmd_parrott,
    "nehari-dist": _cmd_nehari_dist,
    "kp-check": _cmd_kp_check,
    "kp-identity": _cmd_kp_identity,
    "selftest": _cmd_selftest,
}


# ---------------------------------------------------------------------------
# argument parsing and dispatch


def _complex_arg(text: str) -> complex:
    try:
        return complex(text.replace(" ", ""))
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a complex number: {text!r}")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--grid", type=int, default=DEFAULT_GRID,
                        help="torus samples per axis (power of two, >= 64)")
    common.add_argument("--tol", type=float, default=DEFAULT_TOL,
                        help="contraction / verdict tolerance")
    common.add_argument("--max-order", type=int, default=DEFAULT_MAX_ORDER,
                        dest="max_order",
                        help="target order for extension commands")
    common.add_argument("--depth", type=int, default=None,
                        help="block depth for positivity / Hankel commands")
    common.add_argument("--seed", type=int, default=0,
                        help="seed for randomized self-test suites")

    parser = argparse.ArgumentParser(
        prog="cfpd",
        description=(
            "Solve and certify contractive polynomial extension problems on "
            "the polydisc."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, help_text: str, needs_input: bool = True):
        p = sub.add_parser(name, parents=[common], help=help_text)
        if needs_input:
            p.add_argument("input", nargs="?", default="-",
                           help="JSON document path, or - for standard input")
        return p

    p = add("reformulate",
            "convert a polynomial to its symbol family (or back)")
    p.add_argument("--invert", action="store_true",
                   help="read a symbol family and reassemble the polynomial")
    add("toeplitz-norm", "norm of the triangular matrix of a symbol family")
    add("check-necessary", "contraction screen for an extension instance")
    add("cf-extend", "run the level-by-level contractive extension")
    p = add("special-case",
            "closed-form extension for two-term product families",
            needs_input=False)
    for flag in ("alpha", "beta", "gamma", "delta"):
        p.add_argument(f"--{flag}", type=_complex_arg, required=True,
                       help=f"parameter {flag} (complex, e.g. 0.3+0.1j)")
    add("parrott", "one-corner contraction completion of dense blocks")
    add("nehari-dist", "Hankel norm and slice table of a torus symbol")
    p = add("kp-check", "block positivity of a power series, per depth")
    p.add_argument("--from-c", action="store_true", dest="from_c",
                   help="input already holds the transformed series")
    add("kp-identity", "residual of the finite Schur-complement identity")
    add("selftest", "run the acceptance suite", needs_input=False)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    config = None
    try:
        config = RunConfig(
            grid=args.grid,
            tol=args.tol,
            max_order=args.max_order,
            depth=args.depth if args.depth is not None else DEFAULT_DEPTH,
            seed=args.seed,
        )
        doc, code = _HANDLERS[args.command](args, config)
    except JSONInputError as exc:
        doc = {
            "command": args.command,
            "error": {"field": exc.field, "message": str(exc)},
        }
        code = 2
    except (HypothesisError, CompletionError) as exc:
        doc = {
            "command": args.command,
            "config": config.to_json() if config else None,
            "status": "failed",
            "reason": str(exc),
        }
        code = 1
    sys.stdout.write(render_json(doc))
    return code


if __name__ == "__main__":
    sys.exit(main())
