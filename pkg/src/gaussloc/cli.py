"""Command-line interface (``gle``).

Exit codes: 0 success, 1 usage error, 2 validation failure, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import fock
from .entanglement import Measure
from .errors import (
    DimensionError, DomainError, GaussLocError, GridSizeError, NumericalRankError,
    PhysicalityError, PurityError,
)
from .gaussian_core import tmsv_split_state, two_mode_squeezed, vacuum
from .io import StateFileError, dumps_state, load_state, loads_state
from .localize import (
    DEFAULT_THETA_STEPS, SymmetricStateSpec, decompose_three_mode, grid_oracle,
    optimize_multimode_pure, optimize_symmetric, optimize_three_mode, symmetric_reduced_state,
)

EXIT_OK, EXIT_USAGE, EXIT_VALIDATION, EXIT_NUMERICAL = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _kept(text: str) -> tuple:
    try:
        kept = tuple(int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected two comma-separated indices, got {text!r}")
    if len(kept) != 2:
        raise argparse.ArgumentTypeError("--kept needs exactly two mode indices")
    return kept


def _symmetric(text: str) -> tuple:
    try:
        n, b, e1, e2 = text.split(",")
        return int(n), float(b), float(e1), float(e2)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected N,b,eps1,eps2, got {text!r}")


def _r_values(args) -> tuple:
    if args.r_step <= 0 or args.r_max < 0:
        raise UsageError("--r-step must be positive and --r-max non-negative")
    return tuple(np.arange(0.0, args.r_max + 1e-9 * args.r_step, args.r_step))


def _emit(text: str, out) -> None:
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _json(doc) -> str:
    return json.dumps(doc, indent=2) + "\n"


def _spec_of(args, meta):
    if getattr(args, "symmetric", None):
        return SymmetricStateSpec(*args.symmetric)
    if meta and "symmetric" in meta:
        d = meta["symmetric"]
        return SymmetricStateSpec(int(d["n"]), float(d["b"]), float(d["eps1"]), float(d["eps2"]))
    return None


def _load(args):
    if args.state is None:
        return None, {}
    return load_state(args.state)


# --- commands -----------------------------------------------------------------

def cmd_gen(args) -> int:
    extra = None
    if args.kind == "vacuum":
        state = vacuum(args.modes)
    elif args.kind == "tmsv":
        state = two_mode_squeezed(args.lam)
    elif args.kind == "fig3":
        state = tmsv_split_state(args.lam)
    else:
        if not args.symmetric:
            raise UsageError("gen symmetric needs --symmetric N,b,eps1,eps2")
        spec = SymmetricStateSpec(*args.symmetric)
        state = spec.assemble()
        extra = {"symmetric": spec.to_json()}
    _emit(dumps_state(state, extra), args.out)
    return EXIT_OK


def cmd_validate(args) -> int:
    text = open(args.state).read() if args.state != "-" else sys.stdin.read()
    state, _ = loads_state(text, args.state, check_physical=False)
    cm = state.cm
    nu = state.symplectic_eigenvalues()
    physical = state.is_physical()
    pure = physical and state.is_pure()
    verdict = "pure" if pure else ("mixed" if physical else "unphysical")
    residual = float(np.max(np.abs(cm - cm.T)))
    report = {
        "modes": state.n_modes,
        "symmetry_residual": residual,
        "symplectic_eigenvalues": [float(v) for v in nu],
        "physical": bool(physical),
        "pure": bool(pure),
        "verdict": verdict,
    }
    if args.format == "json":
        _emit(_json(report), args.out)
    else:
        nus = ",".join(format(v, ".12g") for v in nu)
        _emit(f"{verdict}, nu=[{nus}], symmetry residual {residual:.3g}\n", args.out)
    return EXIT_OK if physical else EXIT_VALIDATION


def _analytic(state, kept, args, meta):
    spec = _spec_of(args, meta)
    method = args.method
    if method == "auto":
        if spec is not None:
            method = "symmetric"
        elif state is not None and state.is_pure(1e-8) and state.n_modes >= 3:
            method = "three-mode" if state.n_modes == 3 else "multimode"
        else:
            method = "oracle"
    if method == "symmetric":
        if spec is None:
            raise UsageError("symmetric method needs --symmetric N,b,eps1,eps2 or a symmetric state file")
        if state is not None:
            if state.n_modes != spec.n or np.max(np.abs(state.cm - spec.assemble().cm)) > 1e-9:
                raise PhysicalityError("state file does not match its symmetric parameters")
        return optimize_symmetric(spec, kept), spec
    if state is None:
        raise UsageError("--state is required for this method")
    if method == "three-mode":
        if state.n_modes != 3:
            raise PurityError(f"three-mode method needs exactly 3 modes, state has {state.n_modes}")
        return optimize_three_mode(decompose_three_mode(state, kept)), None
    if method == "multimode":
        return optimize_multimode_pure(state, kept, seed=args.seed), None
    return None, None


def _oracle(state, kept, args, spec):
    r_values = _r_values(args)
    if spec is not None:
        # symmetric states: search on the reduced three-mode model
        return grid_oracle(symmetric_reduced_state(spec), (0, 1), Measure.LOG_NEGATIVITY,
                           args.theta_steps, r_values)
    return grid_oracle(state, kept, None, args.theta_steps, r_values)


def cmd_localize(args) -> int:
    state, meta = _load(args)
    kept = args.kept
    result, spec = _analytic(state, kept, args, meta)
    if result is None:
        result = _oracle(state, kept, args, spec)
    doc = result.to_json()
    if args.format == "json":
        _emit(_json(doc), args.out)
    else:
        meas = ";".join(
            f"{m['mode']}:{m['kind']}:{m['theta']:.12g}" for m in doc["optimal_measurements"])
        _emit("method,measure,value,measurements\n"
              f"{doc['method']},{doc['measure']},{doc['value']:.12g},{meas}\n", args.out)
    return EXIT_OK


def cmd_oracle_compare(args) -> int:
    state, meta = _load(args)
    kept = args.kept
    args.method = "auto"
    analytic, spec = _analytic(state, kept, args, meta)
    oracle = _oracle(state, kept, args, spec)
    doc = {
        "method": analytic.method.value if analytic else None,
        "measure": oracle.measure.value,
        "analytic": analytic.value if analytic else None,
        "oracle": oracle.value,
        "gap": (analytic.value - oracle.value) if analytic else None,
    }
    _emit(_json(doc), args.out)
    return EXIT_OK


def cmd_curve_fig3(args) -> int:
    lo, hi = args.lambda_min, args.lambda_max
    if not (0.0 <= lo < hi < 1.0) or args.steps < 2:
        raise UsageError("need 0 <= lambda-min < lambda-max < 1 and steps >= 2")
    rows = fock.curve_fig3(np.linspace(lo, hi, args.steps), args.cutoff)
    if args.format == "json":
        _emit(_json([{"lambda": r[0], "E_LG": r[1], "E_LNG": r[2]} for r in rows.tolist()]), args.out)
    else:
        lines = ["lambda,E_LG,E_LNG"]
        lines += [",".join(format(v, ".12g") for v in r) for r in rows]
        _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK


# --- parser ---------------------------------------------------------------------

def _grid_flags(p):
    p.add_argument("--theta-steps", type=int, default=DEFAULT_THETA_STEPS,
                   help="phase grid points in [0, pi) (default 180)")
    p.add_argument("--r-max", type=float, default=6.0, help="largest projector squeezing (default 6)")
    p.add_argument("--r-step", type=float, default=0.5, help="squeezing grid step (default 0.5)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="gle", description="Gaussian localizable entanglement toolkit")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    common = _Parser(add_help=False)
    common.add_argument("--out", help="output path (default stdout)")
    common.add_argument("--format", choices=("json", "csv"), default=None)
    common.add_argument("--seed", type=int, default=0, help="seed for phase-search restarts")

    p = sub.add_parser("gen", parents=[common], help="emit a canonical test state")
    p.add_argument("kind", choices=("vacuum", "tmsv", "fig3", "symmetric"))
    p.add_argument("--modes", type=int, default=1)
    p.add_argument("--lambda", dest="lam", type=float, default=0.5)
    p.add_argument("--symmetric", type=_symmetric, metavar="N,b,eps1,eps2")
    p.set_defaults(func=cmd_gen, fmt_default="json")

    p = sub.add_parser("validate", parents=[common], help="check symmetry and physicality")
    p.add_argument("--state", required=True)
    p.set_defaults(func=cmd_validate, fmt_default="text")

    p = sub.add_parser("localize", parents=[common], help="optimal localizing measurements")
    p.add_argument("--state")
    p.add_argument("--kept", type=_kept, default=(0, 1), metavar="i,j")
    p.add_argument("--method", default="auto",
                   choices=("auto", "three-mode", "multimode", "symmetric", "oracle"))
    p.add_argument("--symmetric", type=_symmetric, metavar="N,b,eps1,eps2")
    _grid_flags(p)
    p.set_defaults(func=cmd_localize, fmt_default="json")

    p = sub.add_parser("oracle-compare", parents=[common], help="analytic optimum vs grid search")
    p.add_argument("--state")
    p.add_argument("--kept", type=_kept, default=(0, 1), metavar="i,j")
    p.add_argument("--symmetric", type=_symmetric, metavar="N,b,eps1,eps2")
    _grid_flags(p)
    p.set_defaults(func=cmd_oracle_compare, fmt_default="json")

    p = sub.add_parser("curve-fig3", parents=[common],
                       help="Gaussian vs photon-counting localizable entanglement curve")
    p.add_argument("--lambda-min", type=float, default=0.0)
    p.add_argument("--lambda-max", type=float, default=0.99)
    p.add_argument("--steps", type=int, default=100)
    p.add_argument("--cutoff", type=int, default=None, help="photon-number cutoff (default: auto)")
    p.set_defaults(func=cmd_curve_fig3, fmt_default="csv")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.format is None:
        args.format = args.fmt_default
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"gle: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (GridSizeError, DimensionError, DomainError) as exc:
        print(f"gle: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (StateFileError, PhysicalityError, PurityError) as exc:
        print(f"gle: validation failed: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except (NumericalRankError, ArithmeticError, np.linalg.LinAlgError) as exc:
        print(f"gle: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except GaussLocError as exc:
        print(f"gle: error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except OSError as exc:
        print(f"gle: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
