"""Command-line interface: construct, verify, search, decompose, projector.

Exit codes: 0 success, 1 negative verdict, 2 domain or parameter error,
3 I/O or parse error.
"""
import argparse
import json
import os
import sys

from . import jsonio
from .constructors import (
    mub_prime,
    mum_inball,
    random_rotate,
    sic_fixture,
    sim_inball,
    theorem3_design,
)
from .design import classify, verify
from .errors import (
    ConicalError,
    ConstructionUnavailableError,
    DimensionError,
    DomainError,
    InvalidProjectorError,
    NoDecompositionError,
    NotADesignError,
)
from .polytope import (
    centering_projector,
    cp_search,
    mub_block_projector,
    projector_violations,
    validate_projector,
)
from .werner import isotropic_state, symmetric_decomposition, werner_state

EXIT_OK, EXIT_NEGATIVE, EXIT_DOMAIN, EXIT_IO = 0, 1, 2, 3


def _err(msg):
    print(f"error: {msg}", file=sys.stderr)


def cmd_construct(args):
    d = args.dim
    try:
        if args.kind == "sic":
            design = sic_fixture(d)
        elif args.kind == "mub":
            design = mub_prime(d)
        elif args.kind == "sim":
            kappa = args.kappa if args.kappa is not None else 1.0 / (d - 1)
            design = sim_inball(d, kappa, args.trace)
        elif args.kind == "mum":
            kappa = args.kappa if args.kappa is not None else 1.0 / (d - 1)
            design = mum_inball(d, kappa)
        else:
            if not args.projector:
                raise DomainError("--projector is required for --kind theorem3")
            try:
                P, pd = jsonio.load_projector_matrix(args.projector)
            except (OSError, json.JSONDecodeError) as exc:
                _err(f"cannot read projector: {exc}")
                return EXIT_IO
            if pd != d:
                raise DomainError(f"projector dimension {pd} does not match --dim {d}")
            t = args.trace if args.trace is not None else 1.0 / d
            design = theorem3_design(validate_projector(P, d), t)
        if args.seed is not None:
            design = random_rotate(design, args.seed)
    except (DomainError, DimensionError, InvalidProjectorError, NotADesignError) as exc:
        _err(str(exc))
        return EXIT_DOMAIN
    params = {"kappa": args.kappa, "trace": args.trace, "projector": args.projector}
    data = jsonio.design_to_dict(
        design, kind=args.kind, generator=f"construct --kind {args.kind}", seed=args.seed, params=params
    )
    try:
        jsonio.write_json(data, args.output)
    except OSError as exc:
        _err(str(exc))
        return EXIT_IO
    print(f"wrote {design.m} operators (d={design.dim}, kind={args.kind}) to {args.output}")
    return EXIT_OK


def cmd_verify(args):
    try:
        stack = jsonio.operators_from_dict(jsonio.read_json(args.design))
        report = verify(stack, tol=args.tol, unitary_samples=args.unitary_samples)
    except (OSError, json.JSONDecodeError, ConicalError) as exc:
        _err(f"cannot verify {args.design}: {exc}")
        return EXIT_IO
    if args.json:
        sys.stdout.write(jsonio.dumps(report.to_dict()))
    else:
        print(f"is_design: {report.is_design}")
        for key, value in report.residuals.items():
            print(f"  {key}: {value:.3e}")
        print(f"  k_s = {report.fitted['k_s']:.10g}")
        print(f"  k_a = {report.fitted['k_a']:.10g}")
        print(f"  spanning: {report.spanning}  cardinality_ok: {report.cardinality_ok}  psd: {report.psd_ok}")
        if report.parameters is not None:
            p = report.parameters
            print(f"  t = {p.t:.10g}  kappa = {p.kappa:.10g}")
            c = classify(stack, tol=args.tol)
            print(
                f"  homogeneous={c.homogeneous} projective={c.projective} "
                f"sim={c.sim} mum_compatible={c.mum_compatible}"
            )
    return EXIT_OK if report.is_design else EXIT_NEGATIVE


def cmd_search(args):
    try:
        P, d = jsonio.load_projector_matrix(args.projector)
    except (OSError, json.JSONDecodeError, DomainError) as exc:
        _err(f"cannot read projector: {exc}")
        return EXIT_IO
    problems = projector_violations(P, d)
    if problems:
        _err("invalid projector:")
        for problem in problems:
            print(f"  {problem}", file=sys.stderr)
        return EXIT_DOMAIN
    result = cp_search(
        validate_projector(P, d),
        restarts=args.restarts,
        max_iters=args.iters,
        seed=args.seed,
        softmin=args.softmin,
        n_jobs=args.threads,
    )
    try:
        jsonio.write_json(result.to_dict(), args.output)
    except OSError as exc:
        _err(str(exc))
        return EXIT_IO
    print(f"best_kappa = {result.best_kappa:.12g}")
    print(f"floor = 1/(d-1) = {result.floor:.12g}")
    print(f"restarts = {result.restarts_run}, gram residual = {result.residual:.3e}")
    return EXIT_OK


def cmd_decompose(args):
    try:
        source = jsonio.load_design(args.design) if args.design else None
    except (OSError, json.JSONDecodeError) as exc:
        _err(f"cannot read design: {exc}")
        return EXIT_IO
    except ConicalError as exc:
        _err(f"malformed design: {exc}")
        return EXIT_IO
    try:
        if args.family == "werner":
            target = werner_state(args.dim, args.param)
        else:
            target = isotropic_state(args.dim, args.param)
        report = symmetric_decomposition(target, source)
    except NoDecompositionError as exc:
        _err(str(exc))
        return EXIT_NEGATIVE
    except (ConstructionUnavailableError, DomainError, DimensionError, NotADesignError) as exc:
        _err(str(exc))
        return EXIT_DOMAIN
    try:
        jsonio.write_json(report.to_dict(), args.output)
    except OSError as exc:
        _err(str(exc))
        return EXIT_IO
    print(f"{args.family} d={args.dim} parameter={args.param:g}: {len(report.weights)} terms via {report.source}")
    print(f"kappa = {report.kappa:.12g}, residual = {report.residual:.3e}")
    print(", ".join(f"{k}={v}" for k, v in report.flags.items()))
    if args.family == "isotropic":
        print(f"mapped to werner p = {(1 - args.dim * args.param) / 2:.12g}")
    return EXIT_OK


def cmd_projector(args):
    try:
        P = centering_projector(args.dim**2) if args.kind == "centering" else mub_block_projector(args.dim)
    except DimensionError as exc:
        _err(str(exc))
        return EXIT_DOMAIN
    try:
        jsonio.write_json(jsonio.projector_to_dict(P, args.dim), args.output)
    except OSError as exc:
        _err(str(exc))
        return EXIT_IO
    print(f"wrote {P.shape[0]}x{P.shape[0]} {args.kind} projector (d={args.dim}) to {args.output}")
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(prog="conical", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("construct", help="build a design and write it as JSON")
    p.add_argument("--kind", required=True, choices=["sim", "mum", "mub", "sic", "theorem3"])
    p.add_argument("--dim", required=True, type=int)
    p.add_argument("--kappa", type=float)
    p.add_argument("--trace", type=float)
    p.add_argument("--projector")
    p.add_argument("--seed", type=int)
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("verify", help="check a design file")
    p.add_argument("design")
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--unitary-samples", type=int, default=20)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("search", help="lower-bound the contraction parameter of a projector")
    p.add_argument("--projector", required=True)
    p.add_argument("--restarts", type=int, default=32)
    p.add_argument("--iters", type=int, default=500)
    p.add_argument("--seed", type=int, default=7)
    p.add_argument("--softmin", type=float)
    p.add_argument("--threads", type=int, default=os.cpu_count() or 1)
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("decompose", help="symmetric decomposition of a Werner or isotropic state")
    p.add_argument("--family", required=True, choices=["werner", "isotropic"])
    p.add_argument("--dim", required=True, type=int)
    p.add_argument("--param", required=True, type=float)
    p.add_argument("--design")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("projector", help="write a canonical design projector")
    p.add_argument("--kind", required=True, choices=["centering", "mub"])
    p.add_argument("--dim", required=True, type=int)
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_projector)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
