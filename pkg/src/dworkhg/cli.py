"""Command line front end: ``dworkhg eval | verify | report``.

Exit codes: 0 success, 1 verification failure or domain error, 2 usage or
config error.
"""

from __future__ import annotations

import argparse
import os
import sys
from fractions import Fraction
from pathlib import Path

from . import __version__
from .config import ConfigError, SweepConfig, bundled_config, load_config, parse_config
from .errors import DworkHGError, EmptyAdmissibleLocus, NonUnit, NotInDomain, ZeroInput
from .finite import field_for, finite_hg, fmt_complex
from .padic import FqSpec, build_witt_ring, default_modulus, parse_modulus, teichmuller
from .report import ReportDocument, emit_report, parse_report
from .series import HGParameter, dwork_eval, dwork_eval_f
from .verify import KINDS, run_sweep

OUTPUT_DIR_ENV = "DWORKHG_OUTPUT_DIR"

# failures of the mathematics at valid input; everything else is a usage error
DOMAIN_ERRORS = (NotInDomain, NonUnit, ZeroInput, EmptyAdmissibleLocus)


class UsageError(Exception):
    pass


def parse_point(text: str, p: int, n: int, modulus=None):
    """``teich:x`` (Teichmueller lift) or ``lift:x`` (least-residue lift).

    ``x`` is an integer for points of F_p, or a comma-separated coefficient
    vector against the modulus basis for points of F_{p^e}.
    """
    kind, _, body = text.partition(":")
    if kind not in ("teich", "lift") or not body:
        raise UsageError(f"point must look like teich:x or lift:x, got {text!r}")
    try:
        coeffs = [int(c) for c in body.split(",")]
    except ValueError:
        raise UsageError(f"bad point coordinates {body!r}") from None
    e = len(coeffs)
    spec = FqSpec(p, e, modulus if modulus is not None else default_modulus(p, e))
    if kind == "teich":
        if not any(c % p for c in coeffs):
            raise UsageError("the Teichmueller point must be nonzero mod p")
        return teichmuller(spec, tuple(coeffs), n)
    return build_witt_ring(spec, n).element(coeffs)


def _rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a rational: {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dworkhg",
        description="Dwork's p-adic hypergeometric function and its finite-field analogue.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    ev = sub.add_parser("eval", help="evaluate a single value")
    evsub = ev.add_subparsers(dest="what", required=True)
    dw = evsub.add_parser("dwork", help="F^Dw (or F^{Dw,f} with --f) at a unit point")
    dw.add_argument("--p", type=int, required=True)
    dw.add_argument("--a", type=_rational, required=True, help="rational r/N")
    dw.add_argument("--d", type=int, default=1)
    dw.add_argument("--prec", type=int, default=2, help="precision n (result mod p^n)")
    dw.add_argument("--f", type=int, default=1)
    dw.add_argument("--point", required=True, help="teich:x or lift:x")
    dw.add_argument("--modulus", help="coefficients of the F_q modulus, constant term first")
    dw.add_argument("--any-a", action="store_true", help="allow a outside (0, 1)")

    ff = evsub.add_parser("ffhg", help="finite-field hypergeometric function")
    ff.add_argument("--q", type=int, required=True)
    ff.add_argument("--alpha", type=int, action="append", required=True,
                    help="character exponent; repeat d+1 times")
    ff.add_argument("--beta", type=int, action="append", default=None,
                    help="character exponent; repeat d times (default: trivial)")
    ff.add_argument("--t", required=True, help="integer or coefficient vector")
    ff.add_argument("--modulus")

    ver = sub.add_parser("verify", help="run a verification sweep and write a report")
    ver.add_argument("--config", help="config file (default: bundled acceptance grid)")
    ver.add_argument("--format", choices=("json", "csv"))
    ver.add_argument("--out", help="report path")
    ver.add_argument("--workers", type=int, default=1)
    ver.add_argument("--seed", type=int)
    ver.add_argument("--samples", type=int)
    single = ver.add_argument_group("single case (instead of --config)")
    single.add_argument("--kind", choices=KINDS)
    single.add_argument("--p", type=int)
    single.add_argument("--q", type=int)
    single.add_argument("--a", type=_rational)
    single.add_argument("--d", type=int, default=1)
    single.add_argument("--f", type=int, default=1)
    single.add_argument("--prec", type=int, default=2)
    single.add_argument("--points", choices=("sample", "all"), default="sample")
    single.add_argument("--degree", type=int)

    rep = sub.add_parser("report", help="re-emit a saved JSON report")
    rep.add_argument("path")
    rep.add_argument("--format", choices=("json", "csv"), default="csv")
    rep.add_argument("--out", help="write here instead of stdout")
    return parser


def cmd_eval(args) -> int:
    if args.what == "dwork":
        modulus = parse_modulus(args.modulus) if args.modulus else None
        params = HGParameter(args.a, args.d, args.p, theorem_mode=not args.any_a)
        t0 = parse_point(args.point, args.p, args.prec, modulus)
        if args.f == 1:
            value = dwork_eval(params, t0, args.prec)
        else:
            value = dwork_eval_f(params, args.f, t0, args.prec)
        print(",".join(map(str, value.coeffs)))
        return 0
    field = field_for(args.q, parse_modulus(args.modulus) if args.modulus else None)
    d = len(args.alpha) - 1
    betas = args.beta if args.beta is not None else [0] * d
    if len(betas) != d:
        raise UsageError(f"need {d} --beta values for {d + 1} --alpha values")
    try:
        t = field.parse_element(args.t)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    print(fmt_complex(finite_hg(field, args.alpha, betas, t)))
    return 0


def _single_case_config(args) -> SweepConfig:
    kind = args.kind
    if kind in ("gs-identity", "finite-special", "finite-general"):
        if args.q is None:
            raise UsageError(f"--q is required for {kind}")
        block = {"kind": kind, "q": str(args.q), "d": str(args.d)}
    else:
        if args.p is None or (args.a is None and kind != "mod-p"):
            raise UsageError(f"--p and --a are required for {kind}")
        block = {"kind": kind, "p": str(args.p), "d": str(args.d), "n": str(args.prec),
                 "points": args.points}
        if args.a is not None:
            block["a"] = str(args.a)
        else:
            block["random_a"] = "20"
        if kind == "corollary":
            block["f"] = str(args.f)
        if args.degree is not None:
            block["degree"] = str(args.degree)
    text = "[cli]\n" + "".join(f"{k} = {v}\n" for k, v in block.items())
    return parse_config(text)


def _output_path(args, cfg: SweepConfig, fmt: str) -> Path:
    path = Path(args.out or cfg.output or f"report.{fmt}")
    outdir = os.environ.get(OUTPUT_DIR_ENV)
    if outdir:
        path = Path(outdir) / path.name
    return path


def cmd_verify(args) -> int:
    if args.kind is not None:
        if args.config:
            raise UsageError("give either --config or --kind, not both")
        cfg = _single_case_config(args)
    elif args.config:
        cfg = load_config(args.config)
    else:
        cfg = bundled_config("acceptance")
    seed = cfg.seed if args.seed is None else args.seed
    samples = cfg.samples if args.samples is None else args.samples
    fmt = args.format or cfg.format
    result = run_sweep(cfg.cases, seed=seed, samples=samples, workers=max(1, args.workers))
    echo = dict(cfg.echo, seed=seed, samples=samples)
    doc = ReportDocument.from_verification(result, echo)
    path = _output_path(args, cfg, fmt)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(emit_report(doc, fmt))
    failed = [c["case_id"] for c in doc.cases if not c["pass"]]
    skipped = sum(c["skipped"] for c in doc.cases)
    print(f"{len(doc.cases)} cases, {len(failed)} failed, {skipped} points skipped -> {path}")
    for cid in failed:
        print(f"FAIL {cid}")
    return 0 if doc.passed else 1


def cmd_report(args) -> int:
    try:
        doc = parse_report(Path(args.path).read_bytes())
    except (OSError, ValueError) as exc:
        raise UsageError(f"cannot read report {args.path}: {exc}") from None
    data = emit_report(doc, args.format)
    if args.out:
        Path(args.out).write_bytes(data)
    else:
        try:
            sys.stdout.write(data.decode("utf-8"))
            sys.stdout.flush()
        except BrokenPipeError:
            # reader went away (e.g. piped into head); silence the exit flush
            os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
    return 0 if doc.passed else 1


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "eval":
            return cmd_eval(args)
        if args.command == "verify":
            return cmd_verify(args)
        return cmd_report(args)
    except (UsageError, ConfigError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except DOMAIN_ERRORS as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    except (DworkHGError, ValueError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
