"""Command-line front end.

Input is plain text, one coefficient per line in ascending degree order,
written ``re [im]`` in decimal or scientific notation; ``#`` starts a
comment.  Output is JSON lines: a header record followed by one record per
root, interval or radius.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

import gmpy2

from .grid import FinderConfig, find_roots
from .poly import INPUT_BITS, Polynomial
from .precision import PrecisionContext, PrecisionExhausted
from .radii import estimate_radii
from .real_roots import real_root_intervals
from .refine import refine_interval, refine_report

EXIT_OK, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def read_polynomial(lines, bits: int = INPUT_BITS) -> Polynomial:
    coeffs = []
    with gmpy2.context(gmpy2.get_context(), precision=bits):
        for lineno, raw in enumerate(lines, 1):
            text = raw.split("#", 1)[0].strip()
            if not text:
                continue
            parts = text.split()
            if len(parts) > 2:
                raise UsageError(f"line {lineno}: expected 're [im]', got {raw.strip()!r}")
            try:
                re = gmpy2.mpfr(parts[0])
                im = gmpy2.mpfr(parts[1]) if len(parts) == 2 else gmpy2.mpfr(0)
            except ValueError:
                raise UsageError(f"line {lineno}: cannot parse {raw.strip()!r} as a coefficient") from None
            if not (gmpy2.is_finite(re) and gmpy2.is_finite(im)):
                raise UsageError(f"line {lineno}: coefficient must be finite")
            coeffs.append(gmpy2.mpc(re, im))
    if not coeffs:
        raise UsageError("input holds no coefficients")
    if gmpy2.is_zero(coeffs[-1]):
        raise UsageError("leading (last) coefficient must be nonzero")
    return Polynomial(tuple(coeffs))


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="annulus-roots", description=__doc__.splitlines()[0])
    ap.add_argument("input", help="coefficient file, or - for stdin")
    ap.add_argument("--mode", choices=("complex", "clusters", "real", "radii"), default="complex")
    ap.add_argument("--rho", type=float, default=1e-3, help="target resolution (default 1e-3)")
    ap.add_argument("--epsilon", type=float, default=0.01, help="failure probability budget")
    ap.add_argument("--theta", type=float, default=1.05, help="relative factor for --mode radii")
    ap.add_argument("--eta", type=float, default=100.0, help="shift multiplier (>= 100)")
    ap.add_argument("--seed", type=int, default=None)
    ap.add_argument("--precision-bits", type=int, default=None)
    ap.add_argument("--refine", action=argparse.BooleanOptionalAction, default=True)
    ap.add_argument("--tol", type=float, default=1e-20, help="Newton step tolerance")
    ap.add_argument("--delta-iso", type=float, default=None, help="isolation used for the reported failure bound")
    ap.add_argument("--output", default=None, help="write records here instead of stdout")
    ap.add_argument("--dump-geometry", default=None, metavar="PATH", help="write annuli and nodes as JSON")
    ap.add_argument("--timing", action="store_true", help="add wall_time_ms to the header")
    return ap


def _f(x):
    return float(x)


def _geometry(report) -> dict:
    fams = []
    for name, fam in zip(("vertical", "horizontal", "diagonal"), report.families):
        fams.append(
            {
                "family": name,
                "center": [_f(fam.center.real), _f(fam.center.imag)],
                "annuli": [[_f(a.radius), _f(a.half_width), a.multiplicity] for a in fam.annuli],
            }
        )
    nodes = [
        {"re": _f(n.center.real), "im": _f(n.center.imag), "half_side": _f(n.half_side), "multiplicity": n.multiplicity}
        for n in report.nodes
    ]
    return {"phi": report.angle_used, "r1plus": report.r1plus, "families": fams, "nodes": nodes}


def _records(args, p: Polynomial, ctx: PrecisionContext):
    n = p.degree
    if args.mode == "radii":
        est = estimate_radii(p, args.theta, ctx)
        yield {"mode": "radii", "n": n, "theta": args.theta, "precision_bits": ctx.bits}
        for r in est.radii:
            yield {"radius": _f(r)}
        return
    if args.mode == "real":
        intervals = real_root_intervals(p, args.rho, ctx)
        yield {"mode": "real", "n": n, "rho": args.rho, "intervals": len(intervals), "precision_bits": ctx.bits}
        for iv in intervals:
            rec = {"lo": _f(iv.lo), "hi": _f(iv.hi), "multiplicity": iv.multiplicity_hint}
            if args.refine:
                res = refine_interval(p, iv, args.tol, ctx=ctx)
                rec["root"] = None if res is None else _f(res.z.real)
            yield rec
        return
    cfg = FinderConfig(
        rho=args.rho,
        epsilon=args.epsilon,
        eta=args.eta,
        seed=args.seed,
        ctx=ctx,
        clusters=args.mode == "clusters",
        delta_iso=args.delta_iso,
    )
    report = find_roots(p, cfg, keep_geometry=bool(args.dump_geometry))
    if args.refine:
        report = refine_report(p, report, args.tol, ctx=ctx)
    if args.dump_geometry:
        with open(args.dump_geometry, "w") as fh:
            json.dump(_geometry(report), fh)
    yield {
        "mode": args.mode,
        "n": n,
        "rho": report.rho,
        "epsilon": report.epsilon,
        "eta": report.eta_used,
        "phi": report.angle_used,
        "seed": report.seed,
        "delta": report.delta,
        "failure_bound": report.failure_bound,
        "nodes_total": report.nodes_total,
        "precision_bits": ctx.bits,
    }
    for a in report.approximations:
        yield {
            "re": _f(a.point.real),
            "im": _f(a.point.imag),
            "multiplicity": a.multiplicity,
            "error_radius": _f(a.radius),
            "residual": a.residual,
        }


def _validate(args):
    if not args.rho > 0:
        raise UsageError("--rho must be positive")
    if not 0 < args.epsilon < 1:
        raise UsageError("--epsilon must lie in (0, 1)")
    if not args.theta > 1:
        raise UsageError("--theta must exceed 1")
    if not args.eta >= 100:
        raise UsageError("--eta must be at least 100")
    if args.precision_bits is not None and args.precision_bits < 64:
        raise UsageError("--precision-bits must be at least 64")
    if args.delta_iso is not None and not args.delta_iso > 2 * args.rho:
        raise UsageError("--delta-iso must exceed 2*rho")


def run(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        _validate(args)
        bits = max(INPUT_BITS, args.precision_bits or 0)
        if args.input == "-":
            p = read_polynomial(sys.stdin, bits)
        else:
            try:
                with open(args.input) as fh:
                    p = read_polynomial(fh, bits)
            except OSError as exc:
                raise UsageError(f"cannot read {args.input}: {exc.strerror}") from None
        if p.degree < 1 and args.mode != "radii":
            raise UsageError("polynomial must have degree >= 1")
        if args.mode == "real" and not p.is_real():
            raise UsageError("--mode real needs real coefficients")
        ctx = PrecisionContext(args.precision_bits) if args.precision_bits else PrecisionContext.for_polynomial(p)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return EXIT_OK if not exc.code else EXIT_USAGE
    except ValueError as exc:
        print(f"annulus-roots: {exc}", file=sys.stderr)
        return EXIT_USAGE

    start = time.perf_counter()
    try:
        records = list(_records(args, p, ctx))
    except (PrecisionExhausted, ArithmeticError, ValueError) as exc:
        print(f"annulus-roots: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    if args.timing:
        records[0]["wall_time_ms"] = round(1000 * (time.perf_counter() - start), 3)
    text = "".join(json.dumps(r) + "\n" for r in records)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
