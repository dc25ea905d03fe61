"""Command-line front end: construct -> check -> trace -> frame-test.

Exit codes: 0 all pass, 1 any fail, 2 any uncertain/inconclusive (parse and
validation errors also exit 2 after printing the location/invariant).
All randomness is seeded (default 0x5EED); outputs are canonical JSON / CSV,
so reruns with the same inputs are byte-identical.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from pathlib import Path

from . import __version__
from .construction import (SpectralSpec, build_family, build_wavelets,
                           classify_waveletset_seed, example_by_name,
                           waveletset_sigma, ClosureDidNotStabilize)
from .frametest import TestSignal, frame_energy
from .intervals import union_all
from .rationals import as_fraction
from .sequences import Sequence
from .serialize import (ParseError, digest_of, dumps_canonical,
                        family_from_jsonable, family_to_jsonable,
                        loads_json, pwl_from_jsonable, sets_from_jsonable)
from .trace import (default_grid, dimension_function, restricted_trace,
                    spectral_function, GRID_SEED)
from .verification import (VerificationReport, check_decay, check_density,
                           check_ntf_multiwavelet, check_semiorthogonal,
                           check_split, check_sufficiency,
                           check_wavelet_set_tiling, family_grid)

SUITES = ("ntf", "split", "decay", "sufficiency", "density", "semiorth")


def _write(path: str, text: str) -> None:
    Path(path).write_text(text, encoding="utf-8")


def _load_family(path: str):
    obj = loads_json(Path(path).read_text(encoding="utf-8"), path)
    return family_from_jsonable(obj)


def _exit_code(status: str) -> int:
    return {"pass": 0, "fail": 1}.get(status, 2)


def cmd_construct(args) -> int:
    if args.example:
        spec = example_by_name(args.example)
        if args.a is not None:
            spec = SpectralSpec(spec.sigma, args.a)
        source = {"example": args.example, "dilation": spec.dilation}
    elif args.sigma:
        obj = loads_json(Path(args.sigma).read_text(encoding="utf-8"), args.sigma)
        if isinstance(obj, dict) and "sigma" in obj:
            sigma = pwl_from_jsonable(obj["sigma"], "sigma")
            dilation = args.a if args.a is not None else int(obj.get("dilation", 2))
        else:
            sigma = pwl_from_jsonable(obj, "sigma")
            dilation = args.a if args.a is not None else 2
        spec = SpectralSpec(sigma, dilation)
        source = {"sigma_file": obj, "dilation": dilation}
    else:
        print("construct: need --example or --sigma", file=sys.stderr)
        return 2
    scaling = build_family(spec, partition=args.partition)
    scaling, wavelets = scaling
    payload = family_to_jsonable(scaling, wavelets, digest_of(source))
    _write(args.out, dumps_canonical(payload))
    print(f"family with {len(wavelets.psis)} wavelet profile(s) and "
          f"{len(scaling.phis)} scaling window(s) -> {args.out}")
    return 0


def cmd_check(args) -> int:
    scaling, wavelets = _load_family(args.family)
    names = [s.strip() for s in args.suite.split(",") if s.strip()]
    for n in names:
        if n not in SUITES:
            print(f"check: unknown suite {n!r} (choose from {','.join(SUITES)})",
                  file=sys.stderr)
            return 2
    grid = family_grid(scaling.generator_set(), wavelets.generator_set(),
                       seed=args.seed)
    report = VerificationReport()
    for n in names:
        if n == "ntf":
            report.merge(check_ntf_multiwavelet(wavelets, grid=grid), "ntf:")
        elif n == "split":
            report.merge(check_split(scaling, wavelets, grid), "split:")
        elif n == "decay":
            report.merge(check_decay(scaling, wavelets, grid), "decay:")
        elif n == "sufficiency":
            report.merge(check_sufficiency(scaling, wavelets, grid), "sufficiency:")
        elif n == "density":
            report.merge(check_density(scaling, grid), "density:")
        elif n == "semiorth":
            report.merge(check_semiorthogonal(wavelets), "semiorth:")
    payload = report.to_jsonable()
    payload["suite"] = names
    if args.out:
        _write(args.out, dumps_canonical(payload))
    print(f"check: {report.status} ({len(report.checks)} checks)")
    return _exit_code(report.status)


def cmd_check_waveletset(args) -> int:
    obj = loads_json(Path(args.E).read_text(encoding="utf-8"), args.E)
    sets = sets_from_jsonable(obj)
    report = check_wavelet_set_tiling(sets, args.a, as_fraction(args.window),
                                      args.jrange)
    if args.out:
        _write(args.out, dumps_canonical(report.to_jsonable()))
    print(f"check-waveletset: {report.status}")
    return _exit_code(report.status)


def cmd_waveletset(args) -> int:
    obj = loads_json(Path(args.E).read_text(encoding="utf-8"), args.E)
    sets = sets_from_jsonable(obj)
    union = union_all(sets)
    if args.classify:
        cls = classify_waveletset_seed(union, args.a)
        print(f"{cls.verdict}: {cls.reason}")
        return 0 if cls.verdict != "not_admissible" else 1
    try:
        sigma = waveletset_sigma(union, args.a, args.budget)
    except ClosureDidNotStabilize as e:
        print(f"waveletset: {e}", file=sys.stderr)
        return 1
    spec = SpectralSpec(sigma, args.a)
    scaling, wavelets = build_family(spec)
    if args.out:
        payload = family_to_jsonable(scaling, wavelets,
                                     digest_of({"E": [list(map(str, p)) for s in sets for p in s.pieces],
                                                "dilation": args.a}))
        _write(args.out, dumps_canonical(payload))
    print(f"wavelet-set family with {len(wavelets.psis)} profile(s)"
          + (f" -> {args.out}" if args.out else ""))
    return 0


def cmd_trace(args) -> int:
    scaling, wavelets = _load_family(args.family)
    f = Sequence.parse(args.f)
    gen = scaling.generator_set()
    if args.grid == "auto":
        grid = family_grid(gen, wavelets.generator_set(), seed=args.seed)
    else:
        n = int(args.grid)
        lo, hi = gen.support_hull()
        if hi <= lo:
            lo, hi = Fraction(-1), Fraction(1)
        grid = [lo + (hi - lo) * Fraction(i, n) for i in range(n)]
    lines = ["xi,spectral,dim,tau_f"]
    for xi in grid:
        spectral = float(spectral_function(gen, xi))
        dim = float(dimension_function(gen, xi))
        tau = float(restricted_trace(gen, f, xi).enclosure().mid())
        lines.append(f"{float(xi)!r},{spectral!r},{dim!r},{tau!r}")
    _write(args.out, "\n".join(lines) + "\n")
    print(f"trace: {len(grid)} rows -> {args.out}")
    return 0


def cmd_frame_test(args) -> int:
    scaling, wavelets = _load_family(args.family)
    signal = TestSignal.parse(args.signal)
    report = frame_energy(signal, wavelets, j_min=args.jmin, j_max=args.jmax,
                          k_tail_target=args.ktail, k_budget=args.kbudget)
    payload = report.to_jsonable()
    payload["signal"] = signal.label
    payload["tolerance"] = args.tol
    within = abs(report.ratio - 1.0) <= args.tol
    payload["within_tolerance"] = within
    if args.out:
        _write(args.out, dumps_canonical(payload))
    print(f"frame-test: ratio {report.ratio:.8f} "
          f"(tail estimate {report.tail_estimate:.3g})"
          + (" [inconclusive]" if report.inconclusive else ""))
    if report.inconclusive:
        return 2
    return 0 if within else 1


def cmd_sample(args) -> int:
    scaling, wavelets = _load_family(args.family)
    hull_lo, hull_hi = wavelets.generator_set().support_hull()
    if hull_hi <= hull_lo:
        hull_lo, hull_hi = Fraction(-1), Fraction(1)
    n = int(args.grid)
    header = ["xi"] + [f"psi_hat_{i}" for i in range(len(wavelets.psis))] + ["sigma"]
    lines = [",".join(header)]
    for i in range(n):
        xi = hull_lo + (hull_hi - hull_lo) * Fraction(i, n)
        row = [repr(float(xi))]
        for psi in wavelets.psis:
            row.append(repr(float(psi.value_sq(xi)) ** 0.5))
        row.append(repr(float(wavelets.sigma.eval(xi))))
        lines.append(",".join(row))
    _write(args.out, "\n".join(lines) + "\n")
    print(f"sample: {n} rows -> {args.out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="framesmith",
        description=(
            "Construct normalized-tight-frame wavelet families from spectral "
            "profiles (exact rational arithmetic in units of pi) and verify "
            "the characterization identities."))
    p.add_argument("--version", action="version", version=f"framesmith {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("construct", help="build a family from a spectral profile")
    c.add_argument("--sigma", help="JSON file: {sigma: <pwl>, dilation: a}")
    c.add_argument("--example", help="built-in: shannon | journe | pwl:a=1/2,b=1/2")
    c.add_argument("--a", type=int, default=None, help="integer dilation, |a| >= 2")
    c.add_argument("--partition", choices=("greedy", "windows"), default="greedy",
                   help="layer rule: greedy multiplicity peeling (default) or "
                        "fundamental-window intersection")
    c.add_argument("--out", required=True)
    c.set_defaults(func=cmd_construct)

    k = sub.add_parser("check", help="run verification suites on a family file")
    k.add_argument("--family", required=True)
    k.add_argument("--suite", default=",".join(SUITES),
                   help=f"comma list from {','.join(SUITES)}")
    k.add_argument("--seed", type=int, default=GRID_SEED)
    k.add_argument("--out")
    k.set_defaults(func=cmd_check)

    w = sub.add_parser("check-waveletset", help="tiling checks for wavelet sets")
    w.add_argument("--E", required=True, help="JSON interval set(s)")
    w.add_argument("--a", type=int, default=2)
    w.add_argument("--window", default="64", help="half-width W (pi units)")
    w.add_argument("--jrange", type=int, default=24)
    w.add_argument("--out")
    w.set_defaults(func=cmd_check_waveletset)

    ws = sub.add_parser("waveletset", help="build sigma = chi_E family from a "
                                           "wavelet set, or classify a seed")
    ws.add_argument("--E", required=True, help="JSON interval set(s)")
    ws.add_argument("--a", type=int, default=2)
    ws.add_argument("--classify", action="store_true",
                    help="treat E as the sigma-support seed and classify it")
    ws.add_argument("--budget", type=int, default=64)
    ws.add_argument("--out")
    ws.set_defaults(func=cmd_waveletset)

    t = sub.add_parser("trace", help="CSV of spectral/dimension/restricted trace")
    t.add_argument("--family", required=True)
    t.add_argument("--f", default="1@0", help='sequence, e.g. "1@0,1@1" or "i@2"')
    t.add_argument("--grid", default="auto", help='"auto" or a point count')
    t.add_argument("--seed", type=int, default=GRID_SEED)
    t.add_argument("--out", required=True)
    t.set_defaults(func=cmd_trace)

    ft = sub.add_parser("frame-test", help="numerical Parseval energy check")
    ft.add_argument("--family", required=True)
    ft.add_argument("--signal", default="tent:[-1,1)",
                    help="tent:[lo,hi) or chi:[lo,hi)")
    ft.add_argument("--jmin", type=int, default=-8)
    ft.add_argument("--jmax", type=int, default=8)
    ft.add_argument("--tol", type=float, default=3e-3)
    ft.add_argument("--ktail", type=float, default=1e-6,
                    help="per-scale k-truncation target (fraction of ||f||^2)")
    ft.add_argument("--kbudget", type=int, default=1 << 21)
    ft.add_argument("--out")
    ft.set_defaults(func=cmd_frame_test)

    s = sub.add_parser("sample", help="CSV samples of the profiles for plotting")
    s.add_argument("--family", required=True)
    s.add_argument("--grid", type=int, default=1024)
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_sample)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ParseError as e:
        print(f"parse error: {e}", file=sys.stderr)
        return 2
    except (ValueError, ClosureDidNotStabilize, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
