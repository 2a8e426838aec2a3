"""Command-line front end: cloud fills, locus verification, identity checks.

Every ``fill-*`` subcommand reproduces one of the standard point clouds as
CSV (or JSON) with a fixed 17-significant-digit format, so repeated runs
with the same flags are byte-identical.  ``verify`` fits a cloud against
its predicted locus and exits nonzero when the residual exceeds the
tolerance.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass

from .clouds import CloudRequest, MultivaluePoint, enumerate_cloud
from .engine import DEFAULT_CONV_TOL, DEFAULT_MAX_ITER, QuartetParams
from .lattice import DEFAULT_FIT_TOL, CircleSpec, fit_cloud, predict_locus
from .magm import magm_equivalence, magm_negative_experiment
from .oracle import landen_check, reference_set
from .roots import principal_sqrt

__all__ = ["main", "console_main"]

CSV_HEADER = (
    "series",
    "sigma_mask",
    "delta_mask",
    "gamma_mask",
    "signb",
    "generation",
    "re",
    "im",
    "ill_conditioned",
    "duplicate_of",
)

FILL_DEFAULTS = {
    # kind, sinphi, sigma_bits, delta_bits, gamma_bits
    "fill-k": ("K", 0.5, 5, 0, 0),
    "fill-f": ("F", 0.8, 3, 4, 0),
    "fill-e": ("E", 0.5, 5, 0, 0),
    "fill-n": ("N", 0.5, 5, 0, 0),
    "fill-z": ("Z", 0.8, 2, 2, 2),
    "fill-z-restricted": ("Z_restricted", 0.8, 0, 4, 0),
}

VERIFY_KINDS = {
    "k": "K",
    "k-both": "K_both",
    "f": "F",
    "e": "E",
    "n": "N",
    "z-restricted": "Z_restricted",
}

_SVG_COLORS = ("#d62728", "#000000", "#1f77b4", "#2ca02c", "#9467bd", "#8c564b")


def _fmt(x: float) -> str:
    return f"{x:.17g}"


@dataclass
class Series:
    label: str
    points: list[MultivaluePoint]


def _moduli(args: argparse.Namespace) -> tuple[complex, complex]:
    """(k, b) from the flags; b wins as the fundamental parameter."""
    if getattr(args, "k", None) is not None:
        k = complex(args.k)
        return k, principal_sqrt(1 - k * k)
    b = complex(args.b if getattr(args, "b", None) is not None else 0.25)
    return principal_sqrt((1 - b) * (1 + b)), b


def _params(args: argparse.Namespace, signb: int) -> QuartetParams:
    k, b = _moduli(args)
    return QuartetParams(
        k=k,
        sinphi=args.sinphi,
        signb=signb,
        max_iter=args.max_iter,
        conv_tol=args.conv_tol,
        complement=b,
    )


def _series_rows(series_list: list[Series]) -> list[tuple]:
    rows = []
    offset = 0
    for series in series_list:
        for point in series.points:
            dup = "" if point.duplicate_of is None else str(point.duplicate_of + offset)
            rows.append(
                (
                    series.label,
                    str(point.schedule.sigma_mask),
                    str(point.schedule.delta_mask),
                    str(point.schedule.gamma_mask),
                    str(point.signb),
                    str(point.generation),
                    _fmt(point.value.real),
                    _fmt(point.value.imag),
                    str(int(point.ill_conditioned)),
                    dup,
                )
            )
        offset += len(series.points)
    return rows


def _write_csv(stream, series_list: list[Series]) -> None:
    stream.write(",".join(CSV_HEADER) + "\n")
    for row in _series_rows(series_list):
        stream.write(",".join(row) + "\n")


def _write_json(stream, series_list: list[Series]) -> None:
    records = [dict(zip(CSV_HEADER, row)) for row in _series_rows(series_list)]
    json.dump(records, stream, indent=2)
    stream.write("\n")


def _write_svg(path: str, series_list: list[Series], title: str) -> None:
    pts = []
    for si, series in enumerate(series_list):
        for point in series.points:
            v = point.value
            if math.isfinite(v.real) and math.isfinite(v.imag):
                pts.append((v.real, v.imag, si, point.generation))
    if not pts:
        pts = [(0.0, 0.0, 0, 0)]
    xs = [p[0] for p in pts]
    ys = [p[1] for p in pts]
    xlo, xhi = min(xs), max(xs)
    ylo, yhi = min(ys), max(ys)
    span = max(xhi - xlo, yhi - ylo, 1e-9)
    pad = 0.08 * span
    xlo, xhi = xlo - pad, xhi + pad
    ylo, yhi = ylo - pad, yhi + pad
    size = 640.0

    def sx(x: float) -> float:
        return (x - xlo) / (xhi - xlo) * size

    def sy(y: float) -> float:
        return size - (y - ylo) / (yhi - ylo) * size

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size:.0f}" height="{size:.0f}" '
        f'viewBox="0 0 {size:.0f} {size:.0f}">',
        f'<rect width="{size:.0f}" height="{size:.0f}" fill="white"/>',
        f'<title>{title}</title>',
    ]
    for x, y, si, gen in pts:
        color = _SVG_COLORS[si % len(_SVG_COLORS)]
        parts.append(f'<circle cx="{sx(x):.2f}" cy="{sy(y):.2f}" r="3" fill="{color}"/>')
        parts.append(
            f'<text x="{sx(x) + 5:.2f}" y="{sy(y) + 3:.2f}" font-size="9" fill="{color}">{gen}</text>'
        )
    parts.append("</svg>")
    with open(path, "w", encoding="ascii") as handle:
        handle.write("\n".join(parts) + "\n")


def _emit(args: argparse.Namespace, series_list: list[Series], title: str) -> None:
    if args.out == "-":
        stream = sys.stdout
        close = False
    else:
        stream = open(args.out, "w", encoding="ascii", newline="")
        close = True
    try:
        if args.format == "csv":
            _write_csv(stream, series_list)
        else:
            _write_json(stream, series_list)
    finally:
        if close:
            stream.close()
    if args.svg:
        _write_svg(args.svg, series_list, title)


def _check_bits(parser: argparse.ArgumentParser, args: argparse.Namespace) -> None:
    for name in ("sigma_bits", "delta_bits", "gamma_bits"):
        if getattr(args, name, 0) > args.max_iter:
            parser.error(f"--{name.replace('_', '-')} must not exceed --max-iter")


def _cloud(args: argparse.Namespace, kind: str, signb: int) -> list[MultivaluePoint]:
    return enumerate_cloud(
        CloudRequest(
            kind=kind,
            params=_params(args, signb),
            sigma_bits=args.sigma_bits,
            delta_bits=args.delta_bits,
            gamma_bits=args.gamma_bits,
        )
    )


def _cmd_fill(parser: argparse.ArgumentParser, args: argparse.Namespace) -> int:
    _check_bits(parser, args)
    kind = FILL_DEFAULTS[args.command][0]
    series_list: list[Series] = []
    if args.command == "fill-k":
        labels = {1: "K+", -1: "K-"}
        signbs = (1, -1) if args.signb == "both" else (int(args.signb),)
        for signb in signbs:
            series_list.append(Series(labels[signb], _cloud(args, kind, signb)))
    else:
        label = {"F": "F", "E": "E", "N": "N", "Z": "Z", "Z_restricted": "Zr"}[kind]
        series_list.append(Series(label, _cloud(args, kind, int(args.signb))))
    _emit(args, series_list, args.command)
    return 0


def _cmd_verify(parser: argparse.ArgumentParser, args: argparse.Namespace) -> int:
    _check_bits(parser, args)
    kind = VERIFY_KINDS[args.kind]
    _, b = _moduli(args)
    refs = reference_set(b=b)
    phi = math.asin(args.sinphi) if kind in ("F", "Z_restricted") else None
    spec = predict_locus(kind, refs, phi=phi)

    cloud_kind = "K" if kind == "K_both" else kind
    points = _cloud(args, cloud_kind, 1)
    if kind == "K_both":
        points = points + _cloud(args, cloud_kind, -1)
    report = fit_cloud(points, spec, tol=args.tol)

    if args.format == "json":
        payload = report.to_dict()
        payload["kind"] = args.kind
        if isinstance(spec, CircleSpec):
            payload["circle"] = {"x1": spec.x1, "x2": spec.x2}
        else:
            payload["lattice"] = {
                "origin": [spec.origin.real, spec.origin.imag],
                "gen1": [spec.gen1.real, spec.gen1.imag],
                "gen2": [spec.gen2.real, spec.gen2.imag],
                "cosets": [[c.real, c.imag] for c in spec.cosets],
            }
        print(json.dumps(payload, indent=2))
    else:
        if isinstance(spec, CircleSpec):
            print(f"circle locus: crossings {_fmt(spec.x1)}, {_fmt(spec.x2)}")
        else:
            print(f"lattice locus: origin {spec.origin:.12g}")
            print(f"  gen1 {spec.gen1:.12g}")
            print(f"  gen2 {spec.gen2:.12g}")
            if len(spec.cosets) > 1:
                print(f"  cosets {[format(c, '.12g') for c in spec.cosets]}")
        for pf, point in zip(report.points, points):
            sched = point.schedule
            tag = " excluded" if pf.excluded else ""
            print(
                f"  point {pf.index:3d} masks({sched.sigma_mask},{sched.delta_mask},{sched.gamma_mask})"
                f" signb={point.signb:+d} (m,n)=({pf.m},{pf.n}) coset={pf.coset}"
                f" residual={pf.residual:.3e}{tag}"
            )
        verdict = "PASS" if report.passed else "FAIL"
        print(
            f"{verdict} kind={args.kind} max_residual={report.max_residual:.3e}"
            f" tol={report.tol:.1e} excluded={report.flagged_excluded}"
        )
    return 0 if report.passed else 1


def _cmd_magm_check(parser: argparse.ArgumentParser, args: argparse.Namespace) -> int:
    b = float(args.b if args.b is not None else 0.25)
    eq = magm_equivalence(b, args.rows)
    print(f"equivalence b={b} rows={args.rows}:")
    print(f"  max row deviation  {eq.max_row_deviation:.3e}")
    print(f"  limit              {eq.limit:.15g}")
    print(f"  limit vs E/K       {eq.limit_deviation:.3e}")
    print(f"sign experiments (masks 0..{2**args.mask_bits - 1}):")
    for mask in range(2**args.mask_bits):
        outcome = magm_negative_experiment(b, mask, args.rows)
        if outcome.converged:
            print(
                f"  mask {mask:3d}: converged limit={outcome.limit:.12g}"
                f" E-lattice distance={outcome.lattice_distance:.3e}"
            )
        else:
            print(f"  mask {mask:3d}: divergent")
    return 0


def _cmd_ref(parser: argparse.ArgumentParser, args: argparse.Namespace) -> int:
    _, b = _moduli(args)
    refs = reference_set(b=b)
    print(f"b   = {refs.b:.17g}")
    print(f"k   = {refs.k:.17g}")
    print(f"K(k) = {refs.K_k:.17g}")
    print(f"K(b) = {refs.K_b:.17g}")
    print(f"E(k) = {refs.E_k:.17g}")
    print(f"E(b) = {refs.E_b:.17g}")
    print(f"E(k)/K(k) = {refs.N_b2:.17g}")
    print(f"E(b)/K(b) = {refs.N_k2:.17g}")
    print(f"qZ  = {refs.qZ:.17g}")
    print(f"legendre residual = {refs.legendre_residual():.3e}")
    if refs.b.imag == 0 and 0 < refs.b.real < 1:
        res2, res4 = landen_check(refs.b.real)
        print(f"landen residuals  = {res2:.3e}, {res4:.3e}")
    return 0


def _add_common(sub: argparse.ArgumentParser, sinphi: float, sigma: int, delta: int, gamma: int) -> None:
    mod = sub.add_mutually_exclusive_group()
    mod.add_argument("--b", type=float, default=None, help="complementary modulus (default 0.25)")
    mod.add_argument("--k", type=float, default=None, help="modulus (alternative to --b)")
    sub.add_argument("--sinphi", type=float, default=sinphi, help=f"sine of the amplitude (default {sinphi})")
    sub.add_argument("--sigma-bits", type=int, default=sigma, help=f"free geometric-mean sign bits (default {sigma})")
    sub.add_argument("--delta-bits", type=int, default=delta, help=f"free forward-root sign bits (default {delta})")
    sub.add_argument("--gamma-bits", type=int, default=gamma, help=f"free zeta-root sign bits (default {gamma})")
    sub.add_argument("--max-iter", type=int, default=DEFAULT_MAX_ITER, help="iteration count (default 20)")
    sub.add_argument("--conv-tol", type=float, default=DEFAULT_CONV_TOL, help="convergence tolerance")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="multiagm",
        description="Multivalued AGM point clouds of elliptic integrals and their locus checks.",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    for name, (kind, sinphi, sigma, delta, gamma) in FILL_DEFAULTS.items():
        sub = commands.add_parser(name, help=f"emit the {kind} point cloud")
        _add_common(sub, sinphi, sigma, delta, gamma)
        if name == "fill-k":
            sub.add_argument("--signb", choices=("both", "+1", "-1", "1"), default="both")
        else:
            sub.add_argument("--signb", choices=("+1", "-1", "1"), default="+1")
        sub.add_argument("--format", choices=("csv", "json"), default="csv")
        sub.add_argument("--out", default="-", help="output path, '-' for stdout")
        sub.add_argument("--svg", default=None, help="also write an SVG scatter to this path")

    sub = commands.add_parser("verify", help="fit a cloud against its predicted locus")
    sub.add_argument("--kind", choices=sorted(VERIFY_KINDS), required=True)
    _add_common(sub, 0.8, 5, 0, 0)
    sub.add_argument("--tol", type=float, default=DEFAULT_FIT_TOL, help="max residual to pass (default 1e-6)")
    sub.add_argument("--format", choices=("text", "json"), default="text")

    sub = commands.add_parser("magm-check", help="triplet-iteration equivalence and sign experiments")
    sub.add_argument("--b", type=float, default=None, help="complementary modulus (default 0.25)")
    sub.add_argument("--rows", type=int, default=20)
    sub.add_argument("--mask-bits", type=int, default=4)

    sub = commands.add_parser("ref", help="print the reference values and identity residuals")
    mod = sub.add_mutually_exclusive_group()
    mod.add_argument("--b", type=float, default=None)
    mod.add_argument("--k", type=float, default=None)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command in FILL_DEFAULTS:
            if args.signb == "+1":
                args.signb = "1"
            return _cmd_fill(parser, args)
        if args.command == "verify":
            _apply_verify_shape(args, argv)
            return _cmd_verify(parser, args)
        if args.command == "magm-check":
            return _cmd_magm_check(parser, args)
        if args.command == "ref":
            return _cmd_ref(parser, args)
    except ValueError as exc:
        parser.exit(2, f"error: {exc}\n")
    raise AssertionError("unreachable")


def _apply_verify_shape(args: argparse.Namespace, argv: list[str] | None) -> None:
    # Flags the user did not pass fall back to the per-kind sweep shape.
    raw = list(argv if argv is not None else sys.argv[1:])

    def given(flag: str) -> bool:
        return any(arg == flag or arg.startswith(flag + "=") for arg in raw)

    shapes = {
        "k": (0.5, 5, 0, 0),
        "k-both": (0.5, 5, 0, 0),
        "e": (0.5, 5, 0, 0),
        "n": (0.5, 5, 0, 0),
        "f": (0.8, 3, 4, 0),
        "z-restricted": (0.8, 0, 4, 0),
    }
    sinphi, sigma, delta, gamma = shapes[args.kind]
    if not given("--sinphi"):
        args.sinphi = sinphi
    if not given("--sigma-bits"):
        args.sigma_bits = sigma
    if not given("--delta-bits"):
        args.delta_bits = delta
    if not given("--gamma-bits"):
        args.gamma_bits = gamma


def console_main() -> None:
    sys.exit(main())


if __name__ == "__main__":
    console_main()
