"""Command-line entry point: one subcommand per module plus ``verify-all``.

Exit status 0 on success, 1 when a computation fails (an error object is
written to stderr as JSON), 2 on usage errors.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import sys
import time
from fractions import Fraction
from pathlib import Path

from . import __version__
from .errors import MultibrotError

log = logging.getLogger("multibrot")

PRECISION_ENV = "ARTIFACT_PRECISION"
DEFAULT_PRECISION = 128


# ---------------------------------------------------------------------------
# Argument helpers
# ---------------------------------------------------------------------------


def _complex(text: str) -> complex:
    """Accept "a,b" or a Python complex literal such as "-0.75+0.1j"."""
    try:
        if "," in text:
            re_, im = text.split(",", 1)
            return complex(float(re_), float(im))
        return complex(text.replace(" ", "").replace("i", "j"))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad complex number {text!r}") from exc


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"bad fraction {text!r}") from exc


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad integer list {text!r}") from exc


def _int_range(text: str) -> tuple[int, int]:
    try:
        if ".." in text:
            a, b = text.split("..", 1)
            return int(a), int(b)
        return int(text), int(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad range {text!r} (use a..b)") from exc


def _pixels(text: str) -> tuple[int, int]:
    try:
        w, h = text.lower().split("x")
        return int(w), int(h)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad pixel size {text!r} (use WxH)") from exc


def _positive(kind):
    def parse(text):
        value = kind(text)
        if value <= 0:
            raise argparse.ArgumentTypeError(f"{text} must be positive")
        return value

    return parse


def _default_precision() -> int:
    raw = os.environ.get(PRECISION_ENV)
    if raw is None:
        return DEFAULT_PRECISION
    try:
        value = int(raw)
    except ValueError:
        return DEFAULT_PRECISION
    return value if value >= 53 else DEFAULT_PRECISION


# ---------------------------------------------------------------------------
# Output
# ---------------------------------------------------------------------------


def _config(args) -> dict:
    skip = {"func", "command"}
    out = {}
    for key, value in sorted(vars(args).items()):
        if key in skip:
            continue
        if isinstance(value, complex):
            value = [value.real, value.imag]
        elif isinstance(value, (Fraction, Path)):
            value = str(value)
        elif isinstance(value, tuple):
            value = list(value)
        out[key] = value
    return out


def _meta(args, started: float) -> dict:
    return {
        "tool": "multibrot",
        "version": __version__,
        "command": args.command,
        "config": _config(args),
        "wall_time": None if args.no_timing else round(time.perf_counter() - started, 6),
    }


def _emit_json(args, payload: dict, started: float, path=None) -> None:
    doc = {"meta": _meta(args, started), **payload}
    text = json.dumps(doc, indent=2, sort_keys=False) + "\n"
    target = path or getattr(args, "json", None)
    if target:
        Path(target).write_text(text)
        log.info("wrote %s", target)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------


def cmd_render(args, started):
    from .render import RasterSpec, overlay_rays, overlay_svg, render_multibrot, write_ppm
    from .rays import RayTrace
    from .angles import parse_angle

    spec = RasterSpec(args.center, args.width, args.px, args.max_iter, args.degree)
    raster = render_multibrot(spec, threads=args.threads)
    traces = []
    if args.overlay:
        doc = json.loads(Path(args.overlay).read_text())
        for item in doc.get("traces", [doc.get("trace")] if "trace" in doc else []):
            traces.append(
                RayTrace(
                    d=item["d"],
                    theta=parse_angle(item["theta"]),
                    samples=[(t, complex(x, y)) for t, x, y in item["samples"]],
                    landing_estimate=complex(*item["landing"]),
                    converged=item["converged"],
                )
            )
    img, overlay = overlay_rays(raster, traces, spec)
    write_ppm(args.out, img)
    artifacts = {"ppm": str(args.out)}
    if args.svg:
        Path(args.svg).write_text(overlay_svg(spec, overlay, Path(args.out).name))
        artifacts["svg"] = str(args.svg)
    if args.png:
        from .figures import rays_figure

        rays_figure(raster, spec, traces, args.png)
        artifacts["png"] = str(args.png)
    _emit_json(args, {"raster": spec.to_dict(), "artifacts": artifacts, "warnings": overlay.warnings}, started)


def cmd_ray(args, started):
    from .angles import parse_angle
    from .rays import trace_dynamic_ray, trace_parameter_ray

    theta = parse_angle(args.angle)
    if args.dynamic is not None:
        trace = trace_dynamic_ray(args.degree, args.dynamic, theta, potential_floor=args.floor, tol=args.tol)
    else:
        trace = trace_parameter_ray(args.degree, theta, potential_floor=args.floor, tol=args.tol)
    payload = {"trace": trace.to_dict()}
    if args.svg or args.png:
        from .render import RasterSpec, overlay_rays, overlay_svg, render_multibrot, write_ppm

        spec = RasterSpec(args.center, args.width, args.px, args.max_iter, args.degree)
        raster = render_multibrot(spec, threads=args.threads)
        img, overlay = overlay_rays(raster, [trace] if args.dynamic is None else [], spec)
        if args.svg:
            ppm = Path(args.svg).with_suffix(".ppm")
            write_ppm(ppm, img)
            Path(args.svg).write_text(overlay_svg(spec, overlay, ppm.name))
        if args.png:
            from .figures import rays_figure

            rays_figure(raster, spec, [trace] if args.dynamic is None else [], args.png)
        payload["warnings"] = overlay.warnings
    _emit_json(args, payload, started)


def cmd_land(args, started):
    from .angles import parse_angle
    from .rays import prop35_check, verify_landing_pair

    if args.parabolic is not None:
        pair, param = prop35_check(args.degree, args.parabolic, tol=args.tol)
        payload = {
            "pair": pair.to_dict(),
            "parabolic": param.to_dict(),
            "parabolic_residuals": list(param.residuals(args.degree)),
            "gap": abs(pair.landing_point - param.c),
        }
    else:
        if not args.angles or len(args.angles) != 2:
            raise ValueError("give two angles or --parabolic n")
        a, b = (parse_angle(x) for x in args.angles)
        pair = verify_landing_pair(args.degree, a, b, tol=args.tol)
        payload = {"pair": pair.to_dict()}
    _emit_json(args, payload, started)


def cmd_rotset(args, started):
    from .rotation_sets import brute_force_enumerate, construct, enumerate_constructive

    if args.enumerate is not None:
        sets = (brute_force_enumerate if args.brute else enumerate_constructive)(args.degree, args.enumerate)
        payload = {"sets": [rs.to_dict() for rs in sets]}
    else:
        if args.rot is None or args.deploy is None:
            raise ValueError("give --rot and --deploy, or --enumerate q")
        payload = construct(args.degree, args.rot, args.deploy).to_dict()
    _emit_json(args, payload, started)


def cmd_pcf(args, started):
    from .pcf import pcf_points

    points = pcf_points(args.degree, args.period, args.misiurewicz or 0, prec=args.precision)
    buf = io.StringIO()
    meta = json.dumps(_meta(args, started), sort_keys=True)
    buf.write(f"# {meta}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["re", "im", "type", "period", "preperiod"])
    for p in points:
        writer.writerow(p.row())
    if args.out:
        Path(args.out).write_text(buf.getvalue())
    else:
        sys.stdout.write(buf.getvalue())
    if args.png:
        from .figures import points_figure

        points_figure(points, args.degree, args.png)


def cmd_symmetry(args, started):
    from .boettcher import affine_symmetries

    maps = affine_symmetries(args.degree, args.order)
    _emit_json(args, {"d": args.degree, "count": len(maps), "symmetries": [m.to_dict() for m in maps]}, started)


def cmd_boettcher(args, started):
    from .boettcher import affine_symmetries, phi_eval, psi_series

    psi = psi_series(args.degree, args.order)
    payload = {
        "d": args.degree,
        "N": args.order,
        "psi": [[str(m), str(psi[m])] for m in range(args.order + 1)],
        "symmetries": [m.to_dict() for m in affine_symmetries(args.degree)],
    }
    if args.eval is not None:
        w = phi_eval(args.degree, args.eval, precision=args.precision_eval)
        payload["phi"] = {"c": [args.eval.real, args.eval.imag], "value": [w.real, w.imag]}
    _emit_json(args, payload, started)


def cmd_bang(args, started):
    from .arithmetic import primitive_prime_divisors

    _emit_json(args, primitive_prime_divisors(args.a, args.m).to_dict(), started)


def cmd_replay(args, started):
    from .arithmetic import replay_theorem

    lo, hi = args.k
    _emit_json(args, replay_theorem(args.d, args.D, lo, hi).to_dict(), started)


def cmd_curve(args, started):
    from .curves import implicitize_Cq, is_exceptional, is_invariant
    from .exact import ExactPoly

    q = ExactPoly.parse(args.q)
    r = ExactPoly.parse(args.r)
    payload = {
        "q": str(q),
        "r": str(r),
        "invariant": is_invariant(q, r, method=args.method),
        "curve_q": str(implicitize_Cq(q)),
        "curve_rq": str(implicitize_Cq(r.compose(q))),
        "exceptional": str(is_exceptional(r)) if r.degree >= 2 else "degree < 2",
    }
    _emit_json(args, payload, started)


def cmd_verify_all(args, started):
    from .acceptance import run_all

    results = run_all(args.only)
    for res in results:
        print(res.line(), file=sys.stderr, flush=True)
    ok = all(r.passed for r in results)
    _emit_json(args, {"passed": ok, "criteria": [r.to_dict() for r in results]}, started)
    return 0 if ok else 1


def cmd_manpage(args, started):
    text = manpage(build_parser())
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------


def _degree(p, flag_names=("--degree", "--d")):
    p.add_argument(*flag_names, dest="degree", type=int, required=True, help="degree d >= 2 of z^d + c")


def _view(p, required_out=False):
    p.add_argument("--center", type=_complex, default=complex(-0.75, 0), help="view centre as a,b")
    p.add_argument("--width", type=_positive(float), default=3.0, help="view width in parameter units")
    p.add_argument("--px", type=_pixels, default=(600, 400), help="raster size WxH")
    p.add_argument("--max-iter", type=_positive(int), default=500, help="escape-time iteration cap")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--threads", type=_positive(int), default=1, help="worker thread cap")
    common.add_argument(
        "--precision",
        type=int,
        default=_default_precision(),
        help=f"working precision in bits (default from ${PRECISION_ENV}, else {DEFAULT_PRECISION})",
    )
    common.add_argument("--seed", type=int, default=0, help="seed recorded for reproducibility")
    common.add_argument("--no-timing", action="store_true", help="omit wall time so output is byte-stable")
    common.add_argument("--log-level", default="WARNING", help="logging level")

    parser = argparse.ArgumentParser(
        prog="multibrot",
        description="Multibrot sets: rays, rotation sets, PCF parameters, symmetries, arithmetic replay, invariant curves.",
    )
    parser.add_argument("--version", action="version", version=f"multibrot {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    p = sub.add_parser("render", parents=[common], help="escape-time PPM with optional ray overlay")
    _degree(p)
    _view(p)
    p.add_argument("--out", required=True, type=Path, help="output PPM (P5)")
    p.add_argument("--overlay", type=Path, help="JSON from the ray command (trace or traces)")
    p.add_argument("--svg", type=Path, help="write an SVG overlay")
    p.add_argument("--png", type=Path, help="write a matplotlib PNG")
    p.add_argument("--json", type=Path, help="write the JSON summary here")
    p.set_defaults(func=cmd_render)

    p = sub.add_parser("ray", parents=[common], help="trace a parameter or dynamic ray")
    _degree(p)
    p.add_argument("--angle", required=True, help="external angle p/q")
    p.add_argument("--dynamic", type=_complex, help="trace the dynamic ray of f_c for this c")
    p.add_argument("--floor", type=float, help="lowest potential to reach")
    p.add_argument("--tol", type=_positive(float), default=1e-4, help="landing tolerance")
    p.add_argument("--json", type=Path, help="output JSON path")
    p.add_argument("--svg", type=Path, help="SVG overlay on a rendered M_d (PPM written beside it)")
    p.add_argument("--png", type=Path, help="matplotlib PNG of the ray")
    _view(p)
    p.set_defaults(func=cmd_ray)

    p = sub.add_parser("land", parents=[common], help="check that two rays land together")
    _degree(p)
    p.add_argument("--angles", nargs=2, metavar="P/Q", help="the two angles")
    p.add_argument("--parabolic", type=int, metavar="N", help="use 1/(d^N-1), d/(d^N-1) and match a parabolic parameter")
    p.add_argument("--tol", type=_positive(float), default=1e-3)
    p.add_argument("--json", type=Path)
    p.set_defaults(func=cmd_land)

    p = sub.add_parser("rotset", parents=[common], help="construct or enumerate rotation sets")
    _degree(p)
    p.add_argument("--rot", type=_fraction, help="rotation number p/q")
    p.add_argument("--deploy", type=_int_list, help="deployment sequence, comma separated")
    p.add_argument("--enumerate", type=int, metavar="Q", help="list every set with cycles of period Q")
    p.add_argument("--brute", action="store_true", help="enumerate by exhaustive search instead")
    p.add_argument("--json", type=Path)
    p.set_defaults(func=cmd_rotset)

    p = sub.add_parser("pcf", parents=[common], help="CSV of hyperbolic centres or Misiurewicz parameters")
    _degree(p)
    p.add_argument("--period", type=int, required=True)
    p.add_argument("--misiurewicz", type=int, metavar="M", help="preperiod m >= 1")
    p.add_argument("--out", type=Path, help="CSV path (default stdout)")
    p.add_argument("--png", type=Path, help="scatter plot PNG")
    p.set_defaults(func=cmd_pcf)

    p = sub.add_parser("symmetry", parents=[common], help="affine symmetries of M_d")
    _degree(p)
    p.add_argument("--order", type=int, help="series truncation (default 2d+8)")
    p.add_argument("--json", type=Path)
    p.set_defaults(func=cmd_symmetry)

    p = sub.add_parser("boettcher", parents=[common], help="exact Psi coefficients and Phi evaluation")
    _degree(p)
    p.add_argument("--order", type=int, default=12)
    p.add_argument("--eval", type=_complex, help="also evaluate Phi at this c")
    p.add_argument("--precision-eval", type=_positive(float), default=1e-10, help="relative accuracy for --eval")
    p.add_argument("--json", type=Path)
    p.set_defaults(func=cmd_boettcher)

    p = sub.add_parser("bang", parents=[common], help="primitive prime divisors of a^m - 1")
    p.add_argument("--a", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--json", type=Path)
    p.set_defaults(func=cmd_bang)

    p = sub.add_parser("replay", parents=[common], help="replay the angle contradiction for k in a range")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--D", type=int, required=True)
    p.add_argument("--k", type=_int_range, default=(1, 20), help="range a..b")
    p.add_argument("--json", type=Path)
    p.set_defaults(func=cmd_replay)

    p = sub.add_parser("curve", parents=[common], help="invariance of C_q under (r, rbar)")
    p.add_argument("--q", required=True, help='coefficients from z^0 up, e.g. "0,1"')
    p.add_argument("--r", required=True, help='coefficients from z^0 up, e.g. "1,0,1"')
    p.add_argument("--method", choices=("compare", "substitute"), default="compare")
    p.add_argument("--json", type=Path)
    p.set_defaults(func=cmd_curve)

    p = sub.add_parser("verify-all", parents=[common], help="run the acceptance checks")
    p.add_argument("--only", type=_int_list, help="criterion numbers, comma separated")
    p.add_argument("--json", type=Path)
    p.set_defaults(func=cmd_verify_all)

    p = sub.add_parser("manpage", parents=[common], help="print a roff manual page")
    p.add_argument("--out", type=Path)
    p.set_defaults(func=cmd_manpage)
    return parser


def manpage(parser: argparse.ArgumentParser) -> str:
    """Render a roff man page from the parser, one section per subcommand."""

    def esc(s: str) -> str:
        return (s or "").replace("\\", "\\\\").replace("-", "\\-")

    lines = [
        f'.TH MULTIBROT 1 "" "multibrot {__version__}" "User Commands"',
        ".SH NAME",
        "multibrot \\- " + esc(parser.description),
        ".SH SYNOPSIS",
        ".B multibrot",
        "COMMAND [OPTIONS]",
        ".SH ENVIRONMENT",
        f".TP\n.B {PRECISION_ENV}\nDefault working precision in bits.",
        ".SH EXIT STATUS",
        "0 on success, 1 on a computation error (JSON error object on stderr), 2 on usage errors.",
        ".SH COMMANDS",
    ]
    subs = next(a for a in parser._actions if isinstance(a, argparse._SubParsersAction))
    helps = {c.dest: c.help for c in subs._choices_actions}
    for name, sp in subs.choices.items():
        lines.append(f".SS {esc(name)}")
        lines.append(esc(helps.get(name, "")))
        for act in sp._actions:
            if not act.option_strings or act.dest == "help":
                continue
            flags = ", ".join(act.option_strings)
            lines.append(f".TP\n.B {esc(flags)}")
            lines.append(esc(act.help or ""))
    return "\n".join(lines) + "\n"


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=getattr(logging, str(args.log_level).upper(), logging.WARNING), stream=sys.stderr)
    started = time.perf_counter()
    try:
        status = args.func(args, started)
    except (MultibrotError, ValueError, ArithmeticError, OSError) as exc:
        err = exc.to_dict() if isinstance(exc, MultibrotError) else {"error": type(exc).__name__, "message": str(exc)}
        err["command"] = args.command
        sys.stderr.write(json.dumps(err) + "\n")
        return 1
    return status or 0


if __name__ == "__main__":
    sys.exit(main())
