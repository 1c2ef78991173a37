"""Command line front end.

    theodorus generate --max-n 20 --format csv
    theodorus certify  --max-n 1000 --workers 4 --out report.json
    theodorus plot     --max-n 8 --out spiral.svg
    theodorus stats    --max-n 60
    theodorus audit    --max-n 7

Exit codes: 0 success, 1 invalid configuration or I/O error, 2 when the
certifier leaves windows unresolved (or stats hits the precision cap).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import xml.etree.ElementTree as ET
from dataclasses import dataclass

from . import __version__
from .certifier import audit_im_sign, certify_all
from .interval import MAX_PRECISION, MIN_PRECISION
from .spiral import (
    PrecisionExhausted,
    angle_prefix,
    modulus,
    point_by_product,
    product_enclosure,
    revolution_index,
)

COMMANDS = ("generate", "certify", "plot", "stats", "audit")
FORMATS = ("csv", "json", "svg")
CSV_HEADER = ("n", "re_lo", "re_hi", "im_lo", "im_hi", "theta_lo", "theta_hi")
CAP_ENV = "THEODORUS_PRECISION_CAP"

DEFAULT_FORMAT = {"generate": "csv", "certify": "json", "plot": "svg", "stats": None, "audit": None}
DEFAULT_MAX_N = {"generate": 10, "certify": 100, "plot": 8, "stats": 60, "audit": 7}


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    max_n: int
    precision_bits: int = 64
    precision_cap: int = MAX_PRECISION
    output_path: str | None = None
    format: str | None = None
    digits: int = 30
    workers: int = 1

    def validate(self) -> None:
        if self.command not in COMMANDS:
            raise ConfigError(f"unknown command {self.command!r}")
        if not MIN_PRECISION <= self.precision_bits <= self.precision_cap <= MAX_PRECISION:
            raise ConfigError(
                f"need {MIN_PRECISION} <= precision ({self.precision_bits}) <= "
                f"precision cap ({self.precision_cap}) <= {MAX_PRECISION}"
            )
        if self.max_n < 1:
            raise ConfigError(f"--max-n must be >= 1, got {self.max_n}")
        if self.digits < 1:
            raise ConfigError(f"--digits must be >= 1, got {self.digits}")
        if self.workers < 1:
            raise ConfigError(f"--workers must be >= 1, got {self.workers}")
        if self.format is not None and self.format not in FORMATS:
            raise ConfigError(f"unknown format {self.format!r}")

    def schedule(self) -> list[int]:
        """Doubling precisions from the initial precision, ending at the cap."""
        out = []
        p = self.precision_bits
        while p < self.precision_cap:
            out.append(p)
            p *= 2
        out.append(self.precision_cap)
        return out


# -- generate -----------------------------------------------------------------


def point_rows(cfg: RunConfig) -> list[dict]:
    rows = []
    for n in range(1, cfg.max_n + 1):
        pt = point_by_product(n, cfg.precision_bits)
        re_lo, re_hi = pt.z.re.render(cfg.digits)
        im_lo, im_hi = pt.z.im.render(cfg.digits)
        th_lo, th_hi = pt.angle.render(cfg.digits)
        rows.append(dict(zip(CSV_HEADER, (n, re_lo, re_hi, im_lo, im_hi, th_lo, th_hi))))
    return rows


def cmd_generate(cfg: RunConfig) -> tuple[int, str]:
    fmt = cfg.format or "csv"
    if fmt not in ("csv", "json"):
        raise ConfigError("generate supports --format csv or json")
    rows = point_rows(cfg)
    if fmt == "json":
        return 0, json.dumps(rows, indent=1) + "\n"
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=CSV_HEADER, lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    return 0, buf.getvalue()


# -- certify ------------------------------------------------------------------


def cmd_certify(cfg: RunConfig) -> tuple[int, str]:
    if cfg.max_n < 2:
        raise ConfigError("need at least two points")
    if cfg.format not in (None, "json"):
        raise ConfigError("certify writes JSON only")
    report = certify_all(cfg.max_n, cfg.schedule(), workers=cfg.workers)
    text = json.dumps(report.to_dict(cfg.digits), indent=2) + "\n"
    return (2 if report.unresolved else 0), text


# -- plot ---------------------------------------------------------------------

SVG_SIZE = 600
SVG_MARGIN = 20


def _fmt(x: float) -> str:
    return repr(float(x))


def spiral_svg(max_n: int, p: int) -> str:
    """One closed path per triangle (origin, z_n, z_{n+1}) at interval midpoints."""
    pts = [product_enclosure(n, p).mid() for n in range(1, max_n + 2)]
    radius = math.sqrt(max_n + 1)
    scale = (SVG_SIZE / 2 - SVG_MARGIN) / radius
    cx = cy = SVG_SIZE / 2

    def screen(z: complex) -> tuple[str, str]:
        return _fmt(cx + scale * z.real), _fmt(cy - scale * z.imag)

    root = ET.Element(
        "svg",
        xmlns="http://www.w3.org/2000/svg",
        version="1.1",
        width=str(SVG_SIZE),
        height=str(SVG_SIZE),
        viewBox=f"0 0 {SVG_SIZE} {SVG_SIZE}",
    )
    ET.SubElement(root, "title").text = f"Square-root spiral, {max_n} triangles"
    ET.SubElement(root, "desc").text = (
        f"scale={_fmt(scale)} origin-x={_fmt(cx)} origin-y={_fmt(cy)} "
        "(screen = origin + scale*(x, -y))"
    )
    group = ET.SubElement(root, "g", fill="none", stroke="black")
    group.set("stroke-width", "1")
    ox, oy = screen(0j)
    for n in range(1, max_n + 1):
        ax, ay = screen(pts[n - 1])
        bx, by = screen(pts[n])
        ET.SubElement(group, "path", id=f"rib-{n}", d=f"M {ox} {oy} L {ax} {ay} L {bx} {by} Z")
    return ET.tostring(root, encoding="unicode", xml_declaration=True) + "\n"


def cmd_plot(cfg: RunConfig) -> tuple[int, str]:
    if cfg.format not in (None, "svg"):
        raise ConfigError("plot writes SVG only")
    return 0, spiral_svg(cfg.max_n, cfg.precision_bits)


# -- stats --------------------------------------------------------------------


def revolution_table(cfg: RunConfig) -> list[tuple[int, int]]:
    theta_end = angle_prefix(cfg.max_n, cfg.precision_bits)
    out = []
    r = 1
    while 2 * math.pi * r < float(theta_end.hi) + 1:
        n = revolution_index(r, cfg.precision_bits, cfg.precision_cap)
        if n > cfg.max_n:
            break
        out.append((r, n))
        r += 1
    return out


def cmd_stats(cfg: RunConfig) -> tuple[int, str]:
    if cfg.format not in (None, "json"):
        raise ConfigError("stats writes text or JSON")
    p = cfg.precision_bits
    revs = revolution_table(cfg)
    theta = angle_prefix(cfg.max_n, p).render(cfg.digits)
    mod = modulus(product_enclosure(cfg.max_n, p), p).render(cfg.digits)
    if cfg.format == "json":
        doc = {
            "max_n": cfg.max_n,
            "revolutions": [{"r": r, "n": n} for r, n in revs],
            "theta": list(theta),
            "modulus": list(mod),
        }
        return 0, json.dumps(doc, indent=2) + "\n"
    lines = [f"revolution {r} completes at n={n}" for r, n in revs]
    if not revs:
        lines.append("no complete revolution")
    lines.append(f"theta({cfg.max_n}) in [{theta[0]}, {theta[1]}]")
    lines.append(f"|z_{cfg.max_n}| in [{mod[0]}, {mod[1]}]")
    return 0, "\n".join(lines) + "\n"


# -- audit --------------------------------------------------------------------


def cmd_audit(cfg: RunConfig) -> tuple[int, str]:
    if cfg.max_n < 2:
        raise ConfigError("need at least two points")
    findings = audit_im_sign(cfg.max_n, cfg.precision_bits)
    if cfg.format == "json":
        doc = [
            {"m": f.m, "n": f.n, "verdict": f.verdict.value, "im": list(f.im_enclosure.render(cfg.digits))}
            for f in findings
        ]
        return 0, json.dumps(doc, indent=2) + "\n"
    if not findings:
        return 0, "no counterexample windows\n"
    lines = [f"{len(findings)} window(s) with non-positive imaginary part:"]
    for f in findings:
        lo, hi = f.im_enclosure.render(cfg.digits)
        lines.append(f"({f.m}, {f.n}) {f.verdict.value} Im in [{lo}, {hi}]")
    return 0, "\n".join(lines) + "\n"


HANDLERS = {
    "generate": cmd_generate,
    "certify": cmd_certify,
    "plot": cmd_plot,
    "stats": cmd_stats,
    "audit": cmd_audit,
}


def run(cfg: RunConfig) -> tuple[int, str]:
    cfg.validate()
    return HANDLERS[cfg.command](cfg)


# -- argument parsing ---------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--max-n", type=int, default=None)
    common.add_argument("--precision", type=int, default=64, help="initial precision in bits")
    common.add_argument("--precision-cap", type=int, default=None,
                        help=f"largest precision tried (env {CAP_ENV} overrides)")
    common.add_argument("--format", choices=FORMATS, default=None)
    common.add_argument("--out", default=None, help="output file (default stdout)")
    common.add_argument("--digits", type=int, default=30)
    common.add_argument("--workers", type=int, default=1)

    parser = _Parser(prog="theodorus", description=__doc__.split("\n\n")[0])
    parser.add_argument("--version", action="version", version=f"theodorus {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name in COMMANDS:
        sub.add_parser(name, parents=[common])
    return parser


def config_from_args(argv=None, environ=None) -> RunConfig:
    environ = os.environ if environ is None else environ
    args = build_parser().parse_args(argv)
    cap = args.precision_cap if args.precision_cap is not None else MAX_PRECISION
    if environ.get(CAP_ENV):
        try:
            cap = int(environ[CAP_ENV])
        except ValueError:
            raise ConfigError(f"{CAP_ENV} must be an integer") from None
    return RunConfig(
        command=args.command,
        max_n=args.max_n if args.max_n is not None else DEFAULT_MAX_N[args.command],
        precision_bits=args.precision,
        precision_cap=cap,
        output_path=args.out,
        format=args.format,
        digits=args.digits,
        workers=args.workers,
    )


def main(argv=None) -> int:
    try:
        cfg = config_from_args(argv)
        status, text = run(cfg)
    except ConfigError as exc:
        print(f"theodorus: {exc}", file=sys.stderr)
        return 1
    except PrecisionExhausted as exc:
        print(f"theodorus: {exc}", file=sys.stderr)
        return 2
    except (ArithmeticError, ValueError) as exc:
        print(f"theodorus: error: {exc}", file=sys.stderr)
        return 1
    if cfg.output_path is None:
        sys.stdout.write(text)
    else:
        try:
            with open(cfg.output_path, "w", encoding="utf-8") as fh:
                fh.write(text)
        except OSError as exc:
            print(f"theodorus: cannot write {cfg.output_path}: {exc}", file=sys.stderr)
            return 1
    return status


if __name__ == "__main__":
    sys.exit(main())
