"""
Command-line front end.

Subcommands: ``region``, ``verify``, ``oracle``, ``sweep`` and ``entropy``.
Exit codes: 0 success, 1 I/O failure, 2 bad invocation or parameters,
3 a verification or soundness check failed.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from . import entropy_tools, region, schemes, verifier
from .channel import ChannelParams, IntegralityError
from .field import DEFAULT_DEGREE
from .schemes import CornerId, Msg, RegimeError, SchemeConstructionError, Setup

EXIT_OK, EXIT_IO, EXIT_USAGE, EXIT_FAIL = 0, 1, 2, 3
FORMATS = ("json", "csv", "svg", "text")
SVG_LIMIT = 64 * 1024


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    """Parsed invocation; parameter checks happen in :class:`ChannelParams`."""

    subcommand: str
    M: int | None = None
    L: int | None = None
    n: int | None = None
    k: int | None = None
    alpha: Fraction | None = None
    setup: Setup = Setup.R0RL
    field_degree: int = DEFAULT_DEGREE
    include_conjectured: bool = False
    format: str = "text"
    seed: int = 0
    output: str | None = None
    extra: dict = field(default_factory=dict)

    def params(self) -> ChannelParams:
        if self.M is None or self.L is None:
            raise UsageError("-M and -L are required")
        if self.alpha is not None:
            if self.k is not None:
                raise UsageError("give either -k or --alpha, not both")
            return ChannelParams.from_alpha(self.alpha, self.M, self.L, self.n,
                                            self.field_degree)
        if self.n is None or self.k is None:
            raise UsageError("-n and -k (or --alpha) are required")
        return ChannelParams(self.n, self.k, self.M, self.L, self.field_degree)


def fr(x) -> str:
    """Reduced-fraction text: ``"1/2"``, ``"3"``."""
    return str(Fraction(x))


def _emit(cfg: RunConfig, text: str) -> None:
    if cfg.output is None or cfg.output == "-":
        sys.stdout.write(text)
        return
    Path(cfg.output).write_text(text)


# ---------------------------------------------------------------------------
# region


_FRACTION = {"type": "string", "pattern": r"^-?\d+(/\d+)?$"}
_POINT = {"type": "array", "items": _FRACTION, "minItems": 2, "maxItems": 2}

# JSON Schema of ``region --format json`` output. Rationals are reduced
# fraction strings such as "3/2".
REGION_JSON_SCHEMA = {
    "type": "object",
    "required": ["regime", "corners", "bounds", "verdict", "gap_vertices"],
    "properties": {
        "regime": {"type": "string"},
        "corners": {"type": "array", "items": {
            "type": "object", "required": ["point", "schemes"],
            "properties": {"point": _POINT,
                           "schemes": {"type": "array", "items": {"type": "string"}}}}},
        "bounds": {"type": "array", "items": {
            "type": "object", "required": ["a", "b", "c", "status", "label"],
            "properties": {"a": _FRACTION, "b": _FRACTION, "c": _FRACTION,
                           "status": {"enum": ["proven", "conjectured"]},
                           "label": {"type": "string"}}}},
        "verdict": {"enum": ["tight_proven", "tight_if_conjecture", "gap"]},
        "gap_vertices": {"type": "array", "items": _POINT},
        "inner_vertices": {"type": "array", "items": _POINT},
        "gap_area": _FRACTION,
        "gap_area_with_conjecture": _FRACTION,
    },
}


def region_json(rec: region.RegionRecord) -> dict:
    rep = rec.report
    by_point: dict[region.RatePoint, list[str]] = {}
    for name, pt in rec.corners:
        by_point.setdefault(pt, []).append(name)
    x, y = rec.setup.axes
    return {
        "setup": rec.setup.value,
        "axes": [f"R_{x.value}", f"R_{y.value}"],
        "M": rec.M, "L": rec.L, "n": rec.n, "k": rec.k,
        "alpha": fr(Fraction(rec.k, rec.n)),
        "regime": str(rec.regime),
        "corners": [{"point": [fr(p.x), fr(p.y)], "schemes": names}
                    for p, names in by_point.items()],
        "bounds": [{"a": fr(h.a), "b": fr(h.b), "c": fr(h.c),
                    "status": h.status.value, "label": h.label} for h in rec.bounds],
        "verdict": rep.verdict.value,
        "inner_vertices": [[fr(v.x), fr(v.y)] for v in rep.inner.vertices],
        "gap_vertices": [[fr(v.x), fr(v.y)] for v in rep.witnesses],
        "gap_area": fr(rep.gap_area),
        "gap_area_with_conjecture": fr(rep.gap_area_with_conjecture),
        "sound": rep.sound,
    }


def region_csv(rec: region.RegionRecord) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["kind", "name", "status", "x", "y", "a", "b", "c"])
    for name, p in rec.corners:
        w.writerow(["corner", name, "", fr(p.x), fr(p.y), "", "", ""])
    for h in rec.bounds:
        w.writerow(["bound", h.label, h.status.value, "", "", fr(h.a), fr(h.b), fr(h.c)])
    for v in rec.report.witnesses:
        w.writerow(["gap_vertex", "", "", fr(v.x), fr(v.y), "", "", ""])
    w.writerow(["verdict", rec.report.verdict.value, str(rec.regime), "", "", "", "", ""])
    return buf.getvalue()


def region_text(rec: region.RegionRecord) -> str:
    rep = rec.report
    x, y = rec.setup.axes
    out = [f"setup {rec.setup.value}  axes (R_{x.value}, R_{y.value}) per n",
           f"M={rec.M} L={rec.L} n={rec.n} k={rec.k} alpha={fr(rep.alpha)}",
           f"regime {rec.regime}", "corners:"]
    out += [f"  {name:<22} {p}" for name, p in rec.corners]
    out.append("bounds:")
    out += [f"  {h}" for h in rec.bounds]
    out.append(f"inner hull {rep.inner}")
    out.append(f"verdict {rep.verdict.value}")
    if rep.witnesses:
        out.append("gap vertices " + ", ".join(str(v) for v in rep.witnesses))
    out.append(f"gap area {fr(rep.gap_area)} (with conjecture {fr(rep.gap_area_with_conjecture)})")
    return "\n".join(out) + "\n"


def _clip_line(h: region.HalfPlane, X: float, Y: float):
    """Segment of ``a x + b y = c`` inside ``[0, X] x [0, Y]``, or None."""
    a, b, c = float(h.a), float(h.b), float(h.c)
    pts = []
    if b:
        for xv in (0.0, X):
            yv = (c - a * xv) / b
            if -1e-12 <= yv <= Y + 1e-12:
                pts.append((xv, yv))
    if a:
        for yv in (0.0, Y):
            xv = (c - b * yv) / a
            if -1e-12 <= xv <= X + 1e-12:
                pts.append((xv, yv))
    pts = sorted(set((round(px, 9), round(py, 9)) for px, py in pts))
    if len(pts) < 2:
        return None
    return pts[0], pts[-1]


def region_svg(rec: region.RegionRecord, size: int = 360, pad: int = 40) -> str:
    rep = rec.report
    verts = list(rep.proven_outer.vertices) + list(rep.inner.vertices)
    X = float(max(v.x for v in verts)) * 1.15 or 1.0
    Y = float(max(v.y for v in verts)) * 1.15 or 1.0

    def sx(v):
        return pad + float(v) / X * size

    def sy(v):
        return pad + size - float(v) / Y * size

    xa, ya = rec.setup.axes
    W = size + 2 * pad
    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{W}" '
           f'viewBox="0 0 {W} {W}">',
           f"<title>{rec.setup.value} M={rec.M} L={rec.L} alpha={fr(rep.alpha)} "
           f"{rep.verdict.value}</title>",
           f'<path d="M{pad},{pad} V{pad + size} H{pad + size}" fill="none" stroke="black"/>',
           f'<text x="{pad + size}" y="{pad + size + 25}" text-anchor="end">'
           f"R_{xa.value}/n</text>",
           f'<text x="{pad - 5}" y="{pad - 10}">R_{ya.value}/n</text>']
    poly = " ".join(f"{sx(v.x):.2f},{sy(v.y):.2f}" for v in rep.inner.vertices)
    out.append(f'<polygon points="{poly}" fill="#3060d0" fill-opacity="0.25" '
               f'stroke="#3060d0"/>')
    for h in rec.bounds:
        seg = _clip_line(h, X, Y)
        if seg is None:
            continue
        (x1, y1), (x2, y2) = seg
        color = "green" if h.status is region.Status.PROVEN else "red"
        dash = "" if h.status is region.Status.PROVEN else ' stroke-dasharray="6,4"'
        out.append(f'<line x1="{sx(x1):.2f}" y1="{sy(y1):.2f}" x2="{sx(x2):.2f}" '
                   f'y2="{sy(y2):.2f}" stroke="{color}" stroke-width="2"{dash}>'
                   f"<title>{h.label}</title></line>")
    for _, p in rec.corners:
        out.append(f'<circle cx="{sx(p.x):.2f}" cy="{sy(p.y):.2f}" r="4" fill="#3060d0"/>')
    out.append("</svg>")
    text = "\n".join(out) + "\n"
    if len(text.encode()) > SVG_LIMIT:
        raise RuntimeError(f"SVG would be {len(text.encode())} bytes, over {SVG_LIMIT}")
    return text


def cmd_region(cfg: RunConfig) -> int:
    p = cfg.params()
    rec = region.region_record(cfg.setup, p.M, p.L, p.n, p.k, cfg.include_conjectured)
    if cfg.format == "json":
        text = json.dumps(region_json(rec), indent=2) + "\n"
    elif cfg.format == "csv":
        text = region_csv(rec)
    elif cfg.format == "svg":
        text = region_svg(rec)
    else:
        text = region_text(rec)
    _emit(cfg, text)
    return EXIT_OK


# ---------------------------------------------------------------------------
# verify


def _rate_lines(s: schemes.LinearScheme) -> list[str]:
    out = []
    for msg in Msg:
        if s.dims[msg]:
            out.append(f"rate W_{msg.value}: {s.dims[msg]} symbols per {s.T} slot(s) "
                       f"= {fr(s.normalized_rate(msg))} per n")
    return out


def cmd_verify(cfg: RunConfig) -> int:
    corner = cfg.extra.get("corner")
    scheme_file = cfg.extra.get("scheme_file")
    if (corner is None) == (scheme_file is None):
        raise UsageError("give exactly one of --corner or --scheme-file")
    if scheme_file is not None:
        s = schemes.loads(Path(scheme_file).read_text())
    else:
        s = schemes.build_corner_scheme(cfg.params(), cfg.setup, CornerId(corner),
                                        seed=cfg.seed)
    report = verifier.verify(s)
    p = s.params
    lines = [f"scheme {s.name}  M={p.M} L={p.L} n={p.n} k={p.k} T={s.T} GF(2^{p.m})"]
    lines += _rate_lines(s)
    lines += report.lines()
    _emit(cfg, "\n".join(lines) + "\n")
    export = cfg.extra.get("export")
    if export:
        Path(export).write_text(schemes.dumps(s))
    return EXIT_OK if report.passed else EXIT_FAIL


# ---------------------------------------------------------------------------
# oracle


def cmd_oracle(cfg: RunConfig) -> int:
    max_T = int(cfg.extra.get("max_T", 2))
    if max_T not in (1, 2):
        raise UsageError(f"--max-T must be 1 or 2, got {max_T}")
    found = sorted(verifier.toy_oracle(max_T))
    contained = all(2 * r1 + r0 <= 2 for r1, r0 in found)
    hull = region.hull(found)
    if cfg.format == "json":
        text = json.dumps({
            "max_T": max_T,
            "axes": ["R_1", "R_0"],
            "points": [[fr(a), fr(b)] for a, b in found],
            "hull": [[fr(v.x), fr(v.y)] for v in hull.vertices],
            "contained": contained,
        }, indent=2) + "\n"
    else:
        lines = [f"toy channel n=k=1, M=2, L=1, GF(2), T<={max_T}",
                 "achievable (R1, R0): " + " ".join(f"({fr(a)},{fr(b)})" for a, b in found),
                 f"hull {hull}",
                 f"inside 2R1+R0<=2: {'yes' if contained else 'NO'}"]
        text = "\n".join(lines) + "\n"
    _emit(cfg, text)
    return EXIT_OK if contained else EXIT_FAIL


# ---------------------------------------------------------------------------
# sweep

BREAKPOINTS = (Fraction(0), Fraction(1, 2), Fraction(2, 3), Fraction(1), Fraction(2))
SWEEP_COLUMNS = ["setup", "M", "L", "alpha", "n", "k", "regime", "verdict",
                 "gap_area", "gap_area_with_conjecture", "sound", "offending_vertices",
                 "corners_verified", "corners_total", "split_rl", "erasure_rl"]


def breakpoint_grid(step=Fraction(1, 12)) -> list[Fraction]:
    pts = set()
    for b in BREAKPOINTS:
        for d in (-step, 0, step):
            if 0 <= b + d <= 2:
                pts.add(b + d)
    return sorted(pts)


def parse_grid(text: str | None) -> list[Fraction]:
    if not text or text == "breakpoints":
        return breakpoint_grid()
    return sorted(set(Fraction(t) for t in text.replace(";", ",").split(",") if t.strip()))


def _verified_rl(s: schemes.LinearScheme) -> str:
    return fr(s.normalized_rate(Msg.WL)) if verifier.passes(s) else "fail"


def sweep_row(task) -> list[str]:
    """One CSV row; pure so rows can be computed in any order or process."""
    setup, M, L, alpha, seed, check_schemes, m = task
    p = ChannelParams.from_alpha(alpha, M, L, m=m)
    rep = region.tightness_report(setup, M, L, p.n, p.k)
    offending = region.outside_vertices(rep.inner, rep.proven_outer)
    fams = region.corner_families(setup, alpha)
    ok = 0
    split_rl = erasure_rl = ""
    if check_schemes:
        for fam in fams:
            try:
                s = schemes.build_corner_scheme(p, setup, fam.corner, seed=seed)
            except (RegimeError, SchemeConstructionError, ValueError):
                continue
            if verifier.passes(s) and s.point(setup) == fam.point(M, L, alpha):
                ok += 1
        if M % 2 == 0:
            split_rl = _verified_rl(schemes.split_scheme(p))
        if alpha <= 1:
            erasure_rl = _verified_rl(
                schemes.build_corner_scheme(p, setup, CornerId.ERASURE_ALL, seed=seed))
    return [setup.value, str(M), str(L), fr(alpha), str(p.n), str(p.k),
            str(region.classify_regime(M, L, alpha)), rep.verdict.value,
            fr(rep.gap_area), fr(rep.gap_area_with_conjecture),
            "yes" if rep.sound else "no", " ".join(str(v) for v in offending),
            str(ok) if check_schemes else "", str(len(fams)), split_rl, erasure_rl]


def sweep_tasks(Ms, grid, setups, seed, check_schemes, m=DEFAULT_DEGREE):
    return [(setup, M, L, a, seed, check_schemes, m)
            for setup in setups for M in Ms for L in range(1, M + 1) for a in grid]


def run_sweep(tasks, jobs: int = 1) -> list[list[str]]:
    if jobs > 1:
        with ProcessPoolExecutor(jobs) as pool:
            return list(pool.map(sweep_row, tasks, chunksize=8))
    return [sweep_row(t) for t in tasks]


def cmd_sweep(cfg: RunConfig) -> int:
    Ms = [int(t) for t in str(cfg.extra.get("Ms") or "2,3,4").split(",")]
    grid = parse_grid(cfg.extra.get("alphas"))
    setups = [Setup(cfg.setup)] if cfg.extra.get("one_setup") else list(Setup)
    tasks = sweep_tasks(Ms, grid, setups, cfg.seed, not cfg.extra.get("no_verify"),
                        cfg.field_degree)
    rows = run_sweep(tasks, int(cfg.extra.get("jobs") or 1))
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SWEEP_COLUMNS)
    w.writerows(rows)
    _emit(cfg, buf.getvalue())
    unsound = [r for r in rows if r[SWEEP_COLUMNS.index("sound")] != "yes"]
    for r in unsound:
        print(f"unsound: {r[:4]} outside vertices {r[SWEEP_COLUMNS.index('offending_vertices')]}",
              file=sys.stderr)
    return EXIT_FAIL if unsound else EXIT_OK


# ---------------------------------------------------------------------------
# entropy


def cmd_entropy(cfg: RunConfig) -> int:
    pmf_file = cfg.extra.get("pmf")
    if pmf_file:
        p = entropy_tools.load_pmf(pmf_file)
        holds, chain = entropy_tools.sliding_window_check(p)
        lines = [f"M={p.M} alphabets={p.alphabets}",
                 "chain " + " ".join(f"{c:.12g}" for c in chain),
                 f"non-increasing: {'yes' if holds else 'NO'}"]
        _emit(cfg, "\n".join(lines) + "\n")
        return EXIT_OK if holds else EXIT_FAIL
    count = int(cfg.extra.get("fuzz") or 1000)
    bad = entropy_tools.fuzz(count, seed=cfg.seed)
    lines = [f"fuzzed {count} pmfs (seed {cfg.seed}): {len(bad)} violations"]
    lines += [f"  #{i}: " + " ".join(f"{c:.12g}" for c in chain) for i, chain in bad]
    _emit(cfg, "\n".join(lines) + "\n")
    return EXIT_FAIL if bad else EXIT_OK


COMMANDS = {"region": cmd_region, "verify": cmd_verify, "oracle": cmd_oracle,
            "sweep": cmd_sweep, "entropy": cmd_entropy}


# ---------------------------------------------------------------------------
# argument handling


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _default_seed() -> int:
    raw = os.environ.get("BIC_SEED")
    if raw is None:
        return 0
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"BIC_SEED must be an integer, got {raw!r}") from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="key=value file; explicit flags win")
    common.add_argument("-M", type=int, help="subcarriers per user")
    common.add_argument("-L", type=int, help="interfered subcarriers in the middle class")
    common.add_argument("-n", type=int, help="direct link strength (levels)")
    common.add_argument("-k", type=int, help="cross link strength (levels)")
    common.add_argument("--alpha", type=Fraction, help="k/n; picks the smallest n if -n is absent")
    common.add_argument("--setup", choices=[s.value for s in Setup], default="r0rl")
    common.add_argument("-m", "--field-degree", type=int, default=DEFAULT_DEGREE,
                        help="work over GF(2^m)")
    common.add_argument("--format", choices=FORMATS, default="text")
    common.add_argument("--seed", type=int, help="default: $BIC_SEED or 0")
    common.add_argument("-o", "--output", help="output path (default stdout)")

    parser = _Parser(prog="bic", description="Opportunistic interference management "
                     "on parallel linear deterministic interference channels.")
    sub = parser.add_subparsers(dest="subcommand", required=True, parser_class=_Parser)

    p = sub.add_parser("region", parents=[common], help="inner/outer regions and tightness")
    p.add_argument("--conjectured", action="store_true", dest="include_conjectured",
                   help="also list conjectured outer bounds")

    p = sub.add_parser("verify", parents=[common], help="certify a linear scheme")
    p.add_argument("--corner", choices=[c.value for c in CornerId])
    p.add_argument("--scheme-file", help="scheme in the plain-text export format")
    p.add_argument("--export", help="write the scheme to this file")

    p = sub.add_parser("oracle", parents=[common], help="exhaustive toy-channel search")
    p.add_argument("--max-T", type=int, default=2, dest="max_T")

    p = sub.add_parser("sweep", parents=[common], help="CSV over a parameter grid")
    p.add_argument("--Ms", default="2,3,4", help="comma list of M values")
    p.add_argument("--alphas", default="breakpoints",
                   help="comma list of alphas, or 'breakpoints' for breakpoints +/- 1/12")
    p.add_argument("--one-setup", action="store_true", help="only the --setup given")
    p.add_argument("--no-verify", action="store_true", help="skip scheme verification")
    p.add_argument("--jobs", type=int, default=1)

    p = sub.add_parser("entropy", parents=[common], help="sliding-window entropy check")
    p.add_argument("--pmf", help="pmf table file: index tuple then probability per line")
    p.add_argument("--fuzz", type=int, help="number of random pmfs (default 1000)")
    return parser


def read_config(path) -> dict[str, str]:
    out = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected key=value")
        key, value = (s.strip() for s in line.split("=", 1))
        out[key.lstrip("-").replace("-", "_")] = value
    return out


_BOOL_KEYS = {"include_conjectured", "conjectured", "one_setup", "no_verify"}


def _apply_config(parser, argv, args):
    """Re-parse with config values as defaults so explicit flags still win."""
    values = read_config(args.config)
    sub = parser._subparsers._group_actions[0].choices[args.subcommand]
    known = {a.dest: a for a in sub._actions}
    defaults = {}
    for key, value in values.items():
        key = "include_conjectured" if key == "conjectured" else key
        if key not in known or key in ("config", "help"):
            raise UsageError(f"unknown config key {key!r}")
        if key in _BOOL_KEYS:
            defaults[key] = value.lower() in ("1", "true", "yes", "on")
        else:
            try:
                defaults[key] = known[key].type(value) if known[key].type else value
            except (TypeError, ValueError, ArithmeticError):
                raise UsageError(f"bad value for {key}: {value!r}") from None
            if known[key].choices and defaults[key] not in known[key].choices:
                raise UsageError(f"{key}={value!r} not in {list(known[key].choices)}")
    sub.set_defaults(**defaults)
    return parser.parse_args(argv)


def config_from_args(args) -> RunConfig:
    base = {"subcommand", "M", "L", "n", "k", "alpha", "setup", "field_degree",
            "include_conjectured", "format", "seed", "output", "config"}
    ns = vars(args)
    seed = ns["seed"] if ns["seed"] is not None else _default_seed()
    return RunConfig(
        subcommand=ns["subcommand"], M=ns["M"], L=ns["L"], n=ns["n"], k=ns["k"],
        alpha=ns["alpha"], setup=Setup(ns["setup"]), field_degree=ns["field_degree"],
        include_conjectured=ns.get("include_conjectured", False), format=ns["format"],
        seed=seed, output=ns["output"],
        extra={k: v for k, v in ns.items() if k not in base})


def run(cfg: RunConfig) -> int:
    return COMMANDS[cfg.subcommand](cfg)


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.config:
            args = _apply_config(parser, argv, args)
        cfg = config_from_args(args)
        return run(cfg)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    except (UsageError, IntegralityError, RegimeError, ValueError, TypeError) as exc:
        print(f"bic: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"bic: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
