"""Command-line front end.

Exit codes: 0 success, 1 usage / input error, 2 numeric or degenerate input
(also a failed theorem battery or estimator row), 3 classification incomplete.
"""

from __future__ import annotations

import argparse
import csv
import io
import math
import sys
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from . import __version__
from .distributions import Exponential, SampleData, parse_distribution
from .errors import ExtropyError, ImageFormatError
from .estimators import CONVENTIONS, KDEConfig, estimate_similarity
from .functions import Kind
from .images import UNMATCHED, classification_csv, classify, load_image
from .measures import similarity_report
from .quadrature import QuadratureConfig
from .simulation import (
    SCENARIOS,
    bias_mse_csv,
    format_number,
    invariance_csv,
    run_bias_mse,
    run_invariance_table,
    run_theorem_suites,
)

EXIT_OK, EXIT_USAGE, EXIT_NUMERIC, EXIT_UNMATCHED = 0, 1, 2, 3
IMAGE_SUFFIXES = (".pgm", ".csv")


class UsageError(Exception):
    pass


def parse_kinds(text: str) -> list[Kind]:
    if text.strip().lower() == "all":
        return list(Kind)
    return [Kind.parse(tok) for tok in text.split(",") if tok.strip()]


def parse_floats(text: str) -> list[float]:
    return [float(tok) for tok in text.split(",") if tok.strip()]


def parse_ints(text: str) -> list[int]:
    return [int(tok) for tok in text.split(",") if tok.strip()]


def parse_bandwidth(text: str):
    return "silverman" if text == "silverman" else float(text)


def read_sample_file(path) -> SampleData:
    """One value per line; blank lines and '#' comments are ignored."""
    values = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            try:
                values.append(float(line))
            except ValueError:
                raise UsageError(f"{path}:{lineno}: not a number: {line!r}") from None
    try:
        return SampleData(values)
    except ValueError as exc:
        raise UsageError(f"{path}: {exc}") from None


def read_config_file(path) -> dict:
    """``key = value`` lines; keys are flag names with or without leading dashes."""
    out = {}
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            key, sep, value = line.partition("=")
            if not sep:
                raise UsageError(f"{path}:{lineno}: expected key = value")
            out[key.strip().lstrip("-").replace("-", "_")] = value.strip()
    return out


def _quadrature(args) -> QuadratureConfig:
    return QuadratureConfig(args.atol, args.rtol, args.tail_eps, args.max_subdivisions)


def _kde(args) -> KDEConfig:
    return KDEConfig(args.bandwidth, args.grid_points)


def _emit(args, text: str):
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)


def _csv(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def cmd_similarity(args) -> int:
    d1, d2 = parse_distribution(args.dist1), parse_distribution(args.dist2)
    q = _quadrature(args)
    p = args.precision
    rows = []
    for kind in args.kind:
        r = similarity_report(d1.function(kind), d2.function(kind), q)
        rows.append([kind.value] + [format_number(v, p) for v in (r.u1, r.u2, r.u12, r.i12, r.i21, r.similarity, r.cos_theta)])
    _emit(args, _csv(["kind", "U1", "U2", "U12", "I12", "I21", "S", "cos_theta"], rows))
    return EXIT_OK


def cmd_estimate(args) -> int:
    x, y = read_sample_file(args.x), read_sample_file(args.y)
    kde = _kde(args)
    p = args.precision
    rows = []
    for kind in args.kind:
        e = estimate_similarity(x, y, kind, args.convention, kde)
        rows.append([kind.value] + [format_number(v, p) for v in (e.j_x, e.j_y, e.inaccuracy, e.i_xy, e.i_yx, e.similarity)])
    _emit(args, _csv(["kind", "J_x", "J_y", "inaccuracy", "I_xy", "I_yx", "S"], rows))
    return EXIT_OK


def sweep_rates(lo: float, hi: float, step: float) -> np.ndarray:
    if not (step > 0 and 0 < lo <= hi):
        raise UsageError("sweep needs 0 < lambda1-min <= lambda1-max and step > 0")
    count = int(math.floor((hi - lo) / step + 1e-9)) + 1
    return np.round(lo + step * np.arange(count), 12)


def cmd_sweep(args) -> int:
    q = _quadrature(args)
    other = Exponential(args.lambda2)
    rows = []
    for rate in sweep_rates(args.lambda1_min, args.lambda1_max, args.step):
        d = Exponential(float(rate))
        s_e = similarity_report(d.density(), other.density(), q).similarity
        s_se = similarity_report(d.survival(), other.survival(), q).similarity
        rows.append([format_number(rate, 12), format_number(s_e, args.precision), format_number(s_se, args.precision)])
    _emit(args, _csv(["lambda1", "S_E", "S_SE"], rows))
    return EXIT_OK


def similarity_matrix(samples: Sequence[SampleData], kind, kde: KDEConfig = KDEConfig(), convention: str = "pooled") -> np.ndarray:
    k = len(samples)
    out = np.eye(k)
    for i in range(k):
        for j in range(i + 1, k):
            out[i, j] = out[j, i] = estimate_similarity(samples[i], samples[j], kind, convention, kde).similarity
    return out


def _group_spec(text: str):
    name, sep, path = text.partition("=")
    if sep:
        return name, path
    return Path(text).stem, text


def cmd_matrix(args) -> int:
    groups = [_group_spec(g) for g in args.groups]
    if len(groups) < 2:
        raise UsageError("matrix needs at least two group files")
    names = [n for n, _ in groups]
    samples = [read_sample_file(p) for _, p in groups]
    kde = _kde(args)
    blocks = []
    for kind in args.kind:
        mat = similarity_matrix(samples, kind, kde, args.convention)
        text = _csv(["group"] + names, [[n] + [format_number(v, args.precision) for v in row] for n, row in zip(names, mat)])
        if args.output_dir:
            out = Path(args.output_dir)
            out.mkdir(parents=True, exist_ok=True)
            (out / f"matrix_{kind.value}.csv").write_text(text)
        else:
            blocks.append(f"# kind: {kind.value}\n{text}")
    if blocks:
        _emit(args, "".join(blocks))
    return EXIT_OK


def cmd_simulate(args) -> int:
    try:
        base = SCENARIOS[args.scenario]
    except KeyError:
        raise UsageError(f"unknown scenario {args.scenario!r}; choose from {sorted(SCENARIOS)}") from None
    sc = base.with_options(sizes=tuple(args.n) if args.n else None, replications=args.reps, seed=args.seed)
    rows = run_bias_mse(sc, _kde(args), workers=args.workers)
    _emit(args, bias_mse_csv(sc, rows, args.precision))
    return EXIT_OK if all(r.ok for r in rows) else EXIT_NUMERIC


def cmd_invariance(args) -> int:
    rows = run_invariance_table(args.seed, args.n, _kde(args))
    _emit(args, invariance_csv(rows, args.precision))
    return EXIT_OK


def cmd_theorems(args) -> int:
    try:
        report = run_theorem_suites(args.phm_c, args.prhm_c, _quadrature(args))
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    _emit(args, report.to_csv(args.precision))
    return EXIT_OK if report.passed else EXIT_NUMERIC


def _image_paths(spec: str) -> list[Path]:
    paths = []
    for tok in spec.split(","):
        tok = tok.strip()
        if not tok:
            continue
        p = Path(tok)
        if p.is_dir():
            paths.extend(sorted(f for f in p.iterdir() if f.suffix.lower() in IMAGE_SUFFIXES))
        elif p.exists():
            paths.append(p)
        else:
            raise UsageError(f"no such file or directory: {tok}")
    return paths


def cmd_classify(args) -> int:
    anchor_paths = _image_paths(args.anchors)
    mixed_paths = _image_paths(args.mixed)
    if not anchor_paths or not mixed_paths:
        raise UsageError("need at least one anchor and one mixed image")
    anchors = [(p.stem, load_image(p)) for p in anchor_paths]
    mixed = [(str(p), load_image(p)) for p in mixed_paths]
    results = classify(mixed, anchors, args.eps)
    _emit(args, classification_csv(results, args.precision))
    return EXIT_UNMATCHED if any(r.group == UNMATCHED for r in results) else EXIT_OK


def _add_common(p: argparse.ArgumentParser):
    p.add_argument("--output", "-o", help="write output to this file instead of stdout")
    p.add_argument("--precision", type=int, default=7,
                   help="significant digits in output (0 = full precision)")
    p.add_argument("--config", help="key = value file mirroring flags; flags win")


def _add_quadrature(p):
    p.add_argument("--atol", type=float, default=1e-10)
    p.add_argument("--rtol", type=float, default=1e-8)
    p.add_argument("--tail-eps", type=float, default=1e-12)
    p.add_argument("--max-subdivisions", type=int, default=2000)


def _add_kde(p):
    p.add_argument("--bandwidth", type=parse_bandwidth, default="silverman",
                   help="'silverman' or a fixed positive bandwidth")
    p.add_argument("--grid-points", type=int, default=512)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="extropy-ratios",
        description="Extropy-based divergence and similarity ratios.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("similarity", help="exact ratios between two parametric distributions")
    p.add_argument("--dist1", required=True, help="e.g. exp:1, beta:3,2, uniform:0,1, power:2")
    p.add_argument("--dist2", required=True)
    p.add_argument("--kind", type=parse_kinds, default=list(Kind), help="density,survival,cumulative or all")
    _add_quadrature(p)
    _add_common(p)
    p.set_defaults(func=cmd_similarity)

    p = sub.add_parser("estimate", help="nonparametric estimates from two sample files")
    p.add_argument("--x", required=True, help="sample file, one value per line")
    p.add_argument("--y", required=True)
    p.add_argument("--kind", type=parse_kinds, default=list(Kind))
    p.add_argument("--convention", choices=CONVENTIONS, default="pooled")
    _add_kde(p)
    _add_common(p)
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("sweep", help="S_E and S_SE of Exp(lambda1) vs Exp(lambda2) over lambda1")
    p.add_argument("--lambda2", type=float, default=3.0)
    p.add_argument("--lambda1-min", type=float, default=0.2)
    p.add_argument("--lambda1-max", type=float, default=10.0)
    p.add_argument("--step", type=float, default=0.1)
    _add_quadrature(p)
    _add_common(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("matrix", help="symmetric similarity matrix between sample groups")
    p.add_argument("groups", nargs="+", help="sample files, optionally name=path")
    p.add_argument("--kind", type=parse_kinds, default=list(Kind))
    p.add_argument("--convention", choices=CONVENTIONS, default="pooled")
    p.add_argument("--output-dir", help="write matrix_<kind>.csv files here")
    _add_kde(p)
    _add_common(p)
    p.set_defaults(func=cmd_matrix)

    p = sub.add_parser("simulate", help="Monte Carlo bias / MSE of an estimator")
    p.add_argument("--scenario", default="table2", help=f"one of {', '.join(sorted(SCENARIOS))}")
    p.add_argument("--n", type=parse_ints, default=None, help="comma-separated sample sizes")
    p.add_argument("--reps", type=int, default=500)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=None)
    _add_kde(p)
    _add_common(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("invariance", help="estimates under scale and location transforms")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--n", type=int, default=1000)
    _add_kde(p)
    _add_common(p)
    p.set_defaults(func=cmd_invariance)

    p = sub.add_parser("theorems", help="PHM / PRHM / proportional-extropy inequality batteries")
    p.add_argument("--phm-c", type=parse_floats, default=[0.25, 0.5, 2.0, 4.0])
    p.add_argument("--prhm-c", type=parse_floats, default=[0.5, 2.0, 3.0])
    _add_quadrature(p)
    _add_common(p)
    p.set_defaults(func=cmd_theorems)

    p = sub.add_parser("classify", help="classify images by similarity to a black reference")
    p.add_argument("--anchors", required=True, help="comma-separated anchor images (group = file stem)")
    p.add_argument("--mixed", required=True, help="directory or comma-separated images")
    p.add_argument("--eps", type=float, default=1e-9, help="relative matching tolerance")
    _add_common(p)
    p.set_defaults(func=cmd_classify)
    return parser


def _apply_config(parser: argparse.ArgumentParser, argv: Sequence[str]):
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("command", nargs="?")
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    if not known.config:
        return
    settings = read_config_file(known.config)
    subparsers = next(a for a in parser._actions if isinstance(a, argparse._SubParsersAction))
    target = subparsers.choices.get(known.command)
    if target is None:
        return
    dests = {a.dest: a for a in target._actions}
    unknown = sorted(set(settings) - set(dests))
    if unknown:
        raise UsageError(f"unknown config keys for {known.command}: {', '.join(unknown)}")
    for key, value in settings.items():
        action = dests[key]
        # string defaults pass through the flag's type converter; required
        # flags become optional once the config supplies them
        action.required = False
        target.set_defaults(**{key: action.type(value) if action.type else value})


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        _apply_config(parser, argv)
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    except (UsageError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except (UsageError, OSError, ImageFormatError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ExtropyError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
