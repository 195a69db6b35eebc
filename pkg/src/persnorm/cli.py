"""Command-line entry point: ``persnorm <subcommand> ...``.

Settings resolve as command-line flag, then ``PERSNORM_*`` environment
variable, then built-in default. Exit status is 0 on success, 1 for bad
input (including unknown flags) and 2 for anything unexpected.
"""

from __future__ import annotations

import argparse
import os
import shutil
import sys
import tempfile
import traceback
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Sequence

from .bootstrap import (
    DEFAULT_ALPHA,
    DEFAULT_BAND_SEED,
    DEFAULT_RESAMPLES,
    ConfidenceBand,
    bootstrap_band,
)
from .correlate import correlation_csv, correlation_table, metrics_from_reports, read_metrics_csv
from .datasets import DatasetBundle, fixture_path, gen_normal, load_tsv, tsv_text
from .errors import PersnormError
from .norms import (
    EssentialPolicy,
    NormsConfig,
    fmt_float,
    norms_csv,
    norms_table,
    report_from_diagram,
)
from .persistence import PersistenceDiagram, compute_diagram
from .rips import AUTO
from .stats import stats_csv, summarize
from .svg import DEFAULT_BINS, render_diagram, render_histogram, render_scatter, render_sweep
from .transforms import DEFAULT_GRIDS, TransformKind, TransformSpec, run_sweep, sweep_csv

EXIT_OK, EXIT_INPUT, EXIT_INTERNAL = 0, 1, 2
ENV_PREFIX = "PERSNORM_"
NORM_COLUMNS = ("L01", "L02", "L11", "L12")


class UsageError(PersnormError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        raise UsageError(message)


# ---- setting resolution -------------------------------------------------


@dataclass(frozen=True)
class _Setting:
    env: str
    default: object
    convert: Callable[[str], object]


def _max_scale(text: str):
    return AUTO if str(text).strip().lower() == AUTO else float(text)


_SETTINGS = {
    "essential": _Setting("ESSENTIAL", EssentialPolicy.DROP, EssentialPolicy.parse),
    "max_scale": _Setting("MAX_SCALE", AUTO, _max_scale),
    "seed": _Setting("SEED", 42, int),
    "band_seed": _Setting("BAND_SEED", DEFAULT_BAND_SEED, int),
    "band_alpha": _Setting("BAND_ALPHA", DEFAULT_ALPHA, float),
    "band_b": _Setting("BAND_B", DEFAULT_RESAMPLES, int),
    "jobs": _Setting("JOBS", 1, int),
}


def _resolve(args: argparse.Namespace, name: str):
    setting = _SETTINGS[name]
    raw = getattr(args, name, None)
    source = f"--{name.replace('_', '-')}"
    if raw is None:
        raw = os.environ.get(ENV_PREFIX + setting.env)
        source = ENV_PREFIX + setting.env
        if raw is None:
            return setting.default
    try:
        return setting.convert(raw)
    except (ValueError, PersnormError) as exc:
        raise UsageError(f"invalid value {raw!r} for {source}: {exc}") from None


def _config(args) -> NormsConfig:
    return NormsConfig(
        essential_policy=_resolve(args, "essential"),
        max_scale=_resolve(args, "max_scale"),
        jobs=max(1, _resolve(args, "jobs")),
    )


def _band(args, cloud) -> ConfidenceBand:
    return bootstrap_band(
        cloud,
        alpha=_resolve(args, "band_alpha"),
        n_resamples=_resolve(args, "band_b"),
        seed=_resolve(args, "band_seed"),
    )


# ---- shared helpers ------------------------------------------------------


def _bundle(args) -> DatasetBundle:
    path = args.tsv if args.tsv is not None else fixture_path()
    bundle = load_tsv(path)
    if getattr(args, "with_normal", False) and "normal" not in bundle:
        bundle = bundle.with_cloud(gen_normal(_resolve(args, "seed")))
    return bundle


def _cloud(args):
    bundle = _bundle(args)
    if args.dataset == "normal" and "normal" not in bundle:
        return gen_normal(_resolve(args, "seed"))
    if args.dataset not in bundle:
        raise UsageError(f"dataset {args.dataset!r} not in input; have {', '.join(bundle.labels)}")
    return bundle[args.dataset]


def _emit(text: str, output: str | None) -> None:
    if output is None or output == "-":
        sys.stdout.write(text)
    else:
        Path(output).write_text(text, encoding="utf-8")


def diagram_csv(diagram: PersistenceDiagram, band: ConfidenceBand | None = None) -> str:
    lines = ["dim,birth,death,essential"]
    for p in sorted(diagram.pairs, key=lambda q: q.key()):
        death = "inf" if p.essential else fmt_float(p.death)
        lines.append(f"{p.dim},{fmt_float(p.birth)},{death},{'true' if p.essential else 'false'}")
    if band is not None:
        lines.append(
            f"# band alpha={band.alpha!r} B={band.n_resamples} seed={band.seed} "
            f"multiplier={band.multiplier!r} width={fmt_float(band.width)}"
        )
    return "\n".join(lines) + "\n"


# ---- subcommands -----------------------------------------------------------


def cmd_stats(args) -> None:
    _emit(stats_csv(summarize(c) for c in _bundle(args).clouds()), args.output)


def cmd_norms(args) -> None:
    reports = norms_table(_bundle(args).clouds(), _config(args))
    _emit(norms_csv(reports), args.output)
    for r in reports:
        if not r.ok:
            print(f"warning: {r.label}: {r.error}", file=sys.stderr)


def cmd_diagram(args) -> None:
    cloud = _cloud(args)
    config = _config(args)
    diagram = compute_diagram(cloud, config.max_scale, config.triangle_budget)
    band = _band(args, cloud) if args.band else None
    _emit(diagram_csv(diagram, band), args.output)
    if args.svg is not None:
        svg_path = args.svg or f"{cloud.label}_diagram.svg"
        Path(svg_path).write_text(render_diagram(diagram, band, title=cloud.label), encoding="utf-8")


def _parse_grid(text: str | None) -> tuple[float, ...]:
    if not text:
        return ()
    try:
        return tuple(float(v) for v in text.split(","))
    except ValueError:
        raise UsageError(f"invalid grid {text!r}; expected comma-separated numbers") from None


def cmd_sweep(args) -> None:
    spec = TransformSpec(TransformKind.parse(args.kind), _parse_grid(args.grid))
    results = run_sweep(_bundle(args), spec, shortcut=not args.no_shortcut, config=_config(args))
    _emit(sweep_csv(results), args.output)
    if args.svg:
        Path(args.svg).write_text(render_sweep(results, args.column), encoding="utf-8")


def cmd_correlate(args) -> None:
    if args.input is not None:
        matrix = read_metrics_csv(args.input)
    else:
        bundle = _bundle(args)
        matrix = metrics_from_reports(norms_table(bundle.clouds(), _config(args)))
    metrics = args.metrics.split(",") if args.metrics else None
    if metrics is not None:
        unknown = [m for m in metrics if m not in matrix.metrics]
        if unknown:
            raise UsageError(f"unknown metric(s) {', '.join(unknown)}; have {', '.join(matrix.metrics)}")
    _emit(correlation_csv(correlation_table(matrix, metrics)), args.output)


def cmd_gen_normal(args) -> None:
    _emit(tsv_text([gen_normal(_resolve(args, "seed"), n=args.n)]), args.output)


def cmd_hist(args) -> None:
    _emit(render_histogram(_cloud(args), args.axis, args.bins), args.output)


def write_all(out_dir: Path, args) -> None:
    """Write every artifact into ``out_dir`` (which must exist and be empty)."""
    config = _config(args)
    bundle = _bundle(args)
    if "normal" not in bundle:
        bundle = bundle.with_cloud(gen_normal(_resolve(args, "seed")))
    clouds = bundle.clouds()

    def write(rel: str, text: str) -> None:
        path = out_dir / rel
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8")

    write("normal.tsv", tsv_text([bundle["normal"]]))
    write("stats.csv", stats_csv(summarize(c) for c in clouds))

    reports = []
    for c in clouds:
        diagram = compute_diagram(c, config.max_scale, config.triangle_budget)
        band = _band(args, c)
        reports.append(report_from_diagram(c, diagram, config.essential_policy))
        write(f"diagrams/{c.label}.csv", diagram_csv(diagram, band))
        write(f"diagrams/{c.label}.svg", render_diagram(diagram, band, title=c.label))
        write(f"scatter/{c.label}.svg", render_scatter(c))
        for axis in (1, 2):
            write(f"hist/{c.label}_x{axis}.svg", render_histogram(c, axis, DEFAULT_BINS))
    write("norms.csv", norms_csv(reports))
    write("correlation.csv", correlation_csv(correlation_table(metrics_from_reports(reports))))

    for kind in TransformKind:
        results = run_sweep(bundle, TransformSpec(kind, DEFAULT_GRIDS[kind]), config=config,
                            baseline={r.label: r.norms for r in reports if r.ok})
        write(f"sweeps/{kind.value}.csv", sweep_csv(results))
        for col in NORM_COLUMNS:
            write(f"sweeps/{kind.value}_{col}.svg", render_sweep(results, col))


def cmd_all(args) -> None:
    target = Path(args.out).resolve()
    target.parent.mkdir(parents=True, exist_ok=True)
    staging = Path(tempfile.mkdtemp(prefix=f".{target.name}.tmp-", dir=target.parent))
    try:
        write_all(staging, args)
        if target.exists():
            retired = Path(tempfile.mkdtemp(prefix=f".{target.name}.old-", dir=target.parent))
            os.replace(target, retired / target.name)
            os.replace(staging, target)
            shutil.rmtree(retired)
        else:
            os.replace(staging, target)
    except BaseException:
        shutil.rmtree(staging, ignore_errors=True)
        raise


# ---- parser ----------------------------------------------------------------


def _add_input(p: argparse.ArgumentParser) -> None:
    p.add_argument("tsv", nargs="?", help="dataset<TAB>x<TAB>y file (default: bundled fixtures)")


def _add_output(p: argparse.ArgumentParser) -> None:
    p.add_argument("-o", "--output", help="output file (default: stdout)")


def _add_engine(p: argparse.ArgumentParser) -> None:
    p.add_argument("--essential", choices=[e.value for e in EssentialPolicy],
                   help="essential-feature policy (default: drop)")
    p.add_argument("--max-scale", help="filtration cut-off or 'auto' (default: auto = diameter)")
    p.add_argument("--jobs", type=int, help="worker processes (default: 1)")


def _add_seed(p: argparse.ArgumentParser) -> None:
    p.add_argument("--seed", type=int, help="seed of the generated normal dataset (default: 42)")


def _add_band(p: argparse.ArgumentParser) -> None:
    p.add_argument("--band-alpha", type=float, help=f"band level (default: {DEFAULT_ALPHA})")
    p.add_argument("--band-b", type=int, help=f"number of resamples (default: {DEFAULT_RESAMPLES})")
    p.add_argument("--band-seed", type=int, help=f"resampling seed (default: {DEFAULT_BAND_SEED})")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="persnorm", description="Persistence norms of 2-D point clouds.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("stats", help="per-dataset summary statistics CSV")
    _add_input(p); _add_output(p); _add_seed(p)
    p.add_argument("--with-normal", action="store_true", help="append the generated normal dataset")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("norms", help="persistence norms table CSV")
    _add_input(p); _add_output(p); _add_engine(p); _add_seed(p)
    p.add_argument("--with-normal", action="store_true", help="append the generated normal dataset")
    p.set_defaults(func=cmd_norms)

    p = sub.add_parser("diagram", help="persistence diagram CSV (and SVG) of one dataset")
    _add_input(p); _add_output(p); _add_engine(p); _add_seed(p); _add_band(p)
    p.add_argument("--dataset", required=True)
    p.add_argument("--band", action="store_true", help="compute the resampling confidence band")
    p.add_argument("--svg", nargs="?", const="", help="also write an SVG (default name: <dataset>_diagram.svg)")
    p.set_defaults(func=cmd_diagram)

    p = sub.add_parser("sweep", help="norms under scaling, translation or X1 stretching")
    _add_input(p); _add_output(p); _add_engine(p); _add_seed(p)
    p.add_argument("--kind", required=True, choices=[k.value for k in TransformKind])
    p.add_argument("--grid", help="comma-separated parameter values (default: built-in grid)")
    p.add_argument("--no-shortcut", action="store_true",
                   help="recompute every grid point and cross-check against the analytic shortcut")
    p.add_argument("--svg", help="write a sweep plot to this path")
    p.add_argument("--column", default="L01", choices=NORM_COLUMNS, help="norm plotted in --svg")
    p.add_argument("--with-normal", action="store_true", help="append the generated normal dataset")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("correlate", help="Pearson/Spearman correlation table CSV")
    p.add_argument("input", nargs="?", help="metrics or norms CSV (default: computed from the fixtures)")
    p.add_argument("--tsv", help="dataset file used when no CSV is given")
    p.add_argument("--metrics", help="comma-separated subset of metrics, in output order")
    _add_output(p); _add_engine(p); _add_seed(p)
    p.set_defaults(func=cmd_correlate, with_normal=True)

    p = sub.add_parser("gen-normal", help="moment-matched bivariate normal sample as TSV")
    _add_output(p); _add_seed(p)
    p.add_argument("-n", type=int, default=142, help="number of points (default: 142)")
    p.set_defaults(func=cmd_gen_normal)

    p = sub.add_parser("hist", help="density histogram SVG of one axis")
    _add_input(p); _add_output(p); _add_seed(p)
    p.add_argument("--dataset", required=True)
    p.add_argument("--axis", type=int, required=True, choices=(1, 2))
    p.add_argument("--bins", type=int, default=DEFAULT_BINS)
    p.set_defaults(func=cmd_hist)

    p = sub.add_parser("all", help="write every table and figure into a directory")
    _add_input(p); _add_engine(p); _add_seed(p); _add_band(p)
    p.add_argument("--out", required=True, help="output directory (replaced atomically)")
    p.set_defaults(func=cmd_all)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        args.func(args)
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    except PersnormError as exc:
        print(f"persnorm: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except Exception:
        traceback.print_exc(file=sys.stderr)
        return EXIT_INTERNAL
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
