"""Command-line interface.

Subcommands: synth, cluster, stability, reconstruct, pca, filters dump.
Every run is deterministic given its flags; the seed defaults to the
TRENDLET_SEED environment variable, then 42.  Numeric CSV cells carry 17
significant digits so files round-trip bit-exactly, and SVG output embeds
no timestamps.

Exit codes: 0 success, 2 usage error (including unknown wavelet names),
3 data error (malformed or gappy CSV), 4 numeric or degenerate error
(constant series, anchor collisions, out-of-range coefficients, ...).
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import dwt, filterbank, pca, pipeline, preprocess, svgplot
from .errors import (
    AnchorCollision,
    Degenerate,
    DegenerateSeries,
    EmptyInput,
    GapError,
    IndexOutOfRange,
    InsufficientDepth,
    InvalidInput,
    ParseError,
    RequiresTwoComponents,
    TrendletError,
    UnknownWavelet,
)

__all__ = ["main", "build_parser"]

_USAGE_ERRORS = (UnknownWavelet,)
_DATA_ERRORS = (ParseError, GapError, EmptyInput)
_NUMERIC_ERRORS = (
    InvalidInput,
    DegenerateSeries,
    Degenerate,
    AnchorCollision,
    InsufficientDepth,
    IndexOutOfRange,
    RequiresTwoComponents,
)


def _default_seed() -> int:
    return int(os.environ.get("TRENDLET_SEED", "42"))


def _parse_anchors(text: str) -> dict[str, str]:
    anchors: dict[str, str] = {}
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        if "=" not in part:
            raise argparse.ArgumentTypeError(
                f"bad anchor {part!r}, expected <cluster>=<entity>"
            )
        name, entity = part.split("=", 1)
        name, entity = name.strip(), entity.strip()
        if not name or not entity:
            raise argparse.ArgumentTypeError(f"bad anchor {part!r}")
        if name in anchors:
            raise argparse.ArgumentTypeError(f"duplicate anchor name {name!r}")
        anchors[name] = entity
    if not anchors:
        raise argparse.ArgumentTypeError("empty anchor list")
    return anchors


def _parse_wavelets(text: str) -> tuple[str, ...]:
    if text.strip().lower() == "all":
        return filterbank.WAVELET_ORDER
    names = tuple(p.strip() for p in text.split(",") if p.strip())
    if not names:
        raise argparse.ArgumentTypeError("empty wavelet list")
    return names


def _write_csv(path: Path, header, rows) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)


def _fmt(value: float) -> str:
    return f"{float(value):.17g}"


def _write_json(path: Path, payload) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _load_normalized(args) -> preprocess.TimeSeriesPanel:
    panel = preprocess.ingest_csv(args.input)
    return preprocess.normalize(panel, drop_degenerate=getattr(args, "drop_degenerate", False))


def _named_labels(model, panel, anchors):
    if anchors:
        return pipeline.align_labels(model, panel.entity_ids, anchors)
    return [f"cluster{int(lbl)}" for lbl in model.labels]


def _entity_order(entity_ids, labels):
    return sorted(range(len(entity_ids)), key=lambda i: (labels[i], entity_ids[i]))


# ---------------------------------------------------------------- synth

def _cmd_synth(args) -> int:
    spec = pipeline.SyntheticSpec(
        n_days=args.days,
        n_increasing=args.increasing,
        n_stagnating=args.stagnating,
        n_seasonal=args.seasonal,
        noise_sigma=args.noise_sigma,
        seed=args.seed if args.seed is not None else _default_seed(),
    )
    panel, planted = pipeline.generate_synthetic(spec)
    outdir = Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    panel_path = outdir / "panel.csv"
    labels_path = outdir / "planted_labels.csv"
    preprocess.emit_csv(panel, panel_path)
    _write_csv(labels_path, ["entity", "archetype"], zip(panel.entity_ids, planted))
    print(f"wrote {panel_path} ({panel.n_entities} entities x {panel.n_days} days)")
    print(f"wrote {labels_path}")
    return 0


# ---------------------------------------------------------------- cluster

def _cmd_cluster(args) -> int:
    panel = _load_normalized(args)
    seed = args.seed if args.seed is not None else _default_seed()
    config = pipeline.TrendRunConfig(
        wavelet_names=(args.wavelet,),
        k=args.k,
        anchors=args.anchors,
        seed=seed,
        n_restarts=args.restarts,
    )
    model, features = pipeline.run_single(panel, args.wavelet, config)
    named = _named_labels(model, panel, args.anchors)
    outdir = Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    labels_path = outdir / "cluster_labels.csv"
    _write_csv(
        labels_path,
        ["entity", "cluster", "name"],
        [
            (entity, int(model.labels[i]), named[i])
            for i, entity in enumerate(panel.entity_ids)
        ],
    )
    wf = filterbank.get_filter(args.wavelet)
    lengths = dwt.band_lengths(panel.n_days, wf.filter_length)
    report = {
        "wavelet": wf.name,
        "filter_length": wf.filter_length,
        "k": config.k,
        "seed": seed,
        "n_restarts": model.n_restarts,
        "n_iter": model.n_iter,
        "inertia": model.inertia,
        "n_entities": panel.n_entities,
        "n_days": panel.n_days,
        "levels": len(lengths) - 1,
        # bands c0, d0, d1, ..., d_{J-1}; c0 and d0 share the coarsest length
        "band_lengths_coarse_to_fine": [lengths[0], *lengths[:-1]],
        "feature_length": int(features.shape[1]),
        "anchors": args.anchors or {},
        "entities": list(panel.entity_ids),
        "labels": [int(v) for v in model.labels],
        "named_labels": named,
    }
    report_path = outdir / "cluster_report.json"
    _write_json(report_path, report)
    print(f"wrote {labels_path}")
    print(f"wrote {report_path}")
    return 0


# ---------------------------------------------------------------- stability

def _cmd_stability(args) -> int:
    panel = _load_normalized(args)
    seed = args.seed if args.seed is not None else _default_seed()
    config = pipeline.TrendRunConfig(
        wavelet_names=args.wavelets,
        k=args.k,
        anchors=args.anchors,
        seed=seed,
        n_restarts=args.restarts,
    )
    matrix, runs = pipeline.co_occurrence(panel, config)
    reference = next(
        (list(r.named_labels) for r in runs if r.named_labels is not None),
        [f"cluster{int(lbl)}" for lbl in runs[0].model.labels],
    )
    order = _entity_order(panel.entity_ids, reference)
    ordered_ids = [panel.entity_ids[i] for i in order]

    outdir = Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    matrix_path = outdir / "cooccurrence.csv"
    _write_csv(
        matrix_path,
        ["entity", *ordered_ids],
        [
            [ordered_ids[a], *(_fmt(matrix.values[order[a], order[b]]) for b in range(len(order)))]
            for a in range(len(order))
        ],
    )
    table_path = outdir / "wavelet_labels.csv"
    cells = {
        run.wavelet_name: (
            list(run.named_labels)
            if run.named_labels is not None
            else [f"cluster{int(lbl)}" for lbl in run.model.labels]
        )
        for run in runs
    }
    _write_csv(
        table_path,
        ["entity", *(run.wavelet_name for run in runs)],
        [[ordered_ids[a], *(cells[r.wavelet_name][order[a]] for r in runs)] for a in range(len(order))],
    )
    heat_path = outdir / "cooccurrence.svg"
    if args.plot_format == "svg":
        ordered_vals = matrix.values[np.ix_(order, order)]
        svgplot.write_svg(
            heat_path,
            svgplot.heatmap(
                ordered_vals.tolist(),
                ordered_ids,
                ordered_ids,
                title="cluster co-occurrence across wavelets",
                vmin=0.0,
                vmax=1.0,
            ),
        )
    report = {
        "k": config.k,
        "seed": seed,
        "n_restarts": config.n_restarts,
        "anchors": args.anchors or {},
        "n_wavelets": matrix.n_wavelets,
        "entities": list(panel.entity_ids),
        "wavelets": [
            {
                "name": run.wavelet_name,
                "inertia": run.model.inertia,
                "n_iter": run.model.n_iter,
                "anchor_collision": run.anchor_collision,
                "labels": [int(v) for v in run.model.labels],
                "named_labels": list(run.named_labels) if run.named_labels else None,
            }
            for run in runs
        ],
        "co_occurrence": [[float(v) for v in row] for row in matrix.values],
    }
    report_path = outdir / "stability_report.json"
    _write_json(report_path, report)
    collisions = [r.wavelet_name for r in runs if r.anchor_collision]
    print(f"wrote {matrix_path}")
    print(f"wrote {table_path}")
    if args.plot_format == "svg":
        print(f"wrote {heat_path}")
    print(f"wrote {report_path}")
    if collisions:
        print(f"anchor collisions (left unnamed): {', '.join(collisions)}")
    return 0


# ---------------------------------------------------------------- reconstruct

def _parse_mode(text: str):
    head, _, rest = text.partition(":")
    head = head.strip().lower()
    if head == "levels":
        if rest.strip().lower() in ("max", "full"):
            return ("levels", None)
        try:
            return ("levels", int(rest))
        except ValueError:
            raise argparse.ArgumentTypeError(f"bad levels mode {text!r}") from None
    if head == "single":
        parts = [p.strip() for p in rest.split(",")]
        if len(parts) != 3 or parts[0] not in ("approx", "detail"):
            raise argparse.ArgumentTypeError(
                f"bad single mode {text!r}, expected single:<approx|detail>,<level>,<pos>"
            )
        try:
            return ("single", (parts[0], int(parts[1]), int(parts[2])))
        except ValueError:
            raise argparse.ArgumentTypeError(f"bad single mode {text!r}") from None
    raise argparse.ArgumentTypeError("mode must be levels:<m> or single:<band>,<level>,<pos>")


def _cmd_reconstruct(args) -> int:
    panel = preprocess.ingest_csv(args.input)
    if args.entity not in panel.entity_ids:
        raise InvalidInput(f"entity {args.entity!r} not in panel")
    one = preprocess.normalize(preprocess.subset(panel, [args.entity]))
    series = one.values[0]
    coeffs = dwt.decompose(series, args.wavelet)
    kind, detail = args.mode
    if kind == "levels":
        keep = coeffs.levels if detail is None else detail
        rec = dwt.reconstruct(dwt.truncate_to_level(coeffs, keep))
        label = f"levels:{keep}"
    else:
        band, level, pos = detail
        rec = dwt.reconstruct_single(coeffs, dwt.CoefficientIndex(band, level, pos))
        label = f"single:{band},{level},{pos}"
    outdir = Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    csv_path = outdir / "reconstruction.csv"
    _write_csv(
        csv_path,
        ["date", "normalized", "reconstruction"],
        [
            (day.isoformat(), _fmt(series[i]), _fmt(rec[i]))
            for i, day in enumerate(panel.dates)
        ],
    )
    print(f"wrote {csv_path}")
    if args.plot_format == "svg":
        svg_path = outdir / "reconstruction.svg"
        svgplot.write_svg(
            svg_path,
            svgplot.line_chart(
                [
                    ("normalized", series.tolist(), "#bbbbbb"),
                    (label, rec.tolist(), "#d62728"),
                ],
                title=f"{args.entity} under {coeffs.wavelet_name} ({label})",
            ),
        )
        print(f"wrote {svg_path}")
    return 0


# ---------------------------------------------------------------- pca

def _cmd_pca(args) -> int:
    panel = _load_normalized(args)
    seed = args.seed if args.seed is not None else _default_seed()
    config = pipeline.TrendRunConfig(
        wavelet_names=(args.wavelet,),
        k=args.k,
        anchors=args.anchors,
        seed=seed,
        n_restarts=args.restarts,
    )
    model, features = pipeline.run_single(panel, args.wavelet, config)
    named = _named_labels(model, panel, args.anchors)
    if features.shape[1] < 2:
        raise RequiresTwoComponents(f"only {features.shape[1]} coefficient(s)")
    pca_model = pca.pca_fit(features, 2)
    wf = filterbank.get_filter(args.wavelet)
    names = dwt.coefficient_names(panel.n_days, wf.filter_length)
    score_rows, loading_rows = pca.biplot_data(pca_model, names, named, panel.entity_ids)

    outdir = Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    scores_path = outdir / "pca_scores.csv"
    _write_csv(
        scores_path,
        ["entity", "pc1", "pc2", "cluster"],
        [(e, _fmt(x), _fmt(y), lbl) for e, x, y, lbl in score_rows],
    )
    loadings_path = outdir / "pca_loadings.csv"
    _write_csv(
        loadings_path,
        ["coefficient", "pc1", "pc2"],
        [(name, _fmt(x), _fmt(y)) for name, x, y in loading_rows],
    )
    coef_path = outdir / "pca_coefficients.csv"
    _write_csv(
        coef_path,
        ["entity", *names],
        [
            (entity, *(_fmt(v) for v in features[i]))
            for i, entity in enumerate(panel.entity_ids)
        ],
    )
    print(f"wrote {scores_path}")
    print(f"wrote {loadings_path}")
    print(f"wrote {coef_path}")
    if args.plot_format == "svg":
        biplot_path = outdir / "pca_biplot.svg"
        svgplot.write_svg(
            biplot_path,
            svgplot.biplot(score_rows, loading_rows, title=f"{wf.name} coefficient biplot"),
        )
        # per-coefficient z-scores across entities make rows comparable
        mean = features.mean(axis=0)
        std = features.std(axis=0)
        std[std == 0] = 1.0
        zscores = (features - mean) / std
        order = _entity_order(panel.entity_ids, named)
        heat_path = outdir / "pca_coefficients.svg"
        svgplot.write_svg(
            heat_path,
            svgplot.heatmap(
                zscores[order].tolist(),
                [panel.entity_ids[i] for i in order],
                names,
                title=f"{wf.name} coefficients (z-scored per coefficient)",
            ),
        )
        print(f"wrote {biplot_path}")
        print(f"wrote {heat_path}")
    return 0


# ---------------------------------------------------------------- filters

def _cmd_filters_dump(args) -> int:
    rows = filterbank.list_filters(args.days)
    writer = csv.writer(sys.stdout, lineterminator="\n")
    writer.writerow(["wavelet", "filter_length", f"selected_coefficients_n{args.days}"])
    writer.writerows(rows)
    return 0


# ---------------------------------------------------------------- parser

def _add_common(sub, *, wavelet=True, seed=True):
    sub.add_argument("--outdir", default=".", help="output directory (default: .)")
    if wavelet:
        sub.add_argument("--wavelet", default="sym2", help="wavelet name (default: sym2)")
    if seed:
        sub.add_argument(
            "--seed",
            type=int,
            default=None,
            help="RNG seed (default: $TRENDLET_SEED, then 42)",
        )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="trendlet",
        description="Cluster daily time series by long-horizon trend via coarse "
        "wavelet coefficients.",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    p_synth = subs.add_parser("synth", help="generate a synthetic panel with planted trends")
    p_synth.add_argument("--days", type=int, default=846, help="number of days (>= 64)")
    p_synth.add_argument("--increasing", type=int, default=20, help="entities drifting up")
    p_synth.add_argument("--stagnating", type=int, default=20, help="entities drifting flat/down")
    p_synth.add_argument("--seasonal", type=int, default=20, help="entities with summer peaks")
    p_synth.add_argument("--noise-sigma", type=float, default=8.0, help="daily noise sigma")
    _add_common(p_synth, wavelet=False)
    p_synth.set_defaults(func=_cmd_synth)

    p_cluster = subs.add_parser("cluster", help="cluster one wavelet's coarse coefficients")
    p_cluster.add_argument("--input", required=True, help="panel CSV (date,<entity>,...)")
    p_cluster.add_argument("--k", type=int, default=3, help="number of clusters (default: 3)")
    p_cluster.add_argument("--restarts", type=int, default=10, help="k-means restarts")
    p_cluster.add_argument(
        "--anchors",
        type=_parse_anchors,
        default=None,
        help="cluster naming, e.g. increasing=shop51,stagnating=shop01,special=shop02",
    )
    p_cluster.add_argument(
        "--drop-degenerate",
        action="store_true",
        help="drop constant series instead of aborting",
    )
    _add_common(p_cluster)
    p_cluster.set_defaults(func=_cmd_cluster)

    p_stab = subs.add_parser("stability", help="co-occurrence of clusters across wavelets")
    p_stab.add_argument("--input", required=True, help="panel CSV")
    p_stab.add_argument(
        "--wavelets",
        type=_parse_wavelets,
        default=filterbank.WAVELET_ORDER,
        help="comma list of wavelets or 'all' (default: all 15)",
    )
    p_stab.add_argument("--k", type=int, default=3)
    p_stab.add_argument("--restarts", type=int, default=10)
    p_stab.add_argument("--anchors", type=_parse_anchors, default=None)
    p_stab.add_argument("--drop-degenerate", action="store_true")
    p_stab.add_argument("--plot-format", choices=("svg", "csv"), default="svg")
    _add_common(p_stab, wavelet=False)
    p_stab.set_defaults(func=_cmd_stability)

    p_rec = subs.add_parser("reconstruct", help="reconstruct a series from selected coefficients")
    p_rec.add_argument("--input", required=True, help="panel CSV")
    p_rec.add_argument("--entity", required=True, help="entity id to reconstruct")
    p_rec.add_argument(
        "--mode",
        type=_parse_mode,
        default=("levels", 2),
        help="levels:<m> (or levels:max) or single:<approx|detail>,<level>,<pos> "
        "(default: levels:2)",
    )
    p_rec.add_argument("--plot-format", choices=("svg", "csv"), default="svg")
    _add_common(p_rec, seed=False)
    p_rec.set_defaults(func=_cmd_reconstruct)

    p_pca = subs.add_parser("pca", help="biplot of entities and coefficient axes")
    p_pca.add_argument("--input", required=True, help="panel CSV")
    p_pca.add_argument("--k", type=int, default=3)
    p_pca.add_argument("--restarts", type=int, default=10)
    p_pca.add_argument("--anchors", type=_parse_anchors, default=None)
    p_pca.add_argument("--drop-degenerate", action="store_true")
    p_pca.add_argument("--plot-format", choices=("svg", "csv"), default="svg")
    _add_common(p_pca)
    p_pca.set_defaults(func=_cmd_pca)

    p_filters = subs.add_parser("filters", help="filter registry utilities")
    f_subs = p_filters.add_subparsers(dest="filters_command", required=True)
    p_dump = f_subs.add_parser("dump", help="emit the wavelet table as CSV on stdout")
    p_dump.add_argument("--days", type=int, default=846, help="series length for the count column")
    p_dump.set_defaults(func=_cmd_filters_dump)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except _USAGE_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except _DATA_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except _NUMERIC_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    except TrendletError as exc:  # fallback for new error types
        print(f"error: {exc}", file=sys.stderr)
        return 4
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
