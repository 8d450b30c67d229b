"""Command-line interface.

Commands::

    dftrft score  DATA.csv --method dft [--bins 16]
    dftrft curve  DATA.csv --method dft --feature 0 --bins 16 64
    dftrft select DATA.csv --method dft --elbow late -o reduced.csv
    dftrft bench  --task classification --noise-sigma 0.5

Exit status: 0 on success, 2 for usage errors, 3 for data validation errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import tempfile
from typing import Any, Sequence

from . import __version__
from .bench import CLASSIFICATION, TASK_METHODS, run_benchmark, run_synthetic_benchmark
from .binning import BinningConfig
from .data import (
    CATEGORICAL,
    CONTINUOUS,
    DataValidationError,
    load_csv,
    read_csv_table,
    table_to_dataset,
)
from .dft import dft_score
from .evaluation import SyntheticSpec
from .methods import METHODS, score_features
from .ranking import detect_elbow, select_top_k
from .rft import rft_score

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DATA = 3

TOOL = "dftrft"


class UsageError(Exception):
    pass


def _bins(text: str) -> int:
    try:
        b = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"bins must be an integer, got {text!r}") from None
    if b < 2:
        raise argparse.ArgumentTypeError("bins must be ≥ 2")
    return b


def _sigma(text: str) -> float:
    s = float(text)
    if not s >= 0:
        raise argparse.ArgumentTypeError("noise sigma must be ≥ 0")
    return s


# -- output ------------------------------------------------------------------


def _json_value(v: Any) -> Any:
    if isinstance(v, float) and not math.isfinite(v):
        return "inf" if v > 0 else ("-inf" if v < 0 else "nan")
    if isinstance(v, dict):
        return {k: _json_value(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_json_value(x) for x in v]
    return v


def _emit(text: str, path: str | None) -> None:
    """Write to stdout, or atomically to ``path`` via a temp file and rename."""
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(prefix=".tmp-", dir=directory)
    try:
        with os.fdopen(fd, "w", newline="", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _csv_text(header: Sequence[str], rows: Sequence[Sequence[Any]], delimiter: str = ",") -> str:
    buf = io.StringIO()
    w = csv.writer(buf, delimiter=delimiter, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _json_text(obj: dict) -> str:
    return json.dumps(_json_value(obj), indent=2) + "\n"


# -- input -------------------------------------------------------------------


def _load(args: argparse.Namespace):
    """Read the input file, resolve the target kind for the method, validate."""
    table = read_csv_table(args.input, args.delimiter)
    li = table.column_index(args.label_column)
    need = METHODS[args.method][0]
    raw = [row[li] for row in table.rows]

    def numeric(s: str) -> bool:
        try:
            return math.isfinite(float(s))
        except ValueError:
            return False

    all_numeric = all(numeric(s) for s in raw)
    kind = args.target
    if kind == "auto":
        kind = need or (CONTINUOUS if all_numeric else CATEGORICAL)
    if need is not None and kind != need:
        raise UsageError(f"{args.method} requires {need} target")
    if kind == CONTINUOUS and not all_numeric and need == CONTINUOUS:
        raise UsageError(f"{args.method} requires continuous target")
    matrix, target = table_to_dataset(table, li, kind)
    return table, li, matrix, target


def _provenance(args: argparse.Namespace, target_kind: str, **extra: Any) -> dict[str, Any]:
    out = {"tool": TOOL, "version": __version__, "command": args.command}
    for key in ("method", "bins", "seed", "input"):
        if hasattr(args, key):
            out[key] = getattr(args, key)
    out["target_kind"] = target_kind
    out.update(extra)
    return out


def _elbow_or_none(ranked, smooth: int | None):
    if len(ranked) < 3:
        return None
    return detect_elbow(ranked, smooth)


def _elbow_dict(elbow) -> dict[str, Any] | None:
    if elbow is None:
        return None
    return {"early": elbow.early_index, "late": elbow.late_index,
            "degenerate": elbow.degenerate, "profile": elbow.curvature_profile.tolist()}


# -- commands ----------------------------------------------------------------


def cmd_score(args: argparse.Namespace) -> int:
    _, _, matrix, target = _load(args)
    res = score_features(args.method, matrix, target, BinningConfig(args.bins),
                         class_balanced=args.class_balanced)
    ranked = res.ranked()
    elbow = _elbow_or_none(ranked, args.smooth)
    rows = []
    for r, i in enumerate(ranked.order.tolist(), start=1):
        thr = float(res.thresholds[i]) if res.thresholds is not None else None
        rows.append({"rank": r, "feature_index": i, "feature": matrix.names[i],
                     "value": float(res.values[i]), "threshold": thr,
                     "degenerate": bool(res.degenerate[i])})
    if args.format == "json":
        prov = _provenance(args, target.kind, polarity=res.polarity, elbow=_elbow_dict(elbow))
        _emit(_json_text({"provenance": prov, "features": rows}), args.output)
    else:
        header = list(rows[0])
        _emit(_csv_text(header, [["" if row[h] is None else row[h] for h in header] for row in rows]),
              args.output)
    return EXIT_OK


def _threshold_curve(method: str, column, target, bins: int) -> dict[str, Any]:
    score = (dft_score if method == "dft" else rft_score)(column, target, BinningConfig(bins))
    return {"bins": bins, "thresholds": score.thresholds.tolist(), "losses": score.losses.tolist(),
            "optimal_threshold": score.optimal_threshold, "optimal_loss": score.optimal_loss,
            "degenerate": score.degenerate}


def cmd_curve(args: argparse.Namespace) -> int:
    _, _, matrix, target = _load(args)
    p = matrix.n_features
    features = args.feature if args.feature is not None else list(range(p))
    for i in features:
        if not 0 <= i < p:
            raise UsageError(f"feature index {i} out of range [0, {p})")
    if features and args.method not in ("dft", "rft") and args.feature is not None:
        raise UsageError(f"{args.method} has no threshold curve; use dft or rft")
    per_feature = []
    if args.method in ("dft", "rft"):
        for i in features:
            for b in args.bins:
                c = _threshold_curve(args.method, matrix.column(i), target, b)
                per_feature.append({"feature_index": i, "feature": matrix.names[i], **c})
    res = score_features(args.method, matrix, target, BinningConfig(args.bins[0]),
                         class_balanced=args.class_balanced)
    ranked = res.ranked()
    elbow = _elbow_or_none(ranked, args.smooth)
    ranked_curve = {"order": ranked.order.tolist(), "values": ranked.sorted_values.tolist(),
                    "polarity": ranked.polarity, "elbow": _elbow_dict(elbow)}
    if args.format == "json":
        prov = _provenance(args, target.kind, elbow=_elbow_dict(elbow))
        _emit(_json_text({"provenance": prov, "feature_curves": per_feature,
                          "ranked_curve": ranked_curve}), args.output)
        return EXIT_OK
    header = ["kind", "feature_index", "bins", "position", "x", "y", "annotation"]
    rows: list[list[Any]] = []
    for c in per_feature:
        for pos, (t, loss) in enumerate(zip(c["thresholds"], c["losses"]), start=1):
            note = "optimal" if t == c["optimal_threshold"] else ""
            rows.append(["threshold", c["feature_index"], c["bins"], pos, t, loss, note])
    for r, (i, v) in enumerate(zip(ranked_curve["order"], ranked_curve["values"]), start=1):
        notes = []
        if elbow is not None and r == elbow.early_index:
            notes.append("early")
        if elbow is not None and r == elbow.late_index:
            notes.append("late")
        rows.append(["ranked", i, args.bins[0], r, r, v, "+".join(notes)])
    _emit(_csv_text(header, rows), args.output)
    return EXIT_OK


def cmd_select(args: argparse.Namespace) -> int:
    table, li, matrix, target = _load(args)
    res = score_features(args.method, matrix, target, BinningConfig(args.bins),
                         class_balanced=args.class_balanced)
    ranked = res.ranked()
    p = matrix.n_features
    if args.k is not None:
        if not 1 <= args.k <= p:
            raise UsageError(f"k must be in [1, {p}], got {args.k}")
        k, mode = args.k, "manual"
    else:
        if p < 3:
            raise UsageError("elbow selection needs at least 3 features; pass --k")
        elbow = detect_elbow(ranked, args.smooth)
        k = elbow.early_index if args.elbow == "early" else elbow.late_index
        mode = args.elbow
    chosen = select_top_k(ranked, k).members
    feat_cols = [j for j in range(len(table.header)) if j != li]
    keep = sorted([feat_cols[i] for i in chosen] + [li])
    header = [table.header[j] for j in keep]
    rows = [[row[j] for j in keep] for row in table.rows]
    _emit(_csv_text(header, rows, table.delimiter), args.output)
    names = ",".join(matrix.names[i] for i in select_top_k(ranked, k).ordered)
    print(f"method={args.method} mode={mode} k={k} features={names}")
    return EXIT_OK


def cmd_bench(args: argparse.Namespace) -> int:
    config = BinningConfig(args.bins)
    if (args.train is None) != (args.test is None):
        raise UsageError("--train and --test must be given together")
    if args.train is not None:
        kind = CATEGORICAL if args.task == CLASSIFICATION else CONTINUOUS
        train = load_csv(args.train, args.label_column, kind, args.delimiter)
        test = load_csv(args.test, args.label_column, kind, args.delimiter)
        if train[0].names != test[0].names:
            raise DataValidationError("train and test files have different feature columns")
        report = run_benchmark(args.task, train, test, config=config,
                               noise_sigma=args.noise_sigma, seed=args.seed)
    else:
        coef = tuple(args.coefficient) if args.coefficient else None
        spec = SyntheticSpec(n_informative=args.n_informative, n_noise=args.n_noise,
                             n_samples_per_class=args.n_per_class, n_samples=args.n_samples,
                             class_separation=args.separation, target_coefficients=coef,
                             seed=args.seed)
        report = run_synthetic_benchmark(args.task, spec, config=config,
                                         noise_sigma=args.noise_sigma)
    rows = report.rows()
    if args.format == "json":
        prov = {"tool": TOOL, "version": __version__, "command": "bench", "task": args.task,
                "methods": list(report.methods), "bins": args.bins, "seed": args.seed,
                "noise_sigma": args.noise_sigma,
                "elbow": {"clean": [report.clean.k_early, report.clean.k_late],
                          "noisy": [report.noisy.k_early, report.noisy.k_late]}}
        _emit(_json_text({"provenance": prov, "report": report.to_dict()}), args.output)
    else:
        header = list(rows[0])
        body = [[row[h] for h in header] for row in rows]
        dims = (f"# metric={report.metric} early_dim={report.clean.k_early}/{report.noisy.k_early} "
                f"late_dim={report.clean.k_late}/{report.noisy.k_late} (clean/noisy)\n")
        _emit(dims + _csv_text(header, body), args.output)
    return EXIT_OK


# -- parser ------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog=TOOL, description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"{TOOL} {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def data_args(p: argparse.ArgumentParser, multi_bins: bool = False, formats: bool = True) -> None:
        p.add_argument("input", help="CSV file with a header row")
        p.add_argument("--method", choices=sorted(METHODS), default="dft")
        p.add_argument("--label-column", default="-1",
                       help="label column name or position (default: last column)")
        p.add_argument("--target", choices=("auto", CATEGORICAL, CONTINUOUS), default="auto",
                       help="how to read the label column (default: what the method needs)")
        p.add_argument("--delimiter", default=",")
        if multi_bins:
            p.add_argument("--bins", type=_bins, nargs="+", default=[16],
                           help="one or more bin counts; the first is used for the ranked curve")
        else:
            p.add_argument("--bins", type=_bins, default=16)
        p.add_argument("--class-balanced", action="store_true",
                       help="dft: weight classes to equal total mass")
        p.add_argument("--smooth", type=int, default=None,
                       help="moving-average window applied before elbow detection")
        p.add_argument("-o", "--output", default=None, required=not formats)
        if formats:
            p.add_argument("--format", choices=("csv", "json"), default="csv")

    p = sub.add_parser("score", help="score and rank every feature")
    data_args(p)
    p.set_defaults(func=cmd_score)

    p = sub.add_parser("curve", help="threshold-vs-loss curves and the ranked curve")
    data_args(p, multi_bins=True)
    p.add_argument("--feature", type=int, action="append",
                   help="feature index for a threshold curve (repeatable; default: all)")
    p.set_defaults(func=cmd_curve)

    p = sub.add_parser("select", help="write a CSV restricted to the selected features")
    data_args(p, formats=False)
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--k", type=int)
    group.add_argument("--elbow", choices=("early", "late"))
    p.set_defaults(func=cmd_select)

    p = sub.add_parser("bench", help="compare selectors on synthetic or given train/test data")
    p.add_argument("--task", choices=sorted(TASK_METHODS), default=CLASSIFICATION)
    p.add_argument("--train")
    p.add_argument("--test")
    p.add_argument("--label-column", default="-1")
    p.add_argument("--delimiter", default=",")
    p.add_argument("--bins", type=_bins, default=16)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--noise-sigma", type=_sigma, default=0.0)
    p.add_argument("--n-informative", type=int, default=5)
    p.add_argument("--n-noise", type=int, default=45)
    p.add_argument("--n-per-class", type=int, default=500)
    p.add_argument("--n-samples", type=int, default=1000)
    p.add_argument("--separation", type=float, default=6.0)
    p.add_argument("--coefficient", type=float, action="append",
                   help="regression coefficient per informative feature (repeatable)")
    p.add_argument("-o", "--output", default=None)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except DataValidationError as exc:
        print(f"{TOOL}: error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except (UsageError, ValueError) as exc:
        print(f"{TOOL}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
