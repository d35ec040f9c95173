"""Command-line surface: transforms, distances, paths, diagnostics, classifiers.

Every subcommand is deterministic given its flags and seed; numeric output
is printed with 6 significant digits and ``--json`` mirrors each report as
a machine-readable document. Exit codes: 0 success, 2 validation error,
1 I/O or file-format error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .classify import fit, predict, project, projection_path_report
from .datagen import (
    FIGURE_IDS,
    DatasetSpec,
    counterexample_pair,
    figure_signals,
    make_experiment1,
)
from .errors import PersistenceError, ScdtError, ValidationError
from .geodesy import (
    DEFAULT_ALPHAS,
    constant_speed_check,
    ds_distance,
    geodesic_midpoint_diagnostic,
    geodesic_path,
    w2,
)
from .io_persist import (
    emit_path_figure,
    load_model,
    load_scdt,
    read_signal_csv,
    read_ucr,
    save_dataset_spec,
    save_model,
    save_scdt,
    write_signal_csv,
)
from .signals import Signal, jordan_decompose, l1_norm, resample
from .transform import DEFAULT_OVERLAP_RTOL, Reference, scdt_forward, scdt_inverse

DEMO_PAIRS = FIGURE_IDS + ("counterexample",)


def _fmt(x: float) -> str:
    return f"{x:.6g}"


def _reference(args) -> Reference:
    lo, hi = args.ref_domain
    return Reference.uniform(lo, hi, args.ref_resolution)


def _alphas(args) -> tuple[float, ...]:
    if args.alphas is None:
        return DEFAULT_ALPHAS
    return tuple(float(a) for a in args.alphas.split(","))


def _demo_pair(name: str, resolution: int) -> tuple[Signal, Signal]:
    if name == "counterexample":
        return counterexample_pair(resolution)
    return figure_signals(name, resolution)


def _load_pair(args) -> tuple[Signal, Signal]:
    if args.demo is not None:
        return _demo_pair(args.demo, args.ref_resolution)
    if args.a is None or args.b is None:
        raise ValidationError("provide two signal files or --demo NAME")
    return read_signal_csv(args.a), read_signal_csv(args.b)


def _emit(args, doc: dict, lines: list[str]) -> None:
    doc = {"seed": args.seed, **doc}
    if args.json:
        print(json.dumps(doc, sort_keys=True))
    else:
        print(f"# seed {args.seed}")
        for line in lines:
            print(line)


def _out_dir(args) -> Path:
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    return out


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_transform(args) -> int:
    ref = _reference(args)
    s = read_signal_csv(args.input)
    t = scdt_forward(s, ref)
    save_scdt(args.out, t)
    _emit(args, {"out": str(args.out), "mass_plus": t.a, "mass_minus": t.b},
          [f"wrote {args.out}",
           f"mass_plus {_fmt(t.a)}  mass_minus {_fmt(t.b)}"])
    return 0


def cmd_invert(args) -> int:
    ref = _reference(args)
    t = load_scdt(args.input, ref)
    s = scdt_inverse(t, ref, args.resolution)
    write_signal_csv(args.out, s)
    doc = {"out": str(args.out)}
    lines = [f"wrote {args.out}"]
    if args.check is not None:
        orig = read_signal_csv(args.check)
        diff = l1_norm(Signal(s.grid, s.values - resample(orig, s.grid).values))
        rel = diff / max(l1_norm(orig), 1e-300)
        doc["relative_l1_error"] = rel
        lines.append(f"relative L1 error vs {args.check}: {_fmt(rel)}")
    _emit(args, doc, lines)
    return 0


def cmd_distance(args) -> int:
    ref = _reference(args)
    s1, s2 = _load_pair(args)
    d = ds_distance(s1, s2, ref)
    doc = {"distance": d}
    lines = [f"D {_fmt(d)}"]
    p1, n1 = jordan_decompose(s1)
    p2, n2 = jordan_decompose(s2)
    if min(p1.mass, p2.mass) > 0 and min(n1.mass, n2.mass) > 0:
        wp = w2(p1.signal, p2.signal, ref)
        wn = w2(n1.signal, n2.signal, ref)
        da, db = p1.mass - p2.mass, n1.mass - n2.mass
        doc.update({"w2_plus": wp, "w2_minus": wn, "delta_mass_plus": da,
                    "delta_mass_minus": db})
        lines.append(f"per-part: w2_plus {_fmt(wp)}  w2_minus {_fmt(wn)}  "
                     f"delta_a {_fmt(da)}  delta_b {_fmt(db)}")
    else:
        lines.append("per-part breakdown undefined (a zero part); distance "
                     "computed in embedding coordinates")
    _emit(args, doc, lines)
    return 0


def cmd_geodesic(args) -> int:
    ref = _reference(args)
    s1, s2 = _load_pair(args)
    alphas = _alphas(args)
    pps = geodesic_path(s1, s2, alphas, ref)
    prefix = _out_dir(args) / (args.prefix or (args.demo or "path"))
    fmt = "both" if args.plot else "csv"
    files = emit_path_figure(prefix, pps, format=fmt)
    doc = {
        "alphas": list(pps.alphas),
        "segment_distances": list(pps.segment_distances),
        "endpoint_distance": pps.endpoint_distance,
        "total_length": pps.total_length,
        "gap_ratio": pps.gap_ratio,
        "degenerate": pps.degenerate,
        "files": files,
    }
    lines = [f"alphas {','.join(_fmt(a) for a in pps.alphas)}",
             f"segment distances {' '.join(_fmt(d) for d in pps.segment_distances)}",
             f"D {_fmt(pps.endpoint_distance)}  sum Di {_fmt(pps.total_length)}  "
             f"gap ratio {_fmt(pps.gap_ratio)}"]
    lines.extend(f"wrote {f}" for f in files)
    _emit(args, doc, lines)
    return 0


def cmd_diagnose(args) -> int:
    ref = _reference(args)
    s1, s2 = _load_pair(args)
    report = geodesic_midpoint_diagnostic(s1, s2, ref, tol=args.overlap_tol)
    speed = constant_speed_check(s1, s2, ref, grid_size=args.grid_size)
    doc = {
        "midpoint_in_embedding_space": report.in_embedding_space,
        "midpoint_overlap_mass": report.overlap_mass,
        "midpoint_notes": list(report.notes),
        "constant_speed_deviation": speed.max_relative_deviation,
        "endpoint_distance": speed.endpoint_distance,
        "exact_zero": speed.exact_zero,
    }
    if speed.exact_zero:
        lines = ["degenerate-zero case: the two signals coincide in transform space"]
    elif report.in_embedding_space:
        lines = ["midpoint candidate valid",
                 f"constant-speed deviation {_fmt(speed.max_relative_deviation)}"]
    else:
        lines = ["no geodesic: midpoint leaves embedding space",
                 f"overlap mass {_fmt(report.overlap_mass)}",
                 f"constant-speed deviation {_fmt(speed.max_relative_deviation)}"]
    if args.verbose:
        lines.extend(f"note: {n}" for n in report.notes)
    _emit(args, doc, lines)
    return 0


def _classify_data(args, ref):
    if args.demo == "experiment1":
        spec = DatasetSpec(resolution=args.ref_resolution, seed=args.seed)
        data = make_experiment1(spec)
        return data.train, data.train_labels, data.test, data.test_labels
    train = test = None
    train_labels = test_labels = None
    if args.train:
        ds = read_ucr(args.train, classes=args.classes)
        train, train_labels = ds.signals, ds.labels
    if args.test:
        ds = read_ucr(args.test, classes=args.classes)
        test, test_labels = ds.signals, ds.labels
    return train, train_labels, test, test_labels


def cmd_classify(args) -> int:
    ref = _reference(args)
    if args.action == "fit":
        train, train_labels, _, _ = _classify_data(args, ref)
        if train is None:
            raise ValidationError("fit requires --train FILE or --demo experiment1")
        model = fit(train, train_labels, ref, method=args.method, nls_k=args.k)
        save_model(args.model, model)
        _emit(args, {"model": str(args.model), "classes": list(model.class_labels)},
              [f"wrote {args.model} ({args.method}, classes {list(model.class_labels)})"])
        return 0

    if args.model:
        model = load_model(args.model)  # FileNotFoundError -> exit 1
    else:
        train, train_labels, _, _ = _classify_data(args, ref)
        if train is None:
            raise ValidationError("provide --model FILE or training data")
        model = fit(train, train_labels, ref, method=args.method, nls_k=args.k)
    _, _, test, test_labels = _classify_data(args, ref)
    if test is None:
        raise ValidationError("provide --test FILE or --demo experiment1")

    if args.action == "predict":
        preds = [predict(model, s) for s in test]
        labels = [p.label for p in preds]
        doc = {"labels": labels}
        lines = []
        if test_labels is not None:
            acc = float(np.mean([p == t for p, t in zip(labels, test_labels)]))
            doc["accuracy"] = acc
            lines.append(f"accuracy {acc:.2f} on {len(labels)} samples")
        if args.per_sample or test_labels is None:
            for i, p in enumerate(preds):
                lines.append(f"sample {i}: label {p.label}  distances "
                             f"{' '.join(_fmt(d) for d in p.distances)}")
        _emit(args, doc, lines)
        return 0

    # paths: project one test sample onto every class subspace
    idx = args.sample
    if not 0 <= idx < len(test):
        raise ValidationError(f"--sample {idx} out of range (test size {len(test)})")
    s = test[idx]
    alphas = _alphas(args)
    out = _out_dir(args)
    doc = {"sample": idx, "classes": []}
    lines = [f"sample {idx}" + (f" (true label {test_labels[idx]})"
                                if test_labels is not None else "")]
    for label in model.class_labels:
        res = project(model, label, s)
        pps = projection_path_report(s, res.signal, model.reference, alphas)
        files = emit_path_figure(out / f"{args.prefix or 'paths'}_class{label}", pps,
                                 format="both" if args.plot else "csv")
        doc["classes"].append({
            "label": label,
            "projection_residual": res.residual,
            "endpoint_distance": pps.endpoint_distance,
            "total_length": pps.total_length,
            "gap_ratio": pps.gap_ratio,
            "files": files,
        })
        lines.append(f"class {label}: residual {_fmt(res.residual)}  "
                     f"D {_fmt(pps.endpoint_distance)}  sum Di {_fmt(pps.total_length)}  "
                     f"gap ratio {_fmt(pps.gap_ratio)}")
    _emit(args, doc, lines)
    return 0


def cmd_datagen(args) -> int:
    out = _out_dir(args)
    written = []
    if args.which == "experiment1":
        spec = DatasetSpec(resolution=args.ref_resolution, seed=args.seed)
        data = make_experiment1(spec)
        spec_path = out / "experiment1_spec.json"
        save_dataset_spec(spec_path, spec)
        written.append(str(spec_path))
        for group, signals, labels in (("train", data.train, data.train_labels),
                                       ("test", data.test, data.test_labels)):
            for i, (s, label) in enumerate(zip(signals, labels)):
                path = out / f"experiment1_{group}_{i:03d}_class{label}.csv"
                write_signal_csv(path, s)
                written.append(str(path))
    else:
        s1, s2 = _demo_pair(args.which, args.ref_resolution)
        for tag, s in (("a", s1), ("b", s2)):
            path = out / f"{args.which}_{tag}.csv"
            write_signal_csv(path, s)
            written.append(str(path))
    shown = written if args.verbose else written[:4]
    _emit(args, {"files": written}, [f"wrote {len(written)} files to {out}"]
          + [f"wrote {w}" for w in shown])
    return 0


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="scdt",
        description="Signed transform tuples, transport distances, interpolation "
                    "paths, and subspace classifiers for 1-D signals.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--ref-resolution", type=int, default=1000,
                        help="reference grid size (default 1000, minimum 64)")
    common.add_argument("--ref-domain", type=float, nargs=2, default=(0.0, 1.0),
                        metavar=("LO", "HI"), help="reference domain (default 0 1)")
    common.add_argument("--alphas", default=None,
                        help="comma-separated path positions, e.g. 0,0.25,0.5,0.75,1")
    common.add_argument("--seed", type=int, default=0, help="seed echoed in all outputs")
    common.add_argument("--out-dir", default=os.environ.get("SCDT_OUT_DIR", "."),
                        help="output directory (default $SCDT_OUT_DIR or .)")
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--verbose", action="store_true",
                        help="echo full file lists and diagnostic notes")

    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("transform", parents=[common], help="signal CSV -> transform tuple")
    p.add_argument("input")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_transform)

    p = sub.add_parser("invert", parents=[common], help="transform tuple -> signal CSV")
    p.add_argument("input")
    p.add_argument("--out", required=True)
    p.add_argument("--resolution", type=int, default=None,
                   help="output grid size (default: reference size)")
    p.add_argument("--check", default=None,
                   help="signal CSV to compare against (prints relative L1 error)")
    p.set_defaults(func=cmd_invert)

    p = sub.add_parser("distance", parents=[common],
                       help="generalized transport distance between two signals")
    p.add_argument("a", nargs="?")
    p.add_argument("b", nargs="?")
    p.add_argument("--demo", choices=DEMO_PAIRS)
    p.set_defaults(func=cmd_distance)

    p = sub.add_parser("geodesic", parents=[common],
                       help="sample the interpolation path and emit figures")
    p.add_argument("a", nargs="?")
    p.add_argument("b", nargs="?")
    p.add_argument("--demo", choices=DEMO_PAIRS)
    p.add_argument("--plot", action="store_true", help="also render an SVG panel row")
    p.add_argument("--prefix", default=None, help="output file prefix")
    p.set_defaults(func=cmd_geodesic)

    p = sub.add_parser("diagnose", parents=[common],
                       help="midpoint membership + constant-speed report")
    p.add_argument("a", nargs="?")
    p.add_argument("b", nargs="?")
    p.add_argument("--demo", choices=DEMO_PAIRS)
    p.add_argument("--grid-size", type=int, default=5,
                   help="alpha/beta grid size for the speed check (default 5)")
    p.add_argument("--overlap-tol", type=float, default=DEFAULT_OVERLAP_RTOL,
                   help="relative overlap-mass bound for membership "
                        f"(default {DEFAULT_OVERLAP_RTOL})")
    p.set_defaults(func=cmd_diagnose)

    p = sub.add_parser("classify", parents=[common],
                       help="fit, evaluate, or visualize subspace classifiers")
    p.add_argument("action", choices=("fit", "predict", "paths"))
    p.add_argument("--method", choices=("ns", "nls"), default="ns")
    p.add_argument("--k", type=int, default=5, help="NLS neighbor count (default 5)")
    p.add_argument("--model", default=None, help="model file to write (fit) or read")
    p.add_argument("--train", default=None, help="archive-format training file")
    p.add_argument("--test", default=None, help="archive-format test file")
    p.add_argument("--classes", type=int, nargs="*", default=None,
                   help="keep only these labels from archive files")
    p.add_argument("--demo", choices=("experiment1",), default=None)
    p.add_argument("--sample", type=int, default=0, help="test sample index for paths")
    p.add_argument("--plot", action="store_true", help="also render SVG path panels")
    p.add_argument("--prefix", default=None, help="output file prefix for paths")
    p.add_argument("--per-sample", action="store_true",
                   help="print per-sample labels and distances")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("datagen", parents=[common],
                       help="write synthetic datasets and worked example pairs")
    p.add_argument("--which", required=True, choices=("experiment1",) + DEMO_PAIRS)
    p.set_defaults(func=cmd_datagen)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.ref_resolution < 64:
        print("error: --ref-resolution must be at least 64", file=sys.stderr)
        return 2
    try:
        return args.func(args)
    except (FileNotFoundError, OSError, PersistenceError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except (ValidationError, ScdtError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
