"""Command-line interface.

Subcommands:

* ``dmcnet scan --root DIR --out manifest.json``
* ``dmcnet run --manifest F --method M [--repeats N] [--seed S] --out DIR``
* ``dmcnet run-all --manifest F [--seed S] --out DIR``
* ``dmcnet reduce --manifest F --algo pca|tsne [--perplexity P] --out CSV``
* ``dmcnet verify``

Any flag may come from a JSON config file (``--config``); explicit flags
win.  Exit codes: 0 success, 2 validation error, 3 I/O error.
"""

from __future__ import annotations

import argparse
import json
import sys

from .dataset import DatasetManifest, balanced_sample, scan_dataset
from .errors import DmcnetError, IoFailure
from .harness import (
    ExperimentConfig,
    ImageStore,
    METHOD_IDS,
    emit_report,
    repeat_experiments,
    write_embedding_csv,
)
from .harness.experiments import default_repeats
from .harness.verify import run_verify

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_IO = 3


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dmcnet", description=__doc__)
    parser.add_argument("--config", help="JSON file supplying default flag values")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("scan", help="catalog a dataset directory")
    p.add_argument("--root", required=True)
    p.add_argument("--out", required=True)

    p = sub.add_parser("run", help="run one method with repeated seeds")
    p.add_argument("--manifest", required=True)
    p.add_argument("--method", required=True, choices=METHOD_IDS)
    p.add_argument("--repeats", type=int, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.add_argument("--overrides", default=None, help="JSON hyperparameter map")

    p = sub.add_parser("run-all", help="run all eight methods")
    p.add_argument("--manifest", required=True)
    p.add_argument("--repeats", type=int, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.add_argument("--overrides", default=None, help="JSON hyperparameter map")

    p = sub.add_parser("reduce", help="2-D embedding of the balanced pool")
    p.add_argument("--manifest", required=True)
    p.add_argument("--algo", required=True, choices=("pca", "tsne"))
    p.add_argument("--perplexity", type=float, default=30.0)
    p.add_argument("--iterations", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--mode", choices=("rgb", "gray"), default="rgb")
    p.add_argument("--out", required=True)

    sub.add_parser("verify", help="run the oracle/property self-checks")
    return parser


def _apply_config(args: argparse.Namespace, argv) -> argparse.Namespace:
    """Fill unset flags from the JSON config; explicit flags win."""
    if not args.config:
        return args
    try:
        with open(args.config, "r", encoding="utf-8") as fh:
            config = json.load(fh)
    except OSError as exc:
        raise IoFailure(f"cannot read config {args.config}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise DmcnetError(f"config {args.config} is not valid JSON: {exc}") from exc
    explicit = {a.split("=")[0].lstrip("-").replace("-", "_") for a in argv if a.startswith("--")}
    for key, value in config.items():
        attr = key.replace("-", "_")
        if hasattr(args, attr) and attr not in explicit:
            setattr(args, attr, value)
    return args


def _parse_overrides(raw) -> dict:
    if raw is None:
        return {}
    if isinstance(raw, dict):
        return raw
    try:
        obj = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise DmcnetError(f"--overrides is not valid JSON: {exc}") from exc
    if not isinstance(obj, dict):
        raise DmcnetError("--overrides must be a JSON object")
    return obj


def _cmd_scan(args) -> int:
    manifest = scan_dataset(args.root)
    manifest.save(args.out)
    counts = manifest.counts
    print(
        f"scanned {len(manifest)} images (skipped {manifest.skipped}); "
        f"counts {counts[0]}/{counts[1]}/{counts[2]} -> {args.out}"
    )
    return EXIT_OK


def _run_methods(args, methods) -> int:
    manifest = DatasetManifest.load(args.manifest)
    store = ImageStore(manifest)
    overrides = _parse_overrides(getattr(args, "overrides", None))
    summaries = []
    for method in methods:
        repeats = args.repeats if args.repeats is not None else default_repeats(method)
        cfg = ExperimentConfig(
            method=method, repeats=repeats, base_seed=args.seed, overrides=overrides
        )
        summary = repeat_experiments(cfg, manifest, store)
        total = sum(r.wall_seconds for r in summary.runs)
        print(
            f"{method}: mean acc {summary.mean:.4f} (std {summary.std:.4f}, "
            f"min {summary.min:.4f}, max {summary.max:.4f}) over {repeats} runs "
            f"[{total:.1f}s]",
            file=sys.stderr,
        )
        summaries.append(summary)
    paths = emit_report(summaries, args.out)
    print(f"wrote {paths['json']}, {paths['csv']}, {paths['boxplot']}")
    return EXIT_OK


def _cmd_run(args) -> int:
    return _run_methods(args, [args.method])


def _cmd_run_all(args) -> int:
    return _run_methods(args, list(METHOD_IDS))


def _cmd_reduce(args) -> int:
    from .dimred import TsneConfig, pca_encode, pca_fit, tsne_run

    manifest = DatasetManifest.load(args.manifest)
    store = ImageStore(manifest)
    balanced = balanced_sample(manifest, args.seed)
    paths, labels = balanced.paths(), balanced.labels()
    X = store.flat_rgb(paths) if args.mode == "rgb" else store.flat_gray(paths)
    if args.algo == "pca":
        model = pca_fit(X, 2)
        points = pca_encode(model, X)
    else:
        cfg = TsneConfig(
            perplexity=args.perplexity, iterations=args.iterations, seed=args.seed
        )
        points = tsne_run(X, cfg, labels=labels).points
    write_embedding_csv(args.out, points, labels)
    print(f"wrote {args.out} ({points.shape[0]} points)")
    return EXIT_OK


def _cmd_verify(_args) -> int:
    return EXIT_OK if run_verify() else EXIT_VALIDATION


COMMANDS = {
    "scan": _cmd_scan,
    "run": _cmd_run,
    "run-all": _cmd_run_all,
    "reduce": _cmd_reduce,
    "verify": _cmd_verify,
}


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = _parser()
    args = parser.parse_args(argv)
    try:
        args = _apply_config(args, argv)
        return COMMANDS[args.command](args)
    except IoFailure as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except DmcnetError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except (ValueError, AssertionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
