"""Command-line client for the adaptation service.

All learning runs through the same request/response models the HTTP service
uses; by default the handlers are called in-process, and ``--server`` points
the same requests at a running instance instead. File reading and writing
always happen on the client side.

Exit codes: 0 success, 1 usage error, 2 data error, 3 numeric error.
"""

from __future__ import annotations

import argparse
import sys

from pydantic import ValidationError

from .benchconfig import DEFAULT_ALPHA_GRID, parse_bench_config
from .core import CostSchedule
from .data import Dataset, SynthSpec, generate_synthetic, read_csv, read_libsvm
from .errors import DataError, NumericError
from .model_io import atomic_write_text
from .service import handlers, schemas

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_NUMERIC = 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def parse_schedule(text: str) -> CostSchedule:
    try:
        pos_str, _, neg_str = text.partition(":")
        return CostSchedule(float(pos_str), float(neg_str))
    except (ValueError, DataError) as exc:
        raise UsageError(f"--schedule expects POS:NEG with positive costs, got {text!r} ({exc})")


def parse_synth_spec(text: str) -> SynthSpec:
    keys = {"pos": 0, "neg": 0, "dim": 2, "sep": 2.0, "noise": 1.0, "seed": 0}
    for part in text.split(","):
        key, _, value = part.partition("=")
        key = key.strip()
        if key not in keys:
            raise UsageError(
                f"unknown synth-spec key {key!r} (expected pos,neg,dim,sep,noise,seed)"
            )
        try:
            keys[key] = float(value) if key in ("sep", "noise") else int(value)
        except ValueError:
            raise UsageError(f"bad synth-spec value for {key!r}: {value!r}") from None
    return SynthSpec(
        n_positive=keys["pos"],
        n_negative=keys["neg"],
        dimension=keys["dim"],
        mean_separation=keys["sep"],
        noise_scale=keys["noise"],
        seed=keys["seed"],
    )


def load_cli_dataset(args) -> Dataset:
    if getattr(args, "synth_spec", None):
        dataset = generate_synthetic(parse_synth_spec(args.synth_spec))
    elif getattr(args, "data", None):
        path = args.data
        fmt = args.format or ("csv" if path.endswith(".csv") else "libsvm")
        if fmt == "csv":
            dataset = read_csv(path, args.label_column, args.header)
        else:
            dataset = read_libsvm(path, dimension=args.dimension)
    else:
        raise UsageError("provide --data PATH or --synth-spec SPEC")
    if getattr(args, "augment_bias", False):
        dataset = dataset.with_bias()
    return dataset


def _remote_post(server: str, path: str, payload: dict, response_cls):
    import httpx

    resp = httpx.post(server.rstrip("/") + path, json=payload, timeout=600.0)
    if resp.status_code != 200:
        try:
            detail = resp.json().get("detail")
        except ValueError:
            detail = None
        if isinstance(detail, dict) and "message" in detail:
            kind = detail.get("kind", "data")
            message = detail["message"]
        else:
            kind, message = "data", resp.text
        if kind == "numeric":
            raise NumericError(message)
        if kind == "usage":
            raise UsageError(message)
        raise DataError(message)
    return response_cls.model_validate(resp.json())


def _call(server, path, handler, request, response_cls):
    if server:
        return _remote_post(server, path, request.model_dump(), response_cls)
    return handler(request)


def _print_summary(summary: schemas.StreamSummaryPayload) -> None:
    print(
        f"processed {summary.steps} samples: "
        f"{summary.n_passive} passive, {summary.n_interior} interior, "
        f"{summary.n_clamped} clamped, {summary.n_skipped} skipped"
    )
    for key in ("steps", "n_passive", "n_interior", "n_clamped", "n_skipped"):
        print(f"METRIC {key}={getattr(summary, key)}")


def cmd_train_base(args) -> int:
    dataset = load_cli_dataset(args)
    req = schemas.TrainBaseRequest(
        dataset=schemas.DatasetPayload.from_domain(dataset),
        schedule=_schedule_payload(args.schedule),
        alpha=args.alpha,
        shuffle_seed=args.seed,
    )
    resp = _call(args.server, "/train-base", handlers.train_base, req, schemas.TrainBaseResponse)
    atomic_write_text(args.out, resp.model_text)
    print(f"wrote model to {args.out}")
    _print_summary(resp.summary)
    return EXIT_OK


def cmd_adapt(args) -> int:
    with open(args.model, "r", encoding="utf-8") as fh:
        model_text = fh.read()
    dataset = load_cli_dataset(args)
    req = schemas.AdaptRequest(
        model_text=model_text,
        dataset=schemas.DatasetPayload.from_domain(dataset),
        schedule=_schedule_payload(args.schedule),
        alpha=args.alpha,
        shuffle_seed=args.seed,
    )
    resp = _call(args.server, "/adapt", handlers.adapt, req, schemas.AdaptResponse)
    atomic_write_text(args.out, resp.model_text)
    print(f"wrote adapted model to {args.out}")
    _print_summary(resp.summary)
    return EXIT_OK


def cmd_eval(args) -> int:
    with open(args.model, "r", encoding="utf-8") as fh:
        model_text = fh.read()
    dataset = load_cli_dataset(args)
    req = schemas.EvalRequest(
        model_text=model_text,
        dataset=schemas.DatasetPayload.from_domain(dataset),
        schedule=_schedule_payload(args.schedule),
    )
    resp = _call(args.server, "/eval", handlers.evaluate_model, req, schemas.EvalResponse)
    m = resp.metrics
    print(
        f"accuracy {m.accuracy:.4f}, avg_cost {m.avg_cost:.4f} on {m.n_test} samples "
        f"(tp={m.tp} fp={m.fp} tn={m.tn} fn={m.fn})"
    )
    for key in ("accuracy", "avg_cost", "n_test", "tp", "fp", "tn", "fn"):
        print(f"METRIC {key}={getattr(m, key)}")
    return EXIT_OK


def cmd_bench(args) -> int:
    config = parse_bench_config(args.config)
    req = handlers.bench_request_from_config(config, threads=args.threads)
    if args.alpha_grid:
        req.alpha_grid = [float(tok) for tok in args.alpha_grid.replace(",", " ").split()]
        if not req.alpha_grid:
            raise UsageError("--alpha-grid must list at least one value")
    resp = _call(args.server, "/bench", handlers.run_bench, req, schemas.BenchResponse)
    csv_path = args.out or config.csv_path or "bench_results.csv"
    atomic_write_text(csv_path, resp.csv_text)
    print(resp.summary_text, end="")
    print(f"wrote per-fold report to {csv_path}")
    print(f"METRIC csv={csv_path}")
    return EXIT_OK


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    uvicorn.run(create_app(), host=args.host, port=args.port)
    return EXIT_OK


def _schedule_payload(text: str) -> schemas.SchedulePayload:
    schedule = parse_schedule(text)
    return schemas.SchedulePayload(
        cost_positive=schedule.cost_positive, cost_negative=schedule.cost_negative
    )


def _add_data_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--data", help="dataset file (libsvm or csv)")
    p.add_argument("--synth-spec", help="synthetic spec, e.g. pos=100,neg=400,dim=2,sep=2,noise=1,seed=7")
    p.add_argument("--format", choices=["libsvm", "csv"], help="override format sniffing")
    p.add_argument("--label-column", type=int, default=0, help="csv label column (default 0)")
    p.add_argument("--header", action="store_true", help="csv file has a header row")
    p.add_argument("--dimension", type=int, help="override inferred libsvm dimension")
    p.add_argument("--augment-bias", action="store_true", help="append a constant-1 feature")


def build_parser() -> _Parser:
    parser = _Parser(prog="costadapt", description=__doc__)
    parser.add_argument("--server", help="base URL of a running service; default runs in-process")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("train-base", help="train a from-scratch cost-sensitive model")
    _add_data_args(p)
    p.add_argument("--schedule", required=True, help="costs as POS:NEG, e.g. 2:1")
    p.add_argument("--alpha", type=float, default=1.0)
    p.add_argument("--seed", type=int, default=None, help="shuffle the stream with this seed")
    p.add_argument("--out", required=True, help="model output path")
    p.set_defaults(func=cmd_train_base)

    p = sub.add_parser("adapt", help="adapt an existing model to a new cost setting")
    p.add_argument("--model", required=True, help="base model path")
    _add_data_args(p)
    p.add_argument("--schedule", required=True, help="new costs as POS:NEG, e.g. 5:1")
    p.add_argument("--alpha", type=float, default=1.0)
    p.add_argument("--seed", type=int, default=None, help="shuffle the stream with this seed")
    p.add_argument("--out", required=True, help="adapted model output path")
    p.set_defaults(func=cmd_adapt)

    p = sub.add_parser("eval", help="evaluate a model on a test set")
    p.add_argument("--model", required=True)
    _add_data_args(p)
    p.add_argument("--schedule", required=True, help="evaluation costs as POS:NEG")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("bench", help="run the cross-validated comparison from a config file")
    p.add_argument("--config", required=True)
    p.add_argument("--alpha-grid", help=f"override the config grid (default {DEFAULT_ALPHA_GRID})")
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--out", help="override the CSV output path")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except (UsageError, ValidationError) as exc:
        print(f"costadapt: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NumericError as exc:
        print(f"costadapt: numeric error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (DataError, FileNotFoundError, IsADirectoryError, PermissionError) as exc:
        print(f"costadapt: data error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
