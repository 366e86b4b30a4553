"""Benchmark configuration files.

INI-style sections with flat key=value pairs. The [dataset] section doubles
as the dataset manifest: it names the file (or synthetic spec), the label
convention, and the dimension. Unknown keys are rejected by name.
"""

from __future__ import annotations

import configparser
from dataclasses import dataclass

from .core import CostSchedule
from .data import Dataset, SynthSpec, generate_synthetic, read_csv, read_libsvm
from .errors import DataError, FormatError

_KNOWN = {
    "dataset": {
        "kind", "path", "format", "label_column", "has_header", "dimension",
        "n_positive", "n_negative", "mean_separation", "noise_scale", "seed",
    },
    "costs": {"old_positive", "old_negative", "new_positive", "new_negative"},
    "protocol": {"alpha_grid", "seed", "base_alpha", "svm_epochs", "svm_step_size",
                 "svm_regularization"},
    "output": {"csv"},
}

DEFAULT_ALPHA_GRID = [0.01, 0.1, 1.0, 10.0, 100.0]


@dataclass(frozen=True)
class BenchConfig:
    dataset_kind: str
    dataset_path: str | None
    dataset_format: str
    label_column: int
    has_header: bool
    dimension: int | None
    synth: SynthSpec | None
    old_schedule: CostSchedule
    new_schedule: CostSchedule
    alpha_grid: tuple[float, ...]
    seed: int
    base_alpha: float
    svm_epochs: int
    svm_step_size: float | None
    svm_regularization: float
    csv_path: str | None

    def load_dataset(self) -> Dataset:
        if self.dataset_kind == "synthetic":
            return generate_synthetic(self.synth)
        if self.dataset_path is None:
            raise DataError("config names no dataset path")
        if self.dataset_format == "libsvm":
            return read_libsvm(self.dataset_path, dimension=self.dimension)
        if self.dataset_format == "csv":
            return read_csv(self.dataset_path, self.label_column, self.has_header)
        raise DataError(f"unknown dataset format {self.dataset_format!r}")


def _check_keys(parser: configparser.ConfigParser) -> None:
    unknown = []
    for section in parser.sections():
        if section not in _KNOWN:
            unknown.append(section)
            continue
        for key in parser[section]:
            if key not in _KNOWN[section]:
                unknown.append(f"{section}.{key}")
    if unknown:
        raise FormatError(f"unknown config keys: {', '.join(sorted(unknown))}")


def parse_bench_config(path) -> BenchConfig:
    parser = configparser.ConfigParser()
    try:
        with open(path, "r", encoding="utf-8") as fh:
            parser.read_file(fh)
    except configparser.Error as exc:
        raise FormatError(f"{path}: {exc}") from exc
    _check_keys(parser)

    ds = parser["dataset"] if parser.has_section("dataset") else {}
    costs = parser["costs"] if parser.has_section("costs") else {}
    proto = parser["protocol"] if parser.has_section("protocol") else {}
    out = parser["output"] if parser.has_section("output") else {}

    try:
        kind = ds.get("kind", "synthetic")
        synth = None
        if kind == "synthetic":
            synth = SynthSpec(
                n_positive=int(ds.get("n_positive", 0)),
                n_negative=int(ds.get("n_negative", 0)),
                dimension=int(ds.get("dimension", 2)),
                mean_separation=float(ds.get("mean_separation", 2.0)),
                noise_scale=float(ds.get("noise_scale", 1.0)),
                seed=int(ds.get("seed", 0)),
            )
        elif kind != "file":
            raise FormatError(f"dataset.kind must be synthetic or file, got {kind!r}")

        dimension = int(ds["dimension"]) if kind == "file" and "dimension" in ds else None
        grid_text = proto.get("alpha_grid", "")
        grid = tuple(float(tok) for tok in grid_text.replace(",", " ").split()) or tuple(
            DEFAULT_ALPHA_GRID
        )
        config = BenchConfig(
            dataset_kind=kind,
            dataset_path=ds.get("path"),
            dataset_format=ds.get("format", "libsvm"),
            label_column=int(ds.get("label_column", 0)),
            has_header=ds.get("has_header", "false").strip().lower() in ("1", "true", "yes"),
            dimension=dimension,
            synth=synth,
            old_schedule=CostSchedule(
                float(costs.get("old_positive", 1.0)), float(costs.get("old_negative", 1.0))
            ),
            new_schedule=CostSchedule(
                float(costs.get("new_positive", 1.0)), float(costs.get("new_negative", 1.0))
            ),
            alpha_grid=grid,
            seed=int(proto.get("seed", 0)),
            base_alpha=float(proto.get("base_alpha", 1.0)),
            svm_epochs=int(proto.get("svm_epochs", 50)),
            svm_step_size=(
                float(proto["svm_step_size"]) if "svm_step_size" in proto else None
            ),
            svm_regularization=float(proto.get("svm_regularization", 0.0)),
            csv_path=out.get("csv"),
        )
    except ValueError as exc:
        raise FormatError(f"{path}: bad config value: {exc}") from exc
    if kind == "file" and not config.dataset_path:
        raise FormatError(f"{path}: dataset.kind=file requires dataset.path")
    return config
