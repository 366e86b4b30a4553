"""Dataset containers, file readers, and synthetic generation.

File formats: sparse LIBSVM text ("<label> <index>:<value> ...", 1-based
indices) and dense numeric CSV with a designated label column. Labels are
+1/-1; a bare 0 is accepted and mapped to -1. Everything is deterministic
given its seed.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass

import numpy as np

from .core import FeatureVector, Sample, NEGATIVE, POSITIVE
from .errors import DataError, FormatError


@dataclass(frozen=True)
class Dataset:
    samples: tuple[Sample, ...]
    dimension: int
    name: str = ""

    def __post_init__(self):
        if self.dimension <= 0:
            raise DataError(f"dimension must be positive, got {self.dimension}")
        for i, s in enumerate(self.samples):
            if s.features.dimension != self.dimension:
                raise DataError(
                    f"sample {i} has dimension {s.features.dimension}, "
                    f"dataset declares {self.dimension}"
                )

    def __len__(self):
        return len(self.samples)

    @property
    def n_positive(self) -> int:
        return sum(1 for s in self.samples if s.label == POSITIVE)

    @property
    def n_negative(self) -> int:
        return len(self.samples) - self.n_positive

    def subset(self, indices) -> "Dataset":
        picked = tuple(self.samples[int(i)] for i in indices)
        return Dataset(picked, self.dimension, self.name)

    def with_bias(self) -> "Dataset":
        """Append a constant-1 feature to every sample."""
        return Dataset(
            tuple(
                Sample(s.features.with_bias(), s.label, s.base_score)
                for s in self.samples
            ),
            self.dimension + 1,
            self.name,
        )


def _parse_binary_label(token: str, where: str) -> int:
    try:
        value = float(token)
    except ValueError:
        raise FormatError(f"{where}: label {token!r} is not numeric") from None
    if value == 1.0:
        return POSITIVE
    if value == -1.0:
        return NEGATIVE
    if value == 0.0:
        return NEGATIVE
    raise FormatError(f"{where}: label must be +1, -1 or 0, got {token!r}")


def read_libsvm(path, dimension: int | None = None, strict: bool = False) -> Dataset:
    """Parse a sparse LIBSVM text file.

    File indices are 1-based and converted to 0-based. The dimension is the
    maximum index seen unless ``dimension`` overrides it.
    """
    rows: list[tuple[int, list[tuple[int, float]]]] = []
    max_index = -1
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            where = f"{path}:{lineno}"
            parts = line.split()
            label = _parse_binary_label(parts[0], where)
            entries: list[tuple[int, float]] = []
            for token in parts[1:]:
                idx_str, _, val_str = token.partition(":")
                if not val_str:
                    raise FormatError(f"{where}: expected index:value, got {token!r}")
                try:
                    idx = int(idx_str)
                    val = float(val_str)
                except ValueError:
                    raise FormatError(
                        f"{where}: expected index:value, got {token!r}"
                    ) from None
                if idx < 1:
                    raise FormatError(f"{where}: indices are 1-based, got {idx}")
                if not math.isfinite(val):
                    raise FormatError(f"{where}: non-finite value {val_str!r}")
                entries.append((idx - 1, val))
            seen = [i for i, _ in entries]
            if len(set(seen)) != len(seen):
                raise FormatError(f"{where}: duplicate feature index")
            if seen:
                max_index = max(max_index, max(seen))
            rows.append((label, entries))

    if dimension is None:
        if max_index < 0 and rows:
            raise FormatError(f"{path}: no feature indices to infer a dimension from")
        dim = max_index + 1
    else:
        dim = dimension
        if max_index >= dim:
            raise DataError(
                f"{path}: feature index {max_index + 1} exceeds declared dimension {dim}"
            )
    if not rows:
        if strict:
            raise FormatError(f"{path}: empty dataset")
        return Dataset((), max(dim, 1), os.path.basename(path))

    samples = tuple(
        Sample(FeatureVector.sparse(dim, entries), label) for label, entries in rows
    )
    return Dataset(samples, dim, os.path.basename(path))


def write_libsvm(dataset: Dataset, path) -> None:
    """Inverse of read_libsvm; values carry 17 significant digits."""
    with open(path, "w", encoding="utf-8") as fh:
        for s in dataset.samples:
            label = "+1" if s.label == POSITIVE else "-1"
            feats = " ".join(
                f"{int(i) + 1}:{v:.17g}"
                for i, v in zip(s.features.indices, s.features.values)
            )
            fh.write(f"{label} {feats}".rstrip() + "\n")


def read_csv(path, label_column: int, has_header: bool = False) -> Dataset:
    """Parse a rectangular numeric CSV; the label column is removed from features."""
    import csv as _csv

    rows: list[tuple[int, list[float]]] = []
    width = None
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = _csv.reader(fh)
        for rowno, row in enumerate(reader, start=1):
            if has_header and rowno == 1:
                continue
            if not row or (len(row) == 1 and not row[0].strip()):
                continue
            if width is None:
                width = len(row)
                if width < 2:
                    raise FormatError(f"{path}:{rowno}: need at least 2 columns")
                col = label_column if label_column >= 0 else width + label_column
                if not 0 <= col < width:
                    raise DataError(
                        f"label column {label_column} out of range for {width} columns"
                    )
            if len(row) != width:
                raise FormatError(
                    f"{path}:{rowno}: expected {width} columns, got {len(row)}"
                )
            label = _parse_binary_label(row[col].strip(), f"{path}:{rowno} col {col + 1}")
            feats = []
            for colno, cell in enumerate(row):
                if colno == col:
                    continue
                try:
                    value = float(cell)
                except ValueError:
                    raise FormatError(
                        f"{path}:{rowno} col {colno + 1}: non-numeric cell {cell!r}"
                    ) from None
                if not math.isfinite(value):
                    raise FormatError(
                        f"{path}:{rowno} col {colno + 1}: non-finite cell {cell!r}"
                    )
                feats.append(value)
            rows.append((label, feats))

    if not rows:
        raise FormatError(f"{path}: empty dataset")
    dim = width - 1
    samples = tuple(
        Sample(FeatureVector(dim, np.arange(dim), np.asarray(feats)), label)
        for label, feats in rows
    )
    return Dataset(samples, dim, os.path.basename(path))


@dataclass(frozen=True)
class SynthSpec:
    """Two Gaussian blobs at +/- mean_separation/2 on every axis."""

    n_positive: int
    n_negative: int
    dimension: int
    mean_separation: float
    noise_scale: float
    seed: int

    def __post_init__(self):
        if self.n_positive < 0 or self.n_negative < 0:
            raise DataError("class counts must be non-negative")
        if self.dimension <= 0:
            raise DataError(f"dimension must be positive, got {self.dimension}")
        if not (math.isfinite(self.noise_scale) and self.noise_scale > 0):
            raise DataError(f"noise_scale must be finite and > 0, got {self.noise_scale}")
        if not math.isfinite(self.mean_separation):
            raise DataError("mean_separation must be finite")


def generate_synthetic(spec: SynthSpec) -> Dataset:
    """Deterministic per seed; positives come first, then negatives."""
    rng = np.random.default_rng(spec.seed)
    mu = spec.mean_separation / 2.0
    pos = rng.normal(loc=mu, scale=spec.noise_scale, size=(spec.n_positive, spec.dimension))
    neg = rng.normal(loc=-mu, scale=spec.noise_scale, size=(spec.n_negative, spec.dimension))
    samples = [Sample(FeatureVector.dense(row), POSITIVE) for row in pos]
    samples += [Sample(FeatureVector.dense(row), NEGATIVE) for row in neg]
    name = f"synthetic(seed={spec.seed},d={spec.dimension})"
    return Dataset(tuple(samples), spec.dimension, name)


def shuffled_stream(dataset: Dataset, seed: int) -> list[Sample]:
    """A seeded permutation of the dataset's samples."""
    order = np.random.default_rng(seed).permutation(len(dataset))
    return [dataset.samples[i] for i in order]
