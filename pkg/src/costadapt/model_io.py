"""Versioned plain-text model documents.

One "key value" pair per line. Floats are written with 17 significant
digits, so a save/load round trip reproduces every double exactly.
"""

from __future__ import annotations

import os
import tempfile

import numpy as np

from .core import (
    AdaptedClassifier,
    BaseScorer,
    CostSchedule,
    LinearAdaptation,
    LinearScorer,
    PrecomputedScorer,
    ZeroScorer,
)
from .errors import DataError, FormatError

FORMAT_LINE = "costadapt-model 1"


def _floats(values) -> str:
    return " ".join(f"{v:.17g}" for v in values)


def serialize_model(classifier: AdaptedClassifier, schedule: CostSchedule, alpha: float) -> str:
    base = classifier.base
    lines = [
        FORMAT_LINE,
        f"dimension {classifier.dimension}",
        f"base_kind {base.kind}",
    ]
    if isinstance(base, LinearScorer):
        if base.weights.size != classifier.dimension:
            raise DataError("base scorer dimension differs from adaptation dimension")
        lines.append(f"base_intercept {base.intercept:.17g}")
        lines.append(f"base_weights {_floats(base.weights)}")
    elif not isinstance(base, (ZeroScorer, PrecomputedScorer)):
        raise DataError(f"cannot serialize base scorer kind {base.kind!r}")
    lines += [
        f"adaptation_weights {_floats(classifier.adaptation.weights)}",
        f"cost_positive {schedule.cost_positive:.17g}",
        f"cost_negative {schedule.cost_negative:.17g}",
        f"alpha {alpha:.17g}",
        f"updates_applied {classifier.adaptation.updates_applied}",
    ]
    return "\n".join(lines) + "\n"


def parse_model(text: str) -> tuple[AdaptedClassifier, CostSchedule, float]:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or lines[0].strip() != FORMAT_LINE:
        raise FormatError(f"not a model document (expected first line {FORMAT_LINE!r})")
    fields: dict[str, str] = {}
    known = {
        "dimension",
        "base_kind",
        "base_intercept",
        "base_weights",
        "adaptation_weights",
        "cost_positive",
        "cost_negative",
        "alpha",
        "updates_applied",
    }
    for ln in lines[1:]:
        key, _, value = ln.strip().partition(" ")
        if key not in known:
            raise FormatError(f"unknown model field {key!r}")
        if key in fields:
            raise FormatError(f"duplicate model field {key!r}")
        fields[key] = value.strip()

    def need(key: str) -> str:
        if key not in fields:
            raise FormatError(f"missing model field {key!r}")
        return fields[key]

    def floats(key: str) -> np.ndarray:
        return np.array([float(tok) for tok in need(key).split()], dtype=np.float64)

    try:
        dimension = int(need("dimension"))
        kind = need("base_kind")
        weights = floats("adaptation_weights")
        schedule = CostSchedule(float(need("cost_positive")), float(need("cost_negative")))
        alpha = float(need("alpha"))
        updates = int(need("updates_applied"))
    except (ValueError, DataError) as exc:
        raise FormatError(f"bad model field: {exc}") from exc
    if weights.size != dimension:
        raise FormatError(
            f"adaptation_weights has {weights.size} entries, dimension says {dimension}"
        )

    base: BaseScorer
    if kind == "zero":
        base = ZeroScorer()
    elif kind == "precomputed":
        base = PrecomputedScorer()
    elif kind == "linear":
        try:
            bw = floats("base_weights")
            intercept = float(need("base_intercept"))
        except ValueError as exc:
            raise FormatError(f"bad model field: {exc}") from exc
        if bw.size != dimension:
            raise FormatError(
                f"base_weights has {bw.size} entries, dimension says {dimension}"
            )
        base = LinearScorer(bw, intercept)
    else:
        raise FormatError(f"unknown base_kind {kind!r}")

    adaptation = LinearAdaptation(weights, updates)
    return AdaptedClassifier(base, adaptation), schedule, alpha


def flatten_to_scorer(classifier: AdaptedClassifier) -> BaseScorer:
    """Collapse base + adaptation into one scorer usable as a new base.

    Only zero and linear bases flatten; a precomputed base cannot seed a
    fresh adaptation because its scores exist only on annotated samples.
    """
    base = classifier.base
    w = classifier.adaptation.weights
    if isinstance(base, ZeroScorer):
        return LinearScorer(w.copy())
    if isinstance(base, LinearScorer):
        return LinearScorer(base.weights + w, base.intercept)
    raise DataError(
        "a precomputed-base model cannot seed a new adaptation; "
        "use a zero or linear base"
    )


def atomic_write_text(path, text: str) -> None:
    """Write via a temp file in the target directory, then rename."""
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", text=True)
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def save_model(path, classifier: AdaptedClassifier, schedule: CostSchedule, alpha: float) -> None:
    atomic_write_text(path, serialize_model(classifier, schedule, alpha))


def load_model(path) -> tuple[AdaptedClassifier, CostSchedule, float]:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_model(fh.read())
