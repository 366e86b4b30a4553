"""Independent numeric solver for the single-step adaptation problem.

Minimizes the primal penalty form

    F(w) = 1/2 ||w - w_prev||^2 + alpha * C * max(0, 1 - y (f0 + w.x))

by plain subgradient descent. This is deliberately a different derivation
path from the learner's closed form (which goes through the dual), so a
shared bug cannot cancel out in certification tests.

The method keeps the best iterate seen and tightens the step geometrically
in stages: the objective is strongly convex, so each stage's constant step
settles into a band around the optimum whose width shrinks with the step.
Budget is fixed at 20,000 iterations with early stop once a whole stage
improves the best objective by less than 1e-12.
"""

from __future__ import annotations

import numpy as np

from .core import Sample
from .errors import DimensionMismatchError, ZeroVectorError

MAX_ITERS = 20_000
STAGE_LEN = 250
STOP_TOL = 1e-12


def objective_value(
    w,
    w_prev,
    sample: Sample,
    f0_val: float,
    cost: float,
    alpha: float,
) -> float:
    """Exact primal objective at w."""
    w = np.asarray(w, dtype=np.float64)
    w_prev = np.asarray(w_prev, dtype=np.float64)
    if w.shape != w_prev.shape:
        raise DimensionMismatchError(
            f"w has shape {w.shape}, w_prev has shape {w_prev.shape}"
        )
    diff = w - w_prev
    margin = 1.0 - sample.label * (f0_val + sample.features.dot(w))
    return 0.5 * float(diff @ diff) + alpha * cost * max(0.0, margin)


def solve_step_primal(
    w_prev,
    sample: Sample,
    f0_val: float,
    cost: float,
    alpha: float,
    max_iters: int = MAX_ITERS,
) -> tuple[np.ndarray, float]:
    """Numerically minimize the single-step objective; returns (w*, F(w*))."""
    w_prev = np.asarray(w_prev, dtype=np.float64)
    x = sample.features.to_dense()
    if sample.features.dimension != w_prev.size:
        raise DimensionMismatchError(
            f"sample dimension {sample.features.dimension} != weights length {w_prev.size}"
        )
    norm_sq = sample.features.norm_sq
    if norm_sq == 0.0:
        raise ZeroVectorError("zero feature vector: single-step problem is degenerate")

    y = float(sample.label)
    scale = alpha * cost
    # Work in u = w - w_prev; the hinge argument is m0 - y * u.x.
    m0 = 1.0 - y * (f0_val + sample.features.dot(w_prev))
    yx = y * x

    u = np.zeros_like(w_prev)
    best_u = u.copy()
    best_obj = scale * max(0.0, m0)

    eta = 0.5
    done = 0
    while done < max_iters and best_obj > 0.0:
        stage_best = best_obj
        stage = min(STAGE_LEN, max_iters - done)
        for _ in range(stage):
            margin = m0 - float(u @ yx)
            obj = 0.5 * float(u @ u) + scale * max(0.0, margin)
            if obj < best_obj:
                best_obj = obj
                best_u = u.copy()
            if margin > 0.0:
                u = (1.0 - eta) * u + (eta * scale) * yx
            else:
                u = (1.0 - eta) * u
        done += stage
        # Restart the next, finer stage from the best point found so far.
        u = best_u.copy()
        eta *= 0.5
        # The interior optimum sits at the hinge kink, where progress comes
        # in bursts as the step shrinks; only trust stagnation once steps
        # are numerically negligible.
        if stage_best - best_obj < STOP_TOL and eta < 1e-10:
            break

    w_star = w_prev + best_u
    return w_star, objective_value(w_star, w_prev, sample, f0_val, cost, alpha)
