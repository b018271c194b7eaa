"""Single-logit SGD on a rare positive label, with optional positive-class weight.

With ``omega = 1`` the logit settles at the label marginal ``epsilon``; with a
positive-class weight it settles at ``fixed_point(epsilon, omega)``.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass

import numpy as np

from rarebridge import _backend
from rarebridge.errors import InvalidParameterError

__all__ = [
    "DynamicsConfig",
    "DynamicsTrace",
    "sigmoid",
    "sgd_step",
    "draw_positive_counts",
    "run_dynamics",
    "fixed_point",
    "trace_csv",
    "TAIL_STEPS",
]

# final_p averages this many trailing probabilities to damp minibatch noise
TAIL_STEPS = 200


@dataclass(frozen=True)
class DynamicsConfig:
    epsilon: float = 0.05
    omega: float = 50.0
    eta: float = 0.05
    batch: int = 64
    steps: int = 2000
    theta0: float = 0.0
    seed: int = 42

    def __post_init__(self):
        if not 0.0 < self.epsilon < 1.0:
            raise InvalidParameterError(f"epsilon must lie in (0, 1), got {self.epsilon}")
        if not self.omega >= 1.0:
            raise InvalidParameterError(f"omega must be >= 1, got {self.omega}")
        if not self.eta > 0.0:
            raise InvalidParameterError(f"eta must be > 0, got {self.eta}")
        if int(self.batch) != self.batch or self.batch < 1:
            raise InvalidParameterError(f"batch must be a positive integer, got {self.batch}")
        if int(self.steps) != self.steps or self.steps < 0:
            raise InvalidParameterError(f"steps must be a non-negative integer, got {self.steps}")
        if not math.isfinite(self.theta0):
            raise InvalidParameterError("theta0 must be finite")
        if not 0 <= int(self.seed) < 2**64:
            raise InvalidParameterError(f"seed must be an unsigned 64-bit integer, got {self.seed}")


@dataclass(frozen=True)
class DynamicsTrace:
    probs: np.ndarray

    @property
    def final_p(self) -> float:
        """Mean predicted probability over the last ``TAIL_STEPS`` entries."""
        return float(np.mean(self.probs[-TAIL_STEPS:]))

    @property
    def last_p(self) -> float:
        return float(self.probs[-1])


def sigmoid(theta: float) -> float:
    if theta >= 0.0:
        return 1.0 / (1.0 + math.exp(-theta))
    z = math.exp(theta)
    return z / (1.0 + z)


def sgd_step(theta: float, labels, omega: float, eta: float) -> float:
    """One minibatch step on weighted cross-entropy.

    Per-sample gradient w.r.t. the logit is ``(sigmoid(theta) - y) * w(y)``
    with ``w(1) = omega`` and ``w(0) = 1``; the step uses the batch mean.
    """
    y = np.asarray(labels, dtype=np.float64)
    if y.size == 0:
        raise InvalidParameterError("empty batch")
    p = sigmoid(theta)
    weights = np.where(y == 1.0, omega, 1.0)
    grad = (p - y) * weights
    return theta - eta * float(np.mean(grad))


def draw_positive_counts(config: DynamicsConfig) -> np.ndarray:
    """Number of ``y = 1`` labels in each of the ``steps`` batches."""
    rng = np.random.Generator(np.random.PCG64(int(config.seed)))
    labels = rng.random((config.steps, config.batch)) < config.epsilon
    return labels.sum(axis=1).astype(np.int64)


def run_dynamics(config: DynamicsConfig) -> DynamicsTrace:
    """Run SGD for ``config.steps`` steps; traces with equal seeds share label draws."""
    counts = draw_positive_counts(config)
    probs = _backend.kernels.sgd_trajectory(
        counts, int(config.batch), float(config.omega), float(config.eta), float(config.theta0)
    )
    return DynamicsTrace(probs)


def fixed_point(epsilon: float, omega: float) -> float:
    """Stationary probability of the weighted objective: ``we / ((1 - e) + we)``."""
    if not 0.0 < epsilon < 1.0:
        raise InvalidParameterError(f"epsilon must lie in (0, 1), got {epsilon}")
    if not omega >= 1.0:
        raise InvalidParameterError(f"omega must be >= 1, got {omega}")
    if math.isinf(omega):
        return 1.0
    return omega * epsilon / ((1.0 - epsilon) + omega * epsilon)


def trace_csv(standard: DynamicsTrace, weighted: DynamicsTrace) -> str:
    if len(standard.probs) != len(weighted.probs):
        raise InvalidParameterError("traces must have equal length")
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(("step", "p_standard", "p_weighted"))
    for step, (ps, pw) in enumerate(zip(standard.probs, weighted.probs)):
        writer.writerow((step, format(float(ps), ".6g"), format(float(pw), ".6g")))
    return buf.getvalue()
