"""Canonical system: the exponentially decaying phase shared by all
dimensions of a movement primitive.

The phase obeys ``tau * ds/dt = -alpha * s`` with ``s(0) = 1``, whose
closed form ``s(t) = exp(-alpha * t / tau)`` is used directly instead of
integrating the ODE numerically.  Everything here is a pure function of
an immutable config, so concurrent use needs no coordination.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ValidationError

__all__ = ["PhaseConfig", "phase_at", "final_phase"]


@dataclass(frozen=True)
class PhaseConfig:
    """Decay rate, temporal scaling, and final time of the phase variable.

    Attributes
    ----------
    alpha : float
        Exponential decay rate of the phase (> 0).
    tau : float
        Temporal scaling factor (> 0); durations stretch by ``tau``.
    horizon : float
        Final time of the learned motion, in seconds (> 0).
    """

    alpha: float
    tau: float = 1.0
    horizon: float = 1.0

    def __post_init__(self):
        for name in ("alpha", "tau", "horizon"):
            value = getattr(self, name)
            if not np.isfinite(value) or value <= 0.0:
                raise ValidationError(f"{name} must be positive and finite, got {value!r}")


def phase_at(t, cfg: PhaseConfig):
    """Evaluate the phase ``s(t) = exp(-alpha * t / tau)``.

    Accepts a scalar or an array of times ``t >= 0`` and returns values in
    ``(0, 1]``, strictly decreasing in ``t``, with ``s(0) = 1``.
    """
    t = np.asarray(t, dtype=float)
    if np.any(t < 0.0):
        raise ValidationError("time must be nonnegative")
    s = np.exp(-cfg.alpha * t / cfg.tau)
    return float(s) if s.ndim == 0 else s


def final_phase(cfg: PhaseConfig) -> float:
    """Phase value at the horizon, ``exp(-alpha * horizon / tau)``."""
    return float(np.exp(-cfg.alpha * cfg.horizon / cfg.tau))
