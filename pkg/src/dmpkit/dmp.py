"""Rollout of learned movement primitives as second-order attractor ODEs.

Three formulations are supported:

* ``original`` -- forcing scaled per component by the start-to-goal chord;
* ``classical`` -- chord decay term instead of forcing scaling;
* ``extended`` -- the classical system conjugated by a chord-to-chord
  linear map, so the executed trajectory is the mapped learned one.

Integration is classical fourth-order Runge-Kutta at a fixed step, with
the phase evaluated in closed form at stage times.  A rollout is a pure
function of the model and its arguments; concurrent rollouts of one model
are safe.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .affine import AffineMap, conjugate_gains, rotodilatation
from .errors import DivergenceError, NullTransformError, ValidationError
from .learn import DmpModel, Trajectory
from .basis import basis_matrix

__all__ = ["Formulation", "forcing_value", "rollout"]

_TAGS = ("original", "classical", "extended")


@dataclass(frozen=True)
class Formulation:
    """Rollout formulation tag, plus an optional explicit transform for the
    extended system (an ``AffineMap`` or any invertible d x d array).  With
    no transform the extended rollout builds a roto-dilatation from the
    learned and requested endpoints."""

    tag: str
    transform: AffineMap | np.ndarray | None = None

    def __post_init__(self):
        if self.tag not in _TAGS:
            raise ValidationError(f"unknown formulation {self.tag!r}; expected one of {_TAGS}")
        if self.transform is not None and self.tag != "extended":
            raise ValidationError("only the extended formulation takes a transform")


def forcing_value(model: DmpModel, s: float) -> np.ndarray:
    """Learned forcing term at phase ``s``, one entry per dimension.

    Exactly zero once ``s`` leaves every basis support (compact families
    stop forcing after a finite time).
    """
    vals = basis_matrix(model.basis, s)[0]
    den = vals.sum()
    if den <= 0.0:
        return np.zeros(model.dims)
    base = vals / den
    f = model.weights @ (base * s)
    if model.biases is not None:
        f = f + model.biases @ base
    return f


def _as_matrix(transform: AffineMap | np.ndarray, dims: int) -> tuple[np.ndarray, np.ndarray]:
    """Transform and its inverse as plain arrays."""
    if isinstance(transform, AffineMap):
        s_mat = transform.matrix
        s_inv = transform.rotation.T / transform.scale
    else:
        s_mat = np.asarray(transform, dtype=float)
        s_inv = np.linalg.inv(s_mat)
    if s_mat.shape != (dims, dims):
        raise ValidationError("transform shape does not match the model dimensionality")
    return s_mat, s_inv


def rollout(
    model: DmpModel,
    x0: np.ndarray | None = None,
    goal=None,
    tau: float = 1.0,
    duration: float | None = None,
    dt: float | None = None,
    formulation: Formulation | str = "classical",
) -> Trajectory:
    """Integrate a movement primitive from rest at ``x0`` toward ``goal``.

    ``goal`` may be a d-vector (static) or a callable of time (moving goal,
    held constant within each step).  ``duration`` defaults to twice the
    learned horizon so post-forcing convergence is observable; ``dt``
    defaults to horizon/1000.  In extended mode with a static goal the
    chord transform is computed once; with a moving goal the transform and
    the conjugated gains are recomputed every step.  Returns the sampled
    trajectory including velocities and the final state.
    """
    if isinstance(formulation, str):
        formulation = Formulation(formulation)
    if tau <= 0.0:
        raise ValidationError("tau must be positive")
    horizon = model.phase.horizon
    duration = 2.0 * horizon if duration is None else float(duration)
    dt = horizon / 1000.0 if dt is None else float(dt)
    if duration <= 0.0 or dt <= 0.0:
        raise ValidationError("duration and dt must be positive")
    n_steps = max(1, int(round(duration / dt)))

    x0 = model.learned_x0.copy() if x0 is None else np.atleast_1d(np.asarray(x0, dtype=float))
    if x0.shape != (model.dims,):
        raise ValidationError("x0 dimensionality does not match the model")
    if goal is None:
        goal = model.learned_g.copy()
    moving = callable(goal)
    goal_fn = goal if moving else None
    g_static = None if moving else np.atleast_1d(np.asarray(goal, dtype=float))
    if g_static is not None and g_static.shape != (model.dims,):
        raise ValidationError("goal dimensionality does not match the model")

    k_vec = model.gains.elastic
    d_vec = model.gains.damping
    alpha = model.phase.alpha
    extended = formulation.tag == "extended"

    if extended:
        learned_chord = model.learned_g - model.learned_x0
        if np.linalg.norm(learned_chord) == 0.0:
            raise NullTransformError("model was learned with coincident endpoints")
        scalar_gains = np.ptp(k_vec) == 0.0 and np.ptp(d_vec) == 0.0

        def extended_terms(g_now: np.ndarray):
            if formulation.transform is not None:
                s_mat, s_inv = _as_matrix(formulation.transform, model.dims)
            else:
                s_mat = rotodilatation(model.learned_x0, model.learned_g, x0, g_now).matrix
                s_inv = None  # roto-dilatation inverse never needed explicitly
            if scalar_gains:
                return s_mat, None, None
            if s_inv is None:
                s_inv = np.linalg.inv(s_mat)
            k_mat = s_mat @ np.diag(k_vec) @ s_inv
            d_mat = s_mat @ np.diag(d_vec) @ s_inv
            return s_mat, k_mat, d_mat

        if not moving:
            s_mat0, k_mat0, d_mat0 = extended_terms(g_static)

    def acceleration(x, v, s, g_now, s_mat=None, k_mat=None, d_mat=None):
        f = forcing_value(model, s)
        if formulation.tag == "original":
            return k_vec * (g_now - x) - d_vec * v + (g_now - x0) * f
        if formulation.tag == "classical":
            return k_vec * (g_now - x - (g_now - x0) * s + f) - d_vec * v
        f_mapped = s_mat @ f
        if k_mat is None:
            return k_vec * (g_now - x - (g_now - x0) * s + f_mapped) - d_vec * v
        return k_mat @ (g_now - x - (g_now - x0) * s + f_mapped) - d_mat @ v

    positions = np.empty((n_steps + 1, model.dims))
    velocities = np.empty((n_steps + 1, model.dims))
    x = x0.copy()
    v = np.zeros(model.dims)
    positions[0] = x
    velocities[0] = 0.0
    inv_tau = 1.0 / tau

    for step in range(n_steps):
        t = step * dt
        g_now = goal_fn(t) if moving else g_static
        if moving:
            g_now = np.atleast_1d(np.asarray(g_now, dtype=float))
        if extended:
            if moving:
                s_mat, k_mat, d_mat = extended_terms(g_now)
            else:
                s_mat, k_mat, d_mat = s_mat0, k_mat0, d_mat0
        else:
            s_mat = k_mat = d_mat = None

        s_a = np.exp(-alpha * t * inv_tau)
        s_b = np.exp(-alpha * (t + 0.5 * dt) * inv_tau)
        s_c = np.exp(-alpha * (t + dt) * inv_tau)

        def deriv(x_s, v_s, s_val):
            return v_s * inv_tau, acceleration(x_s, v_s, s_val, g_now, s_mat, k_mat, d_mat) * inv_tau

        k1x, k1v = deriv(x, v, s_a)
        k2x, k2v = deriv(x + 0.5 * dt * k1x, v + 0.5 * dt * k1v, s_b)
        k3x, k3v = deriv(x + 0.5 * dt * k2x, v + 0.5 * dt * k2v, s_b)
        k4x, k4v = deriv(x + dt * k3x, v + dt * k3v, s_c)
        x = x + (dt / 6.0) * (k1x + 2.0 * k2x + 2.0 * k3x + k4x)
        v = v + (dt / 6.0) * (k1v + 2.0 * k2v + 2.0 * k3v + k4v)
        if not (np.all(np.isfinite(x)) and np.all(np.isfinite(v))):
            raise DivergenceError(f"state became non-finite at t = {t + dt:.6g}")
        positions[step + 1] = x
        velocities[step + 1] = v

    times = np.arange(n_steps + 1) * dt
    return Trajectory(times=times, positions=positions, velocities=velocities * inv_tau)
