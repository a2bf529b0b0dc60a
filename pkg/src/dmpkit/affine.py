"""Roto-dilatations: uniform scalings composed with rotations that map a
learned start-to-goal chord onto a new one.

The factored form ``S = a R`` (scale times orthogonal matrix) makes the
inverse a transpose away, so no numerical inversion is ever needed.
All value types are immutable and all functions pure.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NullTransformError, ValidationError

__all__ = ["AffineMap", "rotation_between", "rotodilatation", "conjugate_gains", "inverse"]


@dataclass(frozen=True)
class AffineMap:
    """Linear map ``S = scale * rotation`` with its factors cached."""

    matrix: np.ndarray
    scale: float
    rotation: np.ndarray

    def __post_init__(self):
        matrix = np.asarray(self.matrix, dtype=float)
        rotation = np.asarray(self.rotation, dtype=float)
        d = matrix.shape[0]
        if matrix.shape != (d, d) or rotation.shape != (d, d):
            raise ValidationError("matrix and rotation must be square and same shape")
        if not self.scale > 0.0:
            raise ValidationError("scale must be positive")
        if np.max(np.abs(matrix - self.scale * rotation)) > 1e-12 * max(1.0, self.scale):
            raise ValidationError("matrix must equal scale * rotation")
        if np.max(np.abs(rotation.T @ rotation - np.eye(d))) > 1e-10:
            raise ValidationError("rotation factor is not orthogonal")
        if abs(np.linalg.det(rotation) - 1.0) > 1e-10:
            raise ValidationError("rotation factor must have determinant +1")
        matrix.setflags(write=False)
        rotation.setflags(write=False)
        object.__setattr__(self, "matrix", matrix)
        object.__setattr__(self, "rotation", rotation)

    @property
    def dims(self) -> int:
        return self.matrix.shape[0]

    def apply(self, points: np.ndarray) -> np.ndarray:
        """Apply the map to a d-vector or an (n, d) array of points."""
        points = np.asarray(points, dtype=float)
        return points @ self.matrix.T

    @classmethod
    def identity(cls, d: int) -> "AffineMap":
        eye = np.eye(d)
        return cls(matrix=eye, scale=1.0, rotation=eye.copy())


def rotation_between(u: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Rotation with determinant +1 mapping the direction of ``u`` onto the
    direction of ``v`` and acting as the identity on the orthogonal
    complement of their plane.

    Construction: with unit vectors ``u_hat`` and ``w_hat`` (the component of
    ``v_hat`` orthogonal to ``u_hat``, normalized) and angle ``theta``,

        R = I + (cos(theta) - 1)(u u^T + w w^T) + sin(theta)(w u^T - u w^T).

    Parallel inputs return the exact identity.  Antiparallel inputs rotate by
    pi in the plane spanned by ``u_hat`` and the coordinate axis least
    aligned with it (ties broken by lowest index).
    """
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    nu = np.linalg.norm(u)
    nv = np.linalg.norm(v)
    if nu == 0.0 or nv == 0.0:
        raise ValidationError("cannot rotate between zero vectors")
    u_hat = u / nu
    v_hat = v / nv
    d = u_hat.size
    cos_t = float(np.clip(u_hat @ v_hat, -1.0, 1.0))
    w_raw = v_hat - cos_t * u_hat
    sin_t = float(np.linalg.norm(w_raw))
    if sin_t < 1e-12:
        if cos_t > 0.0:
            return np.eye(d)
        # Antiparallel: rotate by pi in a deterministically chosen plane.
        axis = int(np.argmin(np.abs(u_hat)))
        e = np.zeros(d)
        e[axis] = 1.0
        w_hat = e - (e @ u_hat) * u_hat
        w_hat /= np.linalg.norm(w_hat)
        return np.eye(d) - 2.0 * (np.outer(u_hat, u_hat) + np.outer(w_hat, w_hat))
    w_hat = w_raw / sin_t
    # Re-orthogonalize: cancellation in v_hat - cos*u_hat leaves a residual
    # along u_hat of order eps/sin that would break orthogonality of R.
    w_hat = w_hat - (u_hat @ w_hat) * u_hat
    w_hat /= np.linalg.norm(w_hat)
    return (
        np.eye(d)
        + (cos_t - 1.0) * (np.outer(u_hat, u_hat) + np.outer(w_hat, w_hat))
        + sin_t * (np.outer(w_hat, u_hat) - np.outer(u_hat, w_hat))
    )


def rotodilatation(
    x0: np.ndarray, g: np.ndarray, x0_new: np.ndarray, g_new: np.ndarray
) -> AffineMap:
    """Map taking the chord ``g - x0`` onto ``g_new - x0_new``.

    The scale is the ratio of chord lengths and the rotation aligns the
    directions, so ``S (g - x0) = g_new - x0_new``.
    """
    u = np.asarray(g, dtype=float) - np.asarray(x0, dtype=float)
    v = np.asarray(g_new, dtype=float) - np.asarray(x0_new, dtype=float)
    nu = np.linalg.norm(u)
    nv = np.linalg.norm(v)
    if nu == 0.0 or nv == 0.0:
        raise NullTransformError("coincident start and goal give a null transformation")
    rot = rotation_between(u, v)
    scale = nv / nu
    return AffineMap(matrix=scale * rot, scale=scale, rotation=rot)


def conjugate_gains(gains, transform: AffineMap) -> tuple[np.ndarray, np.ndarray]:
    """Conjugated gain matrices ``(S K S^-1, S D S^-1)`` as d x d arrays.

    Scalar gains (all diagonal entries equal) commute with any ``S`` and are
    returned as the unchanged diagonal matrices.
    """
    elastic = np.asarray(gains.elastic, dtype=float)
    damping = np.asarray(gains.damping, dtype=float)
    if np.ptp(elastic) == 0.0 and np.ptp(damping) == 0.0:
        return np.diag(elastic), np.diag(damping)
    s_mat = transform.matrix
    s_inv = inverse(transform).matrix
    return s_mat @ np.diag(elastic) @ s_inv, s_mat @ np.diag(damping) @ s_inv


def inverse(transform: AffineMap) -> AffineMap:
    """Inverse map ``S^-1 = (1/a) R^T``, computed by transposition."""
    rot_t = transform.rotation.T.copy()
    scale = 1.0 / transform.scale
    return AffineMap(matrix=scale * rot_t, scale=scale, rotation=rot_t)
