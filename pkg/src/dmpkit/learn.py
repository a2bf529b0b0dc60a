"""Weight learning: forcing-term extraction from a demonstration, integral
least-squares assembly, solving, partial weight updates, and conditioning.

The weights minimize the squared L2 distance (in phase space) between the
normalized basis expansion and the demonstrated forcing term.  The normal
equations are built by composite Simpson quadrature on a uniform phase grid
and solved with a symmetric positive-definite factorization, banded whenever
the basis supports make the matrix narrow.

All operations are pure given immutable inputs; per-dimension learning is
independent and could run concurrently.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np
import scipy.linalg

from .basis import BasisFamily, BasisSet, forcing_row, make_basis, support_interval
from .errors import (
    ConditioningError,
    FullSupportError,
    ValidationError,
    ZeroScaleError,
)
from .phase import PhaseConfig, final_phase

__all__ = [
    "Trajectory",
    "Gains",
    "ForcingSamples",
    "LinearSystem",
    "DmpModel",
    "differentiate",
    "extract_forcing",
    "assemble_system",
    "assemble_gram",
    "solve_weights",
    "learn_dmp",
    "update_segment",
    "condition_number",
    "bbox_diameter",
]


@dataclass(frozen=True)
class Trajectory:
    """Time-stamped d-dimensional position samples, optionally with
    velocities and accelerations on the same grid."""

    times: np.ndarray
    positions: np.ndarray
    velocities: np.ndarray | None = None
    accelerations: np.ndarray | None = None

    def __post_init__(self):
        times = np.asarray(self.times, dtype=float)
        positions = np.asarray(self.positions, dtype=float)
        if positions.ndim == 1:
            positions = positions[:, None]
        if times.ndim != 1 or times.size < 4:
            raise ValidationError("trajectory needs at least 4 samples")
        if positions.shape[0] != times.size:
            raise ValidationError("positions must have one row per time sample")
        if not np.all(np.diff(times) > 0.0):
            raise ValidationError("times must be strictly increasing")
        if not (np.all(np.isfinite(times)) and np.all(np.isfinite(positions))):
            raise ValidationError("trajectory samples must be finite")
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "positions", positions)
        for name in ("velocities", "accelerations"):
            arr = getattr(self, name)
            if arr is not None:
                arr = np.asarray(arr, dtype=float)
                if arr.ndim == 1:
                    arr = arr[:, None]
                if arr.shape != positions.shape:
                    raise ValidationError(f"{name} must match positions in shape")
                object.__setattr__(self, name, arr)

    @property
    def n(self) -> int:
        return self.times.size

    @property
    def dims(self) -> int:
        return self.positions.shape[1]

    @property
    def duration(self) -> float:
        return float(self.times[-1] - self.times[0])

    @property
    def start(self) -> np.ndarray:
        return self.positions[0]

    @property
    def goal(self) -> np.ndarray:
        return self.positions[-1]


@dataclass(frozen=True)
class Gains:
    """Diagonal elastic and damping gains, one entry per dimension."""

    elastic: np.ndarray
    damping: np.ndarray

    def __post_init__(self):
        elastic = np.atleast_1d(np.asarray(self.elastic, dtype=float))
        damping = np.atleast_1d(np.asarray(self.damping, dtype=float))
        if elastic.shape != damping.shape or elastic.ndim != 1:
            raise ValidationError("elastic and damping must be 1-D arrays of equal length")
        if not (np.all(elastic > 0.0) and np.all(damping > 0.0)):
            raise ValidationError("gains must be positive")
        object.__setattr__(self, "elastic", elastic)
        object.__setattr__(self, "damping", damping)

    @classmethod
    def critically_damped(cls, elastic, dims: int | None = None) -> "Gains":
        """Gains with damping ``D = 2 sqrt(K)`` per component."""
        elastic = np.atleast_1d(np.asarray(elastic, dtype=float))
        if dims is not None and elastic.size == 1:
            elastic = np.full(dims, elastic[0])
        return cls(elastic=elastic, damping=2.0 * np.sqrt(elastic))

    @property
    def dims(self) -> int:
        return self.elastic.size


@dataclass(frozen=True)
class ForcingSamples:
    """Forcing-term samples indexed by strictly decreasing phase values."""

    phases: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        phases = np.asarray(self.phases, dtype=float)
        values = np.asarray(self.values, dtype=float)
        if values.ndim == 1:
            values = values[:, None]
        if phases.ndim != 1 or phases.size == 0 or values.shape[0] != phases.size:
            raise ValidationError("phases and values must be nonempty and aligned")
        if phases.size > 1 and not np.all(np.diff(phases) < 0.0):
            raise ValidationError("phases must be strictly decreasing")
        if np.any(phases <= 0.0) or np.any(phases > 1.0):
            raise ValidationError("phases must lie in (0, 1]")
        object.__setattr__(self, "phases", phases)
        object.__setattr__(self, "values", values)

    @property
    def dims(self) -> int:
        return self.values.shape[1]


@dataclass(frozen=True)
class LinearSystem:
    """Symmetric normal-equations system with bandwidth metadata."""

    matrix: np.ndarray
    rhs: np.ndarray
    bandwidth: int

    def __post_init__(self):
        matrix = np.asarray(self.matrix, dtype=float)
        rhs = np.asarray(self.rhs, dtype=float)
        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
            raise ValidationError("matrix must be square")
        if rhs.shape != (matrix.shape[0],):
            raise ValidationError("rhs length must match the matrix")
        scale = np.max(np.abs(matrix)) or 1.0
        if np.max(np.abs(matrix - matrix.T)) > 1e-12 * scale:
            raise ValidationError("matrix is not symmetric")
        object.__setattr__(self, "matrix", matrix)
        object.__setattr__(self, "rhs", rhs)

    @property
    def size(self) -> int:
        return self.matrix.shape[0]


@dataclass(frozen=True)
class DmpModel:
    """A learned movement primitive: gains, phase config, basis set,
    per-dimension weight rows (plus biases for biased bases), and the
    endpoints of the demonstration it was learned from."""

    gains: Gains
    phase: PhaseConfig
    basis: BasisSet
    weights: np.ndarray
    learned_x0: np.ndarray
    learned_g: np.ndarray
    biases: np.ndarray | None = None

    def __post_init__(self):
        weights = np.atleast_2d(np.asarray(self.weights, dtype=float))
        x0 = np.atleast_1d(np.asarray(self.learned_x0, dtype=float))
        g = np.atleast_1d(np.asarray(self.learned_g, dtype=float))
        d = weights.shape[0]
        if weights.shape[1] != self.basis.size:
            raise ValidationError("weights must have one column per basis function")
        if not np.all(np.isfinite(weights)):
            raise ValidationError("weights must be finite")
        if x0.shape != (d,) or g.shape != (d,):
            raise ValidationError("endpoint vectors must match the weight rows")
        if self.gains.dims != d:
            raise ValidationError("gains dimensionality must match the weights")
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "learned_x0", x0)
        object.__setattr__(self, "learned_g", g)
        if self.basis.biased:
            biases = np.atleast_2d(np.asarray(self.biases, dtype=float))
            if biases.shape != weights.shape:
                raise ValidationError("biases must match weights in shape")
            object.__setattr__(self, "biases", biases)
        elif self.biases is not None:
            raise ValidationError("biases supplied for an unbiased basis")

    @property
    def dims(self) -> int:
        return self.weights.shape[0]


def differentiate(traj: Trajectory) -> Trajectory:
    """Fill missing velocity and acceleration arrays by finite differences.

    Second-order central differences in the interior (divided differences on
    non-uniform grids) with second-order one-sided stencils at the endpoints.
    Derivative arrays already present are preserved untouched.
    """
    vel = traj.velocities
    if vel is None:
        vel = np.gradient(traj.positions, traj.times, axis=0, edge_order=2)
    acc = traj.accelerations
    if acc is None:
        acc = np.gradient(vel, traj.times, axis=0, edge_order=2)
    return replace(traj, velocities=vel, accelerations=acc)


def extract_forcing(
    traj: Trajectory,
    gains: Gains,
    phase: PhaseConfig,
    formulation: str = "classical",
) -> ForcingSamples:
    """Forcing-term samples a demonstration implies under a formulation.

    Times are shifted so the demo starts at 0 and the phase is evaluated
    with unit temporal scaling (learning convention).  The endpoints are
    taken from the demo itself.

    ``classical``: ``f_p = (a_p + D_p v_p)/K_p - (g_p - x_p) + (g_p - x0_p) s``.
    ``original``: ``f_p = (a_p - K_p (g_p - x_p) + D_p v_p) / (g_p - x0_p)``,
    which fails with a ``ZeroScaleError`` when any component of the chord
    vanishes.
    """
    if traj.velocities is None or traj.accelerations is None:
        raise ValidationError("extract_forcing needs velocities and accelerations")
    if gains.dims != traj.dims:
        raise ValidationError("gains dimensionality must match the trajectory")
    t = traj.times - traj.times[0]
    s = np.exp(-phase.alpha * t)
    x0 = traj.positions[0]
    g = traj.positions[-1]
    k = gains.elastic
    d = gains.damping
    if formulation == "classical":
        values = (
            (traj.accelerations + traj.velocities * d) / k
            - (g - traj.positions)
            + (g - x0) * s[:, None]
        )
    elif formulation == "original":
        chord = g - x0
        if np.any(chord == 0.0):
            raise ZeroScaleError(
                "goal equals start in some component; the original formulation "
                "cannot scale the forcing term there"
            )
        values = (
            traj.accelerations - (g - traj.positions) * k + traj.velocities * d
        ) / chord
    else:
        raise ValidationError(f"unknown formulation {formulation!r}")
    return ForcingSamples(phases=s, values=values)


def _simpson_rule(lo: float, hi: float, count: int) -> tuple[np.ndarray, np.ndarray]:
    """Phase grid and quadrature weights for integrals in phase over [lo, hi].

    Composite Simpson is applied after substituting the phase's own time
    parameterization (geometric nodes ``s_j = hi * (lo/hi)^(j/(count-1))``,
    uniform in time), so that every basis function is sampled by the same
    number of nodes regardless of how tightly the late centers cluster.  A
    uniform-in-phase grid with the same node budget leaves the narrowest
    compact supports unresolved and the normal equations numerically
    singular beyond roughly a hundred basis functions.
    """
    if count % 2 == 0:
        count += 1
    u = np.linspace(0.0, 1.0, count)
    grid = hi * (lo / hi) ** u
    grid[0] = hi
    grid[-1] = lo
    log_ratio = np.log(hi / lo)
    w = np.ones(count)
    w[1:-1:2] = 4.0
    w[2:-1:2] = 2.0
    # d s = -s * log(hi/lo) du along the substitution; orientation ascending in u.
    return grid, w * (log_ratio / (3.0 * (count - 1))) * grid


def _node_count(basis_size: int) -> int:
    return max(10 * basis_size + 1, 1001)


def _pattern_bandwidth(matrix: np.ndarray) -> int:
    rows, cols = np.nonzero(matrix)
    if rows.size == 0:
        return 0
    return int(np.max(np.abs(rows - cols)))


def _structural_bandwidth(bset: BasisSet, indices: np.ndarray | None = None) -> int:
    """Max index distance between basis functions with overlapping supports.

    This is the half-bandwidth guaranteed to contain every nonzero of the
    normal equations (entries of support-disjoint pairs are exactly zero).
    Unlike the observed nonzero pattern it does not shrink when far-pair
    Gaussian products underflow, so global-support families stay on the
    dense solve path.  Biased regressors double the unknowns with a block
    layout, which is treated as dense.
    """
    if bset.biased:
        size = 2 * bset.size if indices is None else 2 * len(indices)
        return size - 1
    idx = np.arange(bset.size) if indices is None else np.asarray(indices)
    spans = np.array([support_interval(bset, int(i)) for i in idx])
    lo, hi = spans[:, 0], spans[:, 1]
    overlap = np.maximum(lo[:, None], lo[None, :]) < np.minimum(hi[:, None], hi[None, :])
    positions = np.arange(idx.size)
    return int(np.max(np.abs(positions[:, None] - positions[None, :])[overlap]))


def _quad_rows(
    bset: BasisSet, lo: float, hi: float, cols: np.ndarray | None = None
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Quadrature grid, its weights, and the regressor rows on it."""
    if not (0.0 < lo < hi):
        raise ValidationError("integration interval must satisfy 0 < lo < hi")
    grid, quad_w = _simpson_rule(lo, hi, _node_count(bset.size))
    rows = forcing_row(bset, grid)
    if cols is not None:
        rows = rows[:, cols]
    return grid, quad_w, rows


def _assemble(
    bset: BasisSet,
    lo: float,
    hi: float,
    f_of_s=None,
    cols: np.ndarray | None = None,
) -> LinearSystem:
    """Normal equations over [lo, hi] for the (optionally restricted) basis.

    ``f_of_s`` maps a phase grid to forcing values (None means zero rhs);
    ``cols`` restricts the unknowns to a subset of regressor columns while
    keeping the full normalization sum in the denominators.
    """
    grid, quad_w, rows = _quad_rows(bset, lo, hi, cols)
    weighted = rows * quad_w[:, None]
    matrix = rows.T @ weighted
    matrix = 0.5 * (matrix + matrix.T)
    if f_of_s is None:
        rhs = np.zeros(rows.shape[1])
    else:
        rhs = weighted.T @ f_of_s(grid)
    if cols is None or not bset.biased:
        bandwidth = _structural_bandwidth(bset, cols)
    else:
        bandwidth = len(cols) - 1
    return LinearSystem(matrix=matrix, rhs=rhs, bandwidth=bandwidth)


def _interp_forcing(f: ForcingSamples, dim: int):
    asc_phases = f.phases[::-1]
    asc_values = f.values[::-1, dim]

    def interp(grid: np.ndarray) -> np.ndarray:
        return np.interp(grid, asc_phases, asc_values)

    return interp


def assemble_system(bset: BasisSet, f: ForcingSamples, dim: int) -> LinearSystem:
    """Normal equations ``A w = b`` for one dimension of a forcing sample set.

    Integrals run over the sampled phase range (``[exp(-alpha T), 1]`` for a
    full demonstration) on a uniform grid of ``max(10(N+1)+1, 1001)`` Simpson
    nodes, with the forcing interpolated linearly in phase between samples.
    For compactly supported families the matrix is banded and off-band
    entries are exactly zero.
    """
    if not 0 <= dim < f.dims:
        raise ValidationError(f"dimension {dim} out of range")
    lo = float(f.phases.min())
    hi = float(f.phases.max())
    if lo == hi:
        raise ValidationError("forcing samples span a single phase value")
    return _assemble(bset, lo, hi, _interp_forcing(f, dim))


def assemble_gram(bset: BasisSet, phase: PhaseConfig) -> LinearSystem:
    """The forcing-independent matrix of the normal equations (zero rhs),
    integrated over the full phase range of ``phase`` at unit temporal
    scaling."""
    return _assemble(bset, float(np.exp(-phase.alpha * phase.horizon)), 1.0)


def _band_storage(matrix: np.ndarray, bandwidth: int) -> np.ndarray:
    n = matrix.shape[0]
    ab = np.zeros((bandwidth + 1, n))
    for diag in range(bandwidth + 1):
        ab[bandwidth - diag, diag:] = np.diagonal(matrix, diag)
    return ab


def solve_weights(system: LinearSystem, method: str = "auto") -> tuple[np.ndarray, float]:
    """Solve the normal equations, returning ``(weights, relative_residual)``.

    Uses a symmetric positive-definite factorization: banded storage when the
    half-bandwidth is below a quarter of the system size, dense otherwise
    (``method`` can force either path).  A matrix that is singular to working
    precision raises ``ConditioningError`` carrying a condition estimate.
    """
    a = system.matrix
    b = system.rhs
    if method == "auto":
        method = "banded" if system.bandwidth < system.size / 4.0 else "dense"
    try:
        if method == "banded":
            weights = scipy.linalg.solveh_banded(
                _band_storage(a, system.bandwidth), b, lower=False
            )
        elif method == "dense":
            weights = scipy.linalg.cho_solve(scipy.linalg.cho_factor(a), b)
        else:
            raise ValidationError(f"unknown solve method {method!r}")
    except np.linalg.LinAlgError as exc:
        cond = condition_number(system)
        raise ConditioningError(
            f"normal equations singular to working precision (cond ~ {cond:.3e})", cond
        ) from exc
    norm_b = np.linalg.norm(b)
    residual = float(np.linalg.norm(a @ weights - b) / norm_b) if norm_b > 0.0 else 0.0
    return weights, residual


def condition_number(system: LinearSystem) -> float:
    """Spectral condition number (ratio of extreme singular values);
    ``inf`` for a singular matrix."""
    svals = np.linalg.svd(system.matrix, compute_uv=False)
    if svals[-1] == 0.0:
        return np.inf
    return float(svals[0] / svals[-1])


def _check_model_consistency(phase: PhaseConfig, bset: BasisSet, duration: float):
    if abs(duration - phase.horizon) > 1e-9 * max(1.0, phase.horizon):
        raise ValidationError(
            f"demo duration {duration} does not match phase horizon {phase.horizon}"
        )
    if bset.size > 1:
        expected_last = np.exp(-phase.alpha * phase.horizon)
        if abs(bset.centers[-1] - expected_last) > 1e-8 * expected_last:
            raise ValidationError("basis centers were built for a different alpha or horizon")


def learn_dmp(
    traj: Trajectory,
    gains: Gains | None = None,
    phase: PhaseConfig | None = None,
    basis: BasisSet | None = None,
) -> DmpModel:
    """Learn a movement primitive from one demonstration.

    Composes ``differentiate`` -> ``extract_forcing`` (classical form) ->
    ``assemble_system`` -> ``solve_weights`` per dimension.  Defaults follow
    the usual experimental settings: elastic gain 150 with critical damping,
    decay rate 4, 50+1 mollifier basis functions on the demo's duration.
    """
    traj = differentiate(traj)
    if gains is None:
        gains = Gains.critically_damped(150.0, traj.dims)
    if phase is None:
        phase = PhaseConfig(alpha=4.0, tau=1.0, horizon=traj.duration)
    if basis is None:
        basis = make_basis(BasisFamily("mollifier"), 50, phase.alpha, phase.horizon)
    _check_model_consistency(phase, basis, traj.duration)
    forcing = extract_forcing(traj, gains, phase, "classical")
    size = basis.size
    weights = np.empty((traj.dims, size))
    biases = np.empty((traj.dims, size)) if basis.biased else None
    for dim in range(traj.dims):
        solution, _ = solve_weights(assemble_system(basis, forcing, dim))
        weights[dim] = solution[:size]
        if basis.biased:
            biases[dim] = solution[size:]
    return DmpModel(
        gains=gains,
        phase=phase,
        basis=basis,
        weights=weights,
        biases=biases,
        learned_x0=traj.start.copy(),
        learned_g=traj.goal.copy(),
    )


def update_segment(
    model: DmpModel, new_traj: Trajectory, t0: float, t1: float
) -> tuple[DmpModel, np.ndarray]:
    """Re-learn only the weights whose basis supports meet a modified
    time segment ``[t0, t1]`` of the demonstration.

    Requires a compactly supported family.  The affected index set ``I``
    contains every ``i`` with ``c_i - 1/a_i <= exp(-alpha t0)`` and
    ``c_i + 1/a_i >= exp(-alpha t1)``; the ``|I| x |I|`` subsystem is
    integrated over the union of the selected supports (clipped to the
    phase range) against the forcing of the new demonstration.  Weights
    outside ``I`` are returned bitwise unchanged.
    """
    if not model.basis.family.is_compact:
        raise FullSupportError(
            f"{model.basis.family.tag} supports cover the phase range; "
            "all weights must be re-computed (relearn instead)"
        )
    horizon = model.phase.horizon
    if not (0.0 <= t0 < t1 <= horizon):
        raise ValidationError("segment must satisfy 0 <= t0 < t1 <= horizon")
    new_traj = differentiate(new_traj)
    if new_traj.dims != model.dims:
        raise ValidationError("new trajectory dimensionality does not match the model")
    _check_model_consistency(model.phase, model.basis, new_traj.duration)

    alpha = model.phase.alpha
    s_hi = np.exp(-alpha * t0)
    s_lo = np.exp(-alpha * t1)
    supports = np.array([support_interval(model.basis, i) for i in range(model.basis.size)])
    selected = (supports[:, 0] <= s_hi) & (supports[:, 1] >= s_lo)
    indices = np.nonzero(selected)[0]
    if indices.size == 0:
        raise ValidationError("segment does not intersect any basis support")

    window_lo = max(float(supports[indices, 0].min()), final_phase(model.phase))
    window_hi = min(float(supports[indices, 1].max()), 1.0)
    forcing = extract_forcing(new_traj, model.gains, model.phase, "classical")

    size = model.basis.size
    cols = np.concatenate([indices, size + indices]) if model.basis.biased else indices
    fixed = np.setdiff1d(np.arange(model.basis.param_count), cols)
    grid, quad_w, rows = _quad_rows(model.basis, window_lo, window_hi)
    weighted = rows * quad_w[:, None]
    gram = rows.T @ weighted
    gram = 0.5 * (gram + gram.T)
    sub_matrix = gram[np.ix_(cols, cols)]
    # Held weights whose supports reach into the window still contribute to
    # the forcing there; moving their known contribution to the right-hand
    # side makes the block solve exact instead of double-counting it.
    coupling = gram[np.ix_(cols, fixed)]
    bandwidth = (
        len(cols) - 1 if model.basis.biased else _structural_bandwidth(model.basis, indices)
    )
    weights = model.weights.copy()
    biases = model.biases.copy() if model.biases is not None else None
    for dim in range(model.dims):
        rhs = weighted.T @ _interp_forcing(forcing, dim)(grid)
        held = (
            np.concatenate([weights[dim], biases[dim]]) if biases is not None else weights[dim]
        )
        sub_rhs = rhs[cols] - coupling @ held[fixed]
        solution, _ = solve_weights(
            LinearSystem(matrix=sub_matrix, rhs=sub_rhs, bandwidth=bandwidth)
        )
        weights[dim, indices] = solution[: indices.size]
        if biases is not None:
            biases[dim, indices] = solution[indices.size :]
    updated = replace(model, weights=weights, biases=biases)
    return updated, indices


def bbox_diameter(traj: Trajectory) -> float:
    """Diagonal of the axis-aligned bounding box of the positions; a cheap
    deterministic stand-in for the path diameter."""
    spans = traj.positions.max(axis=0) - traj.positions.min(axis=0)
    return float(np.linalg.norm(spans))
