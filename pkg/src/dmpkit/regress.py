"""Regression over multiple demonstrations.

Each demonstration is aligned spatially (its own roto-dilatation sends the
start-to-goal chord onto the common 0 -> 1 chord) and temporally (affine
rescaling of its time stamps onto a shared horizon).  A single linear
system per dimension then yields one weight vector: the matrix is
demo-independent and carries a factor 2M, the right-hand side sums the
per-demo forcing integrals with a factor 2.

Per-demo forcing extraction and per-dimension solves are independent; the
shared matrix is assembled once and only read afterwards.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .affine import AffineMap, rotodilatation
from .errors import AlignmentError, ValidationError
from .learn import (
    DmpModel,
    Gains,
    LinearSystem,
    Trajectory,
    _check_model_consistency,
    _interp_forcing,
    _quad_rows,
    _structural_bandwidth,
    differentiate,
    extract_forcing,
    solve_weights,
)
from .phase import PhaseConfig

__all__ = ["DemoSet", "AlignedDemoSet", "align_demos", "regress_weights", "regression_system"]


@dataclass(frozen=True)
class DemoSet:
    """A collection of demonstrations sharing one ambient dimension."""

    demos: tuple[Trajectory, ...]

    def __post_init__(self):
        demos = tuple(self.demos)
        if len(demos) < 1:
            raise ValidationError("a demo set needs at least one trajectory")
        dims = demos[0].dims
        if any(d.dims != dims for d in demos):
            raise ValidationError("all demos must share the same dimensionality")
        object.__setattr__(self, "demos", demos)

    @property
    def count(self) -> int:
        return len(self.demos)

    @property
    def dims(self) -> int:
        return self.demos[0].dims


@dataclass(frozen=True)
class AlignedDemoSet:
    """Demos mapped onto the common 0 -> 1 chord and the [0, T] horizon,
    together with the per-demo alignment maps."""

    demos: tuple[Trajectory, ...]
    maps: tuple[AffineMap, ...]
    horizon: float

    def __post_init__(self):
        demos = tuple(self.demos)
        maps = tuple(self.maps)
        if len(demos) != len(maps) or not demos:
            raise ValidationError("demos and maps must be nonempty and aligned")
        ones = np.ones(demos[0].dims)
        for j, demo in enumerate(demos):
            if np.max(np.abs(demo.start)) > 1e-9 or np.max(np.abs(demo.goal - ones)) > 1e-9:
                raise ValidationError(f"aligned demo {j} does not run from 0 to 1")
        object.__setattr__(self, "demos", demos)
        object.__setattr__(self, "maps", maps)

    @property
    def count(self) -> int:
        return len(self.demos)

    @property
    def dims(self) -> int:
        return self.demos[0].dims


def align_demos(demo_set: DemoSet, horizon: float = 1.0) -> AlignedDemoSet:
    """Align every demonstration to the 0 -> 1 chord on ``[0, horizon]``.

    Positions are mapped by the demo's roto-dilatation applied to the offset
    from its start (so aligned demos start exactly at the zero vector), and
    times are rescaled affinely onto the common horizon.  Derivative arrays
    are dropped; they are recomputed from the transformed samples when
    needed.
    """
    if horizon <= 0.0:
        raise ValidationError("horizon must be positive")
    dims = demo_set.dims
    zeros = np.zeros(dims)
    ones = np.ones(dims)
    aligned = []
    maps = []
    for j, demo in enumerate(demo_set.demos):
        chord = demo.goal - demo.start
        if np.linalg.norm(chord) == 0.0:
            raise AlignmentError(f"demo {j} has coincident endpoints and cannot be aligned")
        amap = rotodilatation(demo.start, demo.goal, zeros, ones)
        positions = amap.apply(demo.positions - demo.start)
        times = (demo.times - demo.times[0]) / demo.duration * horizon
        aligned.append(Trajectory(times=times, positions=positions))
        maps.append(amap)
    return AlignedDemoSet(demos=tuple(aligned), maps=tuple(maps), horizon=horizon)


def regression_system(
    aligned: AlignedDemoSet,
    gains: Gains,
    phase: PhaseConfig,
    basis,
) -> list[LinearSystem]:
    """One linear system per dimension for the aligned demo set.

    The matrix is ``2M`` times the single-demo matrix and is shared by all
    dimensions; the right-hand side sums ``2`` times each demo's forcing
    integral.
    """
    count = aligned.count
    for demo in aligned.demos:
        _check_model_consistency(phase, basis, demo.duration)
    forcings = [
        extract_forcing(differentiate(demo), gains, phase, "classical")
        for demo in aligned.demos
    ]
    lo = float(np.exp(-phase.alpha * phase.horizon))
    grid, quad_w, rows = _quad_rows(basis, lo, 1.0)
    weighted = rows * quad_w[:, None]
    matrix = rows.T @ weighted
    matrix = 2.0 * count * 0.5 * (matrix + matrix.T)
    bandwidth = _structural_bandwidth(basis)
    systems = []
    for dim in range(aligned.dims):
        rhs = np.zeros(rows.shape[1])
        for forcing in forcings:
            rhs += 2.0 * (weighted.T @ _interp_forcing(forcing, dim)(grid))
        systems.append(LinearSystem(matrix=matrix, rhs=rhs, bandwidth=bandwidth))
    return systems


def regress_weights(
    aligned: AlignedDemoSet,
    gains: Gains,
    phase: PhaseConfig,
    basis,
) -> DmpModel:
    """Solve the regression systems and package the result as a model whose
    learned endpoints are the common 0 and 1 vectors."""
    systems = regression_system(aligned, gains, phase, basis)
    size = basis.size
    dims = aligned.dims
    weights = np.empty((dims, size))
    biases = np.empty((dims, size)) if basis.biased else None
    for dim, system in enumerate(systems):
        solution, _ = solve_weights(system)
        weights[dim] = solution[:size]
        if basis.biased:
            biases[dim] = solution[size:]
    return DmpModel(
        gains=gains,
        phase=phase,
        basis=basis,
        weights=weights,
        biases=biases,
        learned_x0=np.zeros(dims),
        learned_g=np.ones(dims),
    )
