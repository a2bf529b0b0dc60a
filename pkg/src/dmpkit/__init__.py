"""Dynamic movement primitives with interchangeable basis families,
integral least-squares weight learning, partial weight updates,
affine-invariant generalization, and regression over multiple
demonstrations."""

from .affine import AffineMap, conjugate_gains, inverse, rotation_between, rotodilatation
from .basis import (
    BasisFamily,
    BasisSet,
    basis_matrix,
    eval_basis,
    forcing_row,
    make_basis,
    make_centers,
    make_widths,
    support_interval,
)
from .bench import (
    SweepReport,
    add_noise,
    gen_limit_cycle_dataset,
    gen_target,
    gen_update_pair,
    integrate_limit_cycle,
    limit_cycle_rhs,
    parameter_count,
    parse_family_label,
    run_condition_sweep,
    run_error_sweep,
    run_sparsity,
    run_timing_sweep,
)
from .dmp import Formulation, forcing_value, rollout
from .errors import (
    AlignmentError,
    ConditioningError,
    DegenerateCoverageError,
    DivergenceError,
    DmpKitError,
    FullSupportError,
    NullTransformError,
    NumericalError,
    ValidationError,
    ZeroScaleError,
)
from .learn import (
    DmpModel,
    ForcingSamples,
    Gains,
    LinearSystem,
    Trajectory,
    assemble_gram,
    assemble_system,
    bbox_diameter,
    condition_number,
    differentiate,
    extract_forcing,
    learn_dmp,
    solve_weights,
    update_segment,
)
from .phase import PhaseConfig, final_phase, phase_at
from .regress import AlignedDemoSet, DemoSet, align_demos, regress_weights, regression_system

__version__ = "0.1.0"

__all__ = [
    "AffineMap",
    "AlignedDemoSet",
    "AlignmentError",
    "BasisFamily",
    "BasisSet",
    "ConditioningError",
    "DegenerateCoverageError",
    "DemoSet",
    "DivergenceError",
    "DmpKitError",
    "DmpModel",
    "ForcingSamples",
    "Formulation",
    "FullSupportError",
    "Gains",
    "LinearSystem",
    "NullTransformError",
    "NumericalError",
    "PhaseConfig",
    "SweepReport",
    "Trajectory",
    "ValidationError",
    "ZeroScaleError",
    "add_noise",
    "align_demos",
    "assemble_gram",
    "assemble_system",
    "basis_matrix",
    "bbox_diameter",
    "condition_number",
    "conjugate_gains",
    "differentiate",
    "eval_basis",
    "extract_forcing",
    "final_phase",
    "forcing_row",
    "forcing_value",
    "gen_limit_cycle_dataset",
    "gen_target",
    "gen_update_pair",
    "integrate_limit_cycle",
    "inverse",
    "learn_dmp",
    "limit_cycle_rhs",
    "make_basis",
    "make_centers",
    "make_widths",
    "parameter_count",
    "parse_family_label",
    "phase_at",
    "regress_weights",
    "regression_system",
    "rollout",
    "rotation_between",
    "rotodilatation",
    "run_condition_sweep",
    "run_error_sweep",
    "run_sparsity",
    "run_timing_sweep",
    "solve_weights",
    "support_interval",
    "update_segment",
]
