"""Steady-state quantum correlations of two magnon modes coupled to a microwave
cavity that contains an optical parametric amplifier and is driven by squeezed
vacuum."""

from .dynamics import (
    MaxStepsExceeded,
    SingularSolve,
    UnstableSystem,
    diffusion_matrix,
    drift_matrix,
    integrate_to_steady_state,
    is_physical,
    lyapunov_residual,
    solve_spec,
    stability,
    steady_state_cm,
)
from .experiments import (
    Axis,
    NoThresholdInRange,
    SweepGrid,
    evaluate_point,
    fig2_sweep,
    fig3_fig4_ratio_sweep,
    fig5_dissipation_sweep,
    fig6_temperature_threshold,
    max_stable_gain,
    metrics,
)
from .measures import (
    MetricsRecord,
    gaussian_steering,
    log_negativity,
    moment_steering_criterion,
    populations,
    reduce_cm,
    squeezing_db,
    steering_asymmetry,
)
from .model import (
    BathMoments,
    InvalidSpec,
    SystemSpec,
    bath_moments,
    default_spec,
    field_from_frequency,
    frequency_from_field,
    thermal_occupancy,
)

__version__ = "0.1.0"
