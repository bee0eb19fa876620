"""Discrete-time path integral for the harmonic oscillator."""

from ._hopath import (
    CAUSTIC_TOLERANCE,
    CausticDelta,
    CausticPhaseCheck,
    CausticProximity,
    CausticState,
    ConvergenceStudy,
    DeltaLimitStudy,
    Error,
    ExpansionResult,
    FresnelResult,
    GaussianPacket,
    InvalidArgument,
    NumericalFailure,
    OscillatorConfig,
    RegularKernel,
    Spectrum,
    StepsTooSmall,
    TimeClass,
    analyze,
    brute_force_fresnel,
    caustic_state,
    classical_action,
    classify_time,
    closed_form_kernel,
    convergence_study,
    delta_limit_reference,
    delta_limit_study,
    discrete_kernel,
    eigenfunction_expansion,
    eigenvalues,
    log_determinant,
    measure_caustic_phase,
    minimal_stable_steps,
    rewrite_kernel_uv,
    routed_caustic,
    sigma,
    smeared_kernel,
    zero_crossing,
)

__all__ = [name for name in dir() if not name.startswith("_")]
