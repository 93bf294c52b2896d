"""Stability bounds for the Fisher information of spike super-resolution."""

from ._core import (
    DecayTooSlow,
    DuplicateLocation,
    FimstabError,
    InfeasibleSeparation,
    NoSignChange,
    SingularFisher,
    beurling,
    bound_curve,
    box,
    classical_v0_bounds,
    cli,
    compute_moments,
    crlb_linear_form,
    fim,
    fim_extremal_eigs,
    g_approximant,
    gen_amplitudes,
    gen_separated_tau,
    gram_extremal,
    h_bound,
    h_bound_certified,
    min_signal_distance,
    poisson_series_table,
    run_empirical_extremes,
    run_function_profiles,
    run_resolution_limit,
    run_verification_suite,
    selberg_box,
    stability_threshold,
    synth_signal,
    __version__,
)

__all__ = [name for name in dir() if not name.startswith("_")] + ["__version__"]
