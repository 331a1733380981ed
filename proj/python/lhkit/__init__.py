"""Python access to the directional Hilbert transform toolkit."""

from ._core import (  # noqa: F401
    ConfigError,
    DecayFit,
    FieldOperators,
    FieldSpec,
    NumericalError,
    P_k,
    apply_operator,
    beta_j0,
    beta_table,
    cone_project,
    fit_decay,
    lp_norm,
    random_bandlimited,
    run_experiment,
    set_threads,
    verify_scenario,
)

__version__ = "0.1.0"
