"""Insider-trading wealth under three noise interpretations.

A bond/stock market is traded on [0, T] by an honest buy-and-hold trader
and by an insider who already knows the terminal stock price.  The insider's
wealth equation has an anticipating initial condition, so its meaning
depends on the stochastic integral chosen: the Skorokhod (Wick) reading and
the Russo-Vallois forward reading give different expected terminal wealth,
and only the forward one beats the honest trader.  This package provides
the closed-form expectations of all three models, pathwise samplers whose
Monte Carlo means reproduce them, a bit-reproducible estimator harness, and
comparison/sweep/convergence reports.
"""

__version__ = "0.1.0"

from .errors import (
    AllocationMismatchError,
    BadSampleCountError,
    DegenerateEstimateError,
    IndexOverflowError,
    NegativeRateError,
    NonPositiveError,
    NotFiniteError,
    OutOfDomainError,
    ParameterError,
    UnknownTraderError,
    WealthOverflowError,
)
from .market import (
    Allocation,
    MarketParams,
    Regime,
    classify_regime,
    indicator_threshold,
    validate_params,
)
from .special import erf, erfc, inverse_normal_cdf, normal_cdf
from .sampling import (
    BrownianDraw,
    RngStream,
    brownian_increments,
    brownian_terminal,
    derive_seed,
    standard_normal,
    standard_normal_block,
    uniform_block,
)
from .samplers import (
    Trader,
    WealthSample,
    forward_euler_terminal,
    forward_insider_terminal_wealth,
    honest_terminal_wealth,
    skorokhod_unbiased_sample,
)
from .closedform import (
    ClosedFormReport,
    compare_closed_form,
    forward_expected_wealth,
    forward_expected_wealth_erf_form,
    honest_expected_wealth,
    honest_optimal_allocation,
    skorokhod_expected_wealth,
    skorokhod_expected_wealth_erf_form,
)
from .montecarlo import (
    EulerEstimate,
    MCEstimate,
    estimate_euler_mean,
    estimate_mean,
    merge_estimates,
    skorokhod_factorized_estimate,
    z_score,
)
from .report import (
    ComparisonRow,
    ConvergenceRow,
    SweepSpec,
    run_compare,
    run_convergence,
    run_sweep,
)
from .verify import DEFAULT_SEED, run_verify

__all__ = [
    "__version__",
    # errors
    "ParameterError", "NonPositiveError", "NegativeRateError", "NotFiniteError",
    "OutOfDomainError", "AllocationMismatchError", "BadSampleCountError",
    "UnknownTraderError", "WealthOverflowError", "IndexOverflowError",
    "DegenerateEstimateError",
    # market
    "MarketParams", "Allocation", "Regime", "validate_params",
    "indicator_threshold", "classify_regime",
    # special functions
    "erf", "erfc", "normal_cdf", "inverse_normal_cdf",
    # sampling
    "RngStream", "BrownianDraw", "standard_normal", "standard_normal_block",
    "uniform_block", "brownian_terminal", "brownian_increments", "derive_seed",
    # samplers
    "Trader", "WealthSample", "honest_terminal_wealth",
    "forward_insider_terminal_wealth", "skorokhod_unbiased_sample",
    "forward_euler_terminal",
    # closed forms
    "ClosedFormReport", "honest_expected_wealth", "honest_optimal_allocation",
    "skorokhod_expected_wealth", "forward_expected_wealth",
    "skorokhod_expected_wealth_erf_form", "forward_expected_wealth_erf_form",
    "compare_closed_form",
    # monte carlo
    "MCEstimate", "EulerEstimate", "estimate_mean", "estimate_euler_mean",
    "skorokhod_factorized_estimate", "merge_estimates", "z_score",
    # reports
    "ComparisonRow", "SweepSpec", "ConvergenceRow", "run_compare", "run_sweep",
    "run_convergence",
    # verification
    "run_verify", "DEFAULT_SEED",
]
