"""Kriging-based recovery of all local minima of expensive black-box functions.

The heavy lifting lives in the compiled extension; this package re-exports its
public surface.
"""

from ._multimin import (
    CSV_HEADER,
    MultiminError,
    Surrogate,
    ahd,
    chebyshev,
    derive_seed,
    domain,
    evaluate,
    expected_improvement,
    extract_minima,
    fit,
    geilm,
    known_minima,
    lcb,
    lhs_sample,
    list_functions,
    peak_ratio,
    propose,
    quantile_sd,
    run_cell,
    run_mbo,
    sample_size,
    se,
    verify_oracle,
)

__all__ = [
    "CSV_HEADER",
    "MultiminError",
    "Surrogate",
    "ahd",
    "chebyshev",
    "derive_seed",
    "domain",
    "evaluate",
    "expected_improvement",
    "extract_minima",
    "fit",
    "geilm",
    "known_minima",
    "lcb",
    "lhs_sample",
    "list_functions",
    "peak_ratio",
    "propose",
    "quantile_sd",
    "run_cell",
    "run_mbo",
    "sample_size",
    "se",
    "verify_oracle",
]
