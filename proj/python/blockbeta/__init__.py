"""Random polytopes from block-beta points in products of Euclidean balls."""

from ._blockbeta import (
    DegenerateInput,
    DomainError,
    FormatError,
    QuadratureError,
    aw_asymptotic,
    aw_integral,
    cap_content_meta,
    convex_hull,
    fit_rate,
    predict_rate,
    sample,
    section_content_meta,
    simulate,
    suite_names,
    verify,
)

__all__ = [
    "DegenerateInput",
    "DomainError",
    "FormatError",
    "QuadratureError",
    "aw_asymptotic",
    "aw_integral",
    "cap_content_meta",
    "convex_hull",
    "fit_rate",
    "predict_rate",
    "sample",
    "section_content_meta",
    "simulate",
    "suite_names",
    "verify",
]
