"""Finite-sample and population lower bounds for collective data strategies."""

import json as _json

from ._core import (
    CollusionError,
    Dataset,
    ErasureWindowError,
    Population,
    Transformation,
    Universe,
    car_universe,
    erasing_bound,
    erasure_margin,
    erasure_sample_window,
    generate_car_dataset,
    hoeffding_term,
    idr_bound,
    naive_unplanting_bound,
    paper_transformation,
    planting_bound,
    prior_bound_planting,
    profile_transformation,
    read_csv,
    sample_disjoint,
    split_dataset,
    unplanting_bound,
    union_delta,
)
from ._core import run_sweep as _run_sweep

__all__ = [
    "CollusionError",
    "Dataset",
    "ErasureWindowError",
    "Population",
    "Transformation",
    "Universe",
    "car_universe",
    "erasing_bound",
    "erasure_margin",
    "erasure_sample_window",
    "generate_car_dataset",
    "hoeffding_term",
    "idr_bound",
    "naive_unplanting_bound",
    "paper_transformation",
    "planting_bound",
    "prior_bound_planting",
    "profile_transformation",
    "read_csv",
    "run_sweep",
    "sample_disjoint",
    "split_dataset",
    "unplanting_bound",
    "union_delta",
]


def run_sweep(config):
    """Runs a sweep from a config dict (same keys as the CLI's --config file).

    Returns (rows, skipped): a list of row dicts and (seed, n, reason) tuples.
    """
    if not isinstance(config, str):
        config = _json.dumps(config)
    return _run_sweep(config)
