"""Graphon-signal analysis: homomorphism densities, cut norms, k-WL and invariant networks."""

import csv
import io
import json

from ._core import *  # noqa: F401,F403
from ._core import run_experiment as _run_experiment


def run_experiment(**config):
    """Run the convergence/transferability experiment.

    Keyword arguments follow the experiment config JSON (models, graphons,
    sizes, replicates, seed, ...). Returns (rows, summary) as lists of dicts.
    """
    rows_csv, summary_csv = _run_experiment(json.dumps(config))
    parse = lambda text: list(csv.DictReader(io.StringIO(text)))
    return parse(rows_csv), parse(summary_csv)
