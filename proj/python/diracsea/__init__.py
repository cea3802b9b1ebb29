"""Python access to the diracsea core: lattice evolution, projectors and the
experiment harness."""

import json

from ._diracsea import (
    GaussianPulse,
    InvalidInput,
    Lattice,
    NumericalFailure,
    __version__,
    evolve,
    experiment_names,
    free_projectors,
    hs_norm,
    pair_number,
)
from ._diracsea import run_config as _run_config


def run(config, out_dir="out", threads=1):
    """Run a configuration (dict or JSON string). Returns the summary dict and
    the list of written files."""
    text = config if isinstance(config, str) else json.dumps(config)
    summary, outputs = _run_config(text, out_dir, threads)
    return json.loads(summary), list(outputs)


__all__ = [
    "GaussianPulse",
    "InvalidInput",
    "Lattice",
    "NumericalFailure",
    "__version__",
    "evolve",
    "experiment_names",
    "free_projectors",
    "hs_norm",
    "pair_number",
    "run",
]
