"""Spectral analysis of indefinite Sturm-Liouville operators.

The heavy lifting happens in the native ``_indefsl`` module. Problems and
reports cross the boundary as JSON, in the same schema the command line tool
reads and writes.
"""

from __future__ import annotations

import json
from os import PathLike
from pathlib import Path
from typing import Any, Mapping, Union

from ._indefsl import (
    DomainError,
    NumericalError,
    ValidationError,
    count_in_interval,
    indefinite_eigs,
    inertia,
    schema_version,
    sym_tridiag_eigs,
    version,
)
from . import _indefsl

__all__ = [
    "DomainError",
    "NumericalError",
    "ValidationError",
    "analyze",
    "count_in_interval",
    "eigenvalues_csv",
    "essential_spectrum",
    "indefinite_eigs",
    "inertia",
    "kneser",
    "load_problem",
    "schema_version",
    "sym_tridiag_eigs",
    "version",
]

__version__ = version()

Problem = Union[Mapping[str, Any], str, PathLike]


def _text(problem: Problem) -> str:
    # a mapping is serialized, a path is read, a string is taken as JSON
    if isinstance(problem, Mapping):
        return json.dumps(problem)
    if isinstance(problem, PathLike):
        return Path(problem).read_text()
    return problem


def load_problem(problem: Problem) -> dict:
    """Validated problem with every default filled in."""
    return json.loads(_indefsl.normalize_problem_json(_text(problem)))


def analyze(problem: Problem) -> dict:
    """Run the full pipeline; sections that fail show up under ``issues``."""
    return json.loads(_indefsl.analyze_json(_text(problem)))


def eigenvalues_csv(report: Mapping[str, Any]) -> str:
    return _indefsl.eigenvalues_csv(json.dumps(report))


def essential_spectrum(problem: Problem) -> dict:
    return json.loads(_indefsl.essential_json(_text(problem)))


def kneser(problem: Problem, n: int = 0, side: str = "plus", margin: float = 0.02) -> dict:
    return json.loads(_indefsl.kneser_json(_text(problem), n, side, margin))
