"""Loading models and suite configurations from JSON documents.

A document looks like::

    {
      "dim": 3,
      "X": [[[re, im], ...], ...],          # optional; drawn at random if absent
      "B": {"type": "blocks", "sizes": [2, 1]},
      "tolerance": 1e-9,                     # optional
      "seed": 0,                             # optional; used when X is absent
      "coefficients": {"b0": [[...]], ...},  # optional named elements of B
      "suite": {"trials": 100, ...}          # optional SuiteConfig fields
    }

Matrix entries are either real numbers or ``[re, im]`` pairs.
"""

from __future__ import annotations

import json
from collections.abc import Mapping
from pathlib import Path
from typing import Any

import numpy as np

from .coeff_algebra import DEFAULT_TOLERANCE, MatrixModel, build_subalgebra
from .errors import NCPError
from .models_rng import SuiteConfig, random_model, trial_rng


class ModelConfigError(NCPError):
    """The model or suite document is malformed."""


def load_document(path: str | Path) -> dict[str, Any]:
    text = Path(path).read_text(encoding="utf-8")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ModelConfigError(f"{path}: invalid JSON ({exc})") from exc
    if not isinstance(doc, dict):
        raise ModelConfigError(f"{path}: top level must be a JSON object")
    return doc


def parse_matrix(obj: Any, n: int | None = None, name: str = "matrix") -> np.ndarray:
    try:
        rows = [
            [complex(e[0], e[1]) if isinstance(e, (list, tuple)) else complex(e) for e in row]
            for row in obj
        ]
        arr = np.array(rows, dtype=complex)
    except (TypeError, ValueError, IndexError) as exc:
        raise ModelConfigError(f"{name}: entries must be numbers or [re, im] pairs") from exc
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ModelConfigError(f"{name}: expected a square matrix, got shape {arr.shape}")
    if n is not None and arr.shape[0] != n:
        raise ModelConfigError(f"{name}: expected {n}x{n}, got {arr.shape[0]}x{arr.shape[1]}")
    return arr


def matrix_to_json(a: np.ndarray) -> list[list[list[float]]]:
    return [[[float(z.real), float(z.imag)] for z in row] for row in np.asarray(a)]


def _subalgebra_spec(raw: Any, n: int) -> dict[str, Any]:
    if raw is None:
        return {"type": "scalars"}
    if isinstance(raw, str):
        return {"type": raw}
    if not isinstance(raw, Mapping) or "type" not in raw:
        raise ModelConfigError("'B' must be a type name or an object with a 'type' key")
    spec = dict(raw)
    if spec["type"] == "generators":
        spec["generators"] = [
            parse_matrix(g, n, f"B.generators[{i}]") for i, g in enumerate(spec.get("generators", []))
        ]
    return spec


def model_from_document(doc: Mapping[str, Any]) -> tuple[MatrixModel, dict[str, np.ndarray]]:
    """Build the matrix model and the named-coefficient table of a document."""
    if "dim" not in doc:
        raise ModelConfigError("model document needs 'dim'")
    n = doc["dim"]
    if not isinstance(n, int) or n <= 0:
        raise ModelConfigError(f"'dim' must be a positive integer, got {n!r}")
    tolerance = float(doc.get("tolerance", DEFAULT_TOLERANCE))
    spec = _subalgebra_spec(doc.get("B"), n)
    try:
        if "X" in doc:
            algebra = build_subalgebra(spec, n, tolerance=tolerance)
            model = MatrixModel(algebra, parse_matrix(doc["X"], n, "X"), tolerance)
        else:
            model = random_model(trial_rng(int(doc.get("seed", 0)), 0), n, spec, tolerance)
    except ModelConfigError:
        raise
    except NCPError as exc:
        raise ModelConfigError(str(exc)) from exc
    coefficients = {}
    for name, raw in (doc.get("coefficients") or {}).items():
        b = parse_matrix(raw, n, f"coefficients.{name}")
        if not model.coeff_algebra.contains(b):
            raise ModelConfigError(f"coefficient {name!r} does not lie in B")
        coefficients[name] = b
    return model, coefficients


def default_model() -> tuple[MatrixModel, dict[str, np.ndarray]]:
    """Diagonal B in M_2 with ``X`` the Pauli flip ``[[0, 1], [1, 0]]``."""
    return model_from_document({"dim": 2, "B": "diagonal", "X": [[0, 1], [1, 0]]})


def suite_config_from_document(
    doc: Mapping[str, Any] | None, overrides: Mapping[str, Any] | None = None
) -> SuiteConfig:
    data = dict((doc or {}).get("suite") or {})
    if doc is not None and "tolerance" in doc and "tolerance" not in data:
        data["tolerance"] = doc["tolerance"]
    data.update({k: v for k, v in (overrides or {}).items() if v is not None})
    try:
        return SuiteConfig.from_dict(data)
    except (TypeError, NCPError) as exc:
        raise ModelConfigError(f"invalid suite config: {exc}") from exc
