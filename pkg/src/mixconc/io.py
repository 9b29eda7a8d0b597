"""JSON process specs, deterministic report output, and t-grid parsing."""

from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np

from .errors import ValidationError
from .process import Alphabet, HmmSpec, JointDist, MarkovSpec

SCHEMA = "mixconc/1"
GRID_TOL = 1e-12


def _require(doc: dict, key: str):
    if key not in doc:
        raise ValidationError(f"spec is missing field {key!r}")
    return doc[key]


def _labels(raw) -> tuple:
    if not isinstance(raw, list) or not raw:
        raise ValidationError("alphabet must be a nonempty list of labels")
    return tuple(raw)


def _markov_from(doc: dict, alphabet: Alphabet, n: int) -> MarkovSpec:
    homogeneous = bool(doc.get("homogeneous", False))
    return MarkovSpec(alphabet, n, _require(doc, "p0"), tuple(_require(doc, "kernels")),
                      homogeneous=homogeneous)


def spec_from_dict(doc: dict):
    """Build a MarkovSpec, HmmSpec or JointDist from a parsed JSON document."""
    if not isinstance(doc, dict):
        raise ValidationError("spec document must be a JSON object")
    kind = _require(doc, "type")
    n = _require(doc, "n")
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise ValidationError(f"n must be a positive integer, got {n!r}")
    alphabet = Alphabet(_labels(_require(doc, "alphabet")))
    if kind == "markov":
        return _markov_from(doc, alphabet, n)
    if kind == "hmm":
        hidden_alphabet = Alphabet(_labels(_require(doc, "hidden_alphabet")))
        hidden = _markov_from(doc, hidden_alphabet, n)
        return HmmSpec(hidden, alphabet, tuple(_require(doc, "emissions")),
                       homogeneous_emissions=bool(doc.get("homogeneous_emissions", False)))
    if kind == "joint":
        flat = np.asarray(_require(doc, "mass"), dtype=float)
        if flat.ndim != 1 or flat.size != alphabet.size**n:
            raise ValidationError(f"mass must be a flat list of {alphabet.size ** n} numbers")
        return JointDist(alphabet, flat.reshape((alphabet.size,) * n))
    raise ValidationError(f"unknown spec type {kind!r}")


def load_spec(path):
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ValidationError(f"cannot read spec {path}: {exc.strerror}") from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"spec {path} is not valid JSON: {exc}") from None
    return spec_from_dict(doc)


def spec_to_dict(spec) -> dict:
    if isinstance(spec, MarkovSpec):
        return {"type": "markov", "alphabet": list(spec.alphabet.symbols), "n": spec.n,
                "p0": spec.p0.tolist(), "kernels": [k.tolist() for k in spec.kernels],
                "homogeneous": spec.homogeneous}
    if isinstance(spec, HmmSpec):
        h = spec.hidden
        return {"type": "hmm", "alphabet": list(spec.alphabet.symbols),
                "hidden_alphabet": list(h.alphabet.symbols), "n": spec.n,
                "p0": h.p0.tolist(), "kernels": [k.tolist() for k in h.kernels],
                "homogeneous": h.homogeneous, "emissions": [q.tolist() for q in spec.emissions],
                "homogeneous_emissions": spec.homogeneous_emissions}
    if isinstance(spec, JointDist):
        return {"type": "joint", "alphabet": list(spec.alphabet.symbols), "n": spec.n,
                "mass": spec.mass.ravel().tolist()}
    raise ValidationError(f"cannot serialize {type(spec).__name__}")


def _plain(obj):
    """Convert numpy scalars and arrays into JSON-native values."""
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _plain(obj.tolist())
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        value = float(obj)
        if not math.isfinite(value):
            raise ValidationError(f"cannot serialize non-finite value {value}")
        return value
    return obj


def dumps_report(report: dict) -> str:
    """Deterministic JSON: schema tag, sorted keys, shortest round-trip floats."""
    doc = {"schema": SCHEMA, **_plain(report)}
    return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False, allow_nan=False) + "\n"


def parse_grid(text: str) -> np.ndarray:
    """Parse ``start:step:end`` (end included when within 1e-12) or a comma list."""
    text = text.strip()
    try:
        if ":" in text:
            parts = [float(p) for p in text.split(":")]
            if len(parts) != 3:
                raise ValueError
            start, step, end = parts
            if step <= 0:
                raise ValidationError("grid step must be positive")
            if end < start:
                raise ValidationError("grid end must not precede start")
            count = int(math.floor((end - start) / step + GRID_TOL)) + 1
            grid = start + step * np.arange(count)
            if abs(grid[-1] - end) <= GRID_TOL:
                grid[-1] = end
        else:
            grid = np.array([float(p) for p in text.split(",")])
    except ValueError:
        raise ValidationError(f"cannot parse t grid {text!r}") from None
    if not np.all(np.isfinite(grid)) or np.any(grid < 0):
        raise ValidationError("t grid must be finite and nonnegative")
    if np.any(np.diff(grid) <= 0):
        raise ValidationError("t grid must be strictly increasing")
    return grid
