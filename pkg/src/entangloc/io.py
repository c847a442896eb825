"""JSON documents for states and analysis reports.

See ``docs/formats.md`` for the grammar. Complex numbers are ``[re, im]``
pairs; matrices are lists of rows. Floats are written with ``repr`` precision
so a document round-trips bit for bit.
"""

from __future__ import annotations

import hashlib
import json
from pathlib import Path

import numpy as np

from .mixed import MixedReport
from .pure import SeparabilityReport
from .states import DensityMatrix, PureState

FORMAT_VERSION = 1


class FormatError(ValueError):
    """A state or report document is malformed."""


def _pairs(values) -> list[list[float]]:
    return [[float(z.real), float(z.imag)] for z in np.asarray(values).ravel()]


def _complex(pairs, where: str, ndim: int) -> np.ndarray:
    try:
        arr = np.asarray(pairs, dtype=float)
    except (TypeError, ValueError):
        raise FormatError(f"{where} must be made of [re, im] pairs") from None
    if arr.ndim != ndim + 1 or arr.shape[-1] != 2:
        raise FormatError(f"{where} must be made of [re, im] pairs")
    return arr[..., 0] + 1j * arr[..., 1]


def state_to_dict(state) -> dict:
    if isinstance(state, PureState):
        return {"kind": "pure", "dims": list(state.dims), "amplitudes": _pairs(state.amplitudes)}
    if isinstance(state, DensityMatrix):
        rows = [_pairs(row) for row in state.matrix]
        return {"kind": "density", "dims": list(state.dims), "matrix": rows}
    raise TypeError(f"cannot serialize {type(state).__name__}")


def state_from_dict(doc: dict, validate: bool = True):
    if not isinstance(doc, dict):
        raise FormatError("state document must be a JSON object")
    kind = doc.get("kind")
    dims = doc.get("dims")
    if not isinstance(dims, list) or not all(isinstance(d, int) for d in dims):
        raise FormatError("'dims' must be an array of integers")
    if kind == "pure":
        if "amplitudes" not in doc:
            raise FormatError("pure state needs 'amplitudes'")
        amps = _complex(doc["amplitudes"], "'amplitudes'", 1)
        return PureState(amps, tuple(dims), validate=validate)
    if kind == "density":
        if "matrix" not in doc:
            raise FormatError("density state needs 'matrix'")
        m = _complex(doc["matrix"], "'matrix'", 2)
        return DensityMatrix(m, tuple(dims), validate=validate)
    raise FormatError(f"unknown state kind {kind!r}; expected 'pure' or 'density'")


def dumps(doc: dict) -> str:
    """One top-level key per line, values in compact JSON."""
    lines = [f" {json.dumps(k)}: {json.dumps(v, separators=(', ', ': '))}" for k, v in doc.items()]
    return "{\n" + ",\n".join(lines) + "\n}\n"


def save_state(state, path) -> str:
    text = dumps(state_to_dict(state))
    Path(path).write_text(text)
    return text


def load_state(path, validate: bool = True):
    text = Path(path).read_text()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: not valid JSON ({exc})") from exc
    return state_from_dict(doc, validate=validate)


def digest(path) -> str:
    return "sha256:" + hashlib.sha256(Path(path).read_bytes()).hexdigest()


def _outcome(partition) -> str:
    if partition.is_finest():
        return "completely_separable"
    if partition.is_coarsest():
        return "completely_entangled"
    return "partially_entangled"


def _trace(trace) -> list[dict]:
    return [{"block": list(b), "tests": int(k), "result": r} for b, k, r in trace]


def report_to_dict(report, dims, input_digest: str | None = None) -> dict:
    doc = {
        "kind": "report",
        "format_version": FORMAT_VERSION,
        "path": "pure" if isinstance(report, SeparabilityReport) else "mixed",
        "input_digest": input_digest,
        "dims": list(dims),
        "partition": report.partition.to_list(),
        "outcome": _outcome(report.partition),
        "fully_separable": report.fully_separable,
        "fully_entangled": report.fully_entangled,
        "tolerances": dict(report.tolerances),
    }
    if isinstance(report, SeparabilityReport):
        doc["schmidt_tests"] = report.schmidt_tests
        doc["factors"] = [
            {"block": list(b), "dims": list(f.dims), "amplitudes": _pairs(f.amplitudes)}
            for b, f in zip(report.partition.blocks, report.factors)
        ]
    elif isinstance(report, MixedReport):
        doc["policy"] = report.policy.value
        doc["oracles"] = list(report.oracles)
        doc["exact"] = report.exact
        doc["confidence"] = report.confidence
        doc["unresolved"] = [{"block": list(b), "bipartition": bp.to_list()} for b, bp in report.unresolved]
    else:
        raise TypeError(f"cannot serialize {type(report).__name__}")
    doc["evidence"] = report.evidence
    doc["trace"] = _trace(report.trace)
    return doc


def load_report(path) -> dict:
    try:
        doc = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: not valid JSON ({exc})") from exc
    if not isinstance(doc, dict) or doc.get("kind") != "report":
        raise FormatError(f"{path}: not a report document")
    for key in ("path", "partition", "evidence", "tolerances"):
        if key not in doc:
            raise FormatError(f"{path}: report is missing {key!r}")
    return doc
