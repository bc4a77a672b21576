"""JSON state files.

Layout::

    {"version": 1, "n": 3, "spectrum": [-1.0, 1.0], "kind": "pure",
     "data": [[re, im], ...]}

``data`` holds the amplitudes in lexicographic multi-index order (last party
fastest) for ``pure``, the row-major matrix for ``density`` and a list of
``{"p": weight, "amplitudes": [[re, im], ...]}`` for ``ensemble``. Floats are
written with Python's shortest round-trip repr (at most 17 significant
digits), so reading a file back is bit-exact.
"""
from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .errors import InvariantViolation, ParseError
from .spectral import make_local_observable
from .states import DensityState, Ensemble, PureState

FORMAT_VERSION = 1


def _pairs(values) -> list:
    values = np.asarray(values, dtype=complex).reshape(-1)
    return [[float(v.real), float(v.imag)] for v in values]


def _complex(pairs) -> np.ndarray:
    arr = np.asarray(pairs, dtype=float)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise ParseError("complex data must be a list of [re, im] pairs")
    return arr[:, 0] + 1j * arr[:, 1]


def state_to_dict(state) -> dict:
    out = {"version": FORMAT_VERSION, "n": state.n, "spectrum": list(state.obs.spectrum)}
    if isinstance(state, PureState):
        out.update(kind="pure", data=_pairs(state.amplitudes))
    elif isinstance(state, DensityState):
        out.update(kind="density", data=[_pairs(row) for row in state.matrix])
    elif isinstance(state, Ensemble):
        out.update(kind="ensemble",
                   data=[{"p": p, "amplitudes": _pairs(s.amplitudes)} for p, s in state.members])
    else:
        raise TypeError(f"cannot serialize {type(state).__name__}")
    return out


def state_from_dict(doc: dict):
    try:
        version = doc["version"]
        n = int(doc["n"])
        obs = make_local_observable(doc["spectrum"])
        kind = doc["kind"]
        data = doc["data"]
    except (KeyError, TypeError) as exc:
        raise ParseError(f"malformed state document: {exc}") from exc
    if version != FORMAT_VERSION:
        raise ParseError(f"unsupported format version {version!r}")
    if kind == "pure":
        return PureState(obs, n, _complex(data))
    if kind == "density":
        size = obs.dim ** n
        rows = [_complex(row) for row in data]
        if len(rows) != size:
            raise InvariantViolation(f"expected {size} rows, got {len(rows)}")
        return DensityState(obs, n, np.array(rows))
    if kind == "ensemble":
        return Ensemble(tuple((float(m["p"]), PureState(obs, n, _complex(m["amplitudes"])))
                              for m in data))
    raise ParseError(f"unknown state kind {kind!r}")


def dumps(state) -> str:
    return json.dumps(state_to_dict(state), indent=1) + "\n"


def loads(text: str):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ParseError("state file must hold a JSON object")
    return state_from_dict(doc)


def save_state(state, path) -> None:
    Path(path).write_text(dumps(state), encoding="utf-8", newline="\n")


def load_state(path):
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    return loads(text)
