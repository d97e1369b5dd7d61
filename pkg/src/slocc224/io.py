"""JSON interchange.

Complex numbers are always ``[re, im]`` pairs and arrays are always row-major:

* state: ``{"dims": [2, 2, n], "amplitudes": [[re, im], ...]}`` (4n pairs)
* matrix: ``{"rows": r, "cols": c, "entries": [[re, im], ...]}`` (r*c pairs)
* ensemble: ``{"components": [{"weight": w, "state": <state>}, ...]}``

Floats are written with Python's shortest round-trip repr, so output is
byte-identical for identical inputs.
"""
from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np

from . import __version__
from .errors import InvalidInput
from .mixed import MixedEnsemble
from .preparation import PovmBranch, PovmEnsemble, PovmReport
from .states import PureState


def _pairs(a) -> list:
    return [[float(z.real), float(z.imag)] for z in np.asarray(a, dtype=np.complex128).reshape(-1)]


def _from_pairs(pairs, count: int, what: str) -> np.ndarray:
    if not isinstance(pairs, list) or len(pairs) != count:
        raise InvalidInput(f"{what}: expected {count} [re, im] pairs")
    out = np.empty(count, dtype=np.complex128)
    for k, p in enumerate(pairs):
        if not (isinstance(p, (list, tuple)) and len(p) == 2):
            raise InvalidInput(f"{what}: entry {k} is not an [re, im] pair")
        try:
            re, im = float(p[0]), float(p[1])
        except (TypeError, ValueError) as exc:
            raise InvalidInput(f"{what}: entry {k} is not numeric") from exc
        if not (math.isfinite(re) and math.isfinite(im)):
            raise InvalidInput(f"{what}: entry {k} is not finite")
        out[k] = complex(re, im)
    return out


def state_to_obj(state: PureState) -> dict:
    return {"dims": [2, 2, state.n], "amplitudes": _pairs(state.amplitudes)}


def state_from_obj(obj) -> PureState:
    if not isinstance(obj, dict) or "dims" not in obj or "amplitudes" not in obj:
        raise InvalidInput("state object needs 'dims' and 'amplitudes'")
    dims = obj["dims"]
    if not (isinstance(dims, list) and len(dims) == 3 and dims[:2] == [2, 2]
            and isinstance(dims[2], int) and dims[2] >= 1):
        raise InvalidInput(f"dims must be [2, 2, n] with n >= 1, got {dims!r}")
    n = dims[2]
    return PureState(_from_pairs(obj["amplitudes"], 4 * n, "amplitudes"), n=n)


def matrix_to_obj(m) -> dict:
    m = np.asarray(m)
    return {"rows": int(m.shape[0]), "cols": int(m.shape[1]), "entries": _pairs(m)}


def matrix_from_obj(obj) -> np.ndarray:
    try:
        r, c = int(obj["rows"]), int(obj["cols"])
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidInput("matrix object needs integer 'rows' and 'cols'") from exc
    return _from_pairs(obj.get("entries"), r * c, "entries").reshape(r, c)


def ensemble_from_obj(obj) -> MixedEnsemble:
    comps = obj.get("components") if isinstance(obj, dict) else None
    if not isinstance(comps, list) or not comps:
        raise InvalidInput("ensemble needs a non-empty 'components' list")
    weights, states = [], []
    for c in comps:
        if not isinstance(c, dict) or "weight" not in c or "state" not in c:
            raise InvalidInput("each component needs 'weight' and 'state'")
        weights.append(float(c["weight"]))
        states.append(state_from_obj(c["state"]))
    return MixedEnsemble(tuple(weights), tuple(states))


def ensemble_to_obj(ens: MixedEnsemble) -> dict:
    return {"components": [{"weight": w, "state": state_to_obj(s)} for w, s in zip(ens.weights, ens.states)]}


def povm_to_obj(ens: PovmEnsemble, report: PovmReport | None = None) -> dict:
    obj = {
        "branches": [
            {
                "mu": b.mu,
                "nu": b.nu,
                "m3": matrix_to_obj(b.m3),
                "ua": matrix_to_obj(b.ua),
                "ub": matrix_to_obj(b.ub),
                "probability": b.probability,
            }
            for b in ens.branches
        ]
    }
    if report is not None:
        obj["verification"] = report.as_dict()
    return obj


def povm_from_obj(obj) -> PovmEnsemble:
    try:
        branches = tuple(
            PovmBranch(
                int(b["mu"]),
                int(b["nu"]),
                matrix_from_obj(b["m3"]),
                matrix_from_obj(b["ua"]),
                matrix_from_obj(b["ub"]),
                float(b["probability"]),
            )
            for b in obj["branches"]
        )
    except (KeyError, TypeError) as exc:
        raise InvalidInput("malformed POVM file") from exc
    return PovmEnsemble(branches)


def _clean(x):
    # json cannot carry inf/nan; they only arise as "no singular value on this side" margins
    if isinstance(x, float) and not math.isfinite(x):
        return None
    if isinstance(x, dict):
        return {k: _clean(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_clean(v) for v in x]
    return x


def dumps(obj) -> str:
    return json.dumps(_clean(obj), indent=2, allow_nan=False) + "\n"


def with_provenance(obj: dict, seed=None) -> dict:
    out = dict(obj)
    out["tool_version"] = __version__
    if seed is not None:
        out["seed"] = seed
    return out


def load_json(path) -> object:
    try:
        return json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise InvalidInput(f"cannot read JSON from {path}: {exc}") from exc


def write_json(path, obj) -> None:
    Path(path).write_text(dumps(obj))


def read_state(path) -> PureState:
    return state_from_obj(load_json(path))
