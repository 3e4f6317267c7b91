"""Canonical JSON artifacts: design files, projector files, reports.

Complex matrices are nested row-major lists of ``[re, im]`` pairs. Output
is canonical (sorted keys, floats with 17 significant digits) so reruns
with the same arguments produce byte-identical files.
"""
import json
import math
from pathlib import Path

import numpy as np

from .design import ConicalDesign
from .errors import DomainError


def encode_matrix(a):
    a = np.asarray(a, dtype=complex)
    return [[[float(z.real), float(z.imag)] for z in row] for row in a]


def decode_matrix(rows):
    arr = np.asarray(rows, dtype=float)
    if arr.ndim != 3 or arr.shape[2] != 2:
        raise DomainError("complex matrix must be a nested list of [re, im] pairs")
    return arr[..., 0] + 1j * arr[..., 1]


def _format(obj):
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if not math.isfinite(x):
            return "null"
        s = format(x, ".17g")
        return "0" if s == "-0" else s
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        items = sorted((str(k), v) for k, v in obj.items())
        return "{" + ",".join(f"{json.dumps(k)}:{_format(v)}" for k, v in items) + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        return "[" + ",".join(_format(v) for v in obj) + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj):
    return _format(obj) + "\n"


def write_json(obj, path):
    Path(path).write_text(dumps(obj))


def read_json(path):
    return json.loads(Path(path).read_text())


def design_to_dict(design, kind=None, generator=None, seed=None, params=None):
    return {
        "dimension": design.dim,
        "kind": kind or design.kind,
        "operators": [encode_matrix(a) for a in design.elements],
        "metadata": {
            "generator": generator or "conical",
            "seed": seed,
            "parameters": params or {},
        },
    }


def operators_from_dict(data):
    """Validated (m, d, d) complex array from a design-file mapping."""
    try:
        d = int(data["dimension"])
        stack = np.array([decode_matrix(op) for op in data["operators"]])
    except (KeyError, TypeError, ValueError) as exc:
        raise DomainError(f"malformed design file: {exc}") from exc
    if stack.ndim != 3 or stack.shape[1:] != (d, d):
        raise DomainError(f"operators must be {d}x{d} matrices")
    return stack


def load_design(path):
    data = read_json(path)
    return ConicalDesign(operators_from_dict(data), kind=data.get("kind"))


def save_design(design, path, **meta):
    write_json(design_to_dict(design, **meta), path)


def load_projector_matrix(path):
    data = read_json(path)
    try:
        P = np.asarray(data["matrix"], dtype=float)
        d = int(data["dimension"])
        m = int(data["m"])
    except (KeyError, TypeError, ValueError) as exc:
        raise DomainError(f"malformed projector file: {exc}") from exc
    if P.shape != (m, m):
        raise DomainError(f"projector matrix shape {P.shape} does not match m={m}")
    return P, d


def projector_to_dict(P, d):
    P = np.asarray(P, dtype=float)
    return {"m": P.shape[0], "dimension": int(d), "matrix": P.tolist()}
