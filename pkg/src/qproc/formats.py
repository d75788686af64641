"""JSON file formats for matrices, processors and unitary sets.

Matrix: ``{"rows": r, "cols": c, "re": [...], "im": [...]}`` with row-major
real and imaginary parts.  Processor: ``{"data_dim": D, "program_dim": N,
"blocks": [[matrix, ...], ...]}`` or ``{"data_dim": D, "program_dim": N,
"global_unitary": matrix}``.  Unitary set: ``{"dim": D, "members": [{"label":
str, "matrix": matrix}, ...]}``.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from qproc.bounds import UnitarySet
from qproc.linalg import DimensionError
from qproc.processor import Processor, from_global_unitary


class FormatError(ValueError):
    pass


def _require(obj, *keys):
    if not isinstance(obj, dict):
        raise FormatError(f"expected a JSON object, got {type(obj).__name__}")
    missing = [k for k in keys if k not in obj]
    if missing:
        raise FormatError(f"missing field(s): {', '.join(missing)}")


def matrix_to_json(m) -> dict:
    m = np.asarray(m, dtype=complex)
    if m.ndim == 1:
        m = m[:, None]
    return {
        "rows": int(m.shape[0]),
        "cols": int(m.shape[1]),
        "re": m.real.ravel().tolist(),
        "im": m.imag.ravel().tolist(),
    }


def matrix_from_json(obj) -> np.ndarray:
    _require(obj, "rows", "cols", "re", "im")
    r, c = obj["rows"], obj["cols"]
    if not (isinstance(r, int) and isinstance(c, int)) or r < 0 or c < 0:
        raise FormatError("rows and cols must be non-negative integers")
    re = np.asarray(obj["re"], dtype=float)
    im = np.asarray(obj["im"], dtype=float)
    if re.shape != (r * c,) or im.shape != (r * c,):
        raise FormatError(f"expected {r * c} real and imaginary entries")
    m = (re + 1j * im).reshape(r, c)
    if not np.all(np.isfinite(m)):
        raise FormatError("matrix has non-finite entries")
    return m


def processor_to_json(p: Processor) -> dict:
    return {
        "data_dim": p.data_dim,
        "program_dim": p.program_dim,
        "blocks": [[matrix_to_json(p.blocks[j, k]) for k in range(p.program_dim)] for j in range(p.program_dim)],
    }


def processor_from_json(obj) -> Processor:
    _require(obj, "data_dim", "program_dim")
    d, n = obj["data_dim"], obj["program_dim"]
    if "global_unitary" in obj:
        return from_global_unitary(matrix_from_json(obj["global_unitary"]), d, n)
    _require(obj, "blocks")
    rows = obj["blocks"]
    if len(rows) != n or any(len(row) != n for row in rows):
        raise FormatError(f"blocks must be an {n}x{n} grid")
    blocks = np.array([[matrix_from_json(b) for b in row] for row in rows], dtype=complex)
    if blocks.shape != (n, n, d, d):
        raise DimensionError(f"blocks have shape {blocks.shape}, expected {(n, n, d, d)}")
    return Processor(blocks)


def unitary_set_to_json(s: UnitarySet) -> dict:
    return {
        "dim": s.dim,
        "members": [{"label": lab, "matrix": matrix_to_json(u)} for lab, u in zip(s.labels, s.members)],
    }


def unitary_set_from_json(obj) -> UnitarySet:
    _require(obj, "dim", "members")
    labels, members = [], []
    for k, entry in enumerate(obj["members"]):
        _require(entry, "matrix")
        labels.append(str(entry.get("label", k)))
        members.append(matrix_from_json(entry["matrix"]))
    s = UnitarySet(members, labels)
    if s.dim != obj["dim"]:
        raise DimensionError(f"members have dimension {s.dim}, file says {obj['dim']}")
    return s


def load_json(path):
    with open(Path(path)) as fh:
        return json.load(fh)


def dump_json(obj, path) -> None:
    with open(Path(path), "w") as fh:
        json.dump(obj, fh, indent=2)
        fh.write("\n")
