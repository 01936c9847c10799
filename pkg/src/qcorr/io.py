"""JSON file formats.

* matrix: ``{"rows", "cols", "entries": [[re, im], ...]}`` row-major
* ensemble: ``[{"weight": q, "state": [[re, im], ...]}, ...]``
* correlation records: header (``partition``, ``bases``) plus
  ``records: [{"indices": [...], "value": v}, ...]``; empirical files add
  ``shots``, ``seed``, ``generator`` and per-record ``shots`` and
  ``standard_error``

Floats are written with 17 significant digits so files round-trip
bit-exactly.  Non-finite floats are written as ``null``.
"""

from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np

from .ensembles import DensityOperator, Ensemble
from .errors import QcorrError
from .tomography import CorrelationRecord, OperatorBasis, Partition, RecordSet, hermitian_basis, pauli_basis


class FormatError(QcorrError):
    pass


def _num(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    x = float(x)
    if not math.isfinite(x):
        return "null"
    if x == int(x) and abs(x) < 1e16:
        return str(int(x)) + ".0" if x != 0 or math.copysign(1, x) > 0 else "-0.0"
    return format(x, ".17g")


def dumps(obj, indent: int = 2, _level: int = 0) -> str:
    """JSON text with fixed 17-digit floats; short numeric lists stay on one line."""
    pad = " " * (indent * (_level + 1))
    end = " " * (indent * _level)
    if obj is None:
        return "null"
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, (bool, int, float, np.integer, np.floating, np.bool_)):
        return _num(obj)
    if isinstance(obj, np.ndarray):
        obj = obj.tolist()
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {dumps(v, indent, _level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(isinstance(v, (int, float, np.integer, np.floating)) and not isinstance(v, bool) for v in obj):
            return "[" + ", ".join(_num(v) for v in obj) + "]"
        if all(isinstance(v, (list, tuple)) and len(v) == 2 and all(isinstance(u, (int, float, np.floating)) for u in v) for v in obj):
            return "[" + ", ".join(dumps(v) for v in obj) + "]"
        return "[\n" + ",\n".join(pad + dumps(v, indent, _level + 1) for v in obj) + "\n" + end + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def complex_pairs(v) -> list[list[float]]:
    a = np.asarray(v, dtype=complex).reshape(-1)
    return [[float(z.real), float(z.imag)] for z in a]


def _from_pairs(pairs, what: str) -> np.ndarray:
    try:
        arr = np.asarray(pairs, dtype=float)
    except (TypeError, ValueError):
        raise FormatError(f"{what}: entries must be [re, im] number pairs") from None
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise FormatError(f"{what}: entries must be [re, im] number pairs")
    return arr[:, 0] + 1j * arr[:, 1]


def matrix_to_dict(m) -> dict:
    m = np.asarray(m, dtype=complex)
    return {"rows": m.shape[0], "cols": m.shape[1], "entries": complex_pairs(m)}


def matrix_from_dict(d: dict, what: str = "matrix") -> np.ndarray:
    try:
        rows, cols, entries = int(d["rows"]), int(d["cols"]), d["entries"]
    except (KeyError, TypeError, ValueError):
        raise FormatError(f"{what}: expected fields rows, cols, entries") from None
    flat = _from_pairs(entries, what)
    if flat.size != rows * cols or rows < 1 or cols < 1:
        raise FormatError(f"{what}: {flat.size} entries for a {rows}x{cols} matrix")
    return flat.reshape(rows, cols)


def ensemble_to_list(e: Ensemble) -> list:
    return [{"weight": float(q), "state": complex_pairs(s)} for q, s in e]


def ensemble_from_list(data, what: str = "ensemble") -> Ensemble:
    if isinstance(data, dict) and "members" in data:
        data = data["members"]
    if not isinstance(data, list) or not data:
        raise FormatError(f"{what}: expected a nonempty list of members")
    members = []
    for k, rec in enumerate(data):
        try:
            members.append((float(rec["weight"]), _from_pairs(rec["state"], f"{what} member {k}")))
        except (KeyError, TypeError):
            raise FormatError(f"{what}: member {k} needs fields weight and state") from None
    try:
        return Ensemble.from_members(members)
    except ValueError as exc:
        raise FormatError(f"{what}: {exc}") from exc


def basis_to_dict(b: OperatorBasis) -> dict:
    if b.name in ("hermitian", "pauli"):
        return {"name": b.name, "dim": b.dim}
    return {"name": b.name, "dim": b.dim, "elements": [matrix_to_dict(e) for e in b.elements]}


def basis_from_dict(d: dict) -> OperatorBasis:
    name = d.get("name", "custom")
    if "elements" in d:
        return OperatorBasis(np.array([matrix_from_dict(e, "basis element") for e in d["elements"]]), name=name)
    if name == "hermitian":
        return hermitian_basis(int(d["dim"]))
    if name == "pauli":
        return pauli_basis()
    raise FormatError(f"unknown basis descriptor {d!r}")


def records_to_dict(rs) -> dict:
    """Serialize a :class:`RecordSet` or an empirical record set."""
    from .sampling import EmpiricalRecordSet

    out = {"partition": list(rs.partition.dims), "bases": [basis_to_dict(b) for b in rs.bases]}
    if isinstance(rs, EmpiricalRecordSet):
        out.update(shots=rs.shots, seed=rs.seed, generator=rs.generator)
        out["records"] = [
            {"indices": list(r.indices), "value": r.estimate, "shots": r.shots, "standard_error": r.standard_error}
            for r in rs.records
        ]
    else:
        out["records"] = [{"indices": list(r.indices), "value": r.value} for r in rs.records]
    return out


def records_from_dict(d: dict) -> RecordSet:
    try:
        partition = Partition(tuple(d["partition"]))
        bases = tuple(basis_from_dict(b) for b in d["bases"])
        recs = tuple(CorrelationRecord(tuple(r["indices"]), float(r["value"])) for r in d["records"])
    except (KeyError, TypeError) as exc:
        raise FormatError(f"record file: missing or malformed field ({exc})") from None
    return RecordSet(partition, bases, recs)


def _read_json(path):
    try:
        return json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: invalid JSON ({exc})") from None


def write_json(path, obj) -> None:
    Path(path).write_text(dumps(obj) + "\n")


def read_matrix(path) -> np.ndarray:
    return matrix_from_dict(_read_json(path), str(path))


def read_density(path) -> DensityOperator:
    return DensityOperator(read_matrix(path))


def read_ensemble(path) -> Ensemble:
    return ensemble_from_list(_read_json(path), str(path))


def read_records(path) -> RecordSet:
    return records_from_dict(_read_json(path))
