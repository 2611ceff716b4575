"""Matrix Market I/O and system bundles.

A bundle is either a directory holding ``system.json`` plus one ``.mtx`` file per
matrix, or a single ``.json`` file with the Matrix Market text embedded. Values are
written with 17 significant digits so that a write/read round trip is bit-exact.
"""

import io
import json
from pathlib import Path

import numpy as np
import scipy.io
import scipy.sparse

from .exceptions import StructureError
from .system import PHSystem, StateSpace

PH_KEYS = ("J", "R", "H", "B")
SS_KEYS = ("A", "B", "C", "D")
PRECISION = 17


class BundleError(ValueError):
    """A bundle is missing, malformed, or disagrees with its metadata."""


def _field(A):
    return "real" if not np.any(np.imag(A)) else "complex"


def matrix_to_mm(A, format="array"):
    """Matrix Market text for a dense matrix (``format`` is ``"array"`` or ``"coordinate"``)."""
    A = np.asarray(A)
    if A.ndim == 1:
        A = A.reshape(-1, 1)
    data = np.real(A) if _field(A) == "real" else np.asarray(A, dtype=np.complex128)
    if format == "coordinate":
        data = scipy.sparse.coo_matrix(data)
    elif format != "array":
        raise ValueError(f"unknown Matrix Market format {format!r}")
    buf = io.BytesIO()
    scipy.io.mmwrite(buf, data, precision=PRECISION)
    return buf.getvalue().decode("ascii")


def mm_to_matrix(text):
    if isinstance(text, str):
        text = text.encode("ascii")
    M = scipy.io.mmread(io.BytesIO(text))
    if scipy.sparse.issparse(M):
        M = M.toarray()
    return np.asarray(M, dtype=np.complex128)


def write_matrix(path, A, format="array"):
    Path(path).write_text(matrix_to_mm(A, format))


def read_matrix(path):
    try:
        return mm_to_matrix(Path(path).read_bytes())
    except (OSError, ValueError) as exc:
        raise BundleError(f"cannot read Matrix Market file {path}: {exc}") from exc


def _metadata(system, name):
    if isinstance(system, PHSystem):
        mats = dict(zip(PH_KEYS, (system.J, system.R, system.H, system.B)))
        meta = {"kind": "ph", "n": system.n, "p": system.p}
    else:
        mats = dict(zip(SS_KEYS, (system.A, system.B, system.C, system.D)))
        meta = {"kind": "state_space", "order": system.order, "p": system.n_inputs}
    field = "complex" if any(_field(M) == "complex" for M in mats.values()) else "real"
    return mats, {"name": name, **meta, "field": field}


def write_bundle(path, system, name="system", format="array"):
    """Write a :class:`PHSystem` or :class:`StateSpace` as a bundle; ``*.json`` paths give a single file."""
    path = Path(path)
    mats, meta = _metadata(system, name)
    if path.suffix == ".json":
        meta["matrices"] = {k: matrix_to_mm(M, format) for k, M in mats.items()}
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(json.dumps(meta, indent=2) + "\n")
        return path
    path.mkdir(parents=True, exist_ok=True)
    meta["files"] = {}
    for key, M in mats.items():
        fname = f"{key}.mtx"
        write_matrix(path / fname, M, format)
        meta["files"][key] = fname
    (path / "system.json").write_text(json.dumps(meta, indent=2) + "\n")
    return path


def read_bundle(path):
    """Read a bundle written by :func:`write_bundle`.

    Returns
    -------
    system : PHSystem or StateSpace
    metadata : dict
    """
    path = Path(path)
    if path.is_dir():
        meta_path = path / "system.json"
        if not meta_path.exists():
            raise BundleError(f"{path} has no system.json")
        meta = json.loads(meta_path.read_text())
        mats = {k: read_matrix(path / f) for k, f in meta.get("files", {}).items()}
    elif path.is_file():
        try:
            meta = json.loads(path.read_text())
        except json.JSONDecodeError as exc:
            raise BundleError(f"{path} is not valid JSON: {exc}") from exc
        mats = {k: mm_to_matrix(t) for k, t in meta.get("matrices", {}).items()}
    else:
        raise BundleError(f"system bundle {path} does not exist")

    kind = meta.get("kind", "ph")
    keys = PH_KEYS if kind == "ph" else SS_KEYS
    missing = [k for k in keys if k not in mats]
    if missing:
        raise BundleError(f"bundle {path} lacks matrices {missing}")
    if kind == "ph":
        try:
            system = PHSystem(*(mats[k] for k in PH_KEYS))
        except (StructureError, ValueError) as exc:
            raise BundleError(f"bundle {path} is not a valid pH system: {exc}") from exc
        expected = {"n": system.n, "p": system.p}
    else:
        system = StateSpace(*(mats[k] for k in SS_KEYS))
        expected = {"order": system.order, "p": system.n_inputs}
    for key, value in expected.items():
        if key in meta and meta[key] != value:
            raise BundleError(f"bundle metadata says {key}={meta[key]} but the matrices give {value}")
    return system, meta


def is_bundle(path):
    path = Path(path)
    return (path.is_dir() and (path / "system.json").exists()) or (path.is_file() and path.suffix == ".json")


__all__ = [
    "BundleError",
    "matrix_to_mm",
    "mm_to_matrix",
    "read_bundle",
    "read_matrix",
    "write_bundle",
    "write_matrix",
    "is_bundle",
]

