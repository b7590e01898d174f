"""
JSON encoding of groups, cocycles, bilinear maps and embedding results.

Groups are ``{"factors": [...]}``; cocycles carry ``"a"``, ``"b"`` and a
row-major ``"table"`` whose entries are B-coordinate lists; bilinear maps
carry a ``"matrix"`` of generator values; ℚ/ℤ values are ``"num/den"``.
Output is deterministic so dump → load → dump is byte-identical.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Any

import numpy as np

from .abelian import AbelianGroup
from .cocycle import BilinearMatrix, Cocycle
from .errors import InvalidInputError, StructuralError
from .qz import QZVector


def dumps(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":")) + "\n"


def loads(text: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise StructuralError(f"invalid JSON: {exc}") from None


def _int_list(x, what: str) -> list:
    if not isinstance(x, list) or not all(isinstance(v, int) and not isinstance(v, bool) for v in x):
        raise StructuralError(f"{what} must be a list of integers")
    return x


# -- groups -----------------------------------------------------------------


def group_to_json(G: AbelianGroup) -> dict:
    return {"factors": list(G.factors)}


def group_from_json(obj) -> AbelianGroup:
    if isinstance(obj, list):
        facs = _int_list(obj, "factors")
    elif isinstance(obj, dict) and "factors" in obj:
        facs = _int_list(obj["factors"], "factors")
    else:
        raise StructuralError('a group is {"factors": [d1, ...]} or a list of moduli')
    try:
        return AbelianGroup(tuple(facs))
    except (ValueError, TypeError) as exc:
        raise InvalidInputError(str(exc)) from None


def parse_group(text: str) -> AbelianGroup:
    """Accept JSON (``[2,4]`` or ``{"factors":[2,4]}``) or ``2,4``."""
    text = text.strip()
    if text.startswith("[") or text.startswith("{"):
        return group_from_json(loads(text))
    if not text:
        return AbelianGroup(())
    try:
        return AbelianGroup(tuple(int(t) for t in text.split(",")))
    except ValueError:
        raise StructuralError(f"cannot parse group {text!r}") from None


# -- cocycles ---------------------------------------------------------------


def cocycle_to_json(gamma: Cocycle) -> dict:
    return {
        "a": group_to_json(gamma.group_a),
        "b": group_to_json(gamma.group_b),
        "table": gamma.table.tolist(),
    }


def cocycle_from_json(obj) -> Cocycle:
    if not isinstance(obj, dict) or not {"a", "b", "table"} <= obj.keys():
        raise StructuralError('a cocycle needs "a", "b" and "table"')
    A, B = group_from_json(obj["a"]), group_from_json(obj["b"])
    rows = obj["table"]
    n = A.order
    if not isinstance(rows, list) or len(rows) != n:
        raise StructuralError(f"table needs {n} rows")
    for x, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != n:
            raise StructuralError(f"row {x} needs {n} entries")
        for y, entry in enumerate(row):
            if not isinstance(entry, list) or len(entry) != B.rank:
                raise StructuralError(f"entry ({x},{y}) needs {B.rank} coordinates")
            _int_list(entry, f"entry ({x},{y})")
    return Cocycle(A, B, np.array(rows, dtype=np.int64).reshape(n, n, B.rank))


# -- bilinear maps ----------------------------------------------------------


def bilinear_to_json(beta: BilinearMatrix) -> dict:
    return {
        "a": group_to_json(beta.group_a),
        "b": group_to_json(beta.group_b),
        "matrix": beta.entries.tolist(),
    }


def bilinear_from_json(obj) -> BilinearMatrix:
    if not isinstance(obj, dict) or not {"a", "b", "matrix"} <= obj.keys():
        raise StructuralError('a bilinear map needs "a", "b" and "matrix"')
    A, B = group_from_json(obj["a"]), group_from_json(obj["b"])
    k = A.rank
    M = obj["matrix"]
    if not isinstance(M, list) or len(M) != k or any(not isinstance(r, list) or len(r) != k for r in M):
        raise StructuralError(f"matrix must be {k}x{k}")
    for row in M:
        for entry in row:
            if not isinstance(entry, list) or len(entry) != B.rank:
                raise StructuralError(f"matrix entries need {B.rank} coordinates")
            _int_list(entry, "matrix entry")
    return BilinearMatrix(A, B, np.array(M, dtype=np.int64).reshape(k, k, B.rank))


def load_cocycle_or_bilinear(obj) -> Cocycle:
    """A cocycle file, or a bilinear file expanded to its table."""
    if isinstance(obj, dict) and "matrix" in obj:
        return bilinear_from_json(obj).to_cocycle()
    return cocycle_from_json(obj)


# -- ℚ/ℤ values and embeddings ---------------------------------------------


def qz_to_json(v: QZVector) -> list:
    return v.to_strings()


def qz_from_json(obj) -> QZVector:
    if not isinstance(obj, list) or not all(isinstance(s, str) for s in obj):
        raise StructuralError("a ℚ/ℤ vector is a list of \"num/den\" strings")
    return QZVector.parse(obj)


@dataclass(frozen=True)
class EmbeddingRecord:
    """Serializable summary of an embedding; ``f`` and ``h`` by element index."""

    a: AbelianGroup
    b: AbelianGroup
    l_rank: int
    j: tuple
    beta_tilde: tuple
    f: tuple
    h: tuple
    image_of_f: AbelianGroup
    checks: tuple

    @classmethod
    def from_result(cls, E) -> "EmbeddingRecord":
        G = E.source
        return cls(
            G.base_a, G.fiber_b, E.l_rank, tuple(E.target.j_gens),
            tuple(tuple(row) for row in E.beta_tilde.entries),
            tuple(E.f), tuple(E.h), E.image_of_f,
            tuple(sorted(E.checks.items())),
        )


def embedding_to_json(rec) -> dict:
    if not isinstance(rec, EmbeddingRecord):
        rec = EmbeddingRecord.from_result(rec)
    return {
        "a": group_to_json(rec.a),
        "b": group_to_json(rec.b),
        "l_rank": rec.l_rank,
        "j": [qz_to_json(v) for v in rec.j],
        "beta_tilde": [[qz_to_json(v) for v in row] for row in rec.beta_tilde],
        "f": [qz_to_json(v) for v in rec.f],
        "h": [qz_to_json(v) for v in rec.h],
        "image_of_f": group_to_json(rec.image_of_f),
        "checks": dict(rec.checks),
    }


def embedding_from_json(obj) -> EmbeddingRecord:
    keys = {"a", "b", "l_rank", "j", "beta_tilde", "f", "h", "image_of_f", "checks"}
    if not isinstance(obj, dict) or not keys <= obj.keys():
        raise StructuralError(f"an embedding record needs {sorted(keys)}")
    A, B = group_from_json(obj["a"]), group_from_json(obj["b"])
    f = tuple(qz_from_json(v) for v in obj["f"])
    if len(f) != A.order * B.order:
        raise StructuralError("f must list one value per element of G")
    return EmbeddingRecord(
        A, B, int(obj["l_rank"]),
        tuple(qz_from_json(v) for v in obj["j"]),
        tuple(tuple(qz_from_json(v) for v in row) for row in obj["beta_tilde"]),
        f,
        tuple(qz_from_json(v) for v in obj["h"]),
        group_from_json(obj["image_of_f"]),
        tuple(sorted((str(k), bool(v)) for k, v in obj["checks"].items())),
    )
