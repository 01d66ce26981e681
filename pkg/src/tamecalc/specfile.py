"""Self-contained JSON spec files and connection artifacts.

A spec file carries the whole input: algebra structure constants, both form
bimodules with their action matrices, d0, d1, the wedge on plain tensor
coordinates, and the metric.  Scalars travel as exact strings ("3/2") or
{"re", "im"} objects, so files round-trip bit for bit and fixtures diff
cleanly.  Shape problems raise SpecFileError (CLI exit 2); mathematical
failures are left for the check pipeline to report (exit 1).
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Sequence

from .algebra import Algebra
from .bimodule import Bimodule
from .calculus import Calculus
from .errors import ContractViolationError, SpecFileError
from .linalg import (
    LinAlgError,
    Matrix,
    Scalar,
    Vector,
    scalar_from_json,
    scalar_to_json,
)

FIELD_TAG = "Q(i)"


@dataclass(frozen=True)
class SpecData:
    name: str
    calculus: Calculus
    metric_plain: Matrix
    frame: tuple[Vector, ...] | None = None


# ---------------------------------------------------------------------------
# Low-level converters
# ---------------------------------------------------------------------------

def vector_to_json(v: Sequence[Scalar]) -> list:
    return [scalar_to_json(x) for x in v]


def vector_from_json(obj: Any, n: int, where: str) -> Vector:
    if not isinstance(obj, list) or len(obj) != n:
        raise SpecFileError(f"{where}: expected a vector of length {n}")
    try:
        return tuple(scalar_from_json(x) for x in obj)
    except (LinAlgError, ValueError, ZeroDivisionError) as exc:
        raise SpecFileError(f"{where}: bad scalar ({exc})")


def matrix_to_json(m: Matrix) -> list:
    return [vector_to_json(row) for row in m.entries]


def matrix_from_json(obj: Any, rows: int, cols: int, where: str) -> Matrix:
    if not isinstance(obj, list) or len(obj) != rows:
        raise SpecFileError(f"{where}: expected {rows} rows")
    return Matrix(rows, cols, [vector_from_json(r, cols, f"{where}[{i}]")
                               for i, r in enumerate(obj)])


def _require(cond: bool, msg: str) -> None:
    if not cond:
        raise SpecFileError(msg)


# ---------------------------------------------------------------------------
# Spec files
# ---------------------------------------------------------------------------

def spec_to_json(spec: SpecData) -> dict:
    calc = spec.calculus
    alg = calc.algebra
    out = {
        "field": FIELD_TAG,
        "name": spec.name,
        "algebra": {
            "dim": alg.dim,
            "basis": list(alg.labels),
            "unit": vector_to_json(alg.unit),
            "mul": [[vector_to_json(alg.mul[i][j]) for j in range(alg.dim)]
                    for i in range(alg.dim)],
        },
        "one_forms": _bimodule_to_json(calc.one_forms),
        "two_forms": _bimodule_to_json(calc.two_forms),
        "d0": matrix_to_json(calc.d0),
        "d1": matrix_to_json(calc.d1),
        "wedge": matrix_to_json(calc.wedge_plain),
        "metric": matrix_to_json(spec.metric_plain),
    }
    if spec.frame is not None:
        out["frame"] = [vector_to_json(v) for v in spec.frame]
    return out


def _bimodule_to_json(b: Bimodule) -> dict:
    return {
        "dim": b.dim,
        "left": [matrix_to_json(m) for m in b.left],
        "right": [matrix_to_json(m) for m in b.right],
    }


def _bimodule_from_json(obj: Any, alg: Algebra, where: str) -> Bimodule:
    _require(isinstance(obj, dict), f"{where}: expected an object")
    _require(isinstance(obj.get("dim"), int) and obj["dim"] >= 0,
             f"{where}.dim: expected a nonnegative integer")
    dim = obj["dim"]
    for side in ("left", "right"):
        _require(isinstance(obj.get(side), list) and len(obj[side]) == alg.dim,
                 f"{where}.{side}: expected {alg.dim} action matrices")
    left = [matrix_from_json(m, dim, dim, f"{where}.left[{i}]")
            for i, m in enumerate(obj["left"])]
    right = [matrix_from_json(m, dim, dim, f"{where}.right[{i}]")
             for i, m in enumerate(obj["right"])]
    try:
        return Bimodule(alg, dim, left, right)
    except ContractViolationError as exc:
        raise SpecFileError(f"{where}: {exc}")


def spec_from_json(obj: Any) -> SpecData:
    _require(isinstance(obj, dict), "spec: expected a JSON object")
    _require(obj.get("field") == FIELD_TAG,
             f'spec.field: expected "{FIELD_TAG}"')
    a = obj.get("algebra")
    _require(isinstance(a, dict), "spec.algebra: expected an object")
    _require(isinstance(a.get("dim"), int) and a["dim"] >= 1,
             "spec.algebra.dim: expected a positive integer")
    dim = a["dim"]
    labels = a.get("basis")
    _require(isinstance(labels, list) and len(labels) == dim
             and all(isinstance(x, str) for x in labels),
             f"spec.algebra.basis: expected {dim} labels")
    unit = vector_from_json(a.get("unit"), dim, "spec.algebra.unit")
    mul_obj = a.get("mul")
    _require(isinstance(mul_obj, list) and len(mul_obj) == dim
             and all(isinstance(r, list) and len(r) == dim for r in mul_obj),
             "spec.algebra.mul: expected a dim x dim table")
    mul = [[vector_from_json(mul_obj[i][j], dim, f"spec.algebra.mul[{i}][{j}]")
            for j in range(dim)] for i in range(dim)]
    try:
        alg = Algebra(dim, labels, unit, mul)
    except ContractViolationError as exc:
        raise SpecFileError(f"spec.algebra: {exc}")

    one_forms = _bimodule_from_json(obj.get("one_forms"), alg, "spec.one_forms")
    two_forms = _bimodule_from_json(obj.get("two_forms"), alg, "spec.two_forms")
    ne, nw = one_forms.dim, two_forms.dim
    d0 = matrix_from_json(obj.get("d0"), ne, dim, "spec.d0")
    d1 = matrix_from_json(obj.get("d1"), nw, ne, "spec.d1")
    wedge = matrix_from_json(obj.get("wedge"), nw, ne * ne, "spec.wedge")
    metric = matrix_from_json(obj.get("metric"), dim, ne * ne, "spec.metric")
    try:
        calc = Calculus(alg, one_forms, two_forms, d0, d1, wedge)
    except ContractViolationError as exc:
        raise SpecFileError(f"spec: {exc}")
    frame = None
    if "frame" in obj:
        fr = obj["frame"]
        _require(isinstance(fr, list) and fr, "spec.frame: expected a nonempty list")
        frame = tuple(vector_from_json(v, ne, f"spec.frame[{i}]")
                      for i, v in enumerate(fr))
    name = obj.get("name")
    return SpecData(name=name if isinstance(name, str) else "unnamed",
                    calculus=calc, metric_plain=metric, frame=frame)


def dumps_canonical(obj: dict) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def save_spec(spec: SpecData, path: str | Path) -> None:
    Path(path).write_text(dumps_canonical(spec_to_json(spec)), encoding="utf-8")


def load_json(path: str | Path) -> Any:
    p = Path(path)
    try:
        text = p.read_text(encoding="utf-8")
    except OSError as exc:
        raise SpecFileError(f"cannot read {p}: {exc}")
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecFileError(f"{p}: invalid JSON ({exc})")


def load_spec(path: str | Path) -> SpecData:
    return spec_from_json(load_json(path))


def input_digest(path: str | Path) -> str:
    h = hashlib.sha256(Path(path).read_bytes()).hexdigest()
    return f"sha256:{h}"


def load_metric_override(path: str | Path, ne: int, na: int) -> Matrix:
    """A metric override file: either a bare matrix or {"metric": matrix}.

    Plain-tensor coordinates (ne^2 columns) are expected, matching the spec
    file's own metric block.
    """
    obj = load_json(path)
    if isinstance(obj, dict) and "metric" in obj:
        obj = obj["metric"]
    return matrix_from_json(obj, na, ne * ne, "metric override")


def load_frame_override(path: str | Path, ne: int) -> tuple[Vector, ...]:
    obj = load_json(path)
    if isinstance(obj, dict) and "frame" in obj:
        obj = obj["frame"]
    _require(isinstance(obj, list) and obj, "frame override: expected a nonempty list")
    return tuple(vector_from_json(v, ne, f"frame[{i}]") for i, v in enumerate(obj))


# ---------------------------------------------------------------------------
# Connection artifacts
# ---------------------------------------------------------------------------

def connection_to_json(nabla: Matrix, table: Sequence[Sequence[Vector]],
                       checks: dict[str, bool], spec_digest: str) -> dict:
    return {
        "schema": "tamecalc.connection.v1",
        "input_digest": spec_digest,
        "nabla": matrix_to_json(nabla),
        "table": [[vector_to_json(entry) for entry in row] for row in table],
        "checks": dict(sorted(checks.items())),
    }


def connection_from_json(obj: Any, t2_dim: int, ne: int) -> tuple[Matrix, list[list[Vector]] | None]:
    _require(isinstance(obj, dict), "connection: expected a JSON object")
    _require("nabla" in obj, "connection: missing value matrix")
    nabla = matrix_from_json(obj["nabla"], t2_dim, ne, "connection.nabla")
    table = None
    if obj.get("table"):
        raw = obj["table"]
        _require(isinstance(raw, list), "connection.table: expected a list")
        table = []
        for i, row in enumerate(raw):
            _require(isinstance(row, list) and len(row) == len(raw),
                     "connection.table: expected a square table")
            table.append([vector_from_json(v, ne, f"connection.table[{i}][{j}]")
                          for j, v in enumerate(row)])
    return nabla, table
