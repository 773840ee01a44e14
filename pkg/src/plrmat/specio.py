"""Input-file parsing and deterministic report serialization.

The input schema is a JSON document with sparse structure-constant triplets
(human-auditable) and explicit basis rows:

    {
      "schema_version": "1",
      "scalars": "real",
      "algebra": {"dim": 3,
                  "structure_constants": [[i, j, k, value], ...],   # i < j
                  "basis_labels": ["h", "e", "f"]},
      "r_matrix": [[a, b, value], ...],                             # a < b
      "subalgebra_K": [[...], ...],
      "subalgebra_H": [[...], ...],
      "complement_M": [[...], ...],
      "tolerances": {"jacobi": 1e-10, "residual": 1e-6,
                     "cond_threshold": 1e8, "fd_step": 1e-5},
      "sampling": {"seed": 0, "num_points": 10, "box_radius": 1.0}
    }

Reports are emitted with sorted keys and floats printed to 17 significant
digits, which makes a rerun with identical inputs byte-identical.
"""

from __future__ import annotations

import hashlib
import json
import math

import numpy as np

from .bialgebra_double import ReductionSetup, validate_setup
from .errors import SpecFileError
from .lie_core import LieAlgebra, Subspace, Tensor2

SCHEMA_VERSION = "1"

DEFAULT_TOLERANCES = {
    "jacobi": 1e-10,
    "residual": 1e-6,
    "cond_threshold": 1e8,
    "fd_step": 1e-5,
}

DEFAULT_SAMPLING = {"seed": 0, "num_points": 10, "box_radius": 1.0}


def _fail(condition: str, detail: str):
    raise SpecFileError(condition, detail)


def _require(data, key, kind, condition):
    if key not in data:
        _fail(condition, f"missing required field {key!r}")
    value = data[key]
    if kind is not None and not isinstance(value, kind):
        _fail(condition, f"field {key!r} must be {kind.__name__}, got {type(value).__name__}")
    return value


def parse_spec(data: dict) -> dict:
    """Parse and structurally validate an input document.

    Returns a dict with keys G, R, K, H, M (library objects), tolerances and
    sampling (plain dicts).  The first violated condition is reported through
    SpecFileError; deeper validation (Jacobi, closures) happens in
    build_setup.
    """
    if not isinstance(data, dict):
        _fail("document", "top-level value must be an object")
    version = _require(data, "schema_version", str, "schema_version")
    if version != SCHEMA_VERSION:
        _fail("schema_version", f"unsupported version {version!r}")
    scalars = data.get("scalars", "real")
    if scalars != "real":
        _fail("scalars", f"only real scalars are supported, got {scalars!r}")

    algebra = _require(data, "algebra", dict, "algebra")
    dim = _require(algebra, "dim", int, "algebra.dim")
    if dim <= 0:
        _fail("algebra.dim", f"dimension must be positive, got {dim}")
    triplets = _require(algebra, "structure_constants", list, "algebra.structure_constants")
    c = np.zeros((dim, dim, dim))
    seen = set()
    for idx, row in enumerate(triplets):
        if not isinstance(row, (list, tuple)) or len(row) != 4:
            _fail("algebra.structure_constants", f"entry {idx} must be [i, j, k, value]")
        i, j, k, v = row
        if not all(isinstance(x, int) for x in (i, j, k)):
            _fail("algebra.structure_constants", f"entry {idx}: indices must be integers")
        if not all(0 <= x < dim for x in (i, j, k)):
            _fail("algebra.structure_constants", f"entry {idx}: index out of range 0..{dim - 1}")
        if i >= j:
            _fail("algebra.structure_constants", f"entry {idx}: requires i < j (antisymmetry is completed automatically)")
        if (i, j, k) in seen:
            _fail("algebra.structure_constants", f"entry {idx}: duplicate index triple {(i, j, k)}")
        seen.add((i, j, k))
        c[i, j, k] += float(v)
        c[j, i, k] -= float(v)
    labels = tuple(algebra.get("basis_labels", ()))
    try:
        G = LieAlgebra(c, basis_labels=labels)
    except Exception as exc:
        _fail("algebra", str(exc))

    r_entries = _require(data, "r_matrix", list, "r_matrix")
    r = np.zeros((dim, dim))
    seen_r = set()
    for idx, row in enumerate(r_entries):
        if not isinstance(row, (list, tuple)) or len(row) != 3:
            _fail("r_matrix", f"entry {idx} must be [a, b, value]")
        a, b, v = row
        if not (isinstance(a, int) and isinstance(b, int)):
            _fail("r_matrix", f"entry {idx}: indices must be integers")
        if not (0 <= a < dim and 0 <= b < dim):
            _fail("r_matrix", f"entry {idx}: index out of range 0..{dim - 1}")
        if a >= b:
            _fail("r_matrix", f"entry {idx}: requires a < b (antisymmetry is completed automatically)")
        if (a, b) in seen_r:
            _fail("r_matrix", f"entry {idx}: duplicate index pair {(a, b)}")
        seen_r.add((a, b))
        r[a, b] += float(v)
        r[b, a] -= float(v)
    R = Tensor2(r, antisymmetric=True)

    def read_rows(key, allow_empty=False):
        rows = _require(data, key, list, key)
        if not rows:
            if allow_empty:
                return np.zeros((0, dim))
            _fail(key, "must contain at least one basis row")
        mat = []
        for idx, row in enumerate(rows):
            if not isinstance(row, (list, tuple)) or len(row) != dim:
                _fail(key, f"row {idx} must be a vector of length {dim}")
            mat.append([float(x) for x in row])
        return np.array(mat)

    try:
        K = Subspace(dim, read_rows("subalgebra_K"))
        H = Subspace(dim, read_rows("subalgebra_H"))
        M = Subspace(dim, read_rows("complement_M", allow_empty=True))
    except SpecFileError:
        raise
    except Exception as exc:
        _fail("subspaces", str(exc))

    tolerances = dict(DEFAULT_TOLERANCES)
    tolerances.update(data.get("tolerances", {}))
    sampling = dict(DEFAULT_SAMPLING)
    sampling.update(data.get("sampling", {}))
    for key in ("seed", "num_points"):
        if not isinstance(sampling[key], int):
            _fail("sampling", f"{key} must be an integer")

    return {
        "G": G,
        "R": R,
        "K": K,
        "H": H,
        "M": M,
        "tolerances": tolerances,
        "sampling": sampling,
        "name": data.get("name", ""),
    }


def parse_spec_text(text: str) -> dict:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        _fail("json", f"invalid JSON: {exc}")
    return parse_spec(data)


def build_setup(parsed: dict) -> ReductionSetup:
    """Run full validation of the parsed ingredients (raises library errors)."""
    return validate_setup(
        parsed["G"], parsed["R"], parsed["K"], parsed["H"], parsed["M"],
        tol=parsed["tolerances"]["jacobi"],
    )


# ---------------------------------------------------------------------------
# deterministic serialization
# ---------------------------------------------------------------------------


def _format_float(x: float) -> str:
    if math.isnan(x):
        return '"nan"'
    if math.isinf(x):
        return '"inf"' if x > 0 else '"-inf"'
    return format(float(x), ".17g")


def dumps_canonical(obj, indent: int = 0) -> str:
    """JSON text with sorted keys and 17-significant-digit floats.

    Whitespace and ordering are fixed, so equal inputs produce byte-equal
    output; non-finite floats are emitted as quoted strings.
    """
    pad = "  " * indent
    pad_in = "  " * (indent + 1)
    if obj is None:
        return "null"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _format_float(float(obj))
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, np.ndarray):
        return dumps_canonical(obj.tolist(), indent)
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        items = [dumps_canonical(v, indent + 1) for v in obj]
        return "[\n" + ",\n".join(pad_in + it for it in items) + "\n" + pad + "]"
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = []
        for key in sorted(obj):
            if not isinstance(key, str):
                raise SpecFileError("report", f"non-string key {key!r}")
            items.append(pad_in + json.dumps(key) + ": " + dumps_canonical(obj[key], indent + 1))
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    raise SpecFileError("report", f"cannot serialize {type(obj).__name__}")


def input_digest(raw: bytes) -> str:
    return "sha256:" + hashlib.sha256(raw).hexdigest()


def report_document(
    digest: str,
    parameters: dict,
    sample_points: list,
    reduction_dump: list,
    suite_reports: list,
) -> dict:
    """Assemble the full report document from its parts.

    sample_points: list of dicts {index, factors, cond}; reduction_dump:
    list of dicts {index, rho, r_star}; suite_reports: ResidualReport values.
    """
    suites = []
    for r in suite_reports:
        suites.append(
            {
                "equation": r.equation_id,
                "fd_step": r.fd_step,
                "tolerance": r.tolerance,
                "direction": r.direction,
                "max_residual": r.max_residual,
                "pass": r.passed,
                "per_point": [
                    {"point": desc, "residual": resid} for desc, resid in r.per_point
                ],
            }
        )
    overall = all(r.passed for r in suite_reports) if suite_reports else True
    return {
        "schema_version": SCHEMA_VERSION,
        "generated_by": "plrmat 0.1.0",
        "input_digest": digest,
        "parameters": parameters,
        "sample_points": sample_points,
        "reduction": reduction_dump,
        "suites": suites,
        "summary": {
            "pass": bool(overall),
            "num_sample_points": len(sample_points),
            "num_suites": len(suites),
        },
    }
