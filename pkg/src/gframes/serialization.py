"""JSON encodings and the canonical emitter.

Complex matrices serialize as flat row-major lists of ``[re, im]`` pairs;
shapes are never stored because every matrix's shape follows from the
``n`` / ``d`` / ``dw`` context it appears in.  All numbers are emitted with 17
significant digits, which round-trips IEEE doubles exactly, so parsing a
report and re-serializing it reproduces the bytes.

Two encodings exist side by side: the scenario *file* schema used by the CLI
(bare matrices, ``"identity"`` shorthand for controls) and per-object schemas
for vectors, operators and families used programmatically.
"""

from __future__ import annotations

import math

import numpy as np

from .controlled import ControlledScenario, make_scenario
from .errors import SchemaError
from .frames import GFrameFamily, MeasurePoint
from .generators import GeneratorSpec
from .module_space import ModuleVector
from .operators import (ModuleOperator, identity_control,
                        make_positive_invertible)

SCENARIO_VERSION = 1
REPORT_VERSION = 1

# ---------------------------------------------------------------- emitter


def _fmt_number(x) -> str:
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, int):
        return str(x)
    v = float(x)
    if not math.isfinite(v):
        raise ValueError("non-finite number in JSON output")
    return format(v, ".17g")


def _is_number(x) -> bool:
    return isinstance(x, (int, float)) and not isinstance(x, bool)


def _all_numeric(obj) -> bool:
    if _is_number(obj):
        return True
    if isinstance(obj, (list, tuple)):
        return all(_all_numeric(v) for v in obj)
    return False


def _emit(obj, out: list, level: int) -> None:
    pad = "  " * level
    if obj is None:
        out.append("null")
    elif isinstance(obj, bool):
        out.append("true" if obj else "false")
    elif _is_number(obj):
        out.append(_fmt_number(obj))
    elif isinstance(obj, str):
        out.append(_escape(obj))
    elif isinstance(obj, (list, tuple)):
        if len(obj) == 0:
            out.append("[]")
        elif _all_numeric(obj):
            # numeric payloads (matrices, ranges) stay on one line
            out.append("[" + ", ".join(_inline(v) for v in obj) + "]")
        else:
            out.append("[\n")
            for i, v in enumerate(obj):
                out.append(pad + "  ")
                _emit(v, out, level + 1)
                out.append(",\n" if i + 1 < len(obj) else "\n")
            out.append(pad + "]")
    elif isinstance(obj, dict):
        if not obj:
            out.append("{}")
        else:
            out.append("{\n")
            items = list(obj.items())
            for i, (k, v) in enumerate(items):
                if not isinstance(k, str):
                    raise TypeError(f"JSON keys must be strings, got {k!r}")
                out.append(pad + "  " + _escape(k) + ": ")
                _emit(v, out, level + 1)
                out.append(",\n" if i + 1 < len(items) else "\n")
            out.append(pad + "}")
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__}")


def _inline(obj) -> str:
    if _is_number(obj):
        return _fmt_number(obj)
    return "[" + ", ".join(_inline(v) for v in obj) + "]"


def _escape(s: str) -> str:
    out = ['"']
    for ch in s:
        if ch in ('"', "\\"):
            out.append("\\" + ch)
        elif ch == "\n":
            out.append("\\n")
        elif ch == "\t":
            out.append("\\t")
        elif ch == "\r":
            out.append("\\r")
        elif ord(ch) < 0x20:
            out.append(f"\\u{ord(ch):04x}")
        else:
            out.append(ch)
    out.append('"')
    return "".join(out)


def dumps(obj) -> str:
    """Canonical text: insertion-ordered keys, 17-significant-digit floats,
    trailing newline."""
    out: list[str] = []
    _emit(obj, out, 0)
    out.append("\n")
    return "".join(out)


# ------------------------------------------------------------ validation


def _want(cond: bool, path: str, msg: str) -> None:
    if not cond:
        raise SchemaError(path, msg)


def _get(obj: dict, key: str, path: str):
    _want(isinstance(obj, dict), path, "expected an object")
    _want(key in obj, path, f"missing required key {key!r}")
    return obj[key]


def _as_int(v, path: str, minimum: int | None = None) -> int:
    _want(isinstance(v, int) and not isinstance(v, bool), path, "expected an integer")
    if minimum is not None:
        _want(v >= minimum, path, f"must be >= {minimum}")
    return v


def _as_real(v, path: str) -> float:
    _want(_is_number(v), path, "expected a real number")
    f = float(v)
    _want(math.isfinite(f), path, "must be finite")
    return f


def matrix_to_obj(mat: np.ndarray) -> list:
    """Flat row-major list of [re, im] pairs."""
    flat = np.asarray(mat, dtype=np.complex128).reshape(-1)
    return [[float(z.real), float(z.imag)] for z in flat]


def matrix_from_obj(obj, rows: int, cols: int, path: str) -> np.ndarray:
    _want(isinstance(obj, list), path, "expected a list of [re, im] pairs")
    _want(len(obj) == rows * cols, path,
          f"expected {rows * cols} entries for a {rows}x{cols} matrix, got {len(obj)}")
    out = np.empty(rows * cols, dtype=np.complex128)
    for i, pair in enumerate(obj):
        _want(isinstance(pair, list) and len(pair) == 2, f"{path}[{i}]",
              "expected an [re, im] pair")
        re = _as_real(pair[0], f"{path}[{i}]")
        im = _as_real(pair[1], f"{path}[{i}]")
        out[i] = complex(re, im)
    return out.reshape(rows, cols)


# ------------------------------------------------------- object schemas


def vector_to_obj(x: ModuleVector) -> dict:
    n = x.algebra_dim
    return {"n": n, "d": x.rank,
            "blocks": [matrix_to_obj(x.block(i).entries) for i in range(x.rank)]}


def vector_from_obj(obj, path: str = "") -> ModuleVector:
    p = path or "vector"
    n = _as_int(_get(obj, "n", p), f"{p}.n", 1)
    d = _as_int(_get(obj, "d", p), f"{p}.d", 1)
    blocks_obj = _get(obj, "blocks", p)
    _want(isinstance(blocks_obj, list) and len(blocks_obj) == d, f"{p}.blocks",
          f"expected {d} blocks")
    blocks = [matrix_from_obj(b, n, n, f"{p}.blocks[{i}]")
              for i, b in enumerate(blocks_obj)]
    return ModuleVector.from_blocks(blocks)


def operator_to_obj(t: ModuleOperator) -> dict:
    return {"n": t.algebra_dim, "d": t.domain_rank, "e": t.codomain_rank,
            "action": matrix_to_obj(t.action)}


def operator_from_obj(obj, path: str = "") -> ModuleOperator:
    p = path or "operator"
    n = _as_int(_get(obj, "n", p), f"{p}.n", 1)
    d = _as_int(_get(obj, "d", p), f"{p}.d", 1)
    e = _as_int(_get(obj, "e", p), f"{p}.e", 1)
    action = matrix_from_obj(_get(obj, "action", p), d * n, e * n, f"{p}.action")
    return ModuleOperator(n, d, e, action)


def family_to_obj(f: GFrameFamily) -> dict:
    return {"n": f.algebra_dim, "d": f.module_rank,
            "points": [{"weight": p.weight, "dw": p.codomain_rank,
                        "lambda": operator_to_obj(p.lam)} for p in f.points]}


def family_from_obj(obj, path: str = "") -> GFrameFamily:
    p = path or "family"
    n = _as_int(_get(obj, "n", p), f"{p}.n", 1)
    d = _as_int(_get(obj, "d", p), f"{p}.d", 1)
    pts_obj = _get(obj, "points", p)
    _want(isinstance(pts_obj, list) and len(pts_obj) >= 1, f"{p}.points",
          "expected a nonempty list")
    points = []
    for i, po in enumerate(pts_obj):
        pp = f"{p}.points[{i}]"
        weight = _as_real(_get(po, "weight", pp), f"{pp}.weight")
        _want(weight > 0, f"{pp}.weight", "must be positive")
        dw = _as_int(_get(po, "dw", pp), f"{pp}.dw", 1)
        lam = operator_from_obj(_get(po, "lambda", pp), f"{pp}.lambda")
        _want(lam.algebra_dim == n and lam.domain_rank == d and lam.codomain_rank == dw,
              f"{pp}.lambda", "operator shape inconsistent with n, d, dw")
        points.append(MeasurePoint(weight, lam))
    return GFrameFamily(n, d, tuple(points))


# ------------------------------------------------------- scenario files


def scenario_to_obj(s: ControlledScenario) -> dict:
    f = s.family
    n, d = f.algebra_dim, f.module_rank
    obj = {"version": SCENARIO_VERSION, "n": n, "d": d,
           "points": [{"weight": p.weight, "dw": p.codomain_rank,
                       "lambda": matrix_to_obj(p.lam.action)} for p in f.points]}
    for key, ctrl in (("C", s.pair.c), ("Cprime", s.pair.cp)):
        act = ctrl.base.action
        if np.array_equal(act, np.eye(d * n, dtype=np.complex128)):
            obj[key] = "identity"
        else:
            obj[key] = matrix_to_obj(act)
    return obj


def scenario_from_obj(obj, tol: float | None = None) -> ControlledScenario:
    """Schema-validate a scenario document, then build it.

    Shape errors raise ``SchemaError`` naming the offending path; semantic
    control failures (not Hermitian, not positive definite) surface from the
    certification step.
    """
    _want(isinstance(obj, dict), "", "expected a scenario object")
    version = _as_int(_get(obj, "version", ""), "version")
    _want(version == SCENARIO_VERSION, "version",
          f"unsupported version {version}, expected {SCENARIO_VERSION}")
    n = _as_int(_get(obj, "n", ""), "n", 1)
    d = _as_int(_get(obj, "d", ""), "d", 1)
    pts_obj = _get(obj, "points", "")
    _want(isinstance(pts_obj, list) and len(pts_obj) >= 1, "points",
          "expected a nonempty list")
    points = []
    for i, po in enumerate(pts_obj):
        pp = f"points[{i}]"
        _want(isinstance(po, dict), pp, "expected an object")
        weight = _as_real(_get(po, "weight", pp), f"{pp}.weight")
        _want(weight > 0, f"{pp}.weight", "must be positive")
        dw = _as_int(_get(po, "dw", pp), f"{pp}.dw", 1)
        mat = matrix_from_obj(_get(po, "lambda", pp), d * n, dw * n, f"{pp}.lambda")
        points.append(MeasurePoint(weight, ModuleOperator(n, d, dw, mat)))
    family = GFrameFamily(n, d, tuple(points))
    controls = []
    for key in ("C", "Cprime"):
        v = _get(obj, key, "")
        if v == "identity":
            controls.append(identity_control(n, d))
        else:
            mat = matrix_from_obj(v, d * n, d * n, key)
            controls.append(make_positive_invertible(ModuleOperator(n, d, d, mat)))
    kwargs = {} if tol is None else {"tol": tol}
    return make_scenario(family, controls[0], controls[1], **kwargs)


# ------------------------------------------------------ generator specs


def spec_to_obj(spec: GeneratorSpec) -> dict:
    return {"seed": spec.seed, "n": spec.n, "d": spec.d, "m": spec.m,
            "dw_range": [spec.dw_range[0], spec.dw_range[1]],
            "spectrum_range": [spec.spectrum_range[0], spec.spectrum_range[1]],
            "flavor": spec.flavor}


def spec_from_obj(obj, path: str = "") -> GeneratorSpec:
    p = path or "spec"
    _want(isinstance(obj, dict), p, "expected an object")
    seed = _as_int(_get(obj, "seed", p), f"{p}.seed", 0)
    n = _as_int(_get(obj, "n", p), f"{p}.n", 1)
    d = _as_int(_get(obj, "d", p), f"{p}.d", 1)
    m = _as_int(_get(obj, "m", p), f"{p}.m", 1)
    kwargs = {}
    if "dw_range" in obj:
        v = obj["dw_range"]
        _want(isinstance(v, list) and len(v) == 2, f"{p}.dw_range",
              "expected a [lo, hi] pair")
        kwargs["dw_range"] = (_as_int(v[0], f"{p}.dw_range[0]", 1),
                              _as_int(v[1], f"{p}.dw_range[1]", 1))
    if "spectrum_range" in obj:
        v = obj["spectrum_range"]
        _want(isinstance(v, list) and len(v) == 2, f"{p}.spectrum_range",
              "expected a [lo, hi] pair")
        kwargs["spectrum_range"] = (_as_real(v[0], f"{p}.spectrum_range[0]"),
                                    _as_real(v[1], f"{p}.spectrum_range[1]"))
    if "flavor" in obj:
        v = obj["flavor"]
        _want(isinstance(v, str), f"{p}.flavor", "expected a string")
        kwargs["flavor"] = v
    return GeneratorSpec(seed=seed, n=n, d=d, m=m, **kwargs)


def batch_from_obj(obj) -> list:
    _want(isinstance(obj, list), "", "expected a list of generator specs")
    return [spec_from_obj(v, f"[{i}]") for i, v in enumerate(obj)]


# -------------------------------------------------------------- reports


def check_result_to_obj(r) -> dict:
    return {"check_id": r.check_id,
            "scenarios_run": r.scenarios_run,
            "passes": r.passes,
            "failures": [{"seed": f.seed, "residual": f.residual, "detail": f.detail}
                         for f in r.failures],
            "status": r.status}
