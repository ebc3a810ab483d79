"""JSON encoding and decoding for the command-line layer.

Two jobs: render result documents byte-deterministically (floats at 15
significant digits, stable key order, stable indentation), and decode input
documents with errors that name the offending field.  Polynomials travel as
{"nvars": n, "terms": [{"alpha": [...], "re": x, "im": y}, ...]}; dense
matrices as {"rows": r, "cols": c, "entries": [[re, im], ...]} in row-major
order; symbol families as a list of polynomial objects, or an object
{"n": ..., "symbols": [...]} when the variable count cannot be inferred.
"""

from __future__ import annotations

import json

import numpy as np

from .polyalg import GridValue, NPoly, TrigPoly
from .slicing import SymbolFamily, dslice_key


class JSONInputError(ValueError):
    """Malformed input document; `field` names the offending location."""

    def __init__(self, field: str, message: str):
        self.field = field
        super().__init__(f"{field}: {message}")


# ---------------------------------------------------------------------------
# deterministic rendering


def format_float(x: float) -> str:
    x = float(x)
    if x == 0.0:
        return "0"
    text = format(x, ".15g")
    # keep the token a valid JSON number
    if text in ("inf", "-inf", "nan"):
        raise ValueError(f"non-finite value {x!r} cannot be rendered")
    return text


def _render(value, indent: int, out: list) -> None:
    pad = "  " * indent
    inner = "  " * (indent + 1)
    if isinstance(value, dict):
        if not value:
            out.append("{}")
            return
        out.append("{\n")
        for i, (k, v) in enumerate(value.items()):
            if not isinstance(k, str):
                raise TypeError(f"non-string key {k!r}")
            out.append(f"{inner}{json.dumps(k)}: ")
            _render(v, indent + 1, out)
            out.append(",\n" if i + 1 < len(value) else "\n")
        out.append(pad + "}")
    elif isinstance(value, (list, tuple)):
        if not value:
            out.append("[]")
            return
        out.append("[\n")
        for i, v in enumerate(value):
            out.append(inner)
            _render(v, indent + 1, out)
            out.append(",\n" if i + 1 < len(value) else "\n")
        out.append(pad + "]")
    elif isinstance(value, bool) or value is None:
        out.append(json.dumps(value))
    elif isinstance(value, (int, np.integer)):
        out.append(str(int(value)))
    elif isinstance(value, (float, np.floating, GridValue)):
        out.append(format_float(value))
    elif isinstance(value, str):
        out.append(json.dumps(value))
    else:
        raise TypeError(f"cannot render {type(value).__name__}")


def render_json(doc) -> str:
    """Deterministic, human-readable JSON text (trailing newline included)."""
    out: list = []
    _render(doc, 0, out)
    out.append("\n")
    return "".join(out)


# ---------------------------------------------------------------------------
# decoding helpers


def _expect_object(obj, field: str) -> dict:
    if not isinstance(obj, dict):
        raise JSONInputError(field, "expected an object")
    return obj


def _expect_list(obj, field: str) -> list:
    if not isinstance(obj, list):
        raise JSONInputError(field, "expected an array")
    return obj


def _expect_int(obj, field: str) -> int:
    if isinstance(obj, bool) or not isinstance(obj, int):
        raise JSONInputError(field, "expected an integer")
    return obj


def _expect_number(obj, field: str) -> float:
    if isinstance(obj, bool) or not isinstance(obj, (int, float)):
        raise JSONInputError(field, "expected a number")
    return float(obj)


def _get(obj: dict, key: str, field: str):
    if key not in obj:
        raise JSONInputError(f"{field}.{key}", "missing")
    return obj[key]


def _reject_unknown(obj: dict, allowed, field: str) -> None:
    for key in obj:
        if key not in allowed:
            raise JSONInputError(f"{field}.{key}", "unknown field")


# ---------------------------------------------------------------------------
# polynomials


def poly_to_json(p: TrigPoly) -> dict:
    terms = []
    for alpha in sorted(p.terms, key=dslice_key):
        c = p.terms[alpha]
        terms.append({
            "alpha": [int(a) for a in alpha],
            "re": float(c.real),
            "im": float(c.imag),
        })
    return {"nvars": p.nvars, "terms": terms}


def poly_from_json(obj, field: str = "poly", analytic: bool = False):
    """Decode a polynomial; `analytic` selects NPoly (no negative exponents,
    at least one variable)."""
    obj = _expect_object(obj, field)
    _reject_unknown(obj, ("nvars", "terms"), field)
    nvars = _expect_int(_get(obj, "nvars", field), f"{field}.nvars")
    floor = 1 if analytic else 0
    if nvars < floor:
        raise JSONInputError(f"{field}.nvars", f"must be at least {floor}")
    raw = _expect_list(_get(obj, "terms", field), f"{field}.terms")
    terms: dict = {}
    for i, item in enumerate(raw):
        here = f"{field}.terms[{i}]"
        item = _expect_object(item, here)
        _reject_unknown(item, ("alpha", "re", "im"), here)
        alpha_raw = _expect_list(_get(item, "alpha", here), f"{here}.alpha")
        if len(alpha_raw) != nvars:
            raise JSONInputError(
                f"{here}.alpha", f"expected {nvars} entries, got {len(alpha_raw)}"
            )
        alpha = tuple(
            _expect_int(v, f"{here}.alpha[{j}]") for j, v in enumerate(alpha_raw)
        )
        if analytic and any(v < 0 for v in alpha):
            raise JSONInputError(
                f"{here}.alpha", "negative exponents are not allowed here"
            )
        re = _expect_number(_get(item, "re", here), f"{here}.re")
        im = _expect_number(_get(item, "im", here), f"{here}.im")
        terms[alpha] = terms.get(alpha, 0j) + complex(re, im)
    cls = NPoly if analytic else TrigPoly
    return cls(nvars, terms)


# ---------------------------------------------------------------------------
# symbol families


def family_to_json(fam: SymbolFamily) -> list:
    return [poly_to_json(s) for s in fam.symbols]


def family_from_json(obj, field: str = "family") -> SymbolFamily:
    """Decode a symbol family from a list of polynomials, or from
    {"n": ..., "symbols": [...]} when the list alone cannot fix n (empty
    family)."""
    if isinstance(obj, dict):
        _reject_unknown(obj, ("n", "symbols"), field)
        n = _expect_int(_get(obj, "n", field), f"{field}.n")
        raw = _expect_list(_get(obj, "symbols", field), f"{field}.symbols")
        symbols = [
            poly_from_json(item, f"{field}.symbols[{i}]")
            for i, item in enumerate(raw)
        ]
    else:
        raw = _expect_list(obj, field)
        if not raw:
            raise JSONInputError(
                field,
                'empty list fixes no variable count; use {"n": ..., "symbols": []}',
            )
        symbols = [
            poly_from_json(item, f"{field}[{i}]") for i, item in enumerate(raw)
        ]
        n = symbols[0].nvars + 1
    try:
        return SymbolFamily(n, tuple(symbols))
    except ValueError as exc:
        raise JSONInputError(field, str(exc)) from exc


# ---------------------------------------------------------------------------
# dense matrices


def matrix_to_json(m) -> dict:
    m = np.atleast_2d(np.asarray(m, dtype=complex))
    entries = [
        [float(v.real), float(v.imag)] for v in m.reshape(-1)
    ]
    return {"rows": int(m.shape[0]), "cols": int(m.shape[1]),
            "entries": entries}


def matrix_from_json(obj, field: str = "matrix") -> np.ndarray:
    obj = _expect_object(obj, field)
    _reject_unknown(obj, ("rows", "cols", "entries"), field)
    rows = _expect_int(_get(obj, "rows", field), f"{field}.rows")
    cols = _expect_int(_get(obj, "cols", field), f"{field}.cols")
    if rows < 1 or cols < 1:
        raise JSONInputError(f"{field}.rows", "matrix must be nonempty")
    raw = _expect_list(_get(obj, "entries", field), f"{field}.entries")
    if len(raw) != rows * cols:
        raise JSONInputError(
            f"{field}.entries",
            f"expected {rows * cols} entries, got {len(raw)}",
        )
    flat = []
    for i, item in enumerate(raw):
        here = f"{field}.entries[{i}]"
        pair = _expect_list(item, here)
        if len(pair) != 2:
            raise JSONInputError(here, "expected [re, im]")
        flat.append(complex(_expect_number(pair[0], f"{here}[0]"),
                            _expect_number(pair[1], f"{here}[1]")))
    return np.array(flat, dtype=complex).reshape(rows, cols)


# ---------------------------------------------------------------------------
# shared report fragments


def grid_value_to_json(v: GridValue) -> dict:
    return {
        "value": float(v),
        "converged": bool(v.converged),
        "points": int(v.points),
    }
