"""Input parsing (CSV / JSON families) and JSON-safe encoding of results.

CSV: one vector per row, comma-separated real decimals. Blank lines and
lines starting with ``#`` are skipped.

JSON::

    {"field": "real" | "complex",
     "vectors": [[...], ...]          # coordinates, or
     "gram": [[...], ...],           # Gram matrix G[i][j] = <alpha_j, alpha_i>
     "labels": ["...", ...],          # optional
     "gamma": [...],                  # optional, coordinate vector
     "extended_gram": [[...], ...]}   # optional, Gram of (gamma, alpha_1..alpha_n)

Complex entries are ``[re, im]`` pairs.
"""

from __future__ import annotations

import csv
import io
import json
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .spaces import VectorSet, monomial_gram, monomial_space, hilbert


class InputError(ValueError):
    """Malformed or inconsistent input file."""


@dataclass(frozen=True, eq=False)
class FamilyInput:
    family: VectorSet
    gamma: np.ndarray | None = None
    extended_gram: np.ndarray | None = None
    monomial: bool = False


def _read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc


def infer_format(path: str, text: str, fmt: str | None) -> str:
    if fmt:
        return fmt
    if path != "-" and Path(path).suffix.lower() == ".json":
        return "json"
    if path == "-" and text.lstrip().startswith("{"):
        return "json"
    return "csv"


def parse_csv(text: str, gamma_last: bool = False) -> FamilyInput:
    rows = []
    for lineno, row in enumerate(csv.reader(io.StringIO(text)), start=1):
        if not row or not "".join(row).strip() or row[0].lstrip().startswith("#"):
            continue
        try:
            rows.append([float(v) for v in row])
        except ValueError as exc:
            raise InputError(f"line {lineno}: {exc}") from exc
    if not rows:
        raise InputError("no vectors in CSV input")
    if len({len(r) for r in rows}) != 1:
        raise InputError("CSV rows have different lengths")
    x = np.array(rows)
    if not np.all(np.isfinite(x)):
        raise InputError("CSV contains non-finite values")
    gamma = None
    if gamma_last:
        if len(rows) < 2:
            raise InputError("--gamma-last needs at least two rows")
        gamma, x = x[-1], x[:-1]
    return FamilyInput(VectorSet.from_coordinates(x), gamma=gamma)


def decode_array(obj, complex_field: bool) -> np.ndarray:
    """Nested lists to an array; complex entries given as ``[re, im]``."""
    try:
        a = np.array(obj, dtype=float)
    except (TypeError, ValueError) as exc:
        raise InputError(f"not a numeric array: {exc}") from exc
    if complex_field:
        if a.shape[-1:] != (2,):
            raise InputError("complex entries must be [re, im] pairs")
        a = a[..., 0] + 1j * a[..., 1]
    if not np.all(np.isfinite(a)):
        raise InputError("array contains non-finite values")
    return a


def encode_array(a):
    """Array to nested lists; complex arrays become ``[re, im]`` pairs."""
    a = np.asarray(a)
    if np.iscomplexobj(a):
        return np.stack([a.real, a.imag], axis=-1).tolist()
    return a.astype(float).tolist()


def parse_json(text: str) -> FamilyInput:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise InputError("JSON input must be an object")
    field = doc.get("field", "real")
    if field not in ("real", "complex"):
        raise InputError(f"unknown field {field!r}")
    cplx = field == "complex"
    labels = doc.get("labels")
    try:
        if "vectors" in doc:
            x = decode_array(doc["vectors"], cplx)
            if x.ndim != 2:
                raise InputError("'vectors' must be a list of equal-length rows")
            family = VectorSet.from_coordinates(x, labels)
        elif "gram" in doc:
            g = decode_array(doc["gram"], cplx)
            if g.ndim != 2:
                raise InputError("'gram' must be a square matrix")
            family = VectorSet.from_gram(g, labels)
        else:
            raise InputError("JSON input needs 'vectors' or 'gram'")
    except InputError:
        raise
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    gamma = decode_array(doc["gamma"], cplx) if "gamma" in doc else None
    ext = decode_array(doc["extended_gram"], cplx) if "extended_gram" in doc else None
    return FamilyInput(family, gamma=gamma, extended_gram=ext)


def load_family(path: str, fmt: str | None = None, gamma_last: bool = False) -> FamilyInput:
    text = _read_text(path)
    fmt = infer_format(path, text, fmt)
    if fmt == "json":
        return parse_json(text)
    if fmt == "csv":
        return parse_csv(text, gamma_last)
    raise InputError(f"unknown format {fmt!r}")


def builtin_family(token: str, gamma_monomial: int | None = None) -> FamilyInput:
    """``monomials:N`` (``1, x, ..., x^(N-1)`` in L^2[0,1]) or ``hilbert:N``."""
    name, _, arg = token.partition(":")
    try:
        n = int(arg)
    except ValueError as exc:
        raise InputError(f"builtin {token!r}: expected NAME:N") from exc
    if n < 1:
        raise InputError("builtin size must be >= 1")
    if name == "monomials":
        family = monomial_space(n)
    elif name == "hilbert":
        family = VectorSet.from_gram(hilbert(n))
    else:
        raise InputError(f"unknown builtin {name!r}; expected monomials:N or hilbert:N")
    ext = None
    if gamma_monomial is not None:
        if gamma_monomial < 0:
            raise InputError("--gamma-monomial must be >= 0")
        ext = monomial_gram([gamma_monomial, *range(n)])
    return FamilyInput(family, extended_gram=ext, monomial=name == "monomials")
