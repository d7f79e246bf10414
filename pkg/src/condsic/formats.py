"""JSON file formats.

Complex matrices are nested row-major lists of [re, im] pairs.

    basis:          {"n": int, "elements": [matrix, ...]}
    difference set: {"N": int, "n": int, "lambda": int, "residues": [int, ...]}
    POVM:           {"n": int, "N": int, "weights": [float, ...], "elements": [matrix, ...]}
    dual frame:     {"n": int, "N": int, "known_indices": [int, ...], "elements": [matrix, ...]}
    scheme:         {"n": int, "known_indices": [int, ...]}
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .csic import DualFrame, Povm
from .diffset import DifferenceSet
from .matspace import TOL, HermitianBasis, Scheme


class FormatError(ValueError):
    pass


def matrix_to_json(X) -> list:
    X = np.asarray(X, dtype=complex)
    return [[[float(z.real), float(z.imag)] for z in row] for row in X]


def matrix_from_json(data) -> np.ndarray:
    try:
        arr = np.asarray(data, dtype=float)
    except (TypeError, ValueError) as exc:
        raise FormatError(f"matrix is not a nested array of [re, im] pairs: {exc}") from None
    if arr.ndim != 3 or arr.shape[2] != 2 or arr.shape[0] != arr.shape[1]:
        raise FormatError(f"matrix must have shape (n, n, 2), got {arr.shape}")
    return arr[..., 0] + 1j * arr[..., 1]


def dumps(obj: dict) -> str:
    return json.dumps(obj, indent=1) + "\n"


def basis_to_dict(basis: HermitianBasis) -> dict:
    return {"n": basis.n, "elements": [matrix_to_json(s) for s in basis.elements]}


def basis_from_dict(data: dict) -> HermitianBasis:
    return HermitianBasis(int(data["n"]), np.array([matrix_from_json(e) for e in data["elements"]]))


def povm_to_dict(P: Povm) -> dict:
    return {
        "n": P.n,
        "N": P.N,
        "weights": [float(w) for w in P.weights],
        "elements": [matrix_to_json(f) for f in P.elements],
    }


def povm_from_dict(data: dict, tol: float = TOL) -> Povm:
    try:
        elems = np.array([matrix_from_json(e) for e in data["elements"]])
        n, N = int(data["n"]), int(data["N"])
    except (KeyError, TypeError) as exc:
        raise FormatError(f"malformed POVM: missing or invalid field {exc}") from None
    if elems.shape != (N, n, n):
        raise FormatError(f"declared n={n}, N={N} but elements have shape {elems.shape}")
    return Povm(elems, tol=tol)


def dual_to_dict(Q: DualFrame) -> dict:
    return {
        "n": Q.n,
        "N": Q.N,
        "known_indices": list(Q.scheme.known_indices),
        "elements": [matrix_to_json(q) for q in Q.elements],
    }


def dual_from_dict(data: dict) -> DualFrame:
    n = int(data["n"])
    return DualFrame(np.array([matrix_from_json(e) for e in data["elements"]]),
                     Scheme(n, tuple(data["known_indices"])))


def scheme_to_dict(s: Scheme) -> dict:
    return {"n": s.n, "known_indices": list(s.known_indices)}


def scheme_from_dict(data: dict) -> Scheme:
    try:
        return Scheme(int(data["n"]), tuple(int(k) for k in data["known_indices"]))
    except (KeyError, TypeError) as exc:
        raise FormatError(f"malformed scheme: {exc}") from None


def diffset_from_dict(data: dict) -> DifferenceSet:
    try:
        return DifferenceSet.from_dict(data)
    except (KeyError, TypeError) as exc:
        raise FormatError(f"malformed difference set: {exc}") from None


def load_json(path) -> dict:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise FormatError(f"cannot read {path}: {exc.strerror}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: invalid JSON ({exc})") from None
    if not isinstance(data, dict):
        raise FormatError(f"{path}: expected a JSON object")
    return data
