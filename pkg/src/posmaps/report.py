"""Analysis reports and their JSON form.

Reports use schema version 1. Complex numbers are ``[re, im]`` pairs; floats
are written with Python's shortest round-trip representation, so loading a
report reproduces every number bit for bit.
"""

import hashlib
import time

import numpy as np

from . import __version__
from .config import DEFAULT_OPT, DEFAULT_PPT, DEFAULT_TOL, OptConfig, PptConfig, Tolerances
from .cones import is_completely_positive, is_decomposable
from .errors import InvalidInput, NegativeOfCpMap
from .maps import LinMap, StateDensity
from .schmidt import SchmidtVector, Verdict, VerdictKind, is_k_positive, objective
from .split import cp_split, verify_split

SCHEMA = 1

__all__ = [
    "SCHEMA",
    "pairs",
    "from_pairs",
    "vector_to_json",
    "vector_from_json",
    "state_to_json",
    "state_from_json",
    "verdict_to_json",
    "map_fingerprint",
    "analyze",
    "revalidate",
]


def pairs(values) -> list:
    return [[float(z.real), float(z.imag)] for z in np.asarray(values, dtype=complex).reshape(-1)]


def from_pairs(data, shape) -> np.ndarray:
    arr = np.asarray(data, dtype=float)
    if arr.ndim != 2 or arr.shape[1] != 2 or arr.shape[0] != int(np.prod(shape)):
        raise InvalidInput(f"expected {int(np.prod(shape))} [re, im] pairs")
    return (arr[:, 0] + 1j * arr[:, 1]).reshape(shape)


def vector_to_json(v: SchmidtVector) -> dict:
    return {
        "type": "schmidt_vector",
        "dim_k": v.dim_k,
        "dim_h": v.dim_h,
        "terms": v.k,
        "left": pairs(v.left),
        "right": pairs(v.right),
    }


def vector_from_json(data: dict) -> SchmidtVector:
    try:
        dk, dh, k = int(data["dim_k"]), int(data["dim_h"]), int(data["terms"])
        return SchmidtVector(dk, dh, from_pairs(data["left"], (dk, k)), from_pairs(data["right"], (dh, k)))
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidInput(f"malformed Schmidt vector JSON: {exc}") from exc


def state_to_json(s: StateDensity) -> dict:
    return {"type": "state", "dim_k": s.dim_k, "dim_h": s.dim_h, "rho": pairs(s.rho)}


def state_from_json(data: dict) -> StateDensity:
    dk, dh = int(data["dim_k"]), int(data["dim_h"])
    return StateDensity(dk, dh, from_pairs(data["rho"], (dk * dh, dk * dh)))


def witness_from_json(data: dict):
    if data["type"] == "schmidt_vector":
        return vector_from_json(data)
    if data["type"] == "state":
        return state_from_json(data)
    raise InvalidInput(f"unknown witness type {data['type']!r}")


def verdict_to_json(v: Verdict, matrix: str) -> dict:
    """``matrix`` names the operator the value refers to: ``"choi"`` or ``"choi_cp"``."""
    out = {"kind": v.kind.value, "value": float(v.value), "objective": matrix, "detail": v.detail}
    if isinstance(v.witness, SchmidtVector):
        out["witness"] = vector_to_json(v.witness)
    elif isinstance(v.witness, StateDensity):
        out["witness"] = state_to_json(v.witness)
    return out


def map_fingerprint(phi: LinMap) -> str:
    h = hashlib.sha256()
    h.update(f"{phi.dim_k}x{phi.dim_h}".encode())
    h.update(np.ascontiguousarray(phi.choi, dtype=complex).tobytes())
    return h.hexdigest()


def analyze(
    phi: LinMap,
    source: dict | None = None,
    cfg: OptConfig = DEFAULT_OPT,
    ppt_cfg: PptConfig = DEFAULT_PPT,
    tol: Tolerances = DEFAULT_TOL,
    timings: bool = False,
) -> dict:
    """Run the split and every cone test; return a JSON-ready report."""
    report = {
        "schema": SCHEMA,
        "tool_version": __version__,
        "map": dict(source or {}, sha256=map_fingerprint(phi)),
        "dims": {"dim_k": phi.dim_k, "dim_h": phi.dim_h},
        "seed": cfg.seed,
        "self_adjoint": phi.is_self_adjoint(tol),
    }
    clock = {}
    if not report["self_adjoint"]:
        report["split"] = {"exists": False, "reason": "map is not self-adjoint"}
        report["verdicts"] = {}
        return report

    t0 = time.perf_counter()
    try:
        split = cp_split(phi, tol)
        report["split"] = {"exists": True, "c": split.c, "residual": verify_split(split)}
    except NegativeOfCpMap as exc:
        split = None
        report["split"] = {"exists": False, "reason": str(exc)}
    clock["split"] = time.perf_counter() - t0
    # verdict values refer to C_cp when the split exists, except the exact CP test
    cp_scale = "choi_cp" if split is not None else "choi"

    verdicts = {}
    t0 = time.perf_counter()
    verdicts["completely_positive"] = verdict_to_json(is_completely_positive(phi, tol), "choi")
    clock["completely_positive"] = time.perf_counter() - t0
    kpos = {}
    for k in range(1, min(phi.dims) + 1):
        t0 = time.perf_counter()
        v = is_k_positive(phi, k, cfg, tol)
        matrix = "choi" if v.kind is VerdictKind.CERTIFIED_YES else cp_scale
        kpos[str(k)] = verdict_to_json(v, matrix)
        clock[f"k_positive_{k}"] = time.perf_counter() - t0
    verdicts["positive"] = kpos["1"]
    verdicts["k_positive"] = kpos
    t0 = time.perf_counter()
    verdicts["decomposable"] = verdict_to_json(
        is_decomposable(phi, ppt_cfg, tol, cfg), cp_scale
    )
    clock["decomposable"] = time.perf_counter() - t0
    report["verdicts"] = verdicts
    if timings:
        report["timings"] = clock
    return report


def _revalidate_one(phi: LinMap, verdict: dict, tol: Tolerances):
    C = phi.require_self_adjoint(tol)
    M = C if verdict["objective"] == "choi" else cp_split(phi, tol).phi_cp.choi
    w = witness_from_json(verdict["witness"])
    if isinstance(w, SchmidtVector):
        return objective(M, w)
    return w.expectation(M)


def revalidate(report: dict, phi: LinMap, tol: Tolerances = DEFAULT_TOL) -> list:
    """Recompute the objective of every serialized ``CertifiedNo`` witness.

    :return: list of ``(path, stored_value, recomputed_value)``.
    """
    out = []
    verdicts = report.get("verdicts", {})
    entries = [(name, v) for name, v in verdicts.items() if name != "k_positive"]
    entries += [(f"k_positive.{k}", v) for k, v in verdicts.get("k_positive", {}).items()]
    for name, v in entries:
        if v["kind"] == VerdictKind.CERTIFIED_NO.value:
            out.append((name, v["value"], _revalidate_one(phi, v, tol)))
    return out
