"""End-to-end analysis of the Choi map on ``B(C^3)``.

At ``y = x (x) x`` with ``x = (1, 1, 1) / sqrt(3)`` both ``C_phi`` and
``C_{t o phi}`` have zero expectation while moving ``y`` off ``span(y)``. Extending
``y`` by one product term then gives Schmidt-rank-2 vectors violating the
2-positivity bound for ``phi`` and for ``t o phi``. Hence the Choi map is
neither 2-positive nor 2-copositive. Combined with its extremality among
positive maps (an external input, not checked here) this makes it atomic.
"""

import numpy as np

from .config import DEFAULT_TOL, Tolerances
from .maps import LinMap, gallery, transpose_compose
from .schmidt import SchmidtVector, check_witness_preconditions, extend_witness, objective
from .split import cp_split

__all__ = ["choi_map_walkthrough", "uniform_product_vector"]

EXTREMALITY_NOTE = (
    "extremality of the Choi map among positive maps is taken as an external "
    "input; together with the two refutations it implies the map is atomic"
)


def uniform_product_vector(n: int = 3) -> SchmidtVector:
    x = np.ones(n) / np.sqrt(n)
    return SchmidtVector.product(x, x)


def _analyse(phi: LinMap, y: SchmidtVector, tol: Tolerances) -> dict:
    C = phi.require_self_adjoint(tol)
    v = y.dense
    check = check_witness_preconditions(phi, y, tol)
    split = cp_split(phi, tol)
    A = split.phi_cp.choi
    z = extend_witness(A, y, tol)
    return {
        "overlap": objective(C, v),
        "image_norm": float(np.linalg.norm(C @ v)),
        "off_span_residual": check.residual,
        "preconditions_ok": check.ok,
        "cp_objective_at_y": objective(A, v),
        "c": split.c,
        "witness": z,
        "witness_value": objective(A, z),
        "witness_rank": z.rank(tol),
    }


def choi_map_walkthrough(tol: Tolerances = DEFAULT_TOL) -> dict:
    """Run every check of the worked example.

    :return: dict with per-map details under ``"phi"`` and ``"t_phi"``, a list
        of ``(name, passed)`` pairs under ``"checks"`` and overall ``"ok"``.
    """
    phi = gallery("choi3")
    y = uniform_product_vector(3)
    parts = {"phi": _analyse(phi, y, tol), "t_phi": _analyse(transpose_compose(phi), y, tol)}
    checks = []
    for key, r in parts.items():
        checks += [
            (f"{key}: <y, C y> = 0", abs(r["overlap"]) <= 1e-12),
            (f"{key}: C y != 0", r["image_norm"] > 1e-6),
            (f"{key}: C y not in X (x) Y", r["preconditions_ok"]),
            (f"{key}: <y, C_cp y> = 1", abs(r["cp_objective_at_y"] - 1.0) <= 1e-12),
            (f"{key}: Schmidt rank of witness <= 2", r["witness_rank"] <= 2),
            (f"{key}: <z, C_cp z> > 1 + margin", r["witness_value"] > 1.0 + tol.cert_margin),
        ]
    return {
        **parts,
        "checks": checks,
        "ok": all(passed for _, passed in checks),
        "conclusion": "not 2-positive and not 2-copositive",
        "note": EXTREMALITY_NOTE,
    }
