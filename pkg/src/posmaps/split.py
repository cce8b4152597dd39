"""Normalize a self-adjoint map as ``c^{-1} phi = Tr - phi_cp`` with ``phi_cp`` CP."""

from dataclasses import dataclass

import numpy as np

from .config import DEFAULT_TOL, Tolerances
from .errors import NegativeOfCpMap
from .maps import LinMap, apply, matrix_unit

__all__ = ["CpSplit", "cp_split", "verify_split"]


@dataclass(frozen=True, eq=False)
class CpSplit:
    """``c = ||C_phi^+||`` and the completely positive ``phi_cp`` with
    ``C_{phi_cp} = 1 - C_phi / c``."""

    c: float
    phi_cp: LinMap
    source: LinMap

    @property
    def normalized(self) -> LinMap:
        """``c^{-1} phi``."""
        return (1.0 / self.c) * self.source


def cp_split(phi: LinMap, tol: Tolerances = DEFAULT_TOL) -> CpSplit:
    """Compute the trace-minus-CP split of a self-adjoint map.

    ``c`` is the largest eigenvalue of ``C_phi``, which equals the operator
    norm of its positive part.

    :raises NotSelfAdjoint: if ``C_phi`` is not Hermitian.
    :raises NegativeOfCpMap: if ``C_phi <= 0``, so ``-phi`` is CP.
    """
    C = phi.require_self_adjoint(tol)
    c = max(0.0, float(np.linalg.eigvalsh(C)[-1]))
    scale = max(1.0, float(np.max(np.abs(C), initial=0.0)))
    if c <= tol.eig_tol * scale:
        raise NegativeOfCpMap("-phi is completely positive; split undefined")
    n = C.shape[0]
    phi_cp = LinMap(phi.dim_k, phi.dim_h, np.eye(n) - C / c)
    return CpSplit(c=c, phi_cp=phi_cp, source=phi)


def verify_split(s: CpSplit) -> float:
    """Largest spectral-norm deviation of ``c^{-1} phi(e_ij)`` from
    ``Tr(e_ij) 1 - phi_cp(e_ij)`` over the matrix units of ``B(K)``."""
    dk, dh = s.source.dims
    worst = 0.0
    for i in range(dk):
        for j in range(dk):
            e = matrix_unit(dk, i, j)
            lhs = apply(s.source, e) / s.c
            rhs = np.trace(e) * np.eye(dh) - apply(s.phi_cp, e)
            worst = max(worst, float(np.linalg.norm(lhs - rhs, 2)))
    return worst
