"""Dense complex matrix kernels.

Bipartite index convention, used everywhere in the package: the basis vector
``e_i (x) e_j`` of ``K (x) H`` sits at position ``i * dim_h + j``. Equivalently,
a vector of ``K (x) H`` reshaped row-major to ``(dim_k, dim_h)`` is its
coefficient matrix, and an operator reshaped to ``(dim_k, dim_h, dim_k, dim_h)``
has entries ``M[i, a, j, b] = <e_i (x) e_a, M e_j (x) e_b>``.

"Transpose" always means the plain transpose in this standard basis, without
complex conjugation.
"""

import math

import numpy as np

from .config import DEFAULT_TOL, Tolerances
from .errors import InvalidInput

__all__ = [
    "as_square",
    "is_hermitian",
    "check_hermitian",
    "jacobi_eigh",
    "hermitian_eig",
    "positive_part",
    "partial_transpose",
    "partial_trace",
    "kron",
    "schmidt_decompose",
    "schmidt_rank",
    "maximally_entangled",
    "swap_operator",
]


def as_square(M, name: str = "matrix") -> np.ndarray:
    """Return ``M`` as a complex square 2-D array or raise :class:`InvalidInput`."""
    M = np.asarray(M, dtype=complex)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise InvalidInput(f"{name} must be a square 2-D array, got shape {M.shape}")
    return M


def _bipartite_dims(M: np.ndarray, dim_k: int, dim_h: int) -> None:
    if dim_k < 1 or dim_h < 1 or M.shape[0] != dim_k * dim_h:
        raise InvalidInput(
            f"matrix of size {M.shape[0]} does not factor as {dim_k} x {dim_h}"
        )


def is_hermitian(M, tol: Tolerances = DEFAULT_TOL) -> bool:
    M = np.asarray(M)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        return False
    scale = max(1.0, float(np.max(np.abs(M), initial=0.0)))
    return float(np.max(np.abs(M - M.conj().T), initial=0.0)) <= tol.herm_tol * scale


def check_hermitian(M, tol: Tolerances = DEFAULT_TOL, name: str = "matrix") -> np.ndarray:
    """Validate and return the Hermitian part of ``M`` (exactly Hermitian)."""
    M = as_square(M, name)
    if not is_hermitian(M, tol):
        raise InvalidInput(f"{name} is not Hermitian within tolerance")
    return (M + M.conj().T) / 2


def _jacobi_rotation(app: float, aqq: float, apq: complex) -> np.ndarray:
    # 2x2 unitary G with G^H [[app, apq], [conj(apq), aqq]] G diagonal.
    mag = abs(apq)
    phase = apq / mag
    theta = (aqq - app) / (2.0 * mag)
    t = 1.0 / (abs(theta) + math.sqrt(theta * theta + 1.0))
    if theta < 0.0:
        t = -t
    c = 1.0 / math.sqrt(t * t + 1.0)
    s = t * c
    return np.array([[c, s], [-s * phase.conjugate(), c * phase.conjugate()]])


def jacobi_eigh(M, tol: float = 1e-14, max_sweeps: int = 60):
    """Eigendecomposition of a Hermitian matrix by the cyclic Jacobi method.

    Each sweep annihilates every off-diagonal pair ``(p, q)`` in turn with a
    complex Givens rotation; iteration stops when the off-diagonal Frobenius
    norm drops below ``tol * ||M||_F``.

    :param M: Hermitian matrix (only its Hermitian part is used).
    :param tol: relative off-diagonal stopping threshold.
    :param max_sweeps: sweep cap.
    :return: ``(eigenvalues, eigenvectors)`` with eigenvalues in descending
        order and eigenvectors as orthonormal columns.
    """
    A = np.array(M, dtype=complex)
    A = (A + A.conj().T) / 2
    n = A.shape[0]
    V = np.eye(n, dtype=complex)
    scale = np.linalg.norm(A)
    if n > 1 and scale > 0:
        for _ in range(max_sweeps):
            off = np.linalg.norm(A - np.diag(np.diag(A)))
            if off <= tol * scale:
                break
            for p in range(n - 1):
                for q in range(p + 1, n):
                    if abs(A[p, q]) <= 1e-300:
                        continue
                    G = _jacobi_rotation(A[p, p].real, A[q, q].real, A[p, q])
                    idx = [p, q]
                    A[:, idx] = A[:, idx] @ G
                    A[idx, :] = G.conj().T @ A[idx, :]
                    A[p, q] = A[q, p] = 0.0
                    V[:, idx] = V[:, idx] @ G
    w = np.diag(A).real.copy()
    order = np.argsort(-w, kind="stable")
    return w[order], V[:, order]


def hermitian_eig(M, tol: Tolerances = DEFAULT_TOL, method: str = "jacobi"):
    """Eigenvalues (descending) and orthonormal eigenvectors of a Hermitian matrix.

    ``method="jacobi"`` uses :func:`jacobi_eigh`; ``method="lapack"`` defers
    to :func:`numpy.linalg.eigh` and is what the optimizers use in their
    inner loops.

    :raises InvalidInput: non-square or non-Hermitian input.
    """
    M = check_hermitian(M, tol)
    if method == "jacobi":
        return jacobi_eigh(M)
    if method == "lapack":
        w, V = np.linalg.eigh(M)
        return w[::-1], V[:, ::-1]
    raise InvalidInput(f"unknown eigensolver {method!r}")


def positive_part(M, tol: Tolerances = DEFAULT_TOL, method: str = "jacobi"):
    """Split a Hermitian ``M`` as ``M_plus - M_minus`` with both parts PSD and
    orthogonal supports."""
    w, V = hermitian_eig(M, tol, method=method)
    plus = (V * np.clip(w, 0.0, None)) @ V.conj().T
    minus = (V * np.clip(-w, 0.0, None)) @ V.conj().T
    return plus, minus


def partial_transpose(M, dim_k: int, dim_h: int, which: str = "second") -> np.ndarray:
    """Transpose one tensor factor of an operator on ``K (x) H``.

    ``which="second"`` transposes inside each ``dim_h x dim_h`` block;
    ``which="first"`` swaps the block indices.
    """
    M = as_square(M)
    _bipartite_dims(M, dim_k, dim_h)
    T = M.reshape(dim_k, dim_h, dim_k, dim_h)
    if which == "second":
        T = T.transpose(0, 3, 2, 1)
    elif which == "first":
        T = T.transpose(2, 1, 0, 3)
    else:
        raise InvalidInput(f"which must be 'first' or 'second', got {which!r}")
    return T.reshape(dim_k * dim_h, dim_k * dim_h)


def partial_trace(M, dim_k: int, dim_h: int, which: str = "first") -> np.ndarray:
    """Trace out the first (``K``) or second (``H``) tensor factor."""
    M = as_square(M)
    _bipartite_dims(M, dim_k, dim_h)
    T = M.reshape(dim_k, dim_h, dim_k, dim_h)
    if which == "first":
        return np.einsum("iaib->ab", T)
    if which == "second":
        return np.einsum("iaja->ij", T)
    raise InvalidInput(f"which must be 'first' or 'second', got {which!r}")


def kron(A, B) -> np.ndarray:
    return np.kron(np.asarray(A, dtype=complex), np.asarray(B, dtype=complex))


def schmidt_decompose(v, dim_k: int, dim_h: int, tol: Tolerances = DEFAULT_TOL):
    """Schmidt decomposition ``v = sum_m s_m u_m (x) w_m``.

    :return: ``(s, U, W)``: singular values in descending order, left vectors as
        the columns of ``U`` (in ``K``) and right vectors as the columns of
        ``W`` (in ``H``). Only terms with ``s_m > rank_tol * s_1`` are kept, so
        ``len(s)`` is the Schmidt rank; a zero vector gives empty arrays.
    """
    v = np.asarray(v, dtype=complex).reshape(-1)
    if v.size != dim_k * dim_h:
        raise InvalidInput(f"vector of length {v.size} does not factor as {dim_k} x {dim_h}")
    U, s, Wh = np.linalg.svd(v.reshape(dim_k, dim_h))
    if s.size == 0 or s[0] == 0.0:
        return np.zeros(0), np.zeros((dim_k, 0), complex), np.zeros((dim_h, 0), complex)
    r = int(np.sum(s > tol.rank_tol * s[0]))
    # coefficient matrix of u (x) w is u w^T, so the right vectors are rows of Wh
    return s[:r], U[:, :r], Wh[:r, :].T


def schmidt_rank(v, dim_k: int, dim_h: int, tol: Tolerances = DEFAULT_TOL) -> int:
    return len(schmidt_decompose(v, dim_k, dim_h, tol)[0])


def maximally_entangled(n: int) -> np.ndarray:
    """Unit vector ``n^{-1/2} sum_i e_i (x) e_i``."""
    return np.eye(n, dtype=complex).reshape(-1) / math.sqrt(n)


def swap_operator(n: int) -> np.ndarray:
    """The flip ``F(x (x) y) = y (x) x`` on ``C^n (x) C^n``."""
    F = np.zeros((n, n, n, n), dtype=complex)
    for i in range(n):
        for j in range(n):
            F[j, i, i, j] = 1.0
    return F.reshape(n * n, n * n)
