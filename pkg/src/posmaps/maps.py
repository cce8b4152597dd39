"""Linear maps ``B(K) -> B(H)`` represented by their Choi matrices.

A map ``phi`` is stored only through ``C = sum_ij e_ij (x) phi(e_ij)`` on
``K (x) H``; its action is recovered from the blocks of ``C``.
"""

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .config import DEFAULT_TOL, Tolerances
from .errors import InvalidInput, NotSelfAdjoint
from .linalg import as_square, is_hermitian, partial_trace, partial_transpose

__all__ = [
    "LinMap",
    "StateDensity",
    "choi_of_action",
    "from_function",
    "apply",
    "functional_pair",
    "pairing",
    "compose",
    "tensor_id",
    "transpose_compose",
    "gallery",
    "GALLERY_NAMES",
    "matrix_unit",
    "choi_to_json",
    "choi_from_json",
]


def matrix_unit(n: int, i: int, j: int, m: int | None = None) -> np.ndarray:
    e = np.zeros((n, n if m is None else m), dtype=complex)
    e[i, j] = 1.0
    return e


@dataclass(frozen=True, eq=False)
class LinMap:
    """A linear map ``B(C^dim_k) -> B(C^dim_h)`` given by its Choi matrix."""

    dim_k: int
    dim_h: int
    choi: np.ndarray

    def __post_init__(self):
        choi = as_square(self.choi, "choi")
        if self.dim_k < 1 or self.dim_h < 1 or choi.shape[0] != self.dim_k * self.dim_h:
            raise InvalidInput(
                f"Choi matrix of size {choi.shape[0]} does not match dims "
                f"{self.dim_k} x {self.dim_h}"
            )
        choi = choi.copy()
        choi.setflags(write=False)
        object.__setattr__(self, "choi", choi)

    @property
    def dims(self) -> tuple[int, int]:
        return self.dim_k, self.dim_h

    def __call__(self, a) -> np.ndarray:
        return apply(self, a)

    def is_self_adjoint(self, tol: Tolerances = DEFAULT_TOL) -> bool:
        return is_hermitian(self.choi, tol)

    def require_self_adjoint(self, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
        """Return the exactly Hermitian Choi matrix or raise :class:`NotSelfAdjoint`."""
        if not self.is_self_adjoint(tol):
            raise NotSelfAdjoint("map is not self-adjoint (Choi matrix is not Hermitian)")
        return (self.choi + self.choi.conj().T) / 2

    def _check_same(self, other: "LinMap") -> None:
        if self.dims != other.dims:
            raise InvalidInput(f"dimension mismatch: {self.dims} vs {other.dims}")

    def __add__(self, other: "LinMap") -> "LinMap":
        self._check_same(other)
        return LinMap(self.dim_k, self.dim_h, self.choi + other.choi)

    def __sub__(self, other: "LinMap") -> "LinMap":
        self._check_same(other)
        return LinMap(self.dim_k, self.dim_h, self.choi - other.choi)

    def __mul__(self, scalar) -> "LinMap":
        return LinMap(self.dim_k, self.dim_h, scalar * self.choi)

    __rmul__ = __mul__

    def __neg__(self) -> "LinMap":
        return LinMap(self.dim_k, self.dim_h, -self.choi)

    def allclose(self, other: "LinMap", atol: float = 1e-10) -> bool:
        return self.dims == other.dims and np.allclose(self.choi, other.choi, rtol=0, atol=atol)

    def __repr__(self) -> str:
        return f"LinMap(dim_k={self.dim_k}, dim_h={self.dim_h})"


def choi_of_action(dim_k: int, dim_h: int, images) -> LinMap:
    """Build a map from the images ``phi(e_ij)`` of the matrix units of ``B(K)``.

    :param images: array-like of shape ``(dim_k, dim_k, dim_h, dim_h)`` with
        ``images[i][j] = phi(e_ij)``.
    """
    images = np.asarray(images, dtype=complex)
    if images.shape != (dim_k, dim_k, dim_h, dim_h):
        raise InvalidInput(
            f"expected images of shape {(dim_k, dim_k, dim_h, dim_h)}, got {images.shape}"
        )
    # C[i, a, j, b] = phi(e_ij)[a, b]
    choi = images.transpose(0, 2, 1, 3).reshape(dim_k * dim_h, dim_k * dim_h)
    return LinMap(dim_k, dim_h, choi)


def from_function(dim_k: int, dim_h: int, func: Callable[[np.ndarray], np.ndarray]) -> LinMap:
    """Choi matrix of a linear map supplied as a Python callable."""
    images = np.empty((dim_k, dim_k, dim_h, dim_h), dtype=complex)
    for i in range(dim_k):
        for j in range(dim_k):
            images[i, j] = np.asarray(func(matrix_unit(dim_k, i, j)), dtype=complex)
    return choi_of_action(dim_k, dim_h, images)


def apply(phi: LinMap, a) -> np.ndarray:
    """Evaluate ``phi(a) = Tr_K[(a^T (x) 1) C_phi]``."""
    a = np.asarray(a, dtype=complex)
    if a.shape != (phi.dim_k, phi.dim_k):
        raise InvalidInput(f"input must be {phi.dim_k} x {phi.dim_k}, got {a.shape}")
    C = phi.choi.reshape(phi.dim_k, phi.dim_h, phi.dim_k, phi.dim_h)
    return np.einsum("ij,iajb->ab", a, C)


def functional_pair(phi: LinMap, a, b) -> complex:
    """The functional ``phi~(a (x) b) = Tr(phi(a) b^T)``.

    Unnormalized; equals ``Tr(C_phi^T (a (x) b))``.
    """
    b = np.asarray(b, dtype=complex)
    if b.shape != (phi.dim_h, phi.dim_h):
        raise InvalidInput(f"b must be {phi.dim_h} x {phi.dim_h}, got {b.shape}")
    return complex(np.sum(apply(phi, a) * b))


def pairing(phi: LinMap, psi: LinMap, tol: Tolerances = DEFAULT_TOL) -> float:
    """``Tr(C_phi C_psi)`` for two self-adjoint maps with equal dimensions."""
    phi._check_same(psi)
    A = phi.require_self_adjoint(tol)
    B = psi.require_self_adjoint(tol)
    return float(np.real(np.sum(A * B.T)))


def compose(phi: LinMap, psi: LinMap) -> LinMap:
    """The map ``phi o psi`` (apply ``psi`` first)."""
    if psi.dim_h != phi.dim_k:
        raise InvalidInput(f"cannot compose: psi maps into {psi.dim_h}, phi expects {phi.dim_k}")
    images = np.empty((psi.dim_k, psi.dim_k, phi.dim_h, phi.dim_h), dtype=complex)
    for i in range(psi.dim_k):
        for j in range(psi.dim_k):
            images[i, j] = apply(phi, apply(psi, matrix_unit(psi.dim_k, i, j)))
    return choi_of_action(psi.dim_k, phi.dim_h, images)


def transpose_compose(phi: LinMap) -> LinMap:
    """``t o phi``, whose Choi matrix is the partial transpose of ``C_phi`` on ``H``."""
    return LinMap(phi.dim_k, phi.dim_h, partial_transpose(phi.choi, phi.dim_k, phi.dim_h))


def tensor_id(phi: LinMap, k: int) -> LinMap:
    """``phi (x) id_k : B(K (x) C^k) -> B(H (x) C^k)``.

    Input basis ``e_i (x) f_p`` is indexed ``i * k + p`` and output
    ``e_a (x) f_q`` is indexed ``a * k + q``.
    """
    if k < 1:
        raise InvalidInput("k must be >= 1")
    dk, dh = phi.dims
    C = phi.choi.reshape(dk, dh, dk, dh)
    eye = np.eye(k)
    # Choi[(i p)(a r), (j q)(b s)] = phi(e_ij)[a, b] * (e_pq)[r, s]
    T = np.einsum("iajb,rp,sq->iparjqbs", C, eye, eye)
    n = dk * k * dh * k
    return LinMap(dk * k, dh * k, T.reshape(n, n))


def _identity(n: int) -> LinMap:
    return from_function(n, n, lambda a: a)


def _transpose(n: int) -> LinMap:
    return from_function(n, n, lambda a: a.T)


def _trace(dim_k: int, dim_h: int) -> LinMap:
    return LinMap(dim_k, dim_h, np.eye(dim_k * dim_h, dtype=complex))


def _choi3_action(x: np.ndarray) -> np.ndarray:
    return np.array(
        [
            [x[0, 0] + x[2, 2], -x[0, 1], -x[0, 2]],
            [-x[1, 0], x[0, 0] + x[1, 1], -x[1, 2]],
            [-x[2, 0], -x[2, 1], x[1, 1] + x[2, 2]],
        ]
    )


def _adv(V) -> LinMap:
    V = np.asarray(V, dtype=complex)
    if V.ndim != 2:
        raise InvalidInput("V must be a matrix")
    dim_h, dim_k = V.shape
    return from_function(dim_k, dim_h, lambda a: V @ a @ V.conj().T)


GALLERY_NAMES = ("identity", "transpose", "trace", "choi3", "reduction", "adv")


def gallery(name: str, **params) -> LinMap:
    """Named example maps.

    ========== ============================= ==================================
    name       parameters                    map
    ========== ============================= ==================================
    identity   ``n`` (default 2)             ``a -> a``
    transpose  ``n`` (default 2)             ``a -> a^T``
    trace      ``n`` or ``dim_k``/``dim_h``  ``a -> Tr(a) 1``
    choi3      none                          the Choi map on ``B(C^3)``
    reduction  ``lam``, ``n`` (default 3)    ``Tr - lam * id``
    adv        ``V`` (``dim_h x dim_k``)     ``a -> V a V^*``
    ========== ============================= ==================================
    """
    if name == "identity":
        return _identity(int(params.get("n", 2)))
    if name == "transpose":
        return _transpose(int(params.get("n", 2)))
    if name == "trace":
        n = int(params.get("n", 2))
        return _trace(int(params.get("dim_k", n)), int(params.get("dim_h", n)))
    if name == "choi3":
        return from_function(3, 3, _choi3_action)
    if name == "reduction":
        if "lam" not in params:
            raise InvalidInput("reduction requires parameter 'lam'")
        n = int(params.get("n", 3))
        return _trace(n, n) - float(params["lam"]) * _identity(n)
    if name == "adv":
        if "V" not in params:
            raise InvalidInput("adv requires parameter 'V'")
        return _adv(params["V"])
    raise InvalidInput(f"unknown gallery map {name!r}; choose from {', '.join(GALLERY_NAMES)}")


@dataclass(frozen=True, eq=False)
class StateDensity:
    """A density matrix on ``K (x) H``: PSD with unit trace."""

    dim_k: int
    dim_h: int
    rho: np.ndarray
    tol: Tolerances = DEFAULT_TOL

    def __post_init__(self):
        rho = as_square(self.rho, "rho")
        if rho.shape[0] != self.dim_k * self.dim_h:
            raise InvalidInput("density matrix size does not match dims")
        if not is_hermitian(rho, self.tol):
            raise InvalidInput("density matrix is not Hermitian")
        rho = (rho + rho.conj().T) / 2
        if abs(np.trace(rho).real - 1.0) > 1e-10:
            raise InvalidInput(f"density matrix has trace {np.trace(rho).real}")
        if np.linalg.eigvalsh(rho)[0] < -self.tol.psd_tol:
            raise InvalidInput("density matrix is not positive semidefinite")
        rho.setflags(write=False)
        object.__setattr__(self, "rho", rho)

    @classmethod
    def from_vector(cls, v, dim_k: int, dim_h: int) -> "StateDensity":
        v = np.asarray(v, dtype=complex).reshape(-1)
        v = v / np.linalg.norm(v)
        return cls(dim_k, dim_h, np.outer(v, v.conj()))

    @property
    def partial_transpose(self) -> np.ndarray:
        return partial_transpose(self.rho, self.dim_k, self.dim_h)

    @property
    def is_ppt(self) -> bool:
        return bool(np.linalg.eigvalsh(self.partial_transpose)[0] >= -self.tol.psd_tol)

    def expectation(self, C) -> float:
        """``Tr(rho C)`` for Hermitian ``C``."""
        return float(np.real(np.sum(self.rho * np.asarray(C).T)))

    def reduced(self, which: str = "first") -> np.ndarray:
        return partial_trace(self.rho, self.dim_k, self.dim_h, which)


def _complex_pairs(values: np.ndarray) -> list:
    return [[float(z.real), float(z.imag)] for z in np.asarray(values).reshape(-1)]


def choi_to_json(phi: LinMap) -> dict:
    """``{"dim_k", "dim_h", "choi": [[re, im], ...]}``, row-major."""
    return {"dim_k": phi.dim_k, "dim_h": phi.dim_h, "choi": _complex_pairs(phi.choi)}


def choi_from_json(data: dict) -> LinMap:
    try:
        dim_k, dim_h = int(data["dim_k"]), int(data["dim_h"])
        entries = np.asarray(data["choi"], dtype=float)
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidInput(f"malformed Choi JSON: {exc}") from exc
    n = dim_k * dim_h
    if entries.shape != (n * n, 2):
        raise InvalidInput(f"'choi' must hold {n * n} [re, im] pairs, got shape {entries.shape}")
    return LinMap(dim_k, dim_h, (entries[:, 0] + 1j * entries[:, 1]).reshape(n, n))


def images_of(phi: LinMap) -> np.ndarray:
    """Array ``images[i, j] = phi(e_ij)``."""
    C = phi.choi.reshape(phi.dim_k, phi.dim_h, phi.dim_k, phi.dim_h)
    return C.transpose(0, 2, 1, 3)


def random_self_adjoint(dim_k: int, dim_h: int, rng: np.random.Generator) -> LinMap:
    """Map with a Gaussian Hermitian Choi matrix."""
    n = dim_k * dim_h
    X = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return LinMap(dim_k, dim_h, (X + X.conj().T) / 2)
