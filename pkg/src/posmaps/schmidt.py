"""Maximization of ``<y, A y>`` over unit vectors of Schmidt rank at most ``k``.

A vector ``y`` of ``K (x) H`` is identified with its ``dim_k x dim_h``
coefficient matrix ``Y``; unit vectors of Schmidt rank ``<= k`` are then the
Frobenius-unit matrices of rank ``<= k``. The optimizer is a projected power
method (see-saw): ``Y <- normalize(rank_k(B y))`` with ``B = A + shift * 1``
positive semidefinite, which makes every step non-decreasing.

The result is a lower bound on the supremum. Below full Schmidt rank a
"yes" answer derived from it is heuristic, never a proof; a "no" answer comes
with an explicit witness vector and is certified.
"""

import enum
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np
from scipy.optimize import minimize_scalar

from .config import DEFAULT_OPT, DEFAULT_TOL, OptConfig, Tolerances
from .errors import InvalidInput, NegativeOfCpMap, WitnessInapplicable
from .linalg import check_hermitian, schmidt_decompose
from .maps import LinMap, tensor_id, apply
from .split import cp_split

__all__ = [
    "SchmidtVector",
    "OptReport",
    "Verdict",
    "VerdictKind",
    "objective",
    "sup_schmidt",
    "is_k_positive",
    "WitnessCheck",
    "check_witness_preconditions",
    "extend_witness",
    "OracleResult",
    "kpos_bruteforce_oracle",
]


@dataclass(frozen=True, eq=False)
class SchmidtVector:
    """``y = sum_m left[:, m] (x) right[:, m]`` in ``K (x) H``."""

    dim_k: int
    dim_h: int
    left: np.ndarray
    right: np.ndarray

    def __post_init__(self):
        left = np.atleast_2d(np.asarray(self.left, dtype=complex).T).T
        right = np.atleast_2d(np.asarray(self.right, dtype=complex).T).T
        if left.shape[0] != self.dim_k or right.shape[0] != self.dim_h:
            raise InvalidInput("factor vectors do not match the dimensions")
        if left.shape[1] != right.shape[1]:
            raise InvalidInput("left and right factor lists differ in length")
        object.__setattr__(self, "left", left)
        object.__setattr__(self, "right", right)

    @classmethod
    def product(cls, x, y) -> "SchmidtVector":
        x = np.asarray(x, dtype=complex).reshape(-1)
        y = np.asarray(y, dtype=complex).reshape(-1)
        return cls(x.size, y.size, x[:, None], y[:, None])

    @classmethod
    def from_dense(cls, v, dim_k: int, dim_h: int, tol: Tolerances = DEFAULT_TOL):
        s, U, W = schmidt_decompose(v, dim_k, dim_h, tol)
        return cls(dim_k, dim_h, U * s, W)

    @property
    def k(self) -> int:
        """Number of product terms (an upper bound on the Schmidt rank)."""
        return self.left.shape[1]

    @property
    def dense(self) -> np.ndarray:
        return (self.left @ self.right.T).reshape(-1)

    def rank(self, tol: Tolerances = DEFAULT_TOL) -> int:
        return len(schmidt_decompose(self.dense, self.dim_k, self.dim_h, tol)[0])

    def spans(self, tol: Tolerances = DEFAULT_TOL) -> tuple[np.ndarray, np.ndarray]:
        """Orthonormal bases of ``X = span(left)`` and ``Y = span(right)``."""
        return _orth(self.left, tol), _orth(self.right, tol)


class VerdictKind(enum.Enum):
    CERTIFIED_YES = "CertifiedYes"
    CERTIFIED_NO = "CertifiedNo"
    HEURISTIC_YES = "HeuristicYes"

    @property
    def is_yes(self) -> bool:
        return self is not VerdictKind.CERTIFIED_NO


@dataclass(frozen=True, eq=False)
class Verdict:
    """Outcome of a cone-membership query.

    ``CertifiedNo`` always carries a witness (a :class:`SchmidtVector` or a
    :class:`~posmaps.maps.StateDensity`) whose objective exceeds the tested
    bound by at least the certification margin.
    """

    kind: VerdictKind
    value: float
    witness: object = None
    detail: str = ""

    def __post_init__(self):
        if self.kind is VerdictKind.CERTIFIED_NO and self.witness is None:
            raise ValueError("CertifiedNo verdict requires a witness")


@dataclass(frozen=True, eq=False)
class OptReport:
    value: float
    argmax: SchmidtVector
    upper_bound: float
    restarts: int
    iterations: int
    converged: bool
    seed: int
    history: list = field(default_factory=list, repr=False)


def objective(A, v) -> float:
    """``<v, A v>`` for Hermitian ``A``; ``v`` may be a :class:`SchmidtVector`."""
    if isinstance(v, SchmidtVector):
        v = v.dense
    v = np.asarray(v, dtype=complex).reshape(-1)
    return float(np.real(np.vdot(v, np.asarray(A) @ v)))


def _orth(M: np.ndarray, tol: Tolerances) -> np.ndarray:
    U, s, _ = np.linalg.svd(M, full_matrices=False)
    if s.size == 0 or s[0] == 0.0:
        return U[:, :0]
    return U[:, : int(np.sum(s > tol.rank_tol * s[0]))]


def _truncate(W: np.ndarray, k: int):
    U, s, Vh = np.linalg.svd(W, full_matrices=False)
    s = s[:k]
    norm = np.linalg.norm(s)
    if norm == 0.0:
        # zero direction (e.g. A = 0): any unit product vector will do
        s = np.zeros(len(s))
        s[0] = 1.0
        norm = 1.0
    return U[:, :k] * (s / norm), Vh[:k].T


def _see_saw(B: np.ndarray, left: np.ndarray, right: np.ndarray, k: int, max_iter: int, tol: float):
    """Projected power iteration from the start ``left @ right.T``.

    Returns ``(left, right, f, history, iterations, converged)`` where ``f``
    is the final value of ``<y, B y>`` and ``history`` its per-step values.
    """
    dk, dh = left.shape[0], right.shape[0]
    y = (left @ right.T).reshape(-1)
    f = float(np.real(np.vdot(y, B @ y)))
    history = [f]
    converged = False
    it = 0
    for it in range(1, max_iter + 1):
        nl, nr = _truncate((B @ y).reshape(dk, dh), k)
        ny = (nl @ nr.T).reshape(-1)
        nf = float(np.real(np.vdot(ny, B @ ny)))
        history.append(nf)
        gain = nf - f
        if nf >= f:
            left, right, y, f = nl, nr, ny, nf
        if gain < tol:
            converged = True
            break
    return left, right, f, history, it, converged


def sup_schmidt(
    A,
    dim_k: int,
    dim_h: int,
    k: int,
    cfg: OptConfig = DEFAULT_OPT,
    tol: Tolerances = DEFAULT_TOL,
    init: Sequence[SchmidtVector] = (),
) -> OptReport:
    """Lower-bound ``sup <y, A y>`` over unit ``y`` of Schmidt rank ``<= k``.

    Starts are, in order: the top eigenvector of ``A`` truncated to rank
    ``k``, any ``init`` vectors, then ``cfg.restarts`` Gaussian starts seeded
    from ``cfg.seed``. The best start wins, ties going to the earliest. When
    ``k >= min(dim_k, dim_h)`` the first start is already optimal and the
    value equals ``lambda_max(A)``.

    :raises InvalidInput: ``k < 1`` or ``A`` not Hermitian on ``K (x) H``.
    """
    if k < 1:
        raise InvalidInput("Schmidt rank bound k must be >= 1")
    A = check_hermitian(A, tol, "A")
    if A.shape[0] != dim_k * dim_h:
        raise InvalidInput("A does not act on K (x) H with the given dims")
    kk = min(k, dim_k, dim_h)
    w, V = np.linalg.eigh(A)
    norm = float(max(abs(w[0]), abs(w[-1])))
    shift = max(0.0, -float(w[0])) + 0.1 * norm
    B = A + shift * np.eye(A.shape[0])

    starts = [_truncate(V[:, -1].reshape(dim_k, dim_h), kk)]
    for y0 in init:
        if (y0.dim_k, y0.dim_h) != (dim_k, dim_h):
            raise InvalidInput("init vector has wrong dimensions")
        starts.append(_truncate(y0.dense.reshape(dim_k, dim_h), kk))
    for child in np.random.SeedSequence(cfg.seed).spawn(cfg.restarts):
        rng = np.random.default_rng(child)
        G = rng.normal(size=(dim_k, dim_h)) + 1j * rng.normal(size=(dim_k, dim_h))
        starts.append(_truncate(G, kk))

    def run(start):
        return _see_saw(B, start[0], start[1], kk, cfg.max_iter, cfg.tol)

    if cfg.workers > 1:
        with ThreadPoolExecutor(cfg.workers) as pool:
            results = list(pool.map(run, starts))
    else:
        results = [run(s) for s in starts]

    best = 0
    for i, res in enumerate(results):
        if res[2] > results[best][2]:
            best = i
    left, right, _, history, _, converged = results[best]
    argmax = SchmidtVector(dim_k, dim_h, left, right)
    return OptReport(
        value=objective(A, argmax),
        argmax=argmax,
        upper_bound=float(w[-1]),
        restarts=len(starts),
        iterations=sum(r[4] for r in results),
        converged=converged,
        seed=cfg.seed,
        history=[h - shift for h in history],
    )


def is_k_positive(
    phi: LinMap, k: int, cfg: OptConfig = DEFAULT_OPT, tol: Tolerances = DEFAULT_TOL
) -> Verdict:
    """Decide k-positivity through ``sup_{y in S(k)} <y, C_{phi_cp} y> <= 1``.

    * ``CertifiedYes``: ``C_phi`` is PSD, so ``phi`` is CP and k-positive for every k.
    * ``CertifiedNo``: a witness ``y`` of Schmidt rank ``<= k`` with
      ``<y, C_{phi_cp} y> > 1 + cert_margin`` (re-evaluated directly).
    * ``HeuristicYes``: no violation found. The optimizer only gives lower
      bounds, so this is not a proof unless ``k >= min(dim_k, dim_h)``.

    If ``-phi`` is CP (no split exists) the witness is a product vector with
    ``<y, C_phi y> < 0`` and ``value`` is that overlap.
    """
    if k < 1:
        raise InvalidInput("k must be >= 1")
    C = phi.require_self_adjoint(tol)
    dk, dh = phi.dims
    lam_min = float(np.linalg.eigvalsh(C)[0])
    if lam_min >= -tol.psd_tol:
        return Verdict(VerdictKind.CERTIFIED_YES, 0.0, detail="Choi matrix is PSD: completely positive")
    try:
        split = cp_split(phi, tol)
    except NegativeOfCpMap:
        rep = sup_schmidt(-C, dk, dh, 1, cfg, tol)
        overlap = objective(C, rep.argmax)
        if overlap < -tol.cert_margin:
            return Verdict(
                VerdictKind.CERTIFIED_NO,
                overlap,
                rep.argmax,
                "-phi is completely positive and nonzero; product vector with <y, C_phi y> < 0",
            )
        return Verdict(VerdictKind.HEURISTIC_YES, overlap, detail="no negative product overlap found")

    A = split.phi_cp.choi
    full = min(k, dk, dh) == min(dk, dh)
    rep = sup_schmidt(A, dk, dh, k, cfg, tol)
    value = objective(A, rep.argmax)
    if value > 1.0 + tol.cert_margin:
        return Verdict(
            VerdictKind.CERTIFIED_NO,
            value,
            rep.argmax,
            f"Schmidt-rank-{rep.argmax.k} vector with <y, C_cp y> = {value:.12g} > 1",
        )
    if full:
        detail = "exact at full Schmidt rank; violation below certification margin"
    elif value >= 1.0 - tol.cert_margin:
        detail = "see-saw lower bound; supremum indistinguishable from 1 within margin"
    else:
        detail = "see-saw lower bound below 1; not a proof"
    return Verdict(VerdictKind.HEURISTIC_YES, value, detail=detail)


class WitnessCheck(NamedTuple):
    ok: bool
    reasons: list
    overlap: float
    residual: float


def _off_span_residual(v: np.ndarray, y: SchmidtVector, tol: Tolerances):
    """Component of ``v`` orthogonal to ``X (x) Y`` as a coefficient matrix."""
    Qx, Qy = y.spans(tol)
    R = v.reshape(y.dim_k, y.dim_h)
    Px = Qx @ Qx.conj().T
    Py = Qy @ Qy.conj().T
    return R - Px @ R @ Py.T, Px, Py


def check_witness_preconditions(phi: LinMap, y: SchmidtVector, tol: Tolerances = DEFAULT_TOL) -> WitnessCheck:
    """Test ``<y, C_phi y> = 0`` and ``C_phi y`` not in ``X (x) Y``.

    When both hold, the map is not (k+1)-positive for ``k = y.k``.
    """
    C = phi.require_self_adjoint(tol)
    v = y.dense
    overlap = objective(C, v)
    Res, _, _ = _off_span_residual(C @ v, y, tol)
    residual = float(np.linalg.norm(Res))
    reasons = []
    if abs(overlap) > tol.ortho_tol:
        reasons.append(f"<y, C_phi y> = {overlap:.3g} is not zero")
    if residual <= tol.residual_tol:
        reasons.append("C_phi y lies in X (x) Y")
    return WitnessCheck(not reasons, reasons, overlap, residual)


def _best_mix(gxx: float, gyy: float, gxy: float) -> tuple[float, float]:
    # maximize s^2 gxx + t^2 gyy + 2 s t gxy on the unit circle, s, t > 0
    G = np.array([[gxx, gxy], [gxy, gyy]])
    _, vecs = np.linalg.eigh(G)
    s, t = vecs[:, -1]
    if s < 0:
        s, t = -s, -t
    return float(s), float(t)


def extend_witness(A, y: SchmidtVector, tol: Tolerances = DEFAULT_TOL) -> SchmidtVector:
    """Raise the Schmidt rank of ``y`` by one to push ``<z, A z>`` above 1.

    Requires ``<y, A y> = 1`` and ``A y`` not in ``X (x) Y``. A product vector
    ``x`` orthogonal to ``X (x) Y`` with ``<x, A y> > 0`` is read off the
    off-span residual of ``A y``, and ``z = s x + (1 - s^2)^{1/2} y`` takes the
    best ``s`` in ``(0, 1)``.

    :raises WitnessInapplicable: if a precondition fails or the gain does not
        clear ``cert_margin``.
    """
    A = check_hermitian(A, tol, "A")
    v = y.dense
    if abs(np.linalg.norm(v) - 1.0) > tol.ortho_tol:
        raise WitnessInapplicable("y is not a unit vector")
    f0 = objective(A, v)
    if abs(f0 - 1.0) > tol.ortho_tol:
        raise WitnessInapplicable(f"<y, A y> = {f0:.12g}, expected 1")
    Res, Px, Py = _off_span_residual(A @ v, y, tol)
    if np.linalg.norm(Res) <= tol.residual_tol:
        raise WitnessInapplicable("A y lies in X (x) Y")

    # Res = R1 + R2 with R1 in X^perp (x) H and R2 in X (x) Y^perp
    R1 = Res - Px @ Res
    R2 = Px @ Res - Px @ Res @ Py.T
    R = R1 if np.linalg.norm(R1) >= np.linalg.norm(R2) else R2
    U, _, Vh = np.linalg.svd(R)
    u, w = U[:, 0], Vh[0]
    x = np.kron(u, w)
    g = np.vdot(x, A @ v)
    phase = g / abs(g)
    u = u * phase
    x = x * phase

    gxx = objective(A, x)
    gxy = float(np.real(np.vdot(x, A @ v)))
    s, t = _best_mix(gxx, f0, gxy)

    def build(s: float, t: float) -> SchmidtVector:
        left = np.column_stack([t * y.left, s * u])
        right = np.column_stack([y.right, w])
        return SchmidtVector(y.dim_k, y.dim_h, left, right)

    z = build(s, t)
    if not (0.0 < s < 1.0) or objective(A, z) <= 1.0 + tol.cert_margin:
        res = minimize_scalar(
            lambda s: -(s * s * gxx + (1 - s * s) * f0 + 2 * s * np.sqrt(1 - s * s) * gxy),
            bounds=(0.0, 1.0),
            method="bounded",
            options={"xatol": 1e-12},
        )
        s = float(res.x)
        z = build(s, float(np.sqrt(1 - s * s)))
    value = objective(A, z)
    if value <= 1.0 + tol.cert_margin:
        raise WitnessInapplicable(f"best extension reaches only {value:.12g}")
    return z


class OracleResult(NamedTuple):
    violations: int
    min_eigenvalue: float
    samples: int


def _haar_isometry(rng: np.random.Generator, n: int, m: int) -> np.ndarray:
    Z = rng.normal(size=(n, m)) + 1j * rng.normal(size=(n, m))
    Q, R = np.linalg.qr(Z)
    return Q * (np.diag(R) / np.abs(np.diag(R)))


def kpos_bruteforce_oracle(
    phi: LinMap, k: int, samples: int = 1000, seed: int = 0, tol: Tolerances = DEFAULT_TOL
) -> OracleResult:
    """Search for a PSD ``a`` on ``K (x) C^k`` with ``(phi (x) id_k)(a)`` not PSD.

    Only rank-one ``a = v v^*`` are drawn, since every PSD matrix is a sum
    of those. Even-numbered samples take Gaussian ``v``; odd-numbered ones take
    ``v`` with flat-ish Schmidt coefficients on random subspaces, where
    violations of k-positivity concentrate. A violation is a minimum
    eigenvalue below ``-psd_tol``; it refutes k-positivity outright, while
    finding none proves nothing.
    """
    dk, dh = phi.dims
    if dk * dh * k * k > 4096:
        raise InvalidInput("oracle limited to dim_k * dim_h * k^2 <= 4096")
    big = tensor_id(phi, k)
    rng = np.random.default_rng(seed)
    r = min(dk, k)
    violations = 0
    lowest = np.inf
    for n in range(samples):
        if n % 2 == 0:
            V = rng.normal(size=(dk, k)) + 1j * rng.normal(size=(dk, k))
        else:
            d = np.abs(1.0 + 0.25 * rng.normal(size=r))
            V = _haar_isometry(rng, dk, r) @ (d[:, None] * _haar_isometry(rng, k, r).T)
        v = V.reshape(-1)
        v /= np.linalg.norm(v)
        out = apply(big, np.outer(v, v.conj()))
        lam = float(np.linalg.eigvalsh((out + out.conj().T) / 2)[0])
        lowest = min(lowest, lam)
        if lam < -tol.psd_tol:
            violations += 1
    return OracleResult(violations, float(lowest), samples)
