"""Membership tests for the positive, k-positive, completely positive and
decomposable cones, and the associated cone norms.

Each test works on the normalized form ``c^{-1} phi = Tr - phi_cp``: ``phi``
lies in the cone iff ``Tr(rho C_{phi_cp}) <= 1`` for every state ``rho`` in the
matching dual family (product vector states, Schmidt-rank-k vector states,
PPT states, all states).

The separable-state condition is evaluated on pure product states only. The
objective is linear, so its supremum over the convex hull of product states is
attained at a product state.
"""

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .config import DEFAULT_OPT, DEFAULT_PPT, DEFAULT_TOL, OptConfig, PptConfig, Tolerances
from .errors import InvalidInput, NegativeOfCpMap
from .linalg import check_hermitian, partial_transpose
from .maps import LinMap, StateDensity, from_function
from .schmidt import Verdict, VerdictKind, is_k_positive, sup_schmidt
from .split import cp_split

__all__ = [
    "ConeId",
    "POSITIVE",
    "COMPLETELY_POSITIVE",
    "DECOMPOSABLE",
    "PptOptReport",
    "is_completely_positive",
    "is_positive",
    "ppt_sup",
    "is_decomposable",
    "cone_norm",
    "random_separable_state",
    "random_ppt_state",
    "random_superpositive",
]


@dataclass(frozen=True)
class ConeId:
    tag: str
    k: int | None = None

    def __post_init__(self):
        if self.tag not in ("Positive", "KPositive", "CompletelyPositive", "Decomposable"):
            raise InvalidInput(f"unknown cone {self.tag!r}")
        if self.tag == "KPositive" and (self.k is None or self.k < 1):
            raise InvalidInput("KPositive needs k >= 1")

    @classmethod
    def kpositive(cls, k: int) -> "ConeId":
        return cls("KPositive", int(k))

    @classmethod
    def parse(cls, text: str) -> "ConeId":
        """Accepts ``positive``, ``cp``, ``decomposable``, ``k<N>`` or ``kpositive:<N>``."""
        t = text.strip().lower()
        if t in ("positive", "p"):
            return POSITIVE
        if t in ("cp", "completelypositive", "completely-positive"):
            return COMPLETELY_POSITIVE
        if t in ("decomposable", "dec"):
            return DECOMPOSABLE
        for prefix in ("kpositive:", "k"):
            if t.startswith(prefix) and t[len(prefix):].isdigit():
                return cls.kpositive(int(t[len(prefix):]))
        raise InvalidInput(f"cannot parse cone {text!r}")

    def __str__(self) -> str:
        return f"{self.k}-positive" if self.tag == "KPositive" else self.tag


POSITIVE = ConeId("Positive")
COMPLETELY_POSITIVE = ConeId("CompletelyPositive")
DECOMPOSABLE = ConeId("Decomposable")


@dataclass(frozen=True, eq=False)
class PptOptReport:
    value: float
    rho: StateDensity
    feasibility_residual: float
    iterations: int
    converged: bool


def is_completely_positive(phi: LinMap, tol: Tolerances = DEFAULT_TOL) -> Verdict:
    """Exact test ``C_phi >= 0``; a failure carries the minimizing eigenvector as a pure state."""
    C = phi.require_self_adjoint(tol)
    w, V = np.linalg.eigh(C)
    if w[0] >= -tol.psd_tol:
        return Verdict(VerdictKind.CERTIFIED_YES, float(w[0]), detail="Choi matrix is PSD")
    witness = StateDensity.from_vector(V[:, 0], phi.dim_k, phi.dim_h)
    return Verdict(
        VerdictKind.CERTIFIED_NO,
        float(w[0]),
        witness,
        f"Choi matrix has eigenvalue {w[0]:.12g} < 0",
    )


def is_positive(phi: LinMap, cfg: OptConfig = DEFAULT_OPT, tol: Tolerances = DEFAULT_TOL) -> Verdict:
    """Positivity, i.e. 1-positivity: search over product vectors."""
    return is_k_positive(phi, 1, cfg, tol)


def _psd_clip(M: np.ndarray) -> np.ndarray:
    w, V = np.linalg.eigh(M)
    return (V * np.clip(w, 0.0, None)) @ V.conj().T


def _min_eig(M: np.ndarray) -> float:
    return float(np.linalg.eigvalsh((M + M.conj().T) / 2)[0])


def _project_ppt(X: np.ndarray, dk: int, dh: int, inner_iter: int, tol: float) -> np.ndarray:
    """Dykstra's alternating projections onto PSD, PPT and unit-trace sets."""
    d = X.shape[0]
    eye = np.eye(d)
    p = np.zeros_like(X)
    q = np.zeros_like(X)
    r = np.zeros_like(X)
    x = X
    for _ in range(inner_iter):
        y = _psd_clip(x + p)
        p = x + p - y
        z = partial_transpose(_psd_clip(partial_transpose(y + q, dk, dh)), dk, dh)
        q = y + q - z
        xn = z + r
        xn = xn + (1.0 - np.trace(xn).real) / d * eye
        r = z + r - xn
        step = np.linalg.norm(xn - x)
        x = xn
        if step < tol:
            break
    return x


def _make_feasible(X: np.ndarray, dk: int, dh: int) -> np.ndarray:
    """Turn an approximately feasible matrix into an exact PPT state.

    Clip to PSD, normalize the trace, then mix in just enough of the maximally
    mixed state to lift the partial transpose to PSD.
    """
    d = X.shape[0]
    rho = _psd_clip((X + X.conj().T) / 2)
    tr = np.trace(rho).real
    rho = rho / tr if tr > 0 else np.eye(d) / d
    deficit = -_min_eig(partial_transpose(rho, dk, dh))
    if deficit > 0:
        deficit += 1e-15
        p = deficit * d / (1.0 + deficit * d)
        rho = (1.0 - p) * rho + p * np.eye(d) / d
    return (rho + rho.conj().T) / 2


def _feasibility_residual(rho: np.ndarray, dk: int, dh: int) -> float:
    return max(
        0.0,
        -_min_eig(rho),
        -_min_eig(partial_transpose(rho, dk, dh)),
        abs(np.trace(rho).real - 1.0),
    )


def _simplex(w: np.ndarray) -> np.ndarray:
    """Euclidean projection of ``w`` onto the probability simplex."""
    u = np.sort(w)[::-1]
    css = np.cumsum(u) - 1.0
    idx = np.arange(1, w.size + 1)
    r = idx[u - css / idx > 0][-1]
    return np.maximum(w - css[r - 1] / r, 0.0)


def _project_states(M: np.ndarray) -> np.ndarray:
    # exact projection onto {rho >= 0, Tr rho = 1}
    w, V = np.linalg.eigh((M + M.conj().T) / 2)
    return (V * _simplex(w)) @ V.conj().T


def _admm(C: np.ndarray, rho: np.ndarray, dk: int, dh: int, eta: float, cfg: PptConfig):
    """ADMM on ``X = Z`` with ``X`` a state and ``Z`` PPT; both projections exact."""
    Z = rho
    U = np.zeros_like(rho)
    X = rho
    values = []
    converged = False
    it = 0
    for it in range(1, cfg.max_iter + 1):
        X = _project_states(Z - U + eta * C)
        Z = partial_transpose(_psd_clip(partial_transpose(X + U, dk, dh)), dk, dh)
        U = U + X - Z
        values.append(float(np.real(np.sum(X * C.T))))
        recent = values[-cfg.window:]
        if (
            len(values) > cfg.window
            and np.linalg.norm(X - Z) < cfg.tol
            and max(recent) - min(recent) < cfg.tol
        ):
            converged = True
            break
    return X, it, converged


def ppt_sup(
    C,
    dim_k: int,
    dim_h: int,
    cfg: PptConfig = DEFAULT_PPT,
    tol: Tolerances = DEFAULT_TOL,
    init: Sequence[StateDensity] = (),
) -> PptOptReport:
    """Lower-bound ``sup Tr(rho C)`` over PPT states on ``K (x) H``.

    ADMM splitting of the state constraint and the PPT constraint, each with
    an exact eigenvalue projection, at penalty step ``cfg.step / ||C||``. It
    starts from the maximally mixed state and from every ``init`` state; the
    best repaired end point wins, and an ``init`` state is itself kept if
    nothing beats it. Reported states are repaired to exact feasibility
    before evaluation, so ``value`` is attained by a genuine PPT state.
    """
    C = check_hermitian(C, tol, "C")
    if dim_k < 1 or dim_h < 1 or C.shape[0] != dim_k * dim_h:
        raise InvalidInput(f"matrix of size {C.shape[0]} does not factor as {dim_k} x {dim_h}")
    d = C.shape[0]
    norm = float(np.linalg.norm(C, 2))
    starts = [np.eye(d, dtype=complex) / d]
    for s in init:
        if (s.dim_k, s.dim_h) != (dim_k, dim_h):
            raise InvalidInput("init state has wrong dimensions")
        starts.append(np.array(s.rho, dtype=complex))

    best = None
    total = 0
    for n, start in enumerate(starts):
        candidates = [] if n == 0 else [(start, 0, True)]
        if norm > 0.0:
            candidates.append(_admm(C, start, dim_k, dim_h, cfg.step / norm, cfg))
        else:
            candidates.append((start, 0, True))
        for rho, it, converged in candidates:
            total += it
            rho = _make_feasible(rho, dim_k, dim_h)
            value = float(np.real(np.sum(rho * C.T)))
            if best is None or value > best[1]:
                best = (rho, value, converged)
    rho, _, converged = best
    state = StateDensity(dim_k, dim_h, rho, tol)
    return PptOptReport(
        value=state.expectation(C),
        rho=state,
        feasibility_residual=_feasibility_residual(rho, dim_k, dim_h),
        iterations=total,
        converged=converged,
    )


def is_decomposable(
    phi: LinMap,
    cfg: PptConfig = DEFAULT_PPT,
    tol: Tolerances = DEFAULT_TOL,
    opt: OptConfig = DEFAULT_OPT,
) -> Verdict:
    """Decomposability through ``Tr(rho C_{phi_cp}) <= 1`` on PPT states.

    Never returns ``CertifiedYes``: the ascent yields lower bounds only.
    ``CertifiedNo`` carries the PPT state that violates the bound.
    """
    C = phi.require_self_adjoint(tol)
    try:
        split = cp_split(phi, tol)
    except NegativeOfCpMap:
        # phi = -(nonzero CP map): a product state (hence PPT) with Tr(rho C_phi) < 0
        rep = sup_schmidt(-C, phi.dim_k, phi.dim_h, 1, opt, tol)
        state = StateDensity.from_vector(rep.argmax.dense, phi.dim_k, phi.dim_h)
        value = state.expectation(C)
        if value < -tol.cert_margin:
            return Verdict(VerdictKind.CERTIFIED_NO, value, state, "-phi is completely positive and nonzero")
        return Verdict(VerdictKind.HEURISTIC_YES, value, detail="no negative PPT overlap found")

    A = split.phi_cp.choi
    # product states are PPT; seeding with the best one keeps this verdict
    # at least as strong as the positivity search
    seed = sup_schmidt(A, phi.dim_k, phi.dim_h, 1, opt, tol).argmax
    rep = ppt_sup(A, phi.dim_k, phi.dim_h, cfg, tol, init=[StateDensity.from_vector(seed.dense, phi.dim_k, phi.dim_h)])
    value = rep.rho.expectation(A)
    if value > 1.0 + tol.cert_margin and rep.rho.is_ppt:
        return Verdict(
            VerdictKind.CERTIFIED_NO,
            value,
            rep.rho,
            f"PPT state with Tr(rho C_cp) = {value:.12g} > 1",
        )
    if value >= 1.0 - tol.cert_margin:
        detail = "PPT lower bound indistinguishable from 1 within margin; not a proof"
    else:
        detail = "PPT lower bound below 1; not a proof"
    if not rep.converged:
        detail += " (ascent hit iteration cap)"
    return Verdict(VerdictKind.HEURISTIC_YES, value, detail=detail)


def _schmidt_abs_sup(C, dk: int, dh: int, k: int, cfg: OptConfig, tol: Tolerances) -> float:
    # rank chain 1..k, each level warm-started from the previous maximizer so
    # the estimate never decreases with k
    best = 0.0
    for sign in (1.0, -1.0):
        seeds = []
        value = -np.inf
        for j in range(1, min(k, dk, dh) + 1):
            rep = sup_schmidt(sign * C, dk, dh, j, cfg, tol, init=seeds)
            seeds = [rep.argmax]
            value = max(value, rep.value)
        best = max(best, value)
    return best


def cone_norm(
    phi: LinMap,
    cone: ConeId,
    cfg: OptConfig = DEFAULT_OPT,
    tol: Tolerances = DEFAULT_TOL,
    ppt_cfg: PptConfig = DEFAULT_PPT,
) -> float:
    """``sup |Tr(C_phi C_psi)|`` over normalized ``psi`` in the dual cone.

    Positive / k-positive: Schmidt-rank-k vector states (lower bound from
    the see-saw). Completely positive: all states, i.e. the largest absolute
    eigenvalue of ``C_phi`` (exact). Decomposable: PPT states (lower bound,
    with the ascent also started from the best product state).
    """
    C = phi.require_self_adjoint(tol)
    dk, dh = phi.dims
    if cone.tag == "CompletelyPositive":
        return float(np.max(np.abs(np.linalg.eigvalsh(C))))
    if cone.tag == "Positive":
        return _schmidt_abs_sup(C, dk, dh, 1, cfg, tol)
    if cone.tag == "KPositive":
        return _schmidt_abs_sup(C, dk, dh, cone.k, cfg, tol)
    best = 0.0
    for sign in (1.0, -1.0):
        seed = sup_schmidt(sign * C, dk, dh, 1, cfg, tol).argmax
        init = [StateDensity.from_vector(seed.dense, dk, dh)]
        best = max(best, ppt_sup(sign * C, dk, dh, ppt_cfg, tol, init=init).value)
    return best


def _unit(rng: np.random.Generator, n: int) -> np.ndarray:
    v = rng.normal(size=n) + 1j * rng.normal(size=n)
    return v / np.linalg.norm(v)


def random_separable_state(dim_k: int, dim_h: int, terms: int = 4, seed: int = 0) -> StateDensity:
    """Convex mixture of ``terms`` random pure product states."""
    rng = np.random.default_rng(seed)
    weights = rng.dirichlet(np.ones(terms))
    d = dim_k * dim_h
    rho = np.zeros((d, d), dtype=complex)
    for p in weights:
        v = np.kron(_unit(rng, dim_k), _unit(rng, dim_h))
        rho += p * np.outer(v, v.conj())
    rho /= np.trace(rho).real
    return StateDensity(dim_k, dim_h, rho)


def random_ppt_state(dim_k: int, dim_h: int, seed: int = 0, inner_iter: int = 500) -> StateDensity:
    """Random PPT state: a Ginibre state, projected onto the PPT set if needed."""
    rng = np.random.default_rng(seed)
    d = dim_k * dim_h
    G = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    rho = G @ G.conj().T
    rho /= np.trace(rho).real
    if _min_eig(partial_transpose(rho, dim_k, dim_h)) < 0:
        rho = _project_ppt(rho, dim_k, dim_h, inner_iter, 1e-12)
    return StateDensity(dim_k, dim_h, _make_feasible(rho, dim_k, dim_h))


def random_superpositive(dim_k: int, dim_h: int, k: int = 1, terms: int = 1, seed: int = 0) -> LinMap:
    """``sum_i Ad(V_i)`` with random ``V_i`` of rank ``<= k``, Choi trace 1."""
    if k < 1:
        raise InvalidInput("k must be >= 1")
    rng = np.random.default_rng(seed)
    r = min(k, dim_k, dim_h)
    Vs = []
    for _ in range(terms):
        L = rng.normal(size=(dim_h, r)) + 1j * rng.normal(size=(dim_h, r))
        R = rng.normal(size=(r, dim_k)) + 1j * rng.normal(size=(r, dim_k))
        Vs.append(L @ R)
    psi = from_function(dim_k, dim_h, lambda a: sum(V @ a @ V.conj().T for V in Vs))
    return (1.0 / np.trace(psi.choi).real) * psi

