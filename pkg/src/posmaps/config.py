"""Numerical tolerances and optimizer settings shared across the package."""

from dataclasses import dataclass


@dataclass(frozen=True)
class Tolerances:
    """Thresholds used by the matrix kernels and decision procedures.

    ``herm_tol`` is relative: a matrix is Hermitian when
    ``max|M - M^H| <= herm_tol * max(1, ||M||)``. The others are absolute.
    """

    herm_tol: float = 1e-10
    psd_tol: float = 1e-9
    rank_tol: float = 1e-9
    eig_tol: float = 1e-12
    cert_margin: float = 1e-7
    ortho_tol: float = 1e-9
    residual_tol: float = 1e-9


@dataclass(frozen=True)
class OptConfig:
    """See-saw (projected power method) settings for Schmidt-class maximization."""

    restarts: int = 32
    max_iter: int = 500
    tol: float = 1e-11
    seed: int = 0
    workers: int = 1


@dataclass(frozen=True)
class PptConfig:
    """ADMM settings for the PPT-state maximization."""

    step: float = 3.0  # in units of 1 / ||C||
    max_iter: int = 20000
    tol: float = 1e-10
    window: int = 20


DEFAULT_TOL = Tolerances()
DEFAULT_OPT = OptConfig()
DEFAULT_PPT = PptConfig()
