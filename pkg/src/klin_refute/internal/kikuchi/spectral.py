"""Spectral norm of the degree-scaled Kikuchi matrix ``Γ^{-1/2} A Γ^{-1/2}``."""

import abc
import dataclasses
import logging

import numpy as np
import scipy.linalg
from scipy import sparse
from scipy.sparse import linalg as splinalg
from typing_extensions import override

from klin_refute.internal.models import SpectralSettings

from .matrix import KikuchiMatrix

log = logging.getLogger(__name__)

# added to the certified Rayleigh quotient
ITERATION_SLACK = 1e-6


@dataclasses.dataclass(frozen=True)
class NormResult:
    """A spectral norm value and how it was obtained.

    ``value`` is what certificates use. ``loose`` is set when the iteration did not converge
    and ``value`` is the Gershgorin bound.
    """

    value: float
    method: str
    loose: bool = False
    iterations: int = 0
    gershgorin: float = 0.0


def gershgorin_bound(m: sparse.csr_matrix) -> float:
    """Largest absolute row sum, an upper bound on the norm of a Hermitian matrix."""
    if m.shape[0] == 0:
        return 0.0
    return float(abs(m).sum(axis=1).max())


class NormEstimator(abc.ABC):
    """Defines the interface for computing the norm of a Hermitian sparse matrix."""

    @abc.abstractmethod
    def estimate(self, m: sparse.csr_matrix) -> NormResult:
        """Returns the largest absolute eigenvalue of ``m``.

        Args:
            m: A square Hermitian matrix.
        """
        pass


class DenseEstimator(NormEstimator):
    """Exact eigensolve of the densified matrix."""

    @override
    def estimate(self, m: sparse.csr_matrix) -> NormResult:
        bound = gershgorin_bound(m)
        if m.shape[0] == 0:
            return NormResult(0.0, "dense")
        eig = scipy.linalg.eigvalsh(m.toarray())
        return NormResult(float(np.abs(eig).max()), "dense", gershgorin=bound)


def start_vector(dim: int, seed: int) -> np.ndarray:
    """The seeded complex unit vector power iteration starts from."""
    rng = np.random.default_rng(seed)
    vec = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return vec / np.linalg.norm(vec)


def residual_bound(m: sparse.csr_matrix, vec: np.ndarray) -> tuple[float, float]:
    """Rayleigh quotient ``θ = v*Mv`` of a unit vector and the residual ``‖Mv − θv‖``.

    Some eigenvalue of ``m`` lies within the residual of ``θ``.
    """
    mv = m @ vec
    theta = float(np.real(np.vdot(vec, mv)))
    return theta, float(np.linalg.norm(mv - theta * vec))


class PowerIterationEstimator(NormEstimator):
    """Power iteration from a seeded random start, capped at ``10·N`` steps.

    The iterate seeds one Lanczos pass for the largest-magnitude eigenpair. Its Rayleigh
    quotient plus the residual plus ``ITERATION_SLACK`` is the returned value, capped by the
    Gershgorin bound. An iterate stalled on a lower eigenvalue, as happens when the start is
    nearly orthogonal to the top eigenvector, is lifted by the Lanczos pass.
    """

    def __init__(self, tol: float = 1e-6, seed: int = 0) -> None:
        """Set the relative tolerance and the seed of the start vector."""
        self.tol = tol
        self.seed = seed

    @override
    def estimate(self, m: sparse.csr_matrix) -> NormResult:
        dim = m.shape[0]
        bound = gershgorin_bound(m)
        if dim == 0 or bound == 0:
            return NormResult(0.0, "power")
        vec = start_vector(dim, self.seed)
        ev = 0.0
        max_iter = 10 * dim
        for it in range(1, max_iter + 1):
            nxt = m @ vec
            ev_new = float(np.linalg.norm(nxt))
            if ev_new == 0:
                # iterate fell into the kernel, certify from the seed instead
                vec = start_vector(dim, self.seed)
                break
            vec = nxt / ev_new
            if abs(ev_new - ev) < self.tol * ev_new:
                ev = ev_new
                break
            ev = ev_new
        else:
            log.warning(
                "power iteration did not converge, using the Gershgorin bound",
                extra={"dim": dim, "iterations": max_iter, "estimate": ev},
            )
            return NormResult(bound, "power", loose=True, iterations=max_iter, gershgorin=bound)

        top = self._top_eigenvector(m, vec)
        if top is None:
            log.warning(
                "eigenpair certification did not converge, using the Gershgorin bound",
                extra={"dim": dim, "iterations": it, "estimate": ev},
            )
            return NormResult(bound, "power", loose=True, iterations=it, gershgorin=bound)
        theta, resid = residual_bound(m, top)
        value = max(abs(theta), ev) + resid + ITERATION_SLACK
        if abs(theta) > ev * (1 + self.tol) + resid:
            log.warning(
                "power iteration stalled below the top eigenvalue",
                extra={"dim": dim, "estimate": ev, "certified": abs(theta)},
            )
        return NormResult(min(value, bound), "power", iterations=it, gershgorin=bound)

    def _top_eigenvector(self, m: sparse.csr_matrix, vec: np.ndarray) -> np.ndarray | None:
        dim = m.shape[0]
        if dim <= 2:
            # ARPACK needs N > k + 1
            eigs, vecs = scipy.linalg.eigh(m.toarray())
            return vecs[:, int(np.argmax(np.abs(eigs)))]
        try:
            _, vecs = splinalg.eigsh(
                m, k=1, which="LM", v0=vec, tol=self.tol, maxiter=10 * dim,
            )
        except splinalg.ArpackError:
            return None
        top = vecs[:, 0]
        return top / np.linalg.norm(top)


def scaled_operator(A: KikuchiMatrix, gamma: np.ndarray) -> sparse.csr_matrix:
    """``Γ^{-1/2} A Γ^{-1/2}`` restricted to the vertices touched by an edge.

    Untouched vertices contribute zero rows and columns and do not change the norm.
    """
    active = A.active()
    scale = sparse.diags(1.0 / np.sqrt(gamma[active]))
    return (scale @ A.to_sparse(active) @ scale).tocsr()


def choose_estimator(dim: int, settings: SpectralSettings) -> NormEstimator:
    """Dense eigensolve up to ``settings.dense_limit`` active vertices, power iteration above."""
    if dim <= settings.dense_limit:
        return DenseEstimator()
    return PowerIterationEstimator(tol=settings.tol, seed=settings.seed)


def scaled_norm(
    A: KikuchiMatrix,
    gamma: np.ndarray | None = None,
    settings: SpectralSettings | None = None,
) -> NormResult:
    """``‖Γ^{-1/2} A Γ^{-1/2}‖₂`` with ``Γ = D + d·I`` unless given.

    Raises:
        NoCertificateError: The matrix has no edges and no ``gamma`` was given.
    """
    settings = settings or SpectralSettings()
    if gamma is None:
        gamma = A.degrees().gamma
    if A.nnz == 0:
        return NormResult(0.0, "empty")
    m = scaled_operator(A, gamma)
    result = choose_estimator(m.shape[0], settings).estimate(m)
    log.debug(
        "scaled norm",
        extra={"method": result.method, "dim": m.shape[0], "norm": result.value},
    )
    return result
