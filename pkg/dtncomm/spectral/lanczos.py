"""
Matrix-free exponential quantities of large symmetric matrices: the Lanczos approximation of exp(S) u (which yields
the quadrature u^T exp(S) u from the same Krylov basis) and a Hutchinson estimator of diag(exp(S)).
"""
import logging
from dataclasses import dataclass

import numpy as np
from scipy.linalg import eigh_tridiagonal

from dtncomm.errors import DomainError, NumericalError

logger = logging.getLogger(__name__)

LANCZOS_TOL = 1e-12
LANCZOS_MAX_ITER = 150
DEFAULT_PROBES = 64


@dataclass(frozen=True)
class LanczosResult:
    vector: np.ndarray
    quadrature: float
    iterations: int


def _exp_tridiagonal_first_column(alphas, betas):
    """exp(T) e_1 for the symmetric tridiagonal T with diagonal alphas and off-diagonal betas"""
    if len(alphas) == 1:
        return np.exp(np.asarray(alphas, dtype=float))
    evals, evecs = eigh_tridiagonal(np.asarray(alphas), np.asarray(betas))
    with np.errstate(over="ignore"):
        return evecs @ (np.exp(evals) * evecs[0, :])


def lanczos_exp_action(matrix, u, tol=LANCZOS_TOL, max_iter=LANCZOS_MAX_ITER):
    """
    Lanczos approximation of exp(S) u, with full reorthogonalization.
    Since u is the first Krylov vector, u^T exp(S) u = |u|^2 [exp(T)]_11 comes for free, and it equals the sum of
    u * exp(S) u up to rounding.
    :param matrix: SymmetricMatrix or anything with a matvec method and an n attribute
    :param u: starting vector
    :param tol: relative tolerance on the a posteriori error estimate beta_k |[exp(T) e_1]_k|
    :param max_iter: maximal Krylov dimension
    :return: LanczosResult
    """
    u = np.asarray(u, dtype=float)
    n = u.shape[0]
    beta0 = float(np.linalg.norm(u))
    if beta0 == 0:
        return LanczosResult(np.zeros(n), 0.0, 0)
    max_iter = min(max_iter, n)
    basis = np.empty((n, max_iter))
    basis[:, 0] = u / beta0
    alphas, betas = [], []
    quadrature = None
    exp_t_e1 = None
    converged = False
    for k in range(max_iter):
        w = matrix.matvec(basis[:, k])
        alpha = float(basis[:, k] @ w)
        alphas.append(alpha)
        # full reorthogonalization against the whole basis
        w = w - basis[:, : k + 1] @ (basis[:, : k + 1].T @ w)
        w = w - basis[:, : k + 1] @ (basis[:, : k + 1].T @ w)
        beta = float(np.linalg.norm(w))

        exp_t_e1 = _exp_tridiagonal_first_column(alphas, betas)
        quadrature = beta0**2 * float(exp_t_e1[0])
        if not np.isfinite(quadrature):
            raise NumericalError("The Lanczos exponential overflowed")
        if beta * abs(exp_t_e1[-1]) <= tol * np.linalg.norm(exp_t_e1):
            converged = True
            break
        # invariant subspace or the whole space, the approximation is exact
        if beta <= 1e-14 * max(1.0, abs(alpha)) or k + 1 == n:
            converged = True
            break
        if k + 1 == max_iter:
            break
        betas.append(beta)
        basis[:, k + 1] = w / beta

    iterations = len(alphas)
    if not converged:
        raise NumericalError(
            f"The Lanczos exponential did not converge in {iterations} iterations"
        )
    logger.debug("Lanczos exp(S)u converged after %d iterations", iterations)
    vector = beta0 * (basis[:, :iterations] @ exp_t_e1)
    return LanczosResult(vector, quadrature, iterations)


@dataclass(frozen=True)
class DiagonalEstimate:
    values: np.ndarray
    standard_error: np.ndarray
    probes: int

    @property
    def mean_standard_error(self):
        return float(np.mean(self.standard_error)) if self.standard_error.size else 0.0


def hutchinson_diagonal(matrix, probes=DEFAULT_PROBES, seed=0, tol=1e-10):
    """
    Stochastic estimate of diag(exp(S)): the mean of z * exp(S) z over Rademacher probe vectors z.
    Approximate - the per-node standard error of the mean is returned next to the values.
    :param matrix: SymmetricMatrix
    :param probes: number of probe vectors
    :param seed: seed of the probe generator
    """
    if probes < 2:
        raise DomainError(f"At least 2 probes are needed for a standard error, got: {probes}")
    rng = np.random.default_rng(seed)
    n = matrix.n
    samples = np.empty((probes, n))
    for p in range(probes):
        z = rng.choice((-1.0, 1.0), size=n)
        samples[p] = z * lanczos_exp_action(matrix, z, tol=tol).vector
    values = samples.mean(axis=0)
    standard_error = samples.std(axis=0, ddof=1) / np.sqrt(probes)
    return DiagonalEstimate(values, standard_error, probes)
