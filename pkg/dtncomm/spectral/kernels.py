import logging

import numpy as np
import scipy.linalg
import scipy.sparse as sp
from scipy.sparse.linalg import cg

from dtncomm.errors import DomainError, NumericalError
from dtncomm.spectral.symmetric import SpectralDecomposition, SymmetricMatrix

logger = logging.getLogger(__name__)

DEFAULT_DENSE_LIMIT = 4000
POWER_TOL = 1e-8
POWER_MAX_ITER = 10_000
RESOLVENT_TOL = 1e-10


def normalized_adjacency(graph):
    """
    D^{-1/2} A D^{-1/2} of a contact graph: entry (i, j) is a_ij / sqrt(d_i d_j)
    :param graph: ContactGraph without isolated nodes
    :return: sparse SymmetricMatrix
    """
    degree = graph.degree
    if np.any(degree <= 0):
        isolated = [graph.node_index.node_id(i) for i in np.flatnonzero(degree <= 0)[:5]]
        raise DomainError(
            f"Degree normalization is undefined for isolated nodes, e.g.: {isolated}. "
            "Isolated nodes must be removed before building the graph."
        )
    rows, cols, weights = graph.upper_entries()
    values = weights / np.sqrt(degree[rows] * degree[cols])
    return SymmetricMatrix.from_upper_entries(graph.n_nodes, rows, cols, values)


def matrix_exponential(matrix):
    """
    exp(S) of a symmetric matrix through its spectral decomposition Q exp(Lambda) Q^T
    :param matrix: SymmetricMatrix, n >= 1
    :return: dense SymmetricMatrix
    """
    if matrix.n < 1:
        raise DomainError("The matrix exponential needs a matrix of size at least 1")
    decomposition = SpectralDecomposition.of(matrix)
    with np.errstate(over="ignore"):
        result = decomposition.apply(np.exp)
    if not np.all(np.isfinite(result)):
        raise NumericalError(
            f"exp(S) overflowed: the largest eigenvalue is {decomposition.eigenvalues[-1]:.6g}"
        )
    return SymmetricMatrix.from_dense(result)


def spectral_radius(
    matrix, tol=POWER_TOL, max_iter=POWER_MAX_ITER, seed=0, method="power"
):
    """
    Largest absolute eigenvalue of a symmetric matrix
    :param matrix: SymmetricMatrix
    :param tol: relative convergence tolerance of the power iteration
    :param max_iter: maximal number of power iterations
    :param seed: seed of the random start vector
    :param method: 'power' for power iteration, 'dense' for an exact dense eigensolve
    """
    if matrix.n == 0 or matrix.is_zero:
        return 0.0
    if method == "dense":
        return SpectralDecomposition.of(matrix).spectral_radius()
    if method != "power":
        raise DomainError(f'The method must be "power" or "dense", got: "{method}"')

    rng = np.random.default_rng(seed)
    x = rng.standard_normal(matrix.n)
    x /= np.linalg.norm(x)
    rho = 0.0
    for iteration in range(1, max_iter + 1):
        y = matrix.matvec(x)
        rho_next = float(np.linalg.norm(y))
        if rho_next == 0.0:
            return 0.0
        if abs(rho_next - rho) <= tol * max(1.0, rho):
            logger.debug("Power iteration converged after %d iterations", iteration)
            return rho_next
        x = y / rho_next
        rho = rho_next
    raise NumericalError(
        f"Power iteration did not converge in {max_iter} iterations (last estimate {rho:.6g})"
    )


class Resolvent:
    """
    Solver of (I - gamma S) x = v for a fixed S and gamma.
    A Cholesky factorization is kept for dense matrices, large sparse ones are solved with conjugate gradients.
    """

    def __init__(
        self, matrix, gamma, rho=None, dense_limit=DEFAULT_DENSE_LIMIT, tol=RESOLVENT_TOL
    ):
        if not np.isfinite(gamma) or gamma < 0:
            raise DomainError(f"gamma must be a nonnegative finite number, got: {gamma}")
        if rho is None:
            rho = spectral_radius(matrix)
        if gamma * rho >= 1:
            raise DomainError(
                f"gamma={gamma:.6g} is out of the admissible range: gamma * spectral_radius = "
                f"{gamma * rho:.6g} must be < 1"
            )
        self.matrix = matrix
        self.gamma = gamma
        self.tol = tol
        self.is_identity = gamma == 0 or matrix.is_zero
        self._factor = None
        self._operator = None
        if self.is_identity:
            return
        if matrix.n <= dense_limit:
            shifted = np.eye(matrix.n) - gamma * matrix.to_dense()
            try:
                self._factor = scipy.linalg.cho_factor(shifted, lower=False)
            except np.linalg.LinAlgError as e:
                raise NumericalError(f"Cholesky factorization of I - gamma S failed: {e}") from e
        else:
            self._operator = (
                sp.identity(matrix.n, format="csr") - gamma * matrix.to_sparse()
            ).tocsr()

    def solve(self, v):
        """Solve for a vector or a matrix of right-hand sides (columns)"""
        v = np.asarray(v, dtype=float)
        if self.is_identity:
            return v.copy()
        if self._factor is not None:
            x = scipy.linalg.cho_solve(self._factor, v)
        elif v.ndim == 1:
            x = self._solve_cg(v)
        else:
            x = np.column_stack([self._solve_cg(col) for col in v.T])
        self._check_residual(x, v)
        return x

    def _solve_cg(self, v):
        if not np.any(v):
            return np.zeros_like(v)
        x, info = cg(self._operator, v, rtol=self.tol / 10, atol=0.0, maxiter=10 * v.shape[0])
        if info != 0:
            raise NumericalError(f"Conjugate gradients did not converge (info={info})")
        return x

    def _check_residual(self, x, v):
        residual = x - self.gamma * self.matrix.matvec(x) - v
        res_norm = np.linalg.norm(residual)
        v_norm = np.linalg.norm(v)
        if not np.isfinite(res_norm) or res_norm > self.tol * max(v_norm, np.finfo(float).tiny):
            raise NumericalError(
                f"Resolvent solve residual {res_norm:.3g} exceeds {self.tol:.1g} * |v| = "
                f"{self.tol * v_norm:.3g}"
            )


def resolvent_apply(matrix, gamma, v, rho=None, dense_limit=DEFAULT_DENSE_LIMIT):
    """
    Solution x of (I - gamma S) x = v
    :param matrix: SymmetricMatrix S
    :param gamma: Katz parameter, gamma * spectral_radius(S) < 1
    :param v: right-hand side vector (or matrix of column vectors)
    :param rho: optional precomputed spectral radius of S
    :param dense_limit: matrices up to this size are factorized densely
    """
    return Resolvent(matrix, gamma, rho=rho, dense_limit=dense_limit).solve(v)
