from dataclasses import dataclass

import numpy as np
import scipy.linalg
import scipy.sparse as sp

from dtncomm.errors import DomainError, NumericalError


class SymmetricMatrix:
    """
    Real symmetric matrix stored as its upper triangle (diagonal included), dense or sparse.
    The lower triangle is never stored, so the matrix is symmetric by construction:
    >>> S = SymmetricMatrix.from_upper_entries(3, [0, 1], [1, 2], [1.0, 1.0])
    >>> S.to_dense()
    array([[0., 1., 0.],
           [1., 0., 1.],
           [0., 1., 0.]])
    """

    def __init__(self, upper):
        """
        :param upper: upper triangular numpy array or scipy.sparse matrix of shape (n, n)
        """
        if upper.ndim != 2 or upper.shape[0] != upper.shape[1]:
            raise DomainError(f"A symmetric matrix must be square, got shape: {upper.shape}")
        if sp.issparse(upper):
            upper = sp.triu(upper, format="csr")
            upper.eliminate_zeros()
            values = upper.data
        else:
            upper = np.triu(np.asarray(upper, dtype=float))
            values = upper
        if not np.all(np.isfinite(values)):
            raise NumericalError("A symmetric matrix must have finite entries")
        self._upper = upper
        self._dense = None
        self._sparse = None

    @classmethod
    def from_upper_entries(cls, n, rows, cols, values):
        """Sparse symmetric matrix from upper triangle coordinates (rows <= cols)"""
        rows = np.asarray(rows, dtype=np.int64)
        cols = np.asarray(cols, dtype=np.int64)
        if np.any(rows > cols):
            raise DomainError("Entries must be given in the upper triangle (row <= col)")
        upper = sp.coo_matrix(
            (np.asarray(values, dtype=float), (rows, cols)), shape=(n, n)
        ).tocsr()
        return cls(upper)

    @classmethod
    def from_dense(cls, array):
        """Symmetric matrix of the upper triangle of array, the lower triangle is ignored"""
        return cls(np.asarray(array, dtype=float))

    @classmethod
    def zeros(cls, n):
        return cls(sp.csr_matrix((n, n)))

    def __repr__(self):
        storage = "sparse" if self.is_sparse else "dense"
        return f"SymmetricMatrix(n={self.n}, storage={storage}, nnz={self.nnz})"

    @property
    def n(self):
        return self._upper.shape[0]

    @property
    def shape(self):
        return self._upper.shape

    @property
    def is_sparse(self):
        return sp.issparse(self._upper)

    @property
    def nnz(self):
        """Number of stored (upper triangle) nonzeros"""
        if self.is_sparse:
            return self._upper.nnz
        return int(np.count_nonzero(self._upper))

    @property
    def is_zero(self):
        return self.nnz == 0

    def diagonal(self):
        return np.asarray(self._upper.diagonal(), dtype=float)

    def upper(self):
        return self._upper

    def to_dense(self):
        if self.is_sparse:
            upper = self._upper.toarray()
        else:
            upper = self._upper
        return upper + upper.T - np.diag(np.diag(upper))

    def to_sparse(self):
        """Full (both triangles) csr matrix"""
        if self._sparse is None:
            upper = sp.csr_matrix(self._upper)
            self._sparse = (
                upper + upper.T - sp.diags(upper.diagonal(), format="csr")
            ).tocsr()
        return self._sparse

    def matvec(self, x):
        """S @ x for a vector or a matrix of column vectors"""
        if self.is_sparse:
            return self.to_sparse() @ x
        if self._dense is None:
            self._dense = self.to_dense()
        return self._dense @ x


@dataclass(frozen=True)
class SpectralDecomposition:
    """S = Q diag(eigenvalues) Q^T, eigenvalues ascending"""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @classmethod
    def of(cls, matrix):
        dense = matrix.to_dense() if isinstance(matrix, SymmetricMatrix) else matrix
        try:
            eigenvalues, eigenvectors = scipy.linalg.eigh(dense)
        except (np.linalg.LinAlgError, ValueError) as e:
            raise NumericalError(f"Symmetric eigendecomposition failed: {e}") from e
        return cls(eigenvalues, eigenvectors)

    @property
    def n(self):
        return self.eigenvalues.shape[0]

    def apply(self, func):
        """Dense Q f(Lambda) Q^T"""
        q = self.eigenvectors
        return (q * func(self.eigenvalues)) @ q.T

    def reconstruct(self):
        return self.apply(lambda x: x)

    def spectral_radius(self):
        if self.n == 0:
            return 0.0
        return float(np.max(np.abs(self.eigenvalues)))
