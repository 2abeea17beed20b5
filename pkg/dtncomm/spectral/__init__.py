from dtncomm.spectral.symmetric import SpectralDecomposition, SymmetricMatrix
from dtncomm.spectral.kernels import (
    DEFAULT_DENSE_LIMIT,
    Resolvent,
    matrix_exponential,
    normalized_adjacency,
    resolvent_apply,
    spectral_radius,
)
from dtncomm.spectral.lanczos import (
    DiagonalEstimate,
    LanczosResult,
    hutchinson_diagonal,
    lanczos_exp_action,
)
