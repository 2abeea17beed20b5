import numpy as np
import pytest
import scipy.sparse as sp

from dtncomm.errors import DomainError, NumericalError
from dtncomm.graph import ContactGraph
from dtncomm.metrics import SnapshotSequence, katz_gamma
from dtncomm.spectral import (
    Resolvent,
    SpectralDecomposition,
    SymmetricMatrix,
    matrix_exponential,
    normalized_adjacency,
    resolvent_apply,
    spectral_radius,
)
from dtncomm.synthetic import SyntheticSpec, generate
from dtncomm.utils.node_index import NodeIndex


def taylor_exp(a, terms=60):
    result = np.eye(a.shape[0])
    term = np.eye(a.shape[0])
    for k in range(1, terms):
        term = term @ a / k
        result = result + term
    return result


def random_symmetric(rng, n):
    a = rng.uniform(-1, 1, size=(n, n))
    return (a + a.T) / 2


def test_symmetric_matrix_construction():
    matrix = SymmetricMatrix.from_upper_entries(3, [0, 1], [1, 2], [1.0, 2.0])
    np.testing.assert_array_equal(
        matrix.to_dense(), [[0, 1, 0], [1, 0, 2], [0, 2, 0]]
    )
    np.testing.assert_array_equal(matrix.to_sparse().toarray(), matrix.to_dense())
    np.testing.assert_array_equal(matrix.matvec(np.ones(3)), [1, 3, 2])
    assert matrix.nnz == 2
    assert SymmetricMatrix.zeros(4).is_zero
    with pytest.raises(DomainError):
        SymmetricMatrix.from_upper_entries(3, [1], [0], [1.0])
    with pytest.raises(DomainError):
        SymmetricMatrix(np.zeros((2, 3)))
    with pytest.raises(NumericalError):
        SymmetricMatrix.from_dense([[np.inf, 0], [0, 1]])


def test_dense_input_ignores_the_lower_triangle():
    matrix = SymmetricMatrix.from_dense([[1.0, 2.0], [7.0, 3.0]])
    np.testing.assert_array_equal(matrix.to_dense(), [[1, 2], [2, 3]])


def test_dense_storage_converts_to_sparse_after_a_product():
    rng = np.random.default_rng(3)
    dense = random_symmetric(rng, 5)
    matrix = SymmetricMatrix.from_dense(dense)
    np.testing.assert_allclose(matrix.matvec(np.ones(5)), dense.sum(axis=1))
    full = matrix.to_sparse()
    assert sp.issparse(full)
    np.testing.assert_allclose(full.toarray(), dense)


def test_decomposition_reconstructs():
    rng = np.random.default_rng(4)
    dense = random_symmetric(rng, 7)
    decomposition = SpectralDecomposition.of(SymmetricMatrix.from_dense(dense))
    np.testing.assert_allclose(decomposition.reconstruct(), dense, atol=1e-12)
    assert np.all(np.diff(decomposition.eigenvalues) >= 0)


def test_exponential_matches_taylor_series():
    rng = np.random.default_rng(0)
    for _ in range(100):
        n = int(rng.integers(1, 11))
        dense = random_symmetric(rng, n)
        result = matrix_exponential(SymmetricMatrix.from_dense(dense)).to_dense()
        np.testing.assert_allclose(result, taylor_exp(dense), rtol=1e-8, atol=1e-8)


def test_exponential_of_a_single_edge():
    edge = SymmetricMatrix.from_upper_entries(2, [0], [1], [1.0])
    expected = [[np.cosh(1), np.sinh(1)], [np.sinh(1), np.cosh(1)]]
    np.testing.assert_allclose(matrix_exponential(edge).to_dense(), expected, rtol=1e-14)


def test_exponential_of_the_empty_matrix():
    with pytest.raises(DomainError):
        matrix_exponential(SymmetricMatrix.zeros(0))


def test_normalized_adjacency():
    graph = ContactGraph.from_edges([("a", "b", 0.3)])
    np.testing.assert_allclose(normalized_adjacency(graph).to_dense(), [[0, 1], [1, 0]])

    graph = ContactGraph.from_edges([("a", "b", 1.0), ("b", "c", 3.0)])
    expected = np.array([[0, 1 / 2, 0], [1 / 2, 0, 3 / np.sqrt(12)], [0, 3 / np.sqrt(12), 0]])
    np.testing.assert_allclose(normalized_adjacency(graph).to_dense(), expected, rtol=1e-14)


def test_normalized_adjacency_rejects_isolated_nodes():
    graph = ContactGraph.from_edges([("a", "b", 1.0)], node_ids=["a", "b", "c"])
    with pytest.raises(DomainError, match="isolated"):
        normalized_adjacency(graph)


@pytest.mark.parametrize(
    "spec",
    [
        SyntheticSpec("ba", 60, m=2, seed=1),
        SyntheticSpec("ws", 40, k=4, p=0.2, seed=2),
        SyntheticSpec("ws", 10, k=2),
    ],
)
def test_spectral_radius_by_power_iteration(spec):
    adjacency = generate(spec).adjacency()
    exact = spectral_radius(adjacency, method="dense")
    assert exact == pytest.approx(np.max(np.abs(np.linalg.eigvalsh(adjacency.to_dense()))))
    assert spectral_radius(adjacency) == pytest.approx(exact, rel=1e-6)


def test_spectral_radius_edge_cases():
    assert spectral_radius(SymmetricMatrix.zeros(3)) == 0.0
    ring = generate(SyntheticSpec("ws", 10, k=2)).adjacency()
    assert spectral_radius(ring, method="dense") == pytest.approx(2.0, rel=1e-14)
    with pytest.raises(DomainError):
        spectral_radius(ring, method="qr")


@pytest.mark.parametrize("dense_limit", [4000, 0])
def test_resolvent_matches_a_direct_solve(dense_limit):
    rng = np.random.default_rng(9)
    adjacency = generate(SyntheticSpec("ba", 80, m=3, seed=3)).adjacency()
    rho = spectral_radius(adjacency, method="dense")
    gamma = 0.9 / rho
    v = rng.standard_normal(80)
    expected = np.linalg.solve(np.eye(80) - gamma * adjacency.to_dense(), v)
    result = resolvent_apply(adjacency, gamma, v, dense_limit=dense_limit)
    np.testing.assert_allclose(result, expected, rtol=1e-7, atol=1e-9)

    block = rng.standard_normal((80, 3))
    solver = Resolvent(adjacency, gamma, rho=rho, dense_limit=dense_limit)
    np.testing.assert_allclose(
        solver.solve(block),
        np.linalg.solve(np.eye(80) - gamma * adjacency.to_dense(), block),
        rtol=1e-7,
        atol=1e-9,
    )


def test_resolvent_gamma_range():
    adjacency = SymmetricMatrix.from_upper_entries(2, [0], [1], [1.0])
    with pytest.raises(DomainError, match="admissible"):
        Resolvent(adjacency, 1.0)
    with pytest.raises(DomainError):
        Resolvent(adjacency, -0.1)
    with pytest.raises(DomainError):
        Resolvent(adjacency, np.nan)
    np.testing.assert_allclose(
        resolvent_apply(adjacency, 0.5, [1.0, 0.0]), np.array([4 / 3, 2 / 3]), rtol=1e-12
    )


def test_resolvent_of_an_empty_snapshot_is_the_identity():
    solver = Resolvent(SymmetricMatrix.zeros(3), 10.0)
    assert solver.is_identity
    np.testing.assert_array_equal(solver.solve([1.0, 2.0, 3.0]), [1, 2, 3])


def test_complete_graph_spectral_radius_and_gamma():
    k4 = SymmetricMatrix.from_dense(np.ones((4, 4)) - np.eye(4))
    assert spectral_radius(k4) == pytest.approx(3.0, rel=1e-6)
    assert spectral_radius(k4, method="dense") == pytest.approx(3.0, rel=1e-12)
    sequence = SnapshotSequence(1, 0, 0, NodeIndex(["a", "b", "c", "d"]), [k4])
    assert katz_gamma(sequence) == pytest.approx(0.85 / 3, rel=1e-6)


@pytest.mark.parametrize("fraction", [0.3, 0.6, 0.9])
@pytest.mark.parametrize("dense_limit", [4000, 0])
def test_resolvent_matches_the_neumann_series(fraction, dense_limit):
    rng = np.random.default_rng(31)
    matrix = SymmetricMatrix.from_dense(random_symmetric(rng, 30))
    gamma = fraction / spectral_radius(matrix, method="dense")
    v = rng.standard_normal(30)
    dense = matrix.to_dense()
    series = np.zeros(30)
    term = v.copy()
    for _ in range(200):
        series += term
        term = gamma * (dense @ term)
    rho = spectral_radius(matrix, method="dense")
    result = resolvent_apply(matrix, gamma, v, rho=rho, dense_limit=dense_limit)
    assert np.linalg.norm(result - series) <= 1e-8 * np.linalg.norm(series)
