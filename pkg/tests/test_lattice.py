import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ospnlie import lattice
from ospnlie.errors import DimensionError, PoleError
from ospnlie.lattice import (GradedIndexSet, ModelParams, build_E, build_P, cyclic_shift, embed,
                             finite_L_free_energy, hamiltonian, largest_eigenvalue, qtm_matrix,
                             r_check, r_matrix, row_transfer, spectrum)

spectral = st.complex_numbers(max_magnitude=1.5, allow_nan=False, allow_infinity=False)


def test_graded_index_set():
    idx = GradedIndexSet(2)
    assert idx.labels == ["1", "2", "0", "2bar", "1bar"]
    assert [idx.parity(i) for i in range(5)] == [1, 1, 0, 1, 1]
    assert [idx.bar(i) for i in range(5)] == [4, 3, 2, 1, 0]
    assert idx.index("0") == 2


@pytest.mark.parametrize("s", [1, 2, 3])
def test_p_and_e_algebra(s):
    g = 2 * s + 1
    P, E = build_P(s), build_E(s)
    assert np.array_equal(P @ P, np.eye(g * g))
    assert np.array_equal(E @ E, (1 - 2 * s) * E)
    assert np.trace(E) == 1 - 2 * s


@pytest.mark.parametrize("s", [1, 2])
@settings(max_examples=15, deadline=None)
@given(u=spectral, v=spectral)
def test_yang_baxter(s, u, v):
    g = 2 * s + 1
    R = lambda x, i, j: embed(r_matrix(x, s), g, [i, j], 3)
    lhs = R(u - v, 0, 1) @ R(u, 0, 2) @ R(v, 1, 2)
    rhs = R(v, 1, 2) @ R(u, 0, 2) @ R(u - v, 0, 1)
    assert np.linalg.norm(lhs - rhs) <= 1e-12 * max(1.0, np.linalg.norm(lhs))


@pytest.mark.parametrize("s", [1, 2])
def test_unitarity(s):
    u = 0.3 + 0.1j
    g = 2 * s + 1
    assert np.allclose(r_check(u, s) @ r_check(-u, s), (1 - u * u) * np.eye(g * g), atol=1e-14)


def test_r_pole():
    with pytest.raises(PoleError):
        r_check(1.5, 1)


@pytest.mark.parametrize("s", [1, 2])
def test_row_transfer_at_zero_is_shift(s):
    g = 2 * s + 1
    assert np.array_equal(row_transfer(0, s, 4).matrix, cyclic_shift(g, 4))


@settings(max_examples=10, deadline=None)
@given(v=spectral)
def test_hamiltonian_commutes_with_transfer(v):
    h = hamiltonian(1, 4, 1.0).matrix
    t = row_transfer(v, 1, 4).matrix
    assert np.linalg.norm(h @ t - t @ h) < 1e-9


def test_hamiltonian_is_log_derivative():
    # t(0)^{-1} t'(0) = sum_k (P + (2/g) E)_{k,k+1}
    eps = 1e-6
    t0 = row_transfer(0, 1, 4).matrix
    dt = (row_transfer(eps, 1, 4).matrix - row_transfer(-eps, 1, 4).matrix) / (2 * eps)
    assert np.allclose(np.linalg.solve(t0, dt), hamiltonian(1, 4, 1.0).matrix, atol=1e-8)


@pytest.mark.parametrize("L", [2, 3, 4])
def test_spectrum_real_and_matches_dense(L):
    ev = spectrum(1, L, -1.0)
    dense = np.linalg.eigvals(hamiltonian(1, L, -1.0).matrix)
    assert np.abs(ev.imag).max() < 1e-12
    assert np.allclose(np.sort(ev.real), np.sort(dense.real), atol=1e-10)


@pytest.mark.parametrize("s", [1, 2])
def test_free_energy_at_zero_coupling(s):
    assert finite_L_free_energy(s, 3, 0.0, 2.0) == pytest.approx(-2.0 * np.log(2 * s + 1), rel=1e-14)


def test_dimension_cap():
    with pytest.raises(DimensionError):
        finite_L_free_energy(2, 6, -1.0, 1.0)
    with pytest.raises(DimensionError):
        qtm_matrix(0.0, ModelParams(2, -1.0, 1.0, N=6))


def test_model_params_validation():
    with pytest.raises(ValueError):
        ModelParams(1, -1.0, 1.0, N=3)
    with pytest.raises(ValueError):
        ModelParams(1, -1.0, 0.0)
    assert ModelParams(1, -1.0, 2.0, N=4).u == pytest.approx(0.125)


def test_qtm_n2_normalized_eigenvalue():
    # (1-u)^N normalization at N=2, T=2, J=-1 (u=1/4); the normalized value is 17/3
    p = ModelParams(1, -1.0, 2.0, N=2)
    lam = largest_eigenvalue(qtm_matrix(0.0, p))
    assert lam.real / (1 - p.u) ** 2 == pytest.approx(17 / 3, rel=1e-14)


def test_power_iteration_matches_arnoldi():
    from scipy.sparse.linalg import eigs
    op = qtm_matrix(0.0, ModelParams(1, -1.0, 3.0, N=8))
    assert op.matrix.shape[0] > lattice.MAX_DENSE_EIG
    lam = largest_eigenvalue(op)
    ref = eigs(op.matrix, k=1, which="LM", return_eigenvectors=False)[0]
    assert abs(lam - ref) < 1e-10 * abs(ref)


def test_embed_orders_sites():
    g = 3
    a = np.diag([1.0, 2.0, 3.0])
    x = embed(a, g, [1], 2)
    assert np.array_equal(x, np.kron(np.eye(3), a))
