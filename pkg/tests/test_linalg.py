import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from posmaps import InvalidInput, hermitian_eig, jacobi_eigh, kron, partial_transpose, positive_part, schmidt_decompose
from posmaps.linalg import maximally_entangled, partial_trace, swap_operator

from conftest import random_hermitian


def test_eig_identity():
    w, V = hermitian_eig(np.eye(2))
    assert np.allclose(w, [1, 1])
    assert np.allclose(V.conj().T @ V, np.eye(2))


def test_eig_diagonal():
    w, V = hermitian_eig(np.diag([3.0, -2.0]))
    assert np.allclose(w, [3, -2])
    assert np.allclose(np.abs(V), np.eye(2))


def test_swap_spectrum_by_enumeration():
    # F permutes the basis e_i (x) e_j -> e_j (x) e_i: fixed on |00>, |11>,
    # swaps |01> <-> |10>; so symmetric combinations give +1, the antisymmetric one -1
    F = swap_operator(2)
    basis = np.eye(4)
    images = [F @ basis[i] for i in range(4)]
    assert np.array_equal(images[0], basis[0])
    assert np.array_equal(images[1], basis[2])
    assert np.array_equal(images[2], basis[1])
    assert np.array_equal(images[3], basis[3])
    w, _ = hermitian_eig(F)
    assert np.allclose(w, [1, 1, 1, -1], atol=1e-12)


@pytest.mark.parametrize("bad", [np.zeros((2, 3)), np.array([[0, 1], [0, 0]])])
def test_eig_rejects(bad):
    with pytest.raises(InvalidInput):
        hermitian_eig(bad)


@pytest.mark.parametrize("n", [1, 2, 5, 16, 40])
def test_jacobi_matches_lapack(rng, n):
    M = random_hermitian(rng, n)
    w, V = jacobi_eigh(M)
    assert np.all(np.diff(w) <= 0)
    assert np.allclose(w, np.linalg.eigvalsh(M)[::-1], atol=1e-10)
    assert np.linalg.norm(V.conj().T @ V - np.eye(n)) <= 1e-10
    assert np.linalg.norm((V * w) @ V.conj().T - M) <= 1e-12 * max(1, np.linalg.norm(M)) * n


def test_jacobi_64(rng):
    M = random_hermitian(rng, 64)
    w, V = jacobi_eigh(M)
    assert np.linalg.norm(V.conj().T @ V - np.eye(64)) <= 1e-10
    assert np.linalg.norm((V * w) @ V.conj().T - M) <= 1e-10 * np.linalg.norm(M, 2)


def test_positive_part_examples():
    P, N = positive_part(np.diag([2.0, -3.0]))
    assert np.allclose(P, np.diag([2, 0])) and np.allclose(N, np.diag([0, 3]))
    M = np.array([[2.0, 1.0], [1.0, 2.0]])
    P, N = positive_part(M)
    assert np.allclose(P, M) and np.allclose(N, 0)
    D = np.eye(4) - swap_operator(2)
    P, N = positive_part(D)
    assert np.allclose(P, D, atol=1e-12) and np.allclose(N, 0, atol=1e-12)
    assert np.allclose(np.linalg.eigvalsh(P), [0, 0, 0, 2], atol=1e-12)


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 64), st.integers(0, 2**32 - 1))
def test_positive_part_properties(n, seed):
    rng = np.random.default_rng(seed)
    M = random_hermitian(rng, n)
    P, N = positive_part(M, method="lapack" if n > 24 else "jacobi")
    norm = np.linalg.norm(M, 2)
    assert np.linalg.norm(M - (P - N), 2) <= 10 * 1e-12 * norm * n
    assert np.linalg.norm(P @ N, 2) <= 1e-12 * norm**2 * n
    assert np.linalg.eigvalsh(P)[0] >= -1e-9 and np.linalg.eigvalsh(N)[0] >= -1e-9


def test_partial_transpose_examples():
    assert np.array_equal(partial_transpose(np.eye(6), 2, 3), np.eye(6))
    unnormalized = 2 * np.outer(maximally_entangled(2), maximally_entangled(2))
    assert np.allclose(partial_transpose(unnormalized, 2, 2), swap_operator(2))
    assert np.allclose(partial_transpose(unnormalized, 2, 2, "first"), swap_operator(2))
    with pytest.raises(InvalidInput):
        partial_transpose(np.eye(5), 2, 3)
    with pytest.raises(InvalidInput):
        partial_transpose(np.eye(4), 2, 2, "third")


def test_partial_transpose_blocks():
    M = np.arange(36).reshape(6, 6).astype(complex)
    T = partial_transpose(M, 2, 3)
    for i in range(2):
        for j in range(2):
            assert np.array_equal(T[3 * i:3 * i + 3, 3 * j:3 * j + 3], M[3 * i:3 * i + 3, 3 * j:3 * j + 3].T)
    T1 = partial_transpose(M, 2, 3, "first")
    assert np.array_equal(T1[0:3, 3:6], M[3:6, 0:3])


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 4), st.integers(1, 4), st.integers(0, 2**32 - 1), st.sampled_from(["first", "second"]))
def test_partial_transpose_properties(dk, dh, seed, which):
    rng = np.random.default_rng(seed)
    rational = rng.integers(-9, 10, size=(dk * dh, dk * dh)) + 1j * rng.integers(-9, 10, size=(dk * dh, dk * dh))
    assert np.array_equal(partial_transpose(partial_transpose(rational, dk, dh, which), dk, dh, which), rational)
    H = random_hermitian(rng, dk * dh)
    T = partial_transpose(H, dk, dh, which)
    assert abs(np.trace(T) - np.trace(H)) <= 1e-12
    assert abs(np.sum(np.linalg.eigvalsh(T)) - np.trace(H).real) <= 1e-12 * max(1, np.abs(H).sum())
    assert np.allclose(T, T.conj().T)


def test_partial_trace():
    A = np.diag([1.0, 2.0])
    B = np.diag([3.0, 4.0, 5.0])
    assert np.allclose(partial_trace(kron(A, B), 2, 3, "first"), 3 * B)
    assert np.allclose(partial_trace(kron(A, B), 2, 3, "second"), 12 * A)


def test_kron():
    assert np.array_equal(kron(np.eye(2), np.eye(3)), np.eye(6))
    e11 = np.diag([1.0, 0.0])
    assert np.array_equal(kron(e11, e11), np.diag([1.0, 0, 0, 0]))
    assert np.array_equal(kron(np.diag([1, 2]), np.diag([3, 4])), np.diag([3, 4, 6, 8]))


def test_schmidt_examples():
    v = np.kron([1, 0], [0, 1])
    s, U, W = schmidt_decompose(v, 2, 2)
    assert np.allclose(s, [1])
    s, _, _ = schmidt_decompose(maximally_entangled(2), 2, 2)
    assert np.allclose(s, [2**-0.5] * 2)
    x = np.ones(3) / np.sqrt(3)
    s, U, W = schmidt_decompose(np.kron(x, x), 3, 3)
    assert len(s) == 1 and abs(s[0] - 1) < 1e-12
    s, U, W = schmidt_decompose(np.zeros(6), 2, 3)
    assert len(s) == 0 and U.shape == (2, 0) and W.shape == (3, 0)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 5), st.integers(1, 5), st.integers(0, 2**32 - 1))
def test_schmidt_properties(dk, dh, seed):
    rng = np.random.default_rng(seed)
    v = rng.normal(size=dk * dh) + 1j * rng.normal(size=dk * dh)
    s, U, W = schmidt_decompose(v, dk, dh)
    assert abs(np.sum(s**2) - np.linalg.norm(v) ** 2) <= 1e-12 * max(1, np.linalg.norm(v) ** 2)
    rebuilt = sum(s[m] * np.kron(U[:, m], W[:, m]) for m in range(len(s)))
    assert np.linalg.norm(rebuilt - v) <= 1e-10
    assert np.allclose(U.conj().T @ U, np.eye(len(s))) and np.allclose(W.conj().T @ W, np.eye(len(s)))
