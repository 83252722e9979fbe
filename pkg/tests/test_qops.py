"""Operator-algebra layer: truncation-aware ladder operators, exact-unitary
squeeze/displacement exponentials, partial traces and the StateDensity guard.
"""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from magsqueeze.errors import DimensionError, NumericalError
from magsqueeze.qops import (
    HilbertSpace,
    StateDensity,
    annihilation,
    creation,
    density_from_vector,
    displacement_operator,
    expectation,
    fock_state,
    herm_eig,
    kron,
    matrix_sqrt_psd,
    number_op,
    parity_operator,
    partial_trace_magnon,
    partial_trace_qubit,
    squeeze_operator,
)

N = 24


def test_annihilation_matrix_elements():
    m = annihilation(N)
    for k in range(1, N):
        psi = m @ fock_state(k, N)
        expected = np.sqrt(k) * fock_state(k - 1, N)
        np.testing.assert_allclose(psi, expected, atol=1e-15)
    assert np.allclose(m @ fock_state(0, N), 0.0)


def test_commutator_is_identity_below_truncation():
    m = annihilation(N)
    comm = m @ creation(N) - creation(N) @ m
    # the last diagonal entry is -(N-1), the unavoidable truncation defect
    np.testing.assert_allclose(comm[: N - 1, : N - 1], np.eye(N - 1), atol=1e-13)
    assert comm[N - 1, N - 1] == pytest.approx(-(N - 1))


def test_number_op_equals_mdag_m():
    m = annihilation(N)
    np.testing.assert_allclose(number_op(N), m.conj().T @ m, atol=1e-13)


def test_parity_diagonal():
    p = parity_operator(N)
    np.testing.assert_allclose(np.diagonal(p), (-1.0) ** np.arange(N))


def test_hilbert_space_dims():
    assert HilbertSpace(30).dim == 60
    assert HilbertSpace(30, with_qubit=False).dim == 30
    assert annihilation(HilbertSpace(12)).shape == (12, 12)


def test_fock_dim_guards():
    with pytest.raises(DimensionError):
        annihilation(1)
    with pytest.raises(DimensionError):
        fock_state(9, 9)


def test_squeeze_operator_unitary_and_identity():
    u = squeeze_operator(0.6 + 0.2j, 40)
    np.testing.assert_allclose(u @ u.conj().T, np.eye(40), atol=1e-12)
    np.testing.assert_allclose(squeeze_operator(0.0, 8), np.eye(8), atol=1e-13)


def test_squeeze_operator_vacuum_amplitudes():
    # S(xi)|0> against the closed-form even-Fock expansion
    xi = 0.8 * np.exp(0.3j)
    r, phase = abs(xi), np.angle(xi)
    dim = 60
    psi = squeeze_operator(xi, dim) @ fock_state(0, dim)
    tanh, cosh = np.tanh(r), np.cosh(r)
    from math import factorial, sqrt

    for m_idx in range(0, 12):
        expected = (
            (-np.exp(1.0j * phase) * tanh) ** m_idx
            * sqrt(float(factorial(2 * m_idx)))
            / (2**m_idx * factorial(m_idx) * sqrt(cosh))
        )
        assert psi[2 * m_idx + 1] == pytest.approx(0.0, abs=1e-13)
        assert psi[2 * m_idx] == pytest.approx(expected, abs=1e-10)


def test_squeeze_inverse():
    xi = 0.5 - 0.4j
    u = squeeze_operator(xi, 30) @ squeeze_operator(-xi, 30)
    # product of the truncated exponentials is unitary but only approximates
    # the identity away from the top of the space
    np.testing.assert_allclose(u[:20, :20], np.eye(30)[:20, :20], atol=1e-6)


def test_displacement_coherent_amplitudes():
    alpha = 1.1 - 0.7j
    dim = 60
    psi = displacement_operator(alpha, dim) @ fock_state(0, dim)
    from math import factorial

    for k in range(12):
        expected = np.exp(-abs(alpha) ** 2 / 2) * alpha**k / np.sqrt(factorial(k))
        assert psi[k] == pytest.approx(expected, abs=1e-10)


def test_displacement_warns_when_truncation_tight():
    with pytest.warns(UserWarning, match="truncation"):
        displacement_operator(4.0, 20)


@given(
    re=st.floats(-1.2, 1.2),
    im=st.floats(-1.2, 1.2),
)
@settings(max_examples=15)
def test_displacement_adjoint_is_inverse(re, im):
    alpha = re + 1j * im
    d = displacement_operator(alpha, 40)
    np.testing.assert_allclose(d.conj().T, displacement_operator(-alpha, 40), atol=1e-10)
    np.testing.assert_allclose(d @ d.conj().T, np.eye(40), atol=1e-11)


def test_herm_eig_orders_and_guards():
    h = np.diag([3.0, -1.0, 2.0]).astype(complex)
    evals, vecs = herm_eig(h)
    assert list(evals) == sorted(evals)
    np.testing.assert_allclose(vecs @ np.diag(evals) @ vecs.conj().T, h, atol=1e-13)
    with pytest.raises(NumericalError):
        herm_eig(np.array([[0.0, 1.0], [0.0, 0.0]]))


def test_matrix_sqrt_psd_roundtrip(rng):
    a = rng.normal(size=(12, 12)) + 1j * rng.normal(size=(12, 12))
    psd = a @ a.conj().T
    s = matrix_sqrt_psd(psd)
    np.testing.assert_allclose(s @ s, psd, atol=1e-9 * np.max(np.abs(psd)))
    with pytest.raises(NumericalError):
        matrix_sqrt_psd(np.diag([1.0, -0.5]))


def test_expectation_real_for_hermitian():
    rho = density_from_vector(fock_state(3, 10))
    val = expectation(rho, number_op(10))
    assert isinstance(val, float)
    assert val == pytest.approx(3.0)
    # non-Hermitian operator keeps its complex expectation
    m = annihilation(10)
    psi = (fock_state(2, 10) + fock_state(3, 10)) / np.sqrt(2)
    got = expectation(density_from_vector(psi), m)
    assert isinstance(got, complex)
    assert got == pytest.approx(np.sqrt(3.0) / 2)


def test_partial_traces_on_product_state(rng):
    n = 6
    psi_m = rng.normal(size=n) + 1j * rng.normal(size=n)
    psi_m /= np.linalg.norm(psi_m)
    psi_q = np.array([0.6, 0.8j])
    rho_m = density_from_vector(psi_m)
    rho_q = density_from_vector(psi_q)
    joint = kron(rho_m, rho_q)
    np.testing.assert_allclose(partial_trace_qubit(joint), rho_m, atol=1e-13)
    np.testing.assert_allclose(partial_trace_magnon(joint), rho_q, atol=1e-13)
    with pytest.raises(DimensionError):
        partial_trace_qubit(np.eye(7))
    with pytest.raises(DimensionError):
        partial_trace_qubit(joint, fock_dim=5)


def test_partial_trace_preserves_trace_for_entangled(rng):
    d = 10
    psi = rng.normal(size=d) + 1j * rng.normal(size=d)
    psi /= np.linalg.norm(psi)
    rho = density_from_vector(psi)
    assert np.trace(partial_trace_qubit(rho)) == pytest.approx(1.0)
    assert np.trace(partial_trace_magnon(rho)) == pytest.approx(1.0)


@given(st.integers(2, 16))
@settings(max_examples=10)
def test_density_from_vector_is_state(dim):
    rng = np.random.default_rng(dim)
    psi = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    psi /= np.linalg.norm(psi)
    rho = density_from_vector(psi)
    StateDensity(rho).validate(atol=1e-10)
    evals = np.linalg.eigvalsh(rho)
    assert evals.min() > -1e-12
    assert sorted(evals)[-1] == pytest.approx(1.0)


def test_state_density_validate_guards():
    with pytest.raises(NumericalError):
        StateDensity(np.eye(4, dtype=complex)).validate()  # trace 4
    bad = np.diag([1.5, -0.5]).astype(complex)
    with pytest.raises(NumericalError):
        StateDensity(bad).validate()
    with pytest.raises(DimensionError):
        StateDensity(np.zeros((2, 3), dtype=complex)).validate()
    herm_bad = np.array([[0.5, 0.3], [0.0, 0.5]], dtype=complex)
    with pytest.raises(NumericalError):
        StateDensity(herm_bad).validate()
