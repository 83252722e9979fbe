"""Small operator toolbox for the magnon (+ qubit) Hilbert space.

Conventions fixed here and relied on everywhere else:

* The magnon mode is truncated to ``fock_dim`` Fock states |0..fock_dim-1>.
* The qubit lives in the *dressed* energy basis with ordering (|g>, |e>),
  i.e. basis index 0 is the ground state.  With that ordering
  ``sigma_z = diag(-1, +1)`` and ``sigma_plus = |e><g|``.
* Composite operators are magnon (x) qubit, so a joint basis index is
  ``n * 2 + q`` with n the Fock index and q in {0: g, 1: e}.
"""

import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import eigh

from .errors import DimensionError, NumericalError


@dataclass(frozen=True)
class HilbertSpace:
    """Dimensions of the truncated model space.

    fock_dim   -- magnon Fock truncation (number of kept levels)
    with_qubit -- whether operators/states include the qubit factor
    """

    fock_dim: int
    with_qubit: bool = True

    @property
    def dim(self):
        return self.fock_dim * 2 if self.with_qubit else self.fock_dim


@dataclass
class StateDensity:
    """A density matrix tagged with its reference frame and time.

    frame is one of "lab", "rotating_half_pump", "drive_interaction"
    (all frames coincide at t = 0).
    """

    matrix: np.ndarray
    frame: str = "lab"
    time: float = 0.0
    meta: dict = field(default_factory=dict)

    @property
    def dim(self):
        return self.matrix.shape[0]

    def validate(self, atol=1e-8):
        rho = self.matrix
        if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
            raise DimensionError(f"density matrix must be square, got {rho.shape}")
        tr = np.trace(rho)
        if abs(tr - 1.0) > atol:
            raise NumericalError(f"trace(rho) = {tr}, deviates by {abs(tr - 1.0):.3e}")
        if np.max(np.abs(rho - rho.conj().T)) > atol:
            raise NumericalError("density matrix is not Hermitian")
        evals = np.linalg.eigvalsh(0.5 * (rho + rho.conj().T))
        if evals.min() < -1e-6:
            raise NumericalError(f"density matrix has eigenvalue {evals.min():.3e}")
        return self


# ---------------------------------------------------------------------------
# qubit (dressed basis, ordering |g>, |e|)

SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
SIGMA_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
SIGMA_Z = np.array([[-1.0, 0.0], [0.0, 1.0]], dtype=complex)
SIGMA_PLUS = np.array([[0.0, 0.0], [1.0, 0.0]], dtype=complex)   # |e><g|
SIGMA_MINUS = SIGMA_PLUS.conj().T                                 # |g><e|
IDENTITY_2 = np.eye(2, dtype=complex)

KET_G = np.array([1.0, 0.0], dtype=complex)
KET_E = np.array([0.0, 1.0], dtype=complex)
KET_PLUS_X = np.array([1.0, 1.0], dtype=complex) / np.sqrt(2.0)
KET_MINUS_X = np.array([1.0, -1.0], dtype=complex) / np.sqrt(2.0)


# ---------------------------------------------------------------------------
# magnon mode

def annihilation(space):
    """Magnon annihilation operator on the truncated Fock space.

    Accepts a HilbertSpace or a bare integer truncation.  The returned
    matrix acts on the magnon factor only; embed with kron() as needed.
    """
    n = space.fock_dim if isinstance(space, HilbertSpace) else int(space)
    if n < 2:
        raise DimensionError(f"fock_dim must be >= 2, got {n}")
    m = np.zeros((n, n), dtype=complex)
    idx = np.arange(1, n)
    m[idx - 1, idx] = np.sqrt(idx)
    return m


def creation(space):
    return annihilation(space).conj().T


def number_op(space):
    n = space.fock_dim if isinstance(space, HilbertSpace) else int(space)
    return np.diag(np.arange(n, dtype=float)).astype(complex)


def fock_state(n, fock_dim):
    """Fock state |n> as a vector of length fock_dim."""
    if not 0 <= n < fock_dim:
        raise DimensionError(f"Fock index {n} outside truncation {fock_dim}")
    v = np.zeros(fock_dim, dtype=complex)
    v[n] = 1.0
    return v


def parity_operator(space):
    """Photon-number parity (-1)^n on the magnon space."""
    n = space.fock_dim if isinstance(space, HilbertSpace) else int(space)
    return np.diag((-1.0) ** np.arange(n)).astype(complex)


def squeeze_operator(xi, space):
    """Single-mode squeezer S(xi) = exp[(xi* m^2 - xi m^dag^2)/2], truncated.

    Built through the exact exponential of the anti-Hermitian generator, so
    the matrix is exactly unitary at every truncation; faithfulness to the
    ideal squeezer is limited to the low-Fock block (the top rows feel the
    truncation first).
    """
    n = space.fock_dim if isinstance(space, HilbertSpace) else int(space)
    m = annihilation(n)
    m2 = m @ m
    gen = 0.5 * (np.conj(xi) * m2 - xi * m2.conj().T)   # anti-Hermitian
    evals, vecs = eigh(1.0j * gen)
    return (vecs * np.exp(-1.0j * evals)) @ vecs.conj().T


def displacement_operator(alpha, space):
    """Displacement exp(alpha m^dag - alpha* m) on the truncated space.

    Computed through the exact exponential of the (anti-Hermitian)
    generator, so the result is exactly unitary at any truncation.  Emits
    a warning when |alpha|^2 > fock_dim / 4, where the truncated operator
    no longer represents the ideal displacement faithfully.
    """
    n = space.fock_dim if isinstance(space, HilbertSpace) else int(space)
    if abs(alpha) ** 2 > n / 4.0:
        warnings.warn(
            f"displacement |alpha|^2 = {abs(alpha)**2:.2f} exceeds fock_dim/4 = {n/4:.1f}; "
            "truncation artifacts likely",
            stacklevel=2,
        )
    m = annihilation(n)
    gen = alpha * m.conj().T - np.conj(alpha) * m   # anti-Hermitian
    herm = 1.0j * gen
    evals, vecs = eigh(herm)
    return (vecs * np.exp(-1.0j * evals)) @ vecs.conj().T


# ---------------------------------------------------------------------------
# composites and linear-algebra helpers

def kron(a, b):
    """Tensor product, first factor = magnon, second = qubit (by convention)."""
    return np.kron(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))


def herm_eig(op, atol=1e-10):
    """Eigendecomposition of a Hermitian operator; checks hermiticity first.

    Returns (eigenvalues ascending, eigenvectors as columns).
    """
    op = np.asarray(op)
    dev = np.max(np.abs(op - op.conj().T))
    scale = max(np.max(np.abs(op)), 1.0)
    if dev > atol * scale:
        raise NumericalError(f"operator not Hermitian (max deviation {dev:.3e})")
    return eigh(op)


def matrix_sqrt_psd(op, neg_tol=1e-6):
    """Principal square root of a positive semi-definite Hermitian matrix.

    Small negative eigenvalues (>= -neg_tol * scale) are clamped to zero;
    anything more negative raises NumericalError.
    """
    evals, vecs = herm_eig(op, atol=1e-8)
    scale = max(evals.max(), 1.0) if evals.size else 1.0
    if evals.min() < -neg_tol * scale:
        raise NumericalError(
            f"matrix_sqrt_psd: eigenvalue {evals.min():.3e} too negative"
        )
    evals = np.clip(evals, 0.0, None)
    return (vecs * np.sqrt(evals)) @ vecs.conj().T


def expectation(rho, op):
    """<op> = Tr(rho op); returns a real number for Hermitian op
    (imaginary part must be numerical noise), complex otherwise."""
    val = np.einsum("ij,ji->", np.asarray(rho), np.asarray(op))
    if np.max(np.abs(op - np.asarray(op).conj().T)) < 1e-10 * max(np.max(np.abs(op)), 1.0):
        return float(val.real)
    return complex(val)


def partial_trace_qubit(rho_joint, fock_dim=None):
    """Trace out the qubit from a joint magnon (x) qubit density matrix."""
    rho_joint = np.asarray(rho_joint)
    d = rho_joint.shape[0]
    if d % 2:
        raise DimensionError(f"joint dimension {d} is not even")
    n = d // 2
    if fock_dim is not None and fock_dim != n:
        raise DimensionError(f"fock_dim {fock_dim} inconsistent with joint dim {d}")
    return np.einsum("iaja->ij", rho_joint.reshape(n, 2, n, 2))


def partial_trace_magnon(rho_joint):
    """Trace out the magnon mode, leaving the 2x2 qubit state."""
    rho_joint = np.asarray(rho_joint)
    d = rho_joint.shape[0]
    if d % 2:
        raise DimensionError(f"joint dimension {d} is not even")
    n = d // 2
    return np.einsum("iaib->ab", rho_joint.reshape(n, 2, n, 2))


def density_from_vector(psi):
    psi = np.asarray(psi, dtype=complex)
    return np.outer(psi, psi.conj())
