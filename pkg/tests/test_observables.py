"""Observables: quadrature variance, squeezing degree, Wigner grids,
negativity volume and Uhlmann fidelity.

The fast eigen-sum Wigner evaluator is checked against the textbook
brute-force form (2/pi) Tr[D^dag(a) rho D(a) P] with explicitly built
displacement matrices, and against closed-form Gaussians for vacuum and
squeezed vacuum.  The Fock |1> negativity volume 2 e^{-1/2} - ... = 0.21306
makes a sharp quantitative anchor for the negative-part integral.
"""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from magsqueeze.errors import DimensionError, NumericalError
from magsqueeze.observables import (
    default_axes,
    fock_populations,
    min_quadrature_variance,
    squeezing_db,
    uhlmann_fidelity,
    wigner,
    wigner_negativity_volume,
)
from magsqueeze.qops import (
    annihilation,
    density_from_vector,
    displacement_operator,
    fock_state,
    parity_operator,
)
from magsqueeze.states import squeezed_vacuum_fock

# ---------------------------------------------------------------------------
# quadrature variance and dB scale


def test_variance_vacuum_and_fock():
    vac = density_from_vector(fock_state(0, 20))
    out = min_quadrature_variance(vac)
    assert out.value == pytest.approx(1.0, abs=1e-12)
    assert out.raw == pytest.approx(0.5, abs=1e-12)
    # Fock |n|: isotropic, variance 2n+1
    one = density_from_vector(fock_state(1, 20))
    assert min_quadrature_variance(one).value == pytest.approx(3.0, abs=1e-12)


@given(r=st.floats(0.05, 1.0), phase=st.floats(-math.pi, math.pi))
def test_variance_squeezed_vacuum(r, phase):
    xi = r * np.exp(1j * phase)
    psi = squeezed_vacuum_fock(xi, 120)
    out = min_quadrature_variance(density_from_vector(psi))
    assert out.value == pytest.approx(math.exp(-2.0 * r), rel=1e-8)
    # reported angle is the squeezed quadrature: phase/2 mod pi (real xi
    # squeezes the position quadrature in this convention)
    expected_angle = (phase / 2.0) % math.pi
    diff = abs(out.angle % math.pi - expected_angle)
    assert min(diff, math.pi - diff) < 1e-7


def test_variance_displacement_invariant():
    # variance subtracts first moments, so a displaced squeezed state keeps
    # the squeezed variance
    dim = 80
    psi = squeezed_vacuum_fock(0.6, dim)
    d = displacement_operator(1.2 - 0.4j, dim)
    out = min_quadrature_variance(density_from_vector(d @ psi))
    assert out.value == pytest.approx(math.exp(-1.2), rel=1e-6)


def test_variance_thermal():
    n_bar = 0.35
    dim = 60
    pops = (n_bar / (1 + n_bar)) ** np.arange(dim) / (1 + n_bar)
    rho = np.diag(pops / pops.sum()).astype(complex)
    assert min_quadrature_variance(rho).value == pytest.approx(
        1.0 + 2.0 * n_bar, rel=1e-6
    )


def test_squeezing_db_scale():
    assert squeezing_db(1.0) == 0.0
    assert squeezing_db(0.1) == pytest.approx(10.0)
    r = 0.7
    assert squeezing_db(math.exp(-2 * r)) == pytest.approx(
        20.0 * r / math.log(10.0)
    )  # 8.686 r
    with pytest.raises(NumericalError):
        squeezing_db(0.0)


# ---------------------------------------------------------------------------
# Wigner function


def brute_force_wigner(rho, alphas):
    """(2/pi) Tr[D^dag(a) rho D(a) P] with dense displacement matrices."""
    n = rho.shape[0]
    par = parity_operator(n)
    out = []
    for a in alphas:
        d = displacement_operator(a, n)
        out.append((2.0 / math.pi) * np.trace(d.conj().T @ rho @ d @ par).real)
    return np.array(out)


def test_wigner_matches_brute_force(rng):
    dim = 40
    psi = squeezed_vacuum_fock(0.5 * np.exp(0.8j), dim)
    rho = 0.7 * density_from_vector(psi) + 0.3 * density_from_vector(
        fock_state(1, dim)
    )
    pts_x = rng.uniform(-1.5, 1.5, size=9)
    pts_y = rng.uniform(-1.5, 1.5, size=9)
    grid = wigner(rho, pts_x, pts_y)
    expected = np.empty((9, 9))
    for iy, y in enumerate(pts_y):
        expected[iy, :] = brute_force_wigner(rho, pts_x + 1j * y)
    np.testing.assert_allclose(grid.values, expected, atol=1e-10)


def test_wigner_vacuum_gaussian():
    ax = np.linspace(-5.0, 5.0, 101)
    ket = fock_state(0, 40)
    grid = wigner(ket, ax, ax, pad_to=140)
    xs, ys = np.meshgrid(ax, ax)
    expected = (2.0 / math.pi) * np.exp(-2.0 * (xs**2 + ys**2))
    np.testing.assert_allclose(grid.values, expected, atol=1e-8)
    assert grid.values[50, 50] == pytest.approx(2.0 / math.pi, abs=1e-12)
    assert grid.normalization() == pytest.approx(1.0, abs=1e-4)


def test_wigner_squeezed_gaussian():
    # real xi narrows the position axis: variance e^{-2r} in x, e^{+2r} in y
    r = 0.6
    ax = np.linspace(-4.0, 4.0, 81)
    ket = squeezed_vacuum_fock(r, 120)
    grid = wigner(ket, ax, ax, pad_to=220)
    xs, ys = np.meshgrid(ax, ax)
    expected = (2.0 / math.pi) * np.exp(
        -2.0 * math.exp(2 * r) * xs**2 - 2.0 * math.exp(-2 * r) * ys**2
    )
    np.testing.assert_allclose(grid.values, expected, atol=1e-7)


def test_wigner_ket_equals_density_path():
    ket = squeezed_vacuum_fock(0.4, 60)
    ax = np.linspace(-2.0, 2.0, 21)
    g1 = wigner(ket, ax, ax)
    g2 = wigner(density_from_vector(ket), ax, ax)
    np.testing.assert_allclose(g1.values, g2.values, atol=1e-12)
    assert g2.meta["rank"] == 1


def test_wigner_pad_matches_native_dimension():
    ket = np.zeros(50, dtype=complex)
    ket[2] = 1.0
    ax = np.linspace(-3.0, 3.0, 31)
    padded = wigner(ket, ax, ax, pad_to=90)
    native = wigner(np.concatenate([ket, np.zeros(40)]), ax, ax)
    np.testing.assert_allclose(padded.values, native.values, atol=1e-12)
    assert padded.meta["fock_dim"] == 90


def test_wigner_weight_floor_drops_noise():
    dim = 30
    rho = 0.999 * density_from_vector(fock_state(0, dim))
    rho += (0.001 / dim) * np.eye(dim)
    grid = wigner(rho, np.linspace(-1, 1, 5), np.linspace(-1, 1, 5), weight_floor=1e-2)
    assert grid.meta["rank"] == 1
    with pytest.raises(NumericalError):
        wigner(np.zeros((8, 8), dtype=complex))


def test_wigner_boundary_warning():
    # a strongly squeezed state on a too-small grid leaks support
    ket = squeezed_vacuum_fock(1.0, 160)
    ax = np.linspace(-1.5, 1.5, 11)
    with pytest.warns(UserWarning, match="boundary"):
        wigner(ket, ax, ax, pad_to=220)


def test_negativity_volume_fock_one():
    # closed form: the negative lobe of W_{|1>} integrates to 0.21306
    ax = np.linspace(-5.0, 5.0, 201)
    ket = fock_state(1, 8)
    grid = wigner(ket, ax, ax, pad_to=130)
    assert wigner_negativity_volume(grid) == pytest.approx(0.21306, abs=2e-3)
    # vacuum is nonnegative everywhere
    vac_grid = wigner(fock_state(0, 8), ax, ax, pad_to=130)
    assert wigner_negativity_volume(vac_grid) == pytest.approx(0.0, abs=1e-10)


def test_wigner_grid_io(tmp_path):
    ax = np.linspace(-1.0, 1.0, 5)
    grid = wigner(fock_state(0, 12), ax, ax)
    csv_path = tmp_path / "grid.csv"
    grid.to_csv(csv_path)
    lines = csv_path.read_text().splitlines()
    assert lines[0] == "re_alpha,im_alpha,wigner"
    assert len(lines) == 1 + 25
    json_path = tmp_path / "grid.json"
    grid.to_json(json_path)
    import json

    desc = json.loads(json_path.read_text())
    assert desc["re_axis"] == [-1.0, 1.0, 5]
    assert "normalization" in desc


def test_default_axes():
    x, y = default_axes()
    assert len(x) == 201 and x[0] == -5.0 and x[-1] == 5.0
    assert x is not y


# ---------------------------------------------------------------------------
# fidelity


def test_fidelity_pure_states():
    psi = fock_state(0, 12)
    phi = (fock_state(0, 12) + fock_state(2, 12)) / math.sqrt(2)
    f = uhlmann_fidelity(density_from_vector(psi), density_from_vector(phi))
    # Tr sqrt(...) convention: pure-pure gives |<psi|phi>|, not the square
    assert f == pytest.approx(1.0 / math.sqrt(2.0), abs=1e-10)


def test_fidelity_pure_vs_mixed():
    psi = fock_state(1, 10)
    rho = 0.6 * density_from_vector(fock_state(1, 10)) + 0.4 * density_from_vector(
        fock_state(3, 10)
    )
    f = uhlmann_fidelity(density_from_vector(psi), rho)
    assert f == pytest.approx(math.sqrt(0.6), abs=1e-10)


@given(seed=st.integers(0, 2**32 - 1))
@settings(max_examples=15)
def test_fidelity_properties(seed):
    rng = np.random.default_rng(seed)

    def random_state(dim):
        a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
        rho = a @ a.conj().T
        return rho / np.trace(rho).real

    r1, r2 = random_state(8), random_state(8)
    f12 = uhlmann_fidelity(r1, r2)
    f21 = uhlmann_fidelity(r2, r1)
    assert 0.0 <= f12 <= 1.0 + 1e-9
    assert f12 == pytest.approx(f21, abs=1e-8)
    assert uhlmann_fidelity(r1, r1) == pytest.approx(1.0, abs=1e-8)


def test_fidelity_guards():
    with pytest.raises(DimensionError):
        uhlmann_fidelity(np.eye(4) / 4, np.eye(6) / 6)
    with pytest.raises(NumericalError):
        uhlmann_fidelity(np.diag([1.5, -0.5]).astype(complex), np.eye(2) / 2)


def test_fock_populations():
    rho = 0.25 * density_from_vector(fock_state(0, 6)) + 0.75 * density_from_vector(
        fock_state(4, 6)
    )
    pops = fock_populations(rho)
    np.testing.assert_allclose(pops, [0.25, 0, 0, 0, 0.75, 0], atol=1e-14)
