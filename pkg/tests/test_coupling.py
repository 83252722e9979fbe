"""Loop-field and collective-coupling geometry checks.

The finite-segment closed form is validated against the infinite-wire and
dipole far-field limits and the square-loop center value 2 sqrt(2) mu0 I /
(pi L); the quadrature sphere average is validated by its point-sphere limit
and order-doubling stability.
"""

import math

import numpy as np
import pytest

from magsqueeze.constants import MU0
from magsqueeze.coupling import (
    YIG,
    CouplingResult,
    LoopGeometry,
    MaterialSpec,
    SphereSpec,
    center_field_magnitude,
    coupling_map,
    coupling_strength,
    loop_field,
    segment_field,
    spin_count,
    volume_avg_field,
)
from magsqueeze.errors import ConfigError, NumericalError

GEOM = LoopGeometry(side_length=10.0, current=0.4)


def test_geometry_validation():
    with pytest.raises(ConfigError):
        LoopGeometry(side_length=-1.0, current=0.4)
    with pytest.raises(ConfigError):
        LoopGeometry(side_length=10.0, current=0.0)
    with pytest.raises(ConfigError):
        SphereSpec(center=(0, 0, 0), radius=0.0)
    with pytest.raises(ConfigError):
        MaterialSpec(spin_density=-1.0, spin=2.5)


def test_segment_field_antisymmetry():
    p1 = np.array([0.0, -3.0, 0.0])
    p2 = np.array([0.0, 4.0, 0.0])
    r = np.array([1.0, 0.5, -2.0])
    fwd = segment_field(p1, p2, 0.4, r)
    rev = segment_field(p2, p1, 0.4, r)
    np.testing.assert_allclose(fwd, -rev, atol=1e-25)


def test_segment_field_rejects_on_wire_points():
    p1 = np.array([0.0, -1.0, 0.0])
    p2 = np.array([0.0, 1.0, 0.0])
    with pytest.raises(NumericalError):
        segment_field(p1, p2, 1.0, np.array([0.0, 0.3, 0.0]))


def test_segment_field_infinite_wire_limit():
    # very long wire along z, field point at distance d: B -> mu0 I / (2 pi d)
    half = 5.0e4
    p1 = np.array([0.0, 0.0, -half])
    p2 = np.array([0.0, 0.0, +half])
    current = 0.7
    d = 2.0
    b = segment_field(p1, p2, current, np.array([d, 0.0, 0.0]))
    expected = MU0 * current / (2.0 * math.pi * d)
    # right-hand rule: current +z, point +x -> field +y
    assert b[1] == pytest.approx(expected, rel=1e-3)
    assert abs(b[0]) < 1e-30 and abs(b[2]) < 1e-30


def test_segment_field_linearity_in_current():
    p1 = np.array([0.0, -2.0, 1.0])
    p2 = np.array([0.0, 3.0, 1.0])
    r = np.array([1.5, 0.0, 0.0])
    b1 = segment_field(p1, p2, 1.0, r)
    b3 = segment_field(p1, p2, 3.0, r)
    np.testing.assert_allclose(b3, 3.0 * b1, rtol=1e-13)


def test_center_field_closed_form():
    b = loop_field(GEOM, np.array([0.0, 0.0, 0.0]))
    expected = center_field_magnitude(GEOM)
    assert b[0] == pytest.approx(expected, rel=1e-12)
    assert abs(b[1]) < 1e-28 and abs(b[2]) < 1e-28
    # numeric anchor for the working-point geometry: ~45.3 nT
    assert expected == pytest.approx(4.5255e-8, rel=1e-4)


def test_loop_field_far_field_dipole_decay():
    # on the loop axis far away the field falls off as 1/x^3
    b1 = loop_field(GEOM, np.array([100.0, 0.0, 0.0]))[0]
    b2 = loop_field(GEOM, np.array([200.0, 0.0, 0.0]))[0]
    assert b1 / b2 == pytest.approx(8.0, rel=2e-2)
    # and matches the dipole moment m = I L^2 prefactor mu0 m / (2 pi x^3)
    dipole = MU0 * GEOM.current * GEOM.side_length**2 / (2.0 * math.pi * 100.0**3)
    assert b1 == pytest.approx(dipole, rel=2e-3)


def test_loop_field_mirror_symmetry():
    pt = np.array([1.3, 0.7, -0.4])
    b = loop_field(GEOM, pt)
    b_my = loop_field(GEOM, pt * np.array([1.0, -1.0, 1.0]))
    b_mz = loop_field(GEOM, pt * np.array([1.0, 1.0, -1.0]))
    # x-component even under either mirror
    assert b_my[0] == pytest.approx(b[0], rel=1e-12)
    assert b_mz[0] == pytest.approx(b[0], rel=1e-12)


def test_volume_avg_order_doubling_stable():
    sphere = SphereSpec(center=(0.0, 0.0, 0.0), radius=0.5)
    coarse = volume_avg_field(GEOM, sphere, orders=(8, 8, 16))
    fine = volume_avg_field(GEOM, sphere, orders=(16, 16, 32))
    assert abs(coarse - fine) / abs(fine) < 1e-5


def test_volume_avg_point_sphere_limit():
    sphere = SphereSpec(center=(0.0, 0.0, 0.0), radius=GEOM.side_length / 100.0)
    avg = volume_avg_field(GEOM, sphere)
    center = loop_field(GEOM, np.array([0.0, 0.0, 0.0]))[0]
    assert abs(avg - center) / center < 1e-3
    # transverse components of the averaged vector vanish by symmetry
    vec = volume_avg_field(GEOM, sphere, full_vector=True)
    assert abs(vec[1]) < 1e-12 * center and abs(vec[2]) < 1e-12 * center


def test_volume_avg_clearance_guard():
    touching = SphereSpec(center=(0.0, 5.0, 0.0), radius=1.0)
    with pytest.raises(NumericalError):
        volume_avg_field(GEOM, touching)


def test_spin_count_anchor():
    n = spin_count(SphereSpec(center=(0, 0, 0), radius=0.5), YIG)
    assert n == pytest.approx(1.0996e10, rel=1e-3)


def test_coupling_strength_working_point():
    sphere = SphereSpec(center=(0.0, 0.0, 0.0), radius=0.5)
    res = coupling_strength(GEOM, sphere, YIG, point_approx=True)
    assert isinstance(res, CouplingResult)
    assert res.point_approx
    assert res.b_eff_tesla == pytest.approx(4.5255e-8, rel=1e-4)
    assert res.g_ghz == pytest.approx(0.15, rel=0.05)
    # full average at this tiny R/L barely differs
    res_avg = coupling_strength(GEOM, sphere, YIG)
    assert res_avg.g_ghz == pytest.approx(res.g_ghz, rel=2e-3)


def test_coupling_scalings():
    sphere = SphereSpec(center=(0.0, 0.0, 0.0), radius=0.5)
    g1 = coupling_strength(GEOM, sphere, YIG, point_approx=True).g_ghz
    double_i = LoopGeometry(side_length=10.0, current=0.8)
    assert coupling_strength(double_i, sphere, YIG, point_approx=True).g_ghz == pytest.approx(
        2.0 * g1, rel=1e-12
    )
    # g ~ B sqrt(N) ~ R^{3/2} in the point approximation
    big = SphereSpec(center=(0.0, 0.0, 0.0), radius=1.0)
    assert coupling_strength(GEOM, big, YIG, point_approx=True).g_ghz == pytest.approx(
        g1 * 2.0**1.5, rel=1e-12
    )


def test_coupling_map_point_mode(tmp_path):
    axes = {"R": np.array([0.3, 0.5]), "I_p": np.array([0.2, 0.4, 0.6])}
    res = coupling_map(GEOM, YIG, axes, mode="point_sphere")
    assert res.axis_names == ("R_um", "I_p_uA")
    assert res.g_ghz.shape == (2, 3)
    # monotone in both axes
    assert np.all(np.diff(res.g_ghz, axis=0) > 0)
    assert np.all(np.diff(res.g_ghz, axis=1) > 0)
    path = tmp_path / "map.csv"
    res.to_csv(path)
    lines = path.read_text().splitlines()
    assert lines[0] == "R_um,I_p_uA,g_ghz"
    assert len(lines) == 1 + 6


def test_coupling_map_volume_mode():
    axes = {"R": np.array([0.4]), "x0": np.array([0.0, 1.0, 2.0])}
    res = coupling_map(GEOM, YIG, axes, mode="volume_avg")
    assert res.axis_names == ("R_um", "x0_um")
    # field (and hence g) decays moving the sphere off the loop plane
    g_row = res.g_ghz[0]
    assert g_row[0] > g_row[1] > g_row[2]
    with pytest.raises(ConfigError):
        coupling_map(GEOM, YIG, axes, mode="sideways")
