import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from cloakforge.designer import REFERENCE_PROFILES
from cloakforge.errors import InvalidArgumentError, OutsideImageError, SingularPointError
from cloakforge.transform import (RadialMap, jacobian, map_forward, map_inverse, push_forward,
                                  sample_grid)

S2 = REFERENCE_PROFILES[2]
rhos = st.sampled_from([0.5, 0.3, 0.1, 0.01])


def polar(r, th):
    return np.array([r * math.cos(th), r * math.sin(th)])


def test_rho_range():
    for bad in (0.0, -0.1, 0.51, math.nan):
        with pytest.raises(InvalidArgumentError):
            RadialMap(bad)


@pytest.mark.parametrize("rho", [0.5, 0.1, 0.01])
def test_breakpoint_values(rho):
    F = RadialMap(rho)
    assert F.f(rho) == pytest.approx(1.0, abs=1e-15)
    assert F.f(2 * rho) == pytest.approx(1.5, abs=1e-15)
    assert F.f(2.0) == 2.0
    for b in F.breakpoints:
        assert F.f(b * (1 - 1e-12)) == pytest.approx(F.f(b), abs=1e-9)


@given(rhos, st.floats(1e-3, 1.999))
def test_monotone_and_expanding(rho, r):
    F = RadialMap(rho)
    assert F.f(r) >= r
    assert F.f(r * 1.0001) > F.f(r)


def test_identity_outside():
    F = RadialMap(0.1)
    x = polar(3.0, 0.4)
    assert np.array_equal(map_forward(F, x), x)
    assert np.array_equal(jacobian(F, x), np.eye(2))


@pytest.mark.parametrize("rho", [0.3, 0.01])
def test_core_edges(rho):
    F = RadialMap(rho)
    assert np.linalg.norm(map_forward(F, polar(rho, 1.0))) == pytest.approx(1.0)
    assert np.linalg.norm(map_forward(F, polar(2 * rho, 1.0))) == pytest.approx(1.5)


@pytest.mark.parametrize("rho", [0.1, 0.01])
def test_round_trip(rho):
    F = RadialMap(rho)
    rng = np.random.default_rng(1)
    r = rng.uniform(rho, 3.0, 1000)
    th = rng.uniform(0, 2 * math.pi, 1000)
    for ri, ti in zip(r, th):
        x = polar(ri, ti)
        assert np.linalg.norm(map_inverse(F, map_forward(F, x)) - x) < 1e-14 * max(1.0, ri / rho)


def test_inverse_outside_image():
    with pytest.raises(OutsideImageError):
        map_inverse(RadialMap(0.1), polar(0.99, 0.0))


def test_singular_origin():
    with pytest.raises(SingularPointError):
        jacobian(RadialMap(0.1), (0.0, 0.0))


@pytest.mark.parametrize("rho", [0.1, 0.01])
def test_jacobian_finite_differences(rho):
    F = RadialMap(rho)
    rng = np.random.default_rng(2)
    checked = 0
    while checked < 500:
        x = polar(rng.uniform(0.2 * rho, 2.5), rng.uniform(0, 2 * math.pi))
        r = np.linalg.norm(x)
        if min(abs(r - b) for b in F.breakpoints) < 1e-4 * rho:
            continue
        h = 1e-7 * rho
        fd = np.column_stack([(map_forward(F, x + h * e) - map_forward(F, x - h * e)) / (2 * h)
                              for e in np.eye(2)])
        D = jacobian(F, x)
        assert np.max(np.abs(D - fd)) < 1e-6 * max(1.0, np.max(np.abs(D)))
        assert np.linalg.det(D) == pytest.approx(F.fprime(r) * F.f(r) / r, rel=1e-12)
        checked += 1


def test_push_forward_background():
    F = RadialMap(0.1)
    smp = push_forward(F, S2, polar(2.5, 1.0))
    assert np.allclose(smp.A_push, np.eye(2), atol=1e-15)
    assert smp.q_push == 1.0
    assert np.allclose(smp.mu_push, np.eye(2), atol=1e-15)


@given(rhos, st.floats(1.0, 2.0), st.floats(0, 2 * math.pi))
def test_push_forward_radial_frame(rho, s, th):
    smp = push_forward(RadialMap(rho), S2, polar(s, th))
    A = smp.A_push
    e = polar(1.0, th)
    v = A @ e
    assert np.linalg.norm(v - (e @ v) * e) < 1e-10 * np.linalg.norm(v)
    assert np.allclose(A, A.T)
    assert np.all(np.linalg.eigvalsh(A) > 0) and smp.q_push > 0


def anisotropy(rho, s):
    lr, lt = push_forward(RadialMap(rho), S2, polar(s, 0.3)).eigen()
    return max(lr, lt) / min(lr, lt)


def test_anisotropy_profile():
    # inside the image of the annulus rho <= |x| <= 2 rho the pushed tensor
    # does not depend on rho; just outside radius 3/2 it degenerates as rho -> 0
    assert anisotropy(0.1, 1.25) == pytest.approx(anisotropy(0.01, 1.25), rel=1e-12)
    a1, a2 = anisotropy(0.1, 1.5 + 1e-9), anisotropy(0.01, 1.5 + 1e-9)
    assert a2 > 1e4 and a2 / a1 > 50


def test_grid_single_node():
    grid = sample_grid(RadialMap(0.1), S2, 1, 1)
    assert len(grid) == 1 and grid[0].point[0] == 3.0
    assert np.allclose(grid[0].A_push, np.eye(2)) and grid[0].q_push == 1.0


def test_grid_order_and_background():
    grid = sample_grid(RadialMap(0.1), S2, 5, 8)
    radii = [g.point[0] for g in grid]
    assert radii == sorted(radii)
    for g in grid:
        if g.point[0] >= 2:
            assert np.allclose(g.A_push, np.eye(2)) and g.q_push == 1.0


def test_grid_angular_invariance():
    grid = sample_grid(RadialMap(0.01), S2, 7, 16)
    for i in range(7):
        ring = [g.eigen() for g in grid[16 * i:16 * (i + 1)]]
        for pair in ring:
            assert pair == pytest.approx(ring[0], rel=1e-12)


def test_grid_errors():
    with pytest.raises(InvalidArgumentError):
        sample_grid(RadialMap(0.1), S2, 0, 4)
    with pytest.raises(InvalidArgumentError):
        sample_grid(RadialMap(0.1), S2, 3, 4, r_inner=0.5)
