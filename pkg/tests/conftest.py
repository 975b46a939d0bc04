"""Shared fixtures and independent reference implementations."""

import mpmath as mp
import numpy as np
import pytest
from hypothesis import settings

from cloakforge.layered import LayeredStructure, Medium, default_radii

settings.register_profile("ci", max_examples=40, deadline=None)
settings.load_profile("ci")


def w_reference(s: LayeredStructure, t, n: int, dps: int = 40) -> complex:
    """W_n of a Neumann-core structure by a plain transfer product in mpmath."""
    with mp.workdps(dps):
        def cyl(order, z):
            j, y = mp.besselj(order, z), mp.bessely(order, z)
            jp, yp = mp.besselj(order, z, derivative=1), mp.bessely(order, z, derivative=1)
            return j, j + 1j * y, jp, jp + 1j * yp

        t = mp.mpf(t)
        core = s.medium(s.L)
        _, _, jp, hp = cyl(n, t * mp.sqrt(mp.mpf(core.mu) * core.eps) * s.core_radius)
        row = mp.matrix([[jp, hp]])
        for j in range(s.L, 0, -1):
            r = mp.mpf(s.radii[j - 1])
            mats = []
            for med in (s.medium(j), s.medium(j - 1)):
                mu, eps = mp.mpf(med.mu), mp.mpf(med.eps)
                J, H, Jp, Hp = cyl(n, t * mp.sqrt(mu * eps) * r)
                a = mp.sqrt(eps / mu)
                mats.append(mp.matrix([[J, H], [a * Jp, a * Hp]]))
            row = row * mp.inverse(mats[0]) * mats[1]
        return complex(4j * (-row[0] / row[1]))


def random_structure(rng, L=None, lo=0.2, hi=5.0) -> LayeredStructure:
    L = int(rng.integers(1, 4)) if L is None else L
    mu = np.exp(rng.uniform(np.log(lo), np.log(hi), L))
    eps = np.exp(rng.uniform(np.log(lo), np.log(hi), L))
    return LayeredStructure(radii=default_radii(L), layers=tuple(Medium(float(a), float(b)) for a, b in zip(mu, eps)))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
