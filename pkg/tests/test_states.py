"""State constructors: W states, vacuum damping, atom-photon entanglement."""

import math

import numpy as np
import pytest

from oracles import amplitude_damping_kraus, apply_channel_everywhere
from wbell.qmat import negativity
from wbell.states import StateDensity, atom_photon_state, damped_w_state, w_state, w_vector

ATOL = 1e-12
CHANNEL_ATOL = 1e-12


def test_w_vector_support_and_norm():
    for n in range(1, 7):
        v = w_vector(n)
        np.testing.assert_allclose(np.linalg.norm(v), 1.0, atol=ATOL)
        support = np.flatnonzero(np.abs(v) > 0.0)
        assert [int(i) for i in support] == sorted(1 << k for k in range(n))
        np.testing.assert_allclose(v[support], 1.0 / math.sqrt(n), atol=ATOL)


def test_w_state_is_valid_pure_state():
    for n in (2, 3, 5):
        st = w_state(n)
        st.validate()
        assert st.n_parties == n
        assert not st.atom_flag
        np.testing.assert_allclose(st.rho @ st.rho, st.rho, atol=1e-10)


def test_damped_w_state_equals_per_mode_amplitude_damping():
    """Mixing with vacuum must agree with damping every mode of the pure W."""
    kraus_cache = {}
    for n in (2, 3, 4):
        pure = w_state(n).rho
        for eta in (0.0, 0.35, 0.8, 1.0):
            kraus = kraus_cache.setdefault(eta, amplitude_damping_kraus(eta))
            expected = apply_channel_everywhere(pure, kraus, n)
            got = damped_w_state(n, eta)
            got.validate()
            np.testing.assert_allclose(got.rho, expected, atol=CHANNEL_ATOL)


def test_damped_w_state_rejects_bad_eta():
    with pytest.raises(ValueError):
        damped_w_state(3, 1.2)
    with pytest.raises(ValueError):
        damped_w_state(3, -0.01)


def test_atom_photon_state_pure_at_full_coupling():
    st = atom_photon_state(-0.7, 1.0, 2)
    st.validate()
    assert st.atom_flag and st.n_parties == 3
    np.testing.assert_allclose(st.rho @ st.rho, st.rho, atol=1e-10)
    # Atom excited and no photon: amplitude cos(theta) at index 100 (binary).
    np.testing.assert_allclose(st.rho[4, 4], math.cos(0.7) ** 2, atol=ATOL)


def test_atom_photon_state_vacuum_weight_tracks_coupling():
    theta, eta_c = -0.6, 0.55
    st = atom_photon_state(theta, eta_c, 3)
    st.validate()
    # The uncoupled branch parks (1 - eta_c) sin^2(theta) on |g, vac>.
    assert st.rho[0, 0].real == pytest.approx((1.0 - eta_c) * math.sin(theta) ** 2, abs=ATOL)
    # The coherent branch keeps the photon amplitude scaled by sqrt(eta_c);
    # |e, vac> sits at index 8 and the first W_3 component at index 4.
    assert st.rho[8, 4].real == pytest.approx(
        math.cos(theta) * math.sqrt(eta_c) * math.sin(theta) / math.sqrt(3.0), abs=ATOL)


def test_atom_photon_negativity_is_sin_two_theta_at_full_coupling():
    for theta in (-0.2, -0.7252, -1.2):
        st = atom_photon_state(theta, 1.0, 2)
        assert negativity(st.rho, 0) == pytest.approx(abs(math.sin(2.0 * theta)), abs=1e-10)


def test_atom_photon_state_theta_zero_is_product():
    st = atom_photon_state(0.0, 0.7, 2)
    assert negativity(st.rho, 0) == pytest.approx(0.0, abs=1e-10)


def test_validate_rejects_broken_states():
    good = w_state(2)
    with pytest.raises(ValueError):
        StateDensity(3, good.rho).validate()
    with pytest.raises(ValueError):
        StateDensity(2, 0.5 * good.rho).validate()
    skew = good.rho.copy()
    skew[0, 1] = 0.3
    with pytest.raises(ValueError):
        StateDensity(2, skew).validate()
