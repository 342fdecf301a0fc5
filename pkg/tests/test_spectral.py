import numpy as np
import pytest

from emknot import spectral
from emknot.errors import GridMismatch, NotTransversal, RealityViolated
from emknot.knotfields import KnotParams, eval_eb
from emknot.spectral import (
    CauchyState,
    GridSpec,
    RealVectorFieldGrid,
    SpectralField,
    dft_forward,
    dft_inverse,
    kspace,
    transverse_project,
)

from conftest import HOPFION, MIXED

G16 = GridSpec(16, 4.0)


def random_transverse_state(grid, rng):
    E = RealVectorFieldGrid(grid, rng.normal(size=grid.shape + (3,)))
    B = RealVectorFieldGrid(grid, rng.normal(size=grid.shape + (3,)))
    return CauchyState.from_grids(E, B, project=True)


# ------------------------------------------------------------------ grid


def test_grid_layout():
    g = GridSpec(8, 2.0)
    assert g.spacing == 0.5
    np.testing.assert_allclose(g.axis(), np.arange(-2.0, 2.0, 0.5))
    assert g.dk == pytest.approx(np.pi / 2.0)
    assert g.shape == (8, 8, 8)
    k = g.wavenumbers()
    assert k[0] == 0 and k.max() == pytest.approx(3 * g.dk) and k.min() == pytest.approx(-4 * g.dk)


def test_grid_validation():
    with pytest.raises(ValueError):
        GridSpec(4, 1.0)
    with pytest.raises(ValueError):
        GridSpec(16, -1.0)


def test_inner_mask_is_half_box():
    g = GridSpec(16, 8.0)
    m = g.inner_mask()
    X, Y, Z = g.mesh()
    assert np.all(np.abs(X[m]) < 4.0) and np.all(np.abs(Z[m]) < 4.0)
    assert m.sum() == 7**3


def test_kspace_is_read_only():
    ks = kspace(G16)
    with pytest.raises(ValueError):
        ks.kmag[0, 0, 0] = 1.0


# ------------------------------------------------------------------ transforms


def test_roundtrip(rng):
    f = RealVectorFieldGrid(G16, rng.normal(size=G16.shape + (3,)))
    back = dft_inverse(dft_forward(f))
    assert np.abs(back.samples - f.samples).max() < 1e-10 * np.abs(f.samples).max()


def test_constant_field_only_dc():
    f = RealVectorFieldGrid(G16, np.broadcast_to([1.0, -2.0, 0.5], G16.shape + (3,)).copy())
    F = dft_forward(f).modes
    dc = F[0, 0, 0].copy()
    F[0, 0, 0] = 0
    assert np.abs(F).max() < 1e-14
    vol = (2 * G16.extent) ** 3
    np.testing.assert_allclose(dc, np.array([1.0, -2.0, 0.5]) * vol / (2 * np.pi) ** 1.5)


def test_plane_wave_two_modes():
    g = G16
    X, Y, Z = g.mesh()
    k0 = np.array([2, -1, 3]) * g.dk
    wave = np.cos(k0[0] * X + k0[1] * Y + k0[2] * Z)
    f = RealVectorFieldGrid(g, np.stack([wave, 0 * wave, 0 * wave], -1))
    amp = np.abs(dft_forward(f).modes[..., 0])
    idx = {tuple(i) for i in np.argwhere(amp > 1e-8 * amp.max())}
    assert idx == {(2, 15, 3), (14, 1, 13)}


def test_hermitian_spectrum_of_real_field(rng):
    f = RealVectorFieldGrid(G16, rng.normal(size=G16.shape + (3,)))
    assert spectral.hermitian_error(dft_forward(f)) < 1e-14


def test_reality_violation_detected(rng):
    modes = np.zeros(G16.shape + (3,), complex)
    modes[1, 0, 0, 0] = 1.0  # no partner at -k
    with pytest.raises(RealityViolated):
        dft_inverse(SpectralField(G16, modes))


def test_grid_mismatch():
    with pytest.raises(GridMismatch):
        RealVectorFieldGrid(G16, np.zeros((8, 8, 8, 3)))
    a = RealVectorFieldGrid(G16, np.zeros(G16.shape + (3,)))
    g8 = GridSpec(8, 4.0)
    b = RealVectorFieldGrid(g8, np.zeros(g8.shape + (3,)))
    with pytest.raises(GridMismatch):
        spectral.field_energy(a, b)


def test_analytic_spectrum_examples():
    sp = spectral.analytic_spectrum(np.array([0.0, 0.0, 2.0]), HOPFION)
    np.testing.assert_allclose(sp.B, 0, atol=1e-15)
    c = np.exp(-2.0) / np.sqrt(2 * np.pi)
    np.testing.assert_allclose(sp.E, [2 * c, -2j * c, 0], atol=1e-15)
    assert abs(sp.E[0] - 0.10798) < 1e-5


def test_analytic_spectrum_transverse_and_hermitian(rng):
    k = rng.normal(size=(100, 3)) * 3
    p = KnotParams(2, 3, 4, 5)
    sp, sm = spectral.analytic_spectrum(k, p), spectral.analytic_spectrum(-k, p)
    for F, Fm in ((sp.E, sm.E), (sp.B, sm.B)):
        assert np.abs(np.einsum("ij,ij->i", k, F)).max() < 1e-13
        np.testing.assert_allclose(Fm, np.conj(F), atol=1e-15)


def test_sampled_spectrum_matches_analytic(grid128, hopfion_state128):
    E0, B0 = spectral.sample_initial(grid128, HOPFION)
    ana = spectral.analytic_spectrum(kspace(grid128).k, HOPFION)
    for F, A in ((dft_forward(B0).modes, ana.B), (dft_forward(E0).modes, ana.E)):
        assert np.linalg.norm(F - A) / np.linalg.norm(A) < 0.01


# ------------------------------------------------------------------ projection


def test_projection_properties(rng):
    f = RealVectorFieldGrid(G16, rng.normal(size=G16.shape + (3,)))
    P = transverse_project(dft_forward(f))
    ks = kspace(G16)
    kdot = np.abs(np.einsum("...i,...i->...", ks.k, P.modes))
    assert kdot.max() < 1e-12 * np.abs(P.modes).max() * ks.kmag.max()
    again = transverse_project(P)
    np.testing.assert_allclose(again.modes, P.modes, atol=1e-15)
    assert spectral.hermitian_error(P) < 1e-14


def test_projection_kills_longitudinal_mode():
    ks = kspace(G16)
    P = transverse_project(SpectralField(G16, ks.ek.astype(complex)))
    assert np.abs(P.modes).max() < 1e-15


def test_from_grids_rejects_divergent_input(rng):
    E = RealVectorFieldGrid(G16, rng.normal(size=G16.shape + (3,)))
    with pytest.raises(NotTransversal, match="divergence"):
        CauchyState.from_grids(E, E, project=False)
    state = CauchyState.from_grids(E, E, project=True)
    state.check()


def test_propagate_rejects_non_transverse_state(rng):
    F = dft_forward(RealVectorFieldGrid(G16, rng.normal(size=G16.shape + (3,))))
    with pytest.raises(NotTransversal):
        spectral.propagate(CauchyState(F, F), 0.3)


# ------------------------------------------------------------------ propagation


def test_propagate_zero_time_returns_initial(hopfion_state32, grid32):
    E, B = spectral.propagate(hopfion_state32, 0.0)
    E0, B0 = spectral.sample_initial(grid32, HOPFION)
    assert np.array_equal(E.samples, E0.samples) and np.array_equal(B.samples, B0.samples)


def test_propagate_spectra_zero_time_is_identity(hopfion_state32):
    Ek, Bk = spectral.propagate_spectra(hopfion_state32, 0.0)
    np.testing.assert_array_equal(Ek.modes, hopfion_state32.E0k.modes)
    np.testing.assert_array_equal(Bk.modes, hopfion_state32.B0k.modes)


def test_propagation_is_a_group(rng):
    s = random_transverse_state(G16, rng)
    E1, B1 = spectral.propagate_spectra(s, 0.7)
    E2, B2 = spectral.propagate_spectra(CauchyState(E1, B1), 0.5)
    E3, B3 = spectral.propagate_spectra(s, 1.2)
    np.testing.assert_allclose(E2.modes, E3.modes, atol=1e-12)
    np.testing.assert_allclose(B2.modes, B3.modes, atol=1e-12)


@pytest.mark.parametrize("params, fixture", [(HOPFION, "hopfion_state128"), (MIXED, "mixed_state128")])
def test_propagator_vs_closed_form(params, fixture, request, grid128):
    state = request.getfixturevalue(fixture)
    mask = grid128.inner_mask()
    X, Y, Z = grid128.mesh()
    E, B = spectral.propagate(state, 1.0)
    Ec, Bc = eval_eb(X[mask], Y[mask], Z[mask], 1.0, params)
    assert spectral.relative_l2_error(E.samples[mask], B.samples[mask], Ec, Bc) < 0.01


def test_energy_conservation(hopfion_state128):
    E0, B0 = spectral.propagate(hopfion_state128, 0.0)
    e0 = spectral.field_energy(E0, B0)
    for T in (0.5, 1.0, 2.0):
        assert abs(spectral.field_energy(*spectral.propagate(hopfion_state128, T)) - e0) / e0 < 0.005


def test_spectral_energy_matches_grid_energy(hopfion_state32):
    Ek, Bk = spectral.propagate_spectra(hopfion_state32, 0.8)
    grid_e = spectral.field_energy(dft_inverse(Ek), dft_inverse(Bk))
    assert spectral.spectral_energy(Ek, Bk) == pytest.approx(grid_e, rel=1e-12)


def test_analytic_state_agrees_with_sampled(grid32, hopfion_state32):
    ana = spectral.analytic_state(grid32, HOPFION)
    err = np.linalg.norm(ana.B0k.modes - hopfion_state32.B0k.modes) / np.linalg.norm(ana.B0k.modes)
    assert err < 0.05


def test_grids_require_unit_length():
    with pytest.raises(ValueError):
        spectral.sample_initial(G16, KnotParams(1, 1, 1, 1, L0=2.0))


# ------------------------------------------------------------------ residuals


def test_maxwell_residual_hopfion(hopfion_state128):
    res = spectral.maxwell_residual(hopfion_state128, 0.5, 1e-3)
    rel = res.relative_l2
    assert max(rel["div_E"], rel["div_B"]) < 1e-10
    assert max(rel["faraday"], rel["ampere"]) < 1e-4
    assert set(res.to_dict()) >= {"max", "l2", "relative_l2"}


def test_maxwell_residual_zero_data():
    z = SpectralField(G16, np.zeros(G16.shape + (3,), complex))
    res = spectral.maxwell_residual(CauchyState(z, z), 0.3)
    assert all(v == 0.0 for v in res.max_norm.values())


def test_maxwell_residual_random_transverse(rng):
    s = random_transverse_state(G16, rng)
    res = spectral.maxwell_residual(s, 0.4)
    assert max(res.relative_l2["div_E"], res.relative_l2["div_B"]) < 1e-10


def test_maxwell_residual_rejects_bad_dt(hopfion_state32):
    with pytest.raises(ValueError):
        spectral.maxwell_residual(hopfion_state32, 0.1, dt=0.0)
